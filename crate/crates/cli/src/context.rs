use std::fmt;

use kloos3::{DiscreteLog, Error, FieldElement, FieldSpec};
use serde_json::{json, Value};

use crate::args::{Cli, OutputFormat};

/// Anything that ends the run early.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Library(Error),
    Io(std::io::Error),
}

impl Failure {
    pub fn to_json(&self) -> Value {
        match self {
            Failure::Usage(msg) => json!({"error": "Usage", "message": msg}),
            Failure::Library(e) => json!({"error": e.kind(), "message": e.to_string()}),
            Failure::Io(e) => json!({"error": "Io", "message": e.to_string()}),
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(msg) => f.write_str(msg),
            Failure::Library(e) => write!(f, "{e}"),
            Failure::Io(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure::Library(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Failure {
        Failure::Io(e)
    }
}

/// The field and options every field-bound command works with.
pub struct RunConfig {
    pub field: FieldSpec,
    pub log: Option<DiscreteLog>,
    pub seed: u64,
    pub workers: usize,
    pub output: Option<OutputFormat>,
    pub full: bool,
    pub oracle_cap: usize,
}

impl RunConfig {
    pub fn from_cli(cli: &Cli) -> Result<RunConfig, Failure> {
        let m = cli
            .m
            .ok_or_else(|| Failure::Usage("--m is required for this command".into()))?;
        let field = if cli.modulus == "builtin" {
            FieldSpec::builtin(m)?
        } else {
            FieldSpec::from_modulus_str(m, &cli.modulus)?
        };
        let log = DiscreteLog::new(&field).ok();
        Ok(RunConfig {
            field,
            log,
            seed: cli.seed,
            workers: cli.workers as usize,
            output: cli.output,
            full: cli.full,
            oracle_cap: cli.oracle_cap,
        })
    }

    pub fn fmt(&self, x: &FieldElement) -> String {
        match &self.log {
            Some(log) => log.format(x),
            None => x.to_string(),
        }
    }

    pub fn fmt_all<'a>(&self, xs: impl IntoIterator<Item = &'a FieldElement>) -> Vec<String> {
        xs.into_iter().map(|x| self.fmt(x)).collect()
    }

    pub fn parse(&self, s: &str) -> Result<FieldElement, Failure> {
        Ok(self.field.parse_element(s)?)
    }

    pub fn require_a(&self, a: Option<&str>) -> Result<FieldElement, Failure> {
        let s = a.ok_or_else(|| Failure::Usage("--a is required for this command".into()))?;
        self.parse(s)
    }

    pub fn check_oracle_cap(&self, degree: usize) -> Result<(), Failure> {
        let cap = self.oracle_cap.min(kloos3::oracle::ORACLE_MAX_DEGREE);
        if degree > cap {
            return Err(Error::CapExceeded {
                what: "brute-force oracle",
                degree,
                cap,
            }
            .into());
        }
        Ok(())
    }

    pub fn table(&self) -> bool {
        self.output == Some(OutputFormat::Table)
    }
}
