use clap::{Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "kloos3",
    version,
    about = "Ternary Kloosterman sums and their 3-adic valuations"
)]
pub struct Cli {
    /// Extension degree m of GF(3^m).
    #[arg(long, global = true)]
    pub m: Option<usize>,

    /// Modulus as m+1 trits from x^0 up, or "builtin".
    #[arg(long, global = true, default_value = "builtin")]
    pub modulus: String,

    /// Field element, as t:<trits> or p:<k> (alpha^k).
    #[arg(long, global = true)]
    pub a: Option<String>,

    /// Extension degree for the tower command.
    #[arg(long, global = true)]
    pub n: Option<usize>,

    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..))]
    pub workers: u16,

    /// Output format; json lines unless stated otherwise.
    #[arg(long, global = true, value_enum)]
    pub output: Option<OutputFormat>,

    /// Expand every node (descent) or add brute-force sums (scan).
    #[arg(long, global = true)]
    pub full: bool,

    /// Largest degree for brute-force sums.
    #[arg(long, global = true, default_value_t = 13)]
    pub oracle_cap: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Table,
    Dot,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// K(a) by direct summation.
    Ksum,
    /// Valuation of K(a) by the tripling walk.
    Kval,
    /// Valuation of K(a) for every nonzero a.
    Scan,
    /// The 3-divisibility graph below a^(1/3).
    Descent,
    /// Valuation of K(a) after lifting to GF(3^mn).
    Tower {
        /// Check every nonzero a of the base field.
        #[arg(long)]
        all: bool,
    },
    /// Run the built-in consistency checks.
    Verify,
    /// Regenerate the builtin modulus table.
    Moduli,
}
