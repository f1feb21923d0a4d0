use super::{FieldElement, FieldSpec};
use crate::error::{Error, Result};

/// Largest field for which a full logarithm table is built.
pub const LOG_TABLE_MAX_DEGREE: usize = 13;

pub(crate) fn parse_trits(s: &str) -> std::result::Result<Vec<u8>, String> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            '2' => Ok(2),
            other => Err(format!("invalid trit character {other:?}")),
        })
        .collect()
}

/// Logarithm table to base alpha, used for the `p:<k>` notation.
#[derive(Clone, Debug)]
pub struct DiscreteLog {
    logs: Vec<u32>,
    tag: u32,
}

impl DiscreteLog {
    pub fn new(field: &FieldSpec) -> Result<DiscreteLog> {
        if !field.alpha_primitive() {
            return Err(Error::PowerNotationUnavailable);
        }
        if field.degree() > LOG_TABLE_MAX_DEGREE {
            return Err(Error::CapExceeded {
                what: "logarithm table",
                degree: field.degree(),
                cap: LOG_TABLE_MAX_DEGREE,
            });
        }
        let mut logs = vec![u32::MAX; field.order() as usize];
        let alpha = field.alpha();
        let mut x = field.one();
        for k in 0..field.order() - 1 {
            logs[x.index() as usize] = k as u32;
            x = field.mul(&x, &alpha);
        }
        Ok(DiscreteLog {
            logs,
            tag: field.tag,
        })
    }

    /// k with alpha^k = x, for nonzero x.
    pub fn log(&self, x: &FieldElement) -> Option<u64> {
        assert_eq!(x.tag, self.tag, "element from a different field");
        match self.logs[x.index() as usize] {
            u32::MAX => None,
            k => Some(k as u64),
        }
    }

    /// `p:<k>` for nonzero x, the trit form for zero.
    pub fn format(&self, x: &FieldElement) -> String {
        match self.log(x) {
            Some(k) => format!("p:{k}"),
            None => x.to_string(),
        }
    }

    /// Human label such as `α^91`, `0` for zero.
    pub fn label(&self, x: &FieldElement) -> String {
        match self.log(x) {
            Some(k) => format!("α^{k}"),
            None => "0".to_string(),
        }
    }
}
