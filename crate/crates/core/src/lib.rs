//! Ternary Kloosterman sums and their 3-adic valuations.
//!
//! Arithmetic in GF(3^m), the curve y^2 = x^3 + x^2 - a whose order is
//! 3^m + K(a), the tripling walk that reads off the valuation of K(a), and
//! the behaviour of that valuation under field extension.

pub mod builtin;
pub mod curve;
pub mod error;
pub mod field;
pub mod oracle;
pub mod tower;
pub mod valuation;

pub use curve::{CurveParams, CurvePoint};
pub use error::{Error, Result};
pub use field::{DiscreteLog, FieldElement, FieldSpec};
pub use oracle::{val3, KloostermanValue, Oracle};
pub use tower::{Embedding, K3Formula, Tower, TowerReport};
pub use valuation::{DescentGraph, Termination, ValuationReport};
