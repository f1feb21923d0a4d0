use thiserror::Error;

/// Everything that can go wrong across the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("extension degree {0} is outside the supported range 2..=40")]
    UnsupportedDegree(usize),
    #[error("modulus has degree {got}, expected {expected}")]
    DegreeMismatch { expected: usize, got: usize },
    #[error("modulus is not monic")]
    NotMonic,
    #[error("modulus is reducible over F_3")]
    ReducibleModulus,
    #[error("invalid trit {0} (expected 0, 1 or 2)")]
    InvalidTrit(u8),
    #[error("operands belong to different fields")]
    MixedFields,
    #[error("division by zero")]
    DivisionByZero,
    #[error("element is not a square")]
    NonResidue,
    #[error("w^3 - w = a has no solution (trace of a is nonzero)")]
    NoSolution,
    #[error("cannot parse element {input:?}: {reason}")]
    Parse { input: String, reason: String },
    #[error("power notation requires the residue of x to be primitive")]
    PowerNotationUnavailable,

    #[error("parameter a must be nonzero")]
    ZeroParameter,
    #[error("point is not on the curve")]
    PointNotOnCurve,
    #[error("x-coordinate belongs to a point of order three")]
    OrderThreePoint,
    #[error("x-coordinate does not belong to a curve point")]
    NotOnCurve,
    #[error("x-coordinate is zero")]
    ZeroXCoordinate,
    #[error("no point passing the start condition after {0} attempts")]
    SamplingExhausted(usize),
    #[error("tripling sequence did not terminate within {0} steps")]
    IterationCapExceeded(u64),
    #[error("trace of a is nonzero, so 9 does not divide K(a)")]
    TraceNotZero,
    #[error("start point is not valid: {0}")]
    InvalidStart(&'static str),
    #[error("the Artin-Schreier solutions disagree on divisibility by 27")]
    InconsistentWitnesses,
    #[error("report is not a cycle case")]
    NotCycleCase,

    #[error("{what}: degree {degree} exceeds cap {cap}")]
    CapExceeded {
        what: &'static str,
        degree: usize,
        cap: usize,
    },
    #[error("no root of the base modulus found in the extension field")]
    NoRootFound,
}

impl Error {
    /// Variant name, for machine-readable reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::UnsupportedDegree(_) => "UnsupportedDegree",
            Error::DegreeMismatch { .. } => "DegreeMismatch",
            Error::NotMonic => "NotMonic",
            Error::ReducibleModulus => "ReducibleModulus",
            Error::InvalidTrit(_) => "InvalidTrit",
            Error::MixedFields => "MixedFields",
            Error::DivisionByZero => "DivisionByZero",
            Error::NonResidue => "NonResidue",
            Error::NoSolution => "NoSolution",
            Error::Parse { .. } => "Parse",
            Error::PowerNotationUnavailable => "PowerNotationUnavailable",
            Error::ZeroParameter => "ZeroParameter",
            Error::PointNotOnCurve => "PointNotOnCurve",
            Error::OrderThreePoint => "OrderThreePoint",
            Error::NotOnCurve => "NotOnCurve",
            Error::ZeroXCoordinate => "ZeroXCoordinate",
            Error::SamplingExhausted(_) => "SamplingExhausted",
            Error::IterationCapExceeded(_) => "IterationCapExceeded",
            Error::TraceNotZero => "TraceNotZero",
            Error::InvalidStart(_) => "InvalidStart",
            Error::InconsistentWitnesses => "InconsistentWitnesses",
            Error::NotCycleCase => "NotCycleCase",
            Error::CapExceeded { .. } => "CapExceeded",
            Error::NoRootFound => "NoRootFound",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
