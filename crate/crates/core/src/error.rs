use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the library can report. Variant names double as the
/// machine-readable error names surfaced by the command-line tool.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("total degree {total} is odd")]
    OddTotalDegree { total: u64 },
    #[error("multiplicity sets lack required support: {0}")]
    MissingSupport(String),
    #[error("unsupported multiplicity support: {0}")]
    UnsupportedSupport(String),
    #[error("support shift makes degree of vertex {vertex} negative")]
    InfeasibleShift { vertex: usize },
    #[error("search exceeded the node budget of {limit}")]
    BudgetExceeded { limit: u64 },
    #[error("multigraph is not in the relaxed family: {0}")]
    NotInG0(String),
    #[error("colour {requested} is not the active colour (active: {active:?})")]
    WrongColour { requested: u8, active: Option<u8> },
    #[error("invalid switching move: {0}")]
    InvalidMove(String),
    #[error("colour {colour}: statistic {statistic} is zero")]
    ZeroDenominator { colour: u8, statistic: &'static str },
    #[error("vertex sets overlap")]
    SetOverlap,
    #[error("structural condition violated: {0}")]
    StructuralViolation(String),
    #[error("path weight from Y back to Y is {max_yy} >= 1")]
    DivergentBound { max_yy: f64 },
    #[error("invalid bound for class {class}, colour {colour}: {detail}")]
    InvalidBound {
        class: usize,
        colour: u32,
        detail: String,
    },
    #[error("precondition violated: {0}")]
    PreconditionViolation(String),
    #[error("mean row sum {kbar} is not achievable for p in (0,1)")]
    Unachievable { kbar: f64 },
    #[error("coefficient for vertex {vertex} vanishes; the naive estimate is 0")]
    ZeroCoefficient { vertex: usize },
    #[error("entry ({i},{j}) = {value} is not an allowed multiplicity")]
    UnsupportedEntry { i: usize, j: usize, value: u32 },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    pub fn name(&self) -> &'static str {
        match self {
            Error::OddTotalDegree { .. } => "OddTotalDegree",
            Error::MissingSupport(_) => "MissingSupport",
            Error::UnsupportedSupport(_) => "UnsupportedSupport",
            Error::InfeasibleShift { .. } => "InfeasibleShift",
            Error::BudgetExceeded { .. } => "BudgetExceeded",
            Error::NotInG0(_) => "NotInG0",
            Error::WrongColour { .. } => "WrongColour",
            Error::InvalidMove(_) => "InvalidMove",
            Error::ZeroDenominator { .. } => "ZeroDenominator",
            Error::SetOverlap => "SetOverlap",
            Error::StructuralViolation(_) => "StructuralViolation",
            Error::DivergentBound { .. } => "DivergentBound",
            Error::InvalidBound { .. } => "InvalidBound",
            Error::PreconditionViolation(_) => "PreconditionViolation",
            Error::Unachievable { .. } => "Unachievable",
            Error::ZeroCoefficient { .. } => "ZeroCoefficient",
            Error::UnsupportedEntry { .. } => "UnsupportedEntry",
            Error::Parse(_) => "ParseError",
            Error::InvalidInput(_) => "InvalidInput",
        }
    }
}
