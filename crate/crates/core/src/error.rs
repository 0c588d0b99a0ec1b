use thiserror::Error;

/// Errors raised by the algebra, bridge, morphism and parsing layers.
///
/// Invalid morphisms are not errors: validation records them as data.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("cannot evaluate a Laurent polynomial with negative powers at 0")]
    EvalAtZeroOfLaurent,
    #[error("operation requires a polynomial (no negative exponents)")]
    NegativeExponent,
    #[error("operation is undefined on the zero element")]
    ZeroInput,
    #[error("context mismatch: {left} vs {right}")]
    ContextMismatch { left: String, right: String },
    #[error("arity mismatch: n = {left} vs n = {right}")]
    ArityMismatch { left: usize, right: usize },
    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("degree {degree} exceeds the degree cap {cap}")]
    DegreeCapExceeded { degree: u32, cap: u32 },
    #[error("coefficient {0} is not allowed in this context")]
    IllegalCoefficient(String),
    #[error("invalid context: {0}")]
    InvalidContext(String),
    #[error("element has a negative power of the parameter and is not in A-hat")]
    NotInAHat,
    #[error("commutator coefficient {0} is not divisible by h")]
    InternalNonDivisible(String),
    #[error("morphism has not been validated as an endomorphism")]
    NotValidated,
    #[error("morphism kind mismatch: {left} vs {right}")]
    KindMismatch { left: String, right: String },
    #[error("constructive and direct transport paths disagree on x{generator}: {constructive} vs {direct}")]
    PathDisagreement {
        generator: usize,
        constructive: String,
        direct: String,
    },
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown variable {name} at {pos}")]
    UnknownVariable { name: String, pos: usize },
    #[error("the central parameter is not allowed in a Poisson context (at {pos})")]
    ParamInPoissonContext { pos: usize },
    #[error("malformed input: {0}")]
    Malformed(String),
}

impl Error {
    /// Stable machine-readable tag, used in JSON error output.
    pub fn code(&self) -> &'static str {
        match self {
            Error::EvalAtZeroOfLaurent => "EvalAtZeroOfLaurent",
            Error::NegativeExponent => "NegativeExponent",
            Error::ZeroInput => "ZeroInput",
            Error::ContextMismatch { .. } => "ContextMismatch",
            Error::ArityMismatch { .. } => "ArityMismatch",
            Error::IndexOutOfRange { .. } => "IndexOutOfRange",
            Error::DegreeCapExceeded { .. } => "DegreeCapExceeded",
            Error::IllegalCoefficient(_) => "IllegalCoefficient",
            Error::InvalidContext(_) => "InvalidContext",
            Error::NotInAHat => "NotInAHat",
            Error::InternalNonDivisible(_) => "InternalNonDivisible",
            Error::NotValidated => "NotValidated",
            Error::KindMismatch { .. } => "KindMismatch",
            Error::PathDisagreement { .. } => "PathDisagreement",
            Error::Syntax { .. } => "SyntaxError",
            Error::UnknownVariable { .. } => "UnknownVariable",
            Error::ParamInPoissonContext { .. } => "ParamInPoissonContext",
            Error::Malformed(_) => "Malformed",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
