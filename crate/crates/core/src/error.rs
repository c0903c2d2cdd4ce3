use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid ring configuration: {0}")]
    InvalidConfig(String),
    #[error("ring configuration mismatch: {0} vs {1}")]
    ConfigMismatch(String, String),
    #[error("exponent is not a p-power fraction: {0}")]
    BadExponent(String),
    #[error("operation not supported in mode {mode}: {op}")]
    UnsupportedMode { op: &'static str, mode: String },
    #[error("expected a monomial, got {0}")]
    NotMonomial(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("map is not well defined: {0}")]
    IllDefinedMap(String),
    #[error("non-monomial input: {0}")]
    NonMonomialModule(String),
    #[error("incompatible configurations: {0}")]
    Incompatible(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("ideal is not contained in the Jacobson radical: {0}")]
    NotInRadical(String),
    #[error("missing certificate: {0}")]
    MissingCertificate(String),
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error("algebra axiom failure: {0}")]
    AxiomFailure(String),
    #[error("non-surjective transition: {0}")]
    NonSurjective(String),
    #[error("invalid input: {0}")]
    Input(String),
}

pub type Result<T> = std::result::Result<T, Error>;
