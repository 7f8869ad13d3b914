use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("leading coefficient vanishes at n = {0}")]
    LeadingCoefficientZero(i64),
    #[error("unsupported number field: {0}")]
    UnsupportedField(String),
    #[error("unsupported factorization: {0}")]
    UnsupportedFactorization(String),
    #[error("denominator vanishes at x = 0")]
    DenominatorVanishesAtZero,
    #[error("no annihilating relation found: {0}")]
    NullSpaceEmpty(String),
    #[error("leading coefficient vanishes infinitely often after {0} order increases")]
    LeadingAlwaysZero(usize),
    #[error("expression cannot be bounded: {0}")]
    UnboundableExpression(String),
    #[error("unsupported case: {0}")]
    UnsupportedCase(String),
    #[error("inconsistent system: {0}")]
    InconsistentSystem(String),
    #[error("sequence is not polynomial of degree <= {0}")]
    NotPolynomial(usize),
    #[error("equation is identically zero")]
    ZeroEquation,
    #[error("all terms in the probed tail are zero")]
    ZeroTail,
    #[error("syntax error at {pos}: {msg}")]
    SyntaxError { pos: usize, msg: String },
    #[error("unknown coefficient `{0}`")]
    UnknownCoefficient(String),
    #[error("mixed coefficient rings: {0}")]
    MixedRing(String),
    #[error("malformed input at line {line}: {msg}")]
    ParseError { line: usize, msg: String },
    #[error("value is not rational: {0}")]
    NonRational(String),
    #[error("degree or order bound violated: {0}")]
    BoundViolation(String),
    #[error("not implemented: {0}")]
    Unimplemented(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
