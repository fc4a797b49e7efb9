use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("sieve range exceeded: need [{need_lo}, {need_hi}], have [{have_lo}, {have_hi}]")]
    SieveRangeExceeded {
        need_lo: u64,
        need_hi: u64,
        have_lo: u64,
        have_hi: u64,
    },

    #[error("invalid interval query: {0}")]
    InvalidQuery(String),

    #[error("line {line}: cannot parse ordinate {content:?}")]
    Parse { line: usize, content: String },

    #[error("line {line}: ordinate {value} does not exceed previous ordinate {previous}")]
    OrderViolation {
        line: usize,
        value: f64,
        previous: f64,
    },

    #[error("line {line}: ordinate {value} is not a valid zero ordinate")]
    InvalidOrdinate { line: usize, value: f64 },

    #[error("zero table input is empty")]
    EmptyInput,

    #[error("zero table exhausted: height {height} exceeds gamma_max {gamma_max}")]
    TableExhausted { height: f64, gamma_max: f64 },

    #[error("invalid height T = {0}")]
    InvalidHeight(f64),

    #[error("invalid range: need 0 < T1 < T2, got T1 = {t1}, T2 = {t2}")]
    InvalidRange { t1: f64, t2: f64 },

    #[error("x = {0} must be a half-integer (explicit formulas need x outside the integers)")]
    IntegerX(f64),

    #[error("{lemma}: gate violated: {detail}")]
    GateViolation { lemma: &'static str, detail: String },

    #[error("{what}: domain violation: {detail}")]
    DomainViolation { what: &'static str, detail: String },

    #[error("input outside the double-precision phase envelope: {0}")]
    OutsideEnvelope(String),

    #[error("{0}")]
    Syntax(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
