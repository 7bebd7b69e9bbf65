use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("pole of {function} at {at}")]
    Pole { function: &'static str, at: String },

    #[error("domain error in {function}: {detail}")]
    Domain { function: &'static str, detail: String },

    #[error("unbound symbol `{0}`")]
    UnboundSymbol(String),

    #[error("divergent series: {0}")]
    DivergentSeries(String),

    #[error("precision exhausted: error radius {err:e} above target {target:e}")]
    PrecisionExhausted { err: f64, target: f64 },

    #[error("invalid series: {0}")]
    InvalidSeries(String),

    #[error("invalid spec: {0}")]
    InvalidSpec(String),

    #[error("parameters do not differ by a natural number")]
    NotIntegerDifference,

    #[error("vanishing Pochhammer symbol in denominator: ({param})_{order}")]
    VanishingPochhammer { param: String, order: u32 },

    #[error("duplicate paired parameter {0}")]
    DuplicateParameter(String),

    #[error("side condition violated for {theorem}: {condition}")]
    SideConditionViolated { theorem: String, condition: String },

    #[error("pole in closed form of {theorem}: {detail}")]
    PoleInRhs { theorem: String, detail: String },

    #[error("constraint violated: {0}")]
    ConstraintViolated(String),

    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },

    #[error("validation error in entry `{entry}`: {message}")]
    Validation { entry: String, message: String },

    #[error("{side} side: {source}")]
    Evaluation {
        side: &'static str,
        #[source]
        source: Box<Error>,
    },

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(function: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain { function, detail: detail.into() }
    }

    pub(crate) fn parse(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse { location: location.into(), message: message.into() }
    }
}
