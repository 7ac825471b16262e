use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parameter {name} = {value} outside [{lo}, {hi}]")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("point x = {x} outside the unit interval")]
    Domain { x: f64 },

    #[error("degenerate parameters (a = {a}, b = {b}): {what}")]
    Degenerate { a: f64, b: f64, what: &'static str },

    #[error("numeric integrity violated: {0}")]
    NumericIntegrity(String),

    #[error("simplex drift {drift:e} exceeds tolerance at step {step}")]
    SimplexViolation { step: usize, drift: f64 },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("rule {rule} gives b = {b} outside [0, 1] at a = {a}")]
    RuleRange { rule: String, a: f64, b: f64 },

    #[error("cannot parse rule `{0}`")]
    RuleParse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
