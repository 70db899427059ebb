//! Error types shared across the engine.

use thiserror::Error;

/// Failure of a scalar operation in some carrier (plain `f64` or jet).
#[derive(Debug, Clone, PartialEq, Error)]
pub enum MathError {
    #[error("division by a value/jet with zero scalar part")]
    DivByZero,
    #[error("{func} domain violation at value {value}")]
    Domain { func: &'static str, value: f64 },
    #[error("pow domain violation: base {base}, exponent {exponent}")]
    PowDomain { base: f64, exponent: f64 },
}

/// Top-level engine error.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(crate::expr::ParseError),
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error(transparent)]
    Math(#[from] MathError),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("metric degenerate at point {point:?}: {detail}")]
    MetricDegenerate { point: Vec<f64>, detail: String },
    #[error("hypersurface fails the spacelike margin at {point:?}: |grad u|^2 = {grad2}, (1-eps) rho^2 = {bound}")]
    NotSpacelike { point: Vec<f64>, grad2: f64, bound: f64 },
    #[error("point outside admissible domain: {0}")]
    OutOfDomain(String),
    #[error("internal consistency fault: {0}")]
    InternalFault(String),
}

pub type Result<T> = std::result::Result<T, Error>;
