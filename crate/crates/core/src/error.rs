use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("product has degree {degree}, above the supported maximum of 2")]
    DegreeOverflow { degree: usize },

    #[error("Dyson map undefined: coth equation right-hand side {rhs} lies in [-1, 1]")]
    MapUndefined { rhs: f64 },

    #[error("degenerate couplings: {0}")]
    DegenerateCouplings(String),

    #[error("eigensolver failed to converge: {0}")]
    ConvergenceFailure(String),

    #[error("level tracking ambiguous near axis value {axis_value}")]
    TrackingAmbiguity { axis_value: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
