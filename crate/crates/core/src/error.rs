use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GjmsError {
    #[error("d must be odd (got d = {d})")]
    EvenDimension { d: i64 },

    #[error("d must be at least 3 (got d = {d})")]
    DimensionTooSmall { d: i64 },

    #[error("k must be at least 1 (got k = {k})")]
    InvalidOrder { k: i64 },

    #[error("determinant diverges: 2k > d (d = {d}, k = {k})")]
    Divergent { d: i64, k: i64 },

    #[error("factor index out of range: j = {j} needs 2(j+1) <= d = {d}")]
    DivergentFactor { d: i64, j: i64 },

    #[error("product rule would reach P_2 on the 1-sphere (d = {d}, k = {k})")]
    DimensionOne { d: i64, k: i64 },

    #[error("quadrature did not reach tolerance {tol:e} within {evals} evaluations (estimate {estimate:e})")]
    NotConverged {
        tol: f64,
        evals: usize,
        estimate: f64,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, GjmsError>;

/// Checks `d` odd, `d >= 3`, `k >= 1`, `2k <= d`.
pub fn validate_sphere(d: i64, k: i64) -> Result<()> {
    if d % 2 == 0 {
        return Err(GjmsError::EvenDimension { d });
    }
    if d < 3 {
        return Err(GjmsError::DimensionTooSmall { d });
    }
    if k < 1 {
        return Err(GjmsError::InvalidOrder { k });
    }
    if 2 * k > d {
        return Err(GjmsError::Divergent { d, k });
    }
    Ok(())
}
