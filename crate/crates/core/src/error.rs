use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("z = {z} lies outside the metric domain [{min}, {max}]")]
    OutOfDomain { z: f64, min: f64, max: f64 },

    #[error("invalid metric at z = {z}: {condition} violated")]
    InvalidMetric { z: f64, condition: &'static str },

    #[error("invalid cavity: {0}")]
    InvalidCavity(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("beta_tilde = {beta_tilde} is below the accuracy floor {floor}")]
    AccuracyFloor { beta_tilde: f64, floor: f64 },

    #[error("series truncated after {terms} terms; neglected remainder bound {bound:e} exceeds tolerance")]
    SeriesTruncation { terms: usize, bound: f64 },

    #[error("quadrature failed: {0}")]
    Quadrature(String),

    #[error("internal consistency check failed: {0}")]
    Consistency(String),

    #[error("oracle: {0}")]
    Oracle(String),

    #[error("{path}:{line}: {msg}")]
    Config { path: PathBuf, line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
