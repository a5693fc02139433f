use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("grid mismatch between operands")]
    GridMismatch,
    #[error("exponent is not conjugable at this point (p(x) = 1)")]
    NotConjugable,
    #[error("modulation frequency {0} is not a frequency-grid node")]
    OffGridModulation(f64),
    #[error("problem size exceeds the supported cap: {0}")]
    SizeOverrun(String),
    #[error("weight evaluated exactly at a singular point x = {0:?}")]
    SingularHit(Vec<f64>),
    #[error("norm bisection failed to converge: residual {residual:e} after {iterations} iterations")]
    NonConvergence { residual: f64, iterations: u32 },
    #[error("zero denominator: {0}")]
    ZeroDenominator(String),
    #[error("empty corpus")]
    EmptyCorpus,
    #[error("exponent lacks the constant-outside-a-ball structure")]
    MissingStructure,
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
