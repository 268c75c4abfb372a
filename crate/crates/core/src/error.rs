use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("resource limit: {what} is {actual}, guard is {limit}")]
    ResourceLimit {
        what: &'static str,
        actual: usize,
        limit: usize,
    },
    #[error("no convergence after {iterations} iterations (best distance {best_distance:e})")]
    NonConvergence {
        iterations: usize,
        best_distance: f64,
    },
    #[error("malformed input: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_guard(what: &'static str, actual: usize, limit: usize) -> Result<()> {
    if actual > limit {
        Err(Error::ResourceLimit {
            what,
            actual,
            limit,
        })
    } else {
        Ok(())
    }
}
