use thiserror::Error;

use heunfactor::factorize::FactorError;
use heunfactor::heun::HeunError;
use heunfactor::numcheck::NumError;
use heunfactor::xjacobi::XJacobiError;

/// Everything that ends with exit code 1.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(String),
    #[error("{path}: malformed JSON: {message}")]
    Json { path: String, message: String },
    #[error("schema: {0}")]
    Schema(String),
    #[error(transparent)]
    Heun(#[from] HeunError),
    #[error(transparent)]
    Factor(#[from] FactorError),
    #[error(transparent)]
    XJacobi(#[from] XJacobiError),
    #[error(transparent)]
    Num(#[from] NumError),
}
