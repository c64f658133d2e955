use polykin_core::CoreError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ChainError {
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("invalid chain parameter: {0}")]
    Parameter(String),
    #[error("empty ensemble")]
    EmptyEnsemble,
    #[error("ensemble allocation failed after {done} of {requested} chains")]
    Resources { done: usize, requested: usize },
}
