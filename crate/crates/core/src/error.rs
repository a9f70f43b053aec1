use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("non-finite value at index {index}")]
    NonFinite { index: usize },

    #[error("vector must have at least one element")]
    EmptyVector,

    #[error("feature vector must end with the bias constant 1, found {found}")]
    MissingBias { found: f64 },

    #[error("invalid label {0}: expected -1/+1 (or 0/1)")]
    InvalidLabel(String),

    #[error("labeled set is empty")]
    EmptyLabeled,

    #[error("unlabeled set is empty but the LCUD variant needs unlabeled data")]
    EmptyUnlabeled,

    #[error("diversity set is empty")]
    EmptyDiversitySet,

    #[error("test set is empty")]
    EmptyTestSet,

    #[error("ensemble needs at least 2 classifiers, got {0}")]
    TooFewClassifiers(usize),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("non-finite loss at descent step {step}")]
    NonFiniteLoss { step: usize },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid split: {0}")]
    InvalidSplit(String),

    #[error("could not draw a labeled set containing both classes after {retries} retries")]
    SplitExhausted { retries: usize },

    #[error("sequence length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("need at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },

    #[error("invalid oracle matrix: {0}")]
    InvalidOracleMatrix(String),

    #[error("run {run}: {source}")]
    Run {
        run: usize,
        #[source]
        source: Box<Error>,
    },
}
