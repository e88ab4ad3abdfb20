use alloc::string::String;

/// Errors raised by the core pipeline.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("duplicate document id `{0}`")]
    DuplicateId(String),
    #[error("invalid document `{id}`: {reason}")]
    InvalidDocument { id: String, reason: String },
    #[error("invalid span [{start}, {end})")]
    InvalidSpan { start: usize, end: usize },
    #[error("cannot build {k} folds: class {class} has only {count} documents")]
    TooFewForFolds { k: usize, class: &'static str, count: usize },
    #[error("fold count must be at least 2, got {0}")]
    BadFoldCount(usize),
    #[error("empty input: {0}")]
    Empty(&'static str),
    #[error("training data must contain both classes")]
    SingleClass,
    #[error("feature vectors and labels differ in length ({vectors} vs {labels})")]
    LengthMismatch { vectors: usize, labels: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
