//! Crate-wide error type.

use std::path::PathBuf;

/// Errors produced by the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A parameter violated its documented range or precondition.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// An operation that needs a nonempty profile got an empty one.
    #[error("empty profile: {0}")]
    EmptyProfile(&'static str),

    /// Two signatures cannot be compared (different family seed or K).
    #[error("incompatible signatures: {0}")]
    IncompatibleSignatures(String),

    /// The DPSO epsilon ratio has a zero denominator.
    #[error("undefined epsilon: denominator probability is zero")]
    UndefinedEpsilon,

    /// Corpus is too small for the requested experiment.
    #[error("corpus too small: {0}")]
    CorpusTooSmall(String),

    /// Filesystem-level failure while loading a corpus.
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// A serialized signature line could not be parsed.
    #[error("signature parse error: {0}")]
    SignatureParse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
