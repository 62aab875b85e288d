//! Core library for working with complexly NER-annotated review corpora:
//! an in-memory data model with multi-label BIO encoding, bit-exact file
//! formats, scoring (chunking P/R/F1, inter-annotator agreement, coreference
//! metrics), surface-form normalization, thesaurus concept linking, corpus
//! statistics, and a feature-based baseline tagger.
//!
//! Documents and mentions are immutable after construction and every
//! operation is a pure function, so corpora can be processed in parallel.
//! The `parallel` feature (on by default) backs the per-document and
//! per-sentence loops with rayon; without it everything runs sequentially
//! through the same entry points.

pub mod bio;
pub mod evaluate;
pub mod formats;
pub mod linker;
pub mod model;
pub mod normalize;
pub mod par;
pub mod stats;
pub mod synthetic;
pub mod tagger;

use std::fmt;
use std::path::PathBuf;

pub use model::{Document, Layer, Mention, Sentence, Span, Token};

pub type Result<T> = std::result::Result<T, Error>;

/// Errors shared by every module of the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// Malformed line-oriented input (CoNLL-U, tag files, lexicons, vectors).
    #[error("{}:{line}: {message}", path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    /// Corpus JSON that does not match the schema; `pointer` locates the
    /// offending value inside the document.
    #[error("{}: at {pointer}: {message}", path.display())]
    Schema {
        path: PathBuf,
        pointer: String,
        message: String,
    },

    /// Structural invariant violations found while validating a corpus.
    #[error("corpus validation failed with {} issue(s); first: {}", .0.len(), .0.first().map(|i| i.to_string()).unwrap_or_default())]
    Validation(Vec<ValidationIssue>),

    /// Mention spans that cannot be aligned to tokens, or length mismatches
    /// between parallel sequences.
    #[error("alignment: {0}")]
    Alignment(String),

    #[error("configuration: {0}")]
    Config(String),

    #[error("empty input: {0}")]
    EmptyInput(String),

    /// A token missing data required by the preprocessing pipeline.
    #[error("preprocessing: {0}")]
    Preprocess(String),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub fn parse(path: impl Into<PathBuf>, line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            line,
            message: message.into(),
        }
    }
}

/// One invariant violation inside a corpus, tied to the document (and where
/// possible the mention or offset) that caused it.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct ValidationIssue {
    pub document: String,
    pub detail: String,
}

impl ValidationIssue {
    pub fn new(document: impl Into<String>, detail: impl Into<String>) -> Self {
        ValidationIssue {
            document: document.into(),
            detail: detail.into(),
        }
    }
}

impl fmt::Display for ValidationIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "document {:?}: {}", self.document, self.detail)
    }
}
