//! Corpus-to-score toolkit for named-entity recognition.
//!
//! - [`corpus`]: tokens, sentences, CoNLL column files, sentence splitting.
//! - [`schemes`]: IO / BIO / BIOES tags, span decoding, conversion.
//! - [`augment`]: label-wise token replacement and shuffle within segments.
//! - [`crf`]: linear-chain CRF training and Viterbi decoding.
//! - [`eval`]: conlleval-style entity scoring.
//! - [`ingest`]: dataset download, cache and train/test split.
//! - [`cli`]: the `seqtag` executable.

pub mod augment;
pub mod cli;
pub mod corpus;
pub mod crf;
pub mod eval;
pub mod ingest;
pub mod schemes;

pub use corpus::{ColumnSpec, Corpus, Sentence, Token};
pub use schemes::{EntitySpan, Scheme};

use thiserror::Error;

/// Any failure of the pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Corpus(#[from] corpus::CorpusError),
    #[error(transparent)]
    Scheme(#[from] schemes::SchemeError),
    #[error(transparent)]
    Augment(#[from] augment::AugmentError),
    #[error(transparent)]
    Crf(#[from] crf::CrfError),
    #[error(transparent)]
    Eval(#[from] eval::EvalError),
    #[error(transparent)]
    Ingest(#[from] ingest::IngestError),
    #[error("{path}: {source}")]
    Parse { path: String, source: corpus::CorpusError },
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/corpus.md")]
    mod corpus {}
    #[doc = include_str!("../../../book/src/schemes.md")]
    mod schemes {}
    #[doc = include_str!("../../../book/src/augmentation.md")]
    mod augmentation {}
    #[doc = include_str!("../../../book/src/crf.md")]
    mod crf {}
    #[doc = include_str!("../../../book/src/evaluation.md")]
    mod evaluation {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
