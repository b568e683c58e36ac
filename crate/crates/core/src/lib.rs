//! Quality-weighted reference-based evaluation for article commenting.
//!
//! The crate is organised bottom-up:
//!
//! * [`textcore`] holds token sequences, n-gram profiles, LCS and TF-IDF.
//! * [`metrics`] implements BLEU, METEOR, ROUGE-L and CIDEr where every
//!   reference carries a quality weight in `[0, 1]`. Setting all weights to
//!   one gives the ordinary metrics.
//! * [`stats`] has the correlation, agreement and normalisation routines used
//!   to compare metrics against human grades.
//! * [`dataset`] reads, filters, splits and summarises article/comment
//!   corpora.
//! * [`retrieval`] is the two-stage TF-IDF retrieval baseline.

pub mod dataset;
pub mod error;
pub mod metrics;
pub mod retrieval;
pub mod stats;
pub mod textcore;

pub use error::{Error, Result};
pub use textcore::TokenSeq;
