//! Token-sequence primitives shared by every metric.

mod lcs;
mod ngram;
mod tfidf;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use lcs::{lcs_length, lcs_positions};
pub use ngram::{ngram_profile, NGramProfile};
pub use tfidf::{build_df_tables, tfidf_vector, DocumentFrequencyTable, TfIdfVector};

/// Sum that does not depend on the order of its terms, so results over hash
/// maps are reproducible bit for bit.
pub(crate) fn sum_unordered(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut v: Vec<f64> = values.into_iter().collect();
    v.sort_unstable_by(f64::total_cmp);
    v.into_iter().sum()
}

/// A pre-segmented sequence of word tokens.
///
/// Tokens are compared exactly: no case folding, no stemming.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<String>", into = "Vec<String>")]
pub struct TokenSeq(Vec<String>);

impl TokenSeq {
    pub fn new(tokens: Vec<String>) -> Result<Self> {
        if let Some(pos) = tokens.iter().position(|t| t.is_empty()) {
            return Err(Error::EmptyToken(pos));
        }
        Ok(Self(tokens))
    }

    /// Splits on unicode whitespace.
    pub fn from_text(text: &str) -> Self {
        Self(text.split_whitespace().map(str::to_owned).collect())
    }

    pub fn tokens(&self) -> &[String] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_inner(self) -> Vec<String> {
        self.0
    }

    /// Keeps the first `max_len` tokens.
    pub fn truncate(&mut self, max_len: usize) {
        self.0.truncate(max_len);
    }

    /// Concatenation of `self` followed by `other`.
    pub fn concat(&self, other: &TokenSeq) -> TokenSeq {
        let mut tokens = Vec::with_capacity(self.len() + other.len());
        tokens.extend_from_slice(&self.0);
        tokens.extend_from_slice(&other.0);
        TokenSeq(tokens)
    }
}

impl TryFrom<Vec<String>> for TokenSeq {
    type Error = Error;

    fn try_from(tokens: Vec<String>) -> Result<Self> {
        Self::new(tokens)
    }
}

impl From<TokenSeq> for Vec<String> {
    fn from(seq: TokenSeq) -> Self {
        seq.0
    }
}

impl AsRef<[String]> for TokenSeq {
    fn as_ref(&self) -> &[String] {
        &self.0
    }
}

impl fmt::Display for TokenSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.join(" "))
    }
}
