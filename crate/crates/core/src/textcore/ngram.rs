use rustc_hash::FxHashMap as HashMap;

use super::TokenSeq;
use crate::error::{Error, Result};

/// Counts of contiguous n-grams of one order, borrowing from the source
/// sequence. Zero counts are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NGramProfile<'a> {
    order: usize,
    counts: HashMap<&'a [String], usize>,
}

impl<'a> NGramProfile<'a> {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn count(&self, gram: &[String]) -> usize {
        self.counts.get(gram).copied().unwrap_or(0)
    }

    /// Number of distinct n-grams.
    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// Sum of all counts, i.e. `max(0, len - n + 1)` of the source.
    pub fn total(&self) -> usize {
        self.counts.values().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&'a [String], usize)> + '_ {
        self.counts.iter().map(|(g, &c)| (*g, c))
    }
}

pub fn ngram_profile(seq: &TokenSeq, n: usize) -> Result<NGramProfile<'_>> {
    if n == 0 {
        return Err(Error::ZeroOrder);
    }
    let mut counts: HashMap<&[String], usize> = HashMap::default();
    for gram in seq.tokens().windows(n) {
        *counts.entry(gram).or_default() += 1;
    }
    Ok(NGramProfile { order: n, counts })
}
