use std::borrow::Cow;
use std::collections::HashMap as StdHashMap;

use rustc_hash::{FxHashMap as HashMap, FxHashSet as HashSet};

use super::{ngram_profile, TokenSeq};
use crate::error::{Error, Result};

/// Document frequencies for one n-gram order.
///
/// `idf(g) = ln(D / df(g))`, with unseen n-grams treated as `df = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct DocumentFrequencyTable {
    order: usize,
    doc_count: usize,
    df: HashMap<Vec<String>, usize>,
}

impl DocumentFrequencyTable {
    /// Builds a table where each document is the union of the n-grams of all
    /// of its sequences.
    pub fn from_documents<'a, D, S>(documents: D, order: usize) -> Result<Self>
    where
        D: IntoIterator<Item = S>,
        S: IntoIterator<Item = &'a TokenSeq>,
    {
        if order == 0 {
            return Err(Error::ZeroOrder);
        }
        let mut df: HashMap<Vec<String>, usize> = HashMap::default();
        let mut doc_count = 0;
        for doc in documents {
            doc_count += 1;
            let mut seen: HashSet<&[String]> = HashSet::default();
            for seq in doc {
                seen.extend(seq.tokens().windows(order));
            }
            for gram in seen {
                match df.get_mut(gram) {
                    Some(c) => *c += 1,
                    None => {
                        df.insert(gram.to_vec(), 1);
                    }
                }
            }
        }
        if doc_count == 0 {
            return Err(Error::EmptyCorpus);
        }
        Ok(Self { order, doc_count, df })
    }

    /// Reassembles a table from stored parts, checking `1 <= df <= D`.
    pub fn from_parts(order: usize, doc_count: usize, df: StdHashMap<Vec<String>, usize>) -> Result<Self> {
        let df: HashMap<Vec<String>, usize> = df.into_iter().collect();
        if order == 0 {
            return Err(Error::ZeroOrder);
        }
        if doc_count == 0 {
            return Err(Error::EmptyCorpus);
        }
        if let Some((gram, &count)) = df.iter().find(|(_, &c)| c == 0 || c > doc_count) {
            return Err(Error::IndexFormat(format!(
                "document frequency {count} of {gram:?} outside 1..={doc_count}"
            )));
        }
        Ok(Self { order, doc_count, df })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn doc_count(&self) -> usize {
        self.doc_count
    }

    pub fn df(&self, gram: &[String]) -> usize {
        self.df.get(gram).copied().unwrap_or(0)
    }

    pub fn idf(&self, gram: &[String]) -> f64 {
        let df = self.df(gram).max(1);
        (self.doc_count as f64 / df as f64).ln()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[String], usize)> {
        self.df.iter().map(|(g, &c)| (g.as_slice(), c))
    }

    pub fn len(&self) -> usize {
        self.df.len()
    }

    pub fn is_empty(&self) -> bool {
        self.df.is_empty()
    }
}

/// One table per order `1..=n_max`. A document is one entry of `corpus`,
/// typically the reference set of one article.
pub fn build_df_tables<'a, D, S>(corpus: D, n_max: usize) -> Result<Vec<DocumentFrequencyTable>>
where
    D: IntoIterator<Item = S>,
    S: IntoIterator<Item = &'a TokenSeq>,
{
    if n_max == 0 {
        return Err(Error::ZeroOrder);
    }
    let docs: Vec<Vec<&TokenSeq>> = corpus.into_iter().map(|d| d.into_iter().collect()).collect();
    if docs.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    (1..=n_max)
        .map(|n| DocumentFrequencyTable::from_documents(docs.iter().map(|d| d.iter().copied()), n))
        .collect()
}

/// Sparse TF-IDF weights of one n-gram order. Keys either borrow from the
/// source sequence or are owned (see [`TfIdfVector::into_owned`]).
#[derive(Debug, Clone, PartialEq)]
pub struct TfIdfVector<'a> {
    order: usize,
    weights: HashMap<Cow<'a, [String]>, f64>,
    norm: f64,
}

impl<'a> TfIdfVector<'a> {
    /// Builds a vector from explicit weights. Negative or non-finite weights
    /// are rejected; zero weights are dropped.
    pub fn from_weights(order: usize, weights: StdHashMap<Vec<String>, f64>) -> Result<TfIdfVector<'static>> {
        if let Some((gram, w)) = weights.iter().find(|(_, w)| !w.is_finite() || **w < 0.0) {
            return Err(Error::IndexFormat(format!("invalid weight {w} for {gram:?}")));
        }
        let weights: HashMap<Cow<'static, [String]>, f64> = weights
            .into_iter()
            .filter(|(_, w)| *w > 0.0)
            .map(|(g, w)| (Cow::Owned(g), w))
            .collect();
        Ok(TfIdfVector::with_norm(order, weights))
    }

    fn with_norm(order: usize, weights: HashMap<Cow<'a, [String]>, f64>) -> Self {
        let norm = super::sum_unordered(weights.values().map(|w| w * w)).sqrt();
        Self { order, weights, norm }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn weight(&self, gram: &[String]) -> f64 {
        self.weights.get(gram).copied().unwrap_or(0.0)
    }

    pub fn norm(&self) -> f64 {
        self.norm
    }

    pub fn is_zero(&self) -> bool {
        self.norm == 0.0
    }

    /// Entries in lexicographic n-gram order.
    pub fn iter(&self) -> impl Iterator<Item = (&[String], f64)> {
        let mut entries: Vec<(&[String], f64)> = self.weights.iter().map(|(g, &w)| (g.as_ref(), w)).collect();
        entries.sort_unstable_by(|a, b| a.0.cmp(b.0));
        entries.into_iter()
    }

    pub fn dot(&self, other: &TfIdfVector<'_>) -> f64 {
        let (small, large) = if self.weights.len() <= other.weights.len() {
            (self, other)
        } else {
            (other, self)
        };
        super::sum_unordered(small.weights.iter().map(|(g, w)| w * large.weight(g)))
    }

    /// Cosine similarity; 0 when either vector is zero.
    pub fn cosine(&self, other: &TfIdfVector<'_>) -> f64 {
        if self.is_zero() || other.is_zero() {
            return 0.0;
        }
        (self.dot(other) / (self.norm * other.norm)).clamp(0.0, 1.0)
    }

    pub fn into_owned(self) -> TfIdfVector<'static> {
        let weights = self
            .weights
            .into_iter()
            .map(|(g, w)| (Cow::Owned(g.into_owned()), w))
            .collect();
        TfIdfVector {
            order: self.order,
            weights,
            norm: self.norm,
        }
    }
}

/// `weight(g) = count(g in seq) * idf(g)`.
pub fn tfidf_vector<'a>(seq: &'a TokenSeq, n: usize, df: &DocumentFrequencyTable) -> Result<TfIdfVector<'a>> {
    if df.order() != n {
        return Err(Error::DfOrderMismatch {
            expected: n,
            found: df.order(),
        });
    }
    let profile = ngram_profile(seq, n)?;
    let weights = profile
        .iter()
        .map(|(g, tf)| (g, tf as f64 * df.idf(g)))
        .filter(|(_, w)| *w > 0.0)
        .map(|(g, w)| (Cow::Borrowed(g), w))
        .collect();
    Ok(TfIdfVector::with_norm(n, weights))
}
