use std::collections::HashMap;

use serde::Serialize;

use super::IndexMode;
use crate::dataset::Article;
use crate::error::{Error, Result};
use crate::textcore::{tfidf_vector, DocumentFrequencyTable, TfIdfVector, TokenSeq};

/// Unigram TF-IDF vectors of an article collection with an inverted index
/// over their nonzero terms. Immutable once built.
#[derive(Debug, Clone)]
pub struct TfIdfIndex {
    mode: IndexMode,
    df: DocumentFrequencyTable,
    ids: Vec<String>,
    vectors: Vec<TfIdfVector<'static>>,
    postings: HashMap<String, Vec<(usize, f64)>>,
}

impl TfIdfIndex {
    pub(crate) fn from_parts(
        mode: IndexMode,
        df: DocumentFrequencyTable,
        ids: Vec<String>,
        vectors: Vec<TfIdfVector<'static>>,
    ) -> Result<Self> {
        if ids.len() != df.doc_count() || vectors.len() != ids.len() {
            return Err(Error::IndexFormat(format!(
                "{} ids and {} vectors for {} documents",
                ids.len(),
                vectors.len(),
                df.doc_count()
            )));
        }
        let mut postings: HashMap<String, Vec<(usize, f64)>> = HashMap::new();
        for (doc, v) in vectors.iter().enumerate() {
            for (gram, w) in v.iter() {
                postings.entry(gram[0].clone()).or_default().push((doc, w));
            }
        }
        Ok(Self {
            mode,
            df,
            ids,
            vectors,
            postings,
        })
    }

    pub fn mode(&self) -> IndexMode {
        self.mode
    }

    pub fn df(&self) -> &DocumentFrequencyTable {
        &self.df
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn vectors(&self) -> &[TfIdfVector<'static>] {
        &self.vectors
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    /// Vectorises a token sequence with this index's document frequencies.
    pub fn vectorize<'a>(&self, seq: &'a TokenSeq) -> TfIdfVector<'a> {
        tfidf_vector(seq, 1, &self.df).expect("index tables are unigram")
    }
}

pub fn build_index(articles: &[Article], mode: IndexMode) -> Result<TfIdfIndex> {
    if articles.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let texts: Vec<TokenSeq> = articles.iter().map(|a| mode.text(a)).collect();
    let df = DocumentFrequencyTable::from_documents(texts.iter().map(std::iter::once), 1)?;
    let vectors = texts
        .iter()
        .map(|t| tfidf_vector(t, 1, &df).map(TfIdfVector::into_owned))
        .collect::<Result<Vec<_>>>()?;
    let ids = articles.iter().map(|a| a.id.clone()).collect();
    TfIdfIndex::from_parts(mode, df, ids, vectors)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Candidate {
    pub id: String,
    /// Position of the article in the index.
    #[serde(skip)]
    pub position: usize,
    pub cosine: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Retrieved {
    /// Descending cosine, ties by id.
    pub candidates: Vec<Candidate>,
    /// Set when fewer than `k` articles were available.
    pub truncated: bool,
}

/// The `k` indexed articles most similar to `query`, never including an
/// article with the query's own id.
pub fn retrieve_articles(index: &TfIdfIndex, query: &Article, k: usize) -> Result<Retrieved> {
    if k == 0 {
        return Err(Error::InvalidConfig("k must be at least 1".into()));
    }
    let text = index.mode.text(query);
    let q = index.vectorize(&text);
    let mut dots = vec![0.0f64; index.len()];
    if !q.is_zero() {
        for (gram, w) in q.iter() {
            if let Some(list) = index.postings.get(gram[0].as_str()) {
                for &(doc, dw) in list {
                    dots[doc] += w * dw;
                }
            }
        }
    }
    let mut candidates: Vec<Candidate> = dots
        .into_iter()
        .enumerate()
        .filter(|&(doc, _)| index.ids[doc] != query.id)
        .map(|(doc, dot)| {
            let norm = index.vectors[doc].norm() * q.norm();
            let cosine = if norm == 0.0 { 0.0 } else { (dot / norm).clamp(0.0, 1.0) };
            Candidate {
                id: index.ids[doc].clone(),
                position: doc,
                cosine,
            }
        })
        .collect();
    candidates.sort_by(|a, b| b.cosine.total_cmp(&a.cosine).then_with(|| a.id.cmp(&b.id)));
    let truncated = candidates.len() < k;
    candidates.truncate(k);
    Ok(Retrieved { candidates, truncated })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn article(id: &str, title: &str, content: &str) -> Article {
        Article {
            id: id.into(),
            title: TokenSeq::from_text(title),
            content: TokenSeq::from_text(content),
            category: "c".into(),
            comments: Vec::new(),
        }
    }

    fn g(s: &str) -> Vec<String> {
        vec![s.to_owned()]
    }

    #[test]
    fn single_article_has_zero_vector() {
        let idx = build_index(&[article("a", "x y", "")], IndexMode::Title).unwrap();
        assert_eq!(idx.df().doc_count(), 1);
        assert!(idx.vectors()[0].is_zero());
    }

    #[test]
    fn disjoint_titles_are_orthogonal() {
        let idx = build_index(&[article("a", "x y", ""), article("b", "z", "")], IndexMode::Title).unwrap();
        assert_eq!(idx.vectors()[0].cosine(&idx.vectors()[1]), 0.0);
    }

    #[test]
    fn hand_computed_weights() {
        let corpus = [
            article("1", "a b", "c"),
            article("2", "a", "c c"),
            article("3", "d", ""),
        ];
        let idx = build_index(&corpus, IndexMode::TitleContent).unwrap();
        let ln = |x: f64| x.ln();
        // df: a 2, b 1, c 2, d 1 over D = 3
        let v1 = &idx.vectors()[0];
        assert!((v1.weight(&g("a")) - ln(1.5)).abs() < 1e-12);
        assert!((v1.weight(&g("b")) - ln(3.0)).abs() < 1e-12);
        assert!((v1.weight(&g("c")) - ln(1.5)).abs() < 1e-12);
        let v2 = &idx.vectors()[1];
        assert!((v2.weight(&g("c")) - 2.0 * ln(1.5)).abs() < 1e-12);
        assert!((idx.vectors()[2].weight(&g("d")) - ln(3.0)).abs() < 1e-12);
    }

    #[test]
    fn empty_corpus_rejected() {
        assert!(matches!(build_index(&[], IndexMode::Title), Err(Error::EmptyCorpus)));
    }

    #[test]
    fn identical_query_ranks_first() {
        let corpus = [article("a", "p q", ""), article("b", "r s", ""), article("c", "p t", "")];
        let idx = build_index(&corpus, IndexMode::Title).unwrap();
        let r = retrieve_articles(&idx, &article("q", "r s", ""), 2).unwrap();
        assert_eq!(r.candidates[0].id, "b");
        assert!((r.candidates[0].cosine - 1.0).abs() < 1e-12);
        assert!(!r.truncated);
    }

    #[test]
    fn no_overlap_orders_by_id() {
        let corpus = [article("c", "p", ""), article("a", "q", ""), article("b", "r", "")];
        let idx = build_index(&corpus, IndexMode::Title).unwrap();
        let r = retrieve_articles(&idx, &article("q", "zzz", ""), 3).unwrap();
        let ids: Vec<&str> = r.candidates.iter().map(|c| c.id.as_str()).collect();
        assert_eq!(ids, ["a", "b", "c"]);
        assert!(r.candidates.iter().all(|c| c.cosine == 0.0));
    }

    #[test]
    fn excludes_query_and_flags_short_results() {
        let corpus = [article("a", "p", ""), article("b", "p q", "")];
        let idx = build_index(&corpus, IndexMode::Title).unwrap();
        let r = retrieve_articles(&idx, &corpus[0], 5).unwrap();
        assert_eq!(r.candidates.len(), 1);
        assert_eq!(r.candidates[0].id, "b");
        assert!(r.truncated);
        assert!(retrieve_articles(&idx, &corpus[0], 0).is_err());
    }
}
