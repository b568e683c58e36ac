use std::collections::HashMap;

use serde::Serialize;

use super::{retrieve_articles, Candidate, TfIdfIndex};
use crate::dataset::{Article, CommentRecord};
use crate::error::{Error, Result};
use crate::textcore::{tfidf_vector, DocumentFrequencyTable, TokenSeq};

/// Scores how relevant a comment is to an article. Must be deterministic;
/// higher is more relevant.
pub trait RelevanceScorer {
    fn score(&self, article: &Article, comment: &TokenSeq) -> f64;
}

impl<F> RelevanceScorer for F
where
    F: Fn(&Article, &TokenSeq) -> f64,
{
    fn score(&self, article: &Article, comment: &TokenSeq) -> f64 {
        self(article, comment)
    }
}

/// Unigram TF-IDF cosine between the comment and the article's title and
/// content.
#[derive(Debug, Clone)]
pub struct TfIdfCosineScorer {
    df: DocumentFrequencyTable,
}

impl TfIdfCosineScorer {
    pub fn new(df: DocumentFrequencyTable) -> Result<Self> {
        if df.order() != 1 {
            return Err(Error::DfOrderMismatch {
                expected: 1,
                found: df.order(),
            });
        }
        Ok(Self { df })
    }

    pub fn from_index(index: &TfIdfIndex) -> Self {
        Self { df: index.df().clone() }
    }
}

impl RelevanceScorer for TfIdfCosineScorer {
    fn score(&self, article: &Article, comment: &TokenSeq) -> f64 {
        let text = article.title_content();
        let a = tfidf_vector(&text, 1, &self.df).expect("unigram table");
        let c = tfidf_vector(comment, 1, &self.df).expect("unigram table");
        a.cosine(&c)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RankedComment {
    pub pool_index: usize,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CommentRanking {
    /// Every pool entry, by descending score; ties keep pool order.
    pub order: Vec<RankedComment>,
}

impl CommentRanking {
    pub fn best(&self) -> RankedComment {
        self.order[0]
    }
}

pub fn rank_comments<S: RelevanceScorer + ?Sized>(
    query: &Article,
    pool: &[CommentRecord],
    scorer: &S,
) -> Result<CommentRanking> {
    if pool.is_empty() {
        return Err(Error::EmptyPool);
    }
    let mut order: Vec<RankedComment> = pool
        .iter()
        .enumerate()
        .map(|(pool_index, c)| RankedComment {
            pool_index,
            score: scorer.score(query, &c.tokens),
        })
        .collect();
    order.sort_by(|a, b| b.score.total_cmp(&a.score));
    Ok(CommentRanking { order })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RetrievalResult {
    pub query_id: String,
    pub candidates: Vec<Candidate>,
    pub truncated: bool,
    pub comment: TokenSeq,
    pub comment_score: f64,
    /// Article the chosen comment was written for.
    pub source_id: String,
}

/// Both retrieval stages over an index and the corpus it was built from.
pub struct Retriever<'c, S> {
    index: TfIdfIndex,
    corpus: &'c [Article],
    by_id: HashMap<&'c str, usize>,
    scorer: S,
    k: usize,
}

impl<'c, S: RelevanceScorer> Retriever<'c, S> {
    /// `corpus` must hold the indexed articles in index order.
    pub fn new(index: TfIdfIndex, corpus: &'c [Article], scorer: S, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidConfig("k must be at least 1".into()));
        }
        if index.ids().len() != corpus.len() || index.ids().iter().zip(corpus).any(|(id, a)| *id != a.id) {
            return Err(Error::IndexFormat("index does not match the supplied corpus".into()));
        }
        let by_id = corpus.iter().enumerate().map(|(i, a)| (a.id.as_str(), i)).collect();
        Ok(Self {
            index,
            corpus,
            by_id,
            scorer,
            k,
        })
    }

    pub fn index(&self) -> &TfIdfIndex {
        &self.index
    }

    pub fn answer(&self, query: &Article) -> Result<RetrievalResult> {
        let retrieved = retrieve_articles(&self.index, query, self.k)?;
        let mut pool = Vec::new();
        let mut sources = Vec::new();
        for c in &retrieved.candidates {
            let article = &self.corpus[self.by_id[c.id.as_str()]];
            pool.extend(article.comments.iter().cloned());
            sources.extend(std::iter::repeat(article.id.as_str()).take(article.comments.len()));
        }
        let ranking = rank_comments(query, &pool, &self.scorer)?;
        let best = ranking.best();
        Ok(RetrievalResult {
            query_id: query.id.clone(),
            comment: pool[best.pool_index].tokens.clone(),
            comment_score: best.score,
            source_id: sources[best.pool_index].to_owned(),
            candidates: retrieved.candidates,
            truncated: retrieved.truncated,
        })
    }
}
