use std::collections::{BTreeMap, HashSet};

use serde::Serialize;

use super::Article;
use crate::error::{Error, Result};

/// Corpus-level counts in the shape of a data-statistics table. Lengths are
/// in word tokens.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorpusStats {
    pub article_count: usize,
    pub comment_count: usize,
    pub comments_per_article: f64,
    pub upvotes_per_comment: f64,
    pub vocab_size: usize,
    pub avg_title_len: f64,
    pub avg_content_len: f64,
    pub avg_comment_len: f64,
    pub category_histogram: BTreeMap<String, usize>,
}

/// Running sums behind [`CorpusStats`]. `merge` is commutative and
/// associative, so shards can be summarised independently.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct StatsAccumulator {
    articles: usize,
    comments: usize,
    upvotes: u64,
    title_tokens: usize,
    content_tokens: usize,
    comment_tokens: usize,
    vocab: HashSet<String>,
    categories: BTreeMap<String, usize>,
}

impl StatsAccumulator {
    pub fn add(&mut self, article: &Article) {
        self.articles += 1;
        self.comments += article.comments.len();
        self.upvotes += article.total_upvotes();
        self.title_tokens += article.title.len();
        self.content_tokens += article.content.len();
        *self.categories.entry(article.category.clone()).or_default() += 1;
        let seqs = std::iter::once(&article.title)
            .chain(std::iter::once(&article.content))
            .chain(article.comments.iter().map(|c| &c.tokens));
        for seq in seqs {
            for tok in seq.tokens() {
                if !self.vocab.contains(tok) {
                    self.vocab.insert(tok.clone());
                }
            }
        }
        self.comment_tokens += article.comments.iter().map(|c| c.tokens.len()).sum::<usize>();
    }

    pub fn merge(&mut self, other: StatsAccumulator) {
        self.articles += other.articles;
        self.comments += other.comments;
        self.upvotes += other.upvotes;
        self.title_tokens += other.title_tokens;
        self.content_tokens += other.content_tokens;
        self.comment_tokens += other.comment_tokens;
        self.vocab.extend(other.vocab);
        for (k, v) in other.categories {
            *self.categories.entry(k).or_default() += v;
        }
    }

    pub fn finish(&self) -> Result<CorpusStats> {
        if self.articles == 0 {
            return Err(Error::EmptyCorpus);
        }
        let per = |num: f64, den: usize| if den == 0 { 0.0 } else { num / den as f64 };
        Ok(CorpusStats {
            article_count: self.articles,
            comment_count: self.comments,
            comments_per_article: per(self.comments as f64, self.articles),
            upvotes_per_comment: per(self.upvotes as f64, self.comments),
            vocab_size: self.vocab.len(),
            avg_title_len: per(self.title_tokens as f64, self.articles),
            avg_content_len: per(self.content_tokens as f64, self.articles),
            avg_comment_len: per(self.comment_tokens as f64, self.comments),
            category_histogram: self.categories.clone(),
        })
    }
}

pub fn corpus_stats(articles: &[Article]) -> Result<CorpusStats> {
    let mut acc = StatsAccumulator::default();
    for a in articles {
        acc.add(a);
    }
    acc.finish()
}
