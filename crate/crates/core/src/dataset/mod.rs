//! Article/comment corpora: the canonical line-delimited JSON format,
//! construction filters, test-set selection, preprocessing and summary
//! statistics.

mod filter;
mod io;
mod split;
mod summary;
mod vocab;

use serde::Serialize;

use crate::textcore::TokenSeq;

pub use filter::{
    filter_corpus, is_retained, select_test_candidates, SkipReason, TestSelection, TestSetRules, MIN_COMMENTS,
    MIN_CONTENT_TOKENS,
};
pub use io::{parse_corpus, read_articles, write_article, write_corpus, ArticleReader};
pub use split::{split_corpus, CorpusSplit, SplitSizes};
pub use summary::{corpus_stats, CorpusStats, StatsAccumulator};
pub use vocab::{build_vocab, truncate_comments, Vocabulary, DEFAULT_UNK, DEFAULT_VOCAB_CAP, MAX_COMMENT_LEN};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CommentRecord {
    pub tokens: TokenSeq,
    pub upvotes: u64,
    /// Two annotators' grades in 1..=5, when the comment was annotated.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grades: Option<[u8; 2]>,
}

impl CommentRecord {
    pub fn new(tokens: TokenSeq, upvotes: u64) -> Self {
        Self {
            tokens,
            upvotes,
            grades: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Article {
    pub id: String,
    pub title: TokenSeq,
    pub content: TokenSeq,
    pub category: String,
    pub comments: Vec<CommentRecord>,
}

impl Article {
    /// Title followed by content.
    pub fn title_content(&self) -> TokenSeq {
        self.title.concat(&self.content)
    }

    pub fn total_upvotes(&self) -> u64 {
        self.comments.iter().map(|c| c.upvotes).sum()
    }
}
