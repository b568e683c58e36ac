//! Two-stage retrieval baseline: find similar articles by unigram TF-IDF
//! cosine, then pick the best comment among theirs with a relevance scorer.

mod index;
mod persist;
mod rank;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dataset::Article;
use crate::error::{Error, Result};
use crate::textcore::TokenSeq;

pub use index::{build_index, retrieve_articles, Candidate, Retrieved, TfIdfIndex};
pub use persist::{load_index, save_index, INDEX_FORMAT, INDEX_VERSION};
pub use rank::{rank_comments, CommentRanking, RankedComment, RelevanceScorer, RetrievalResult, Retriever, TfIdfCosineScorer};

/// Stage-one candidate articles when not configured otherwise.
pub const DEFAULT_K: usize = 10;

/// Which article text is indexed and queried.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IndexMode {
    /// Titles only (IR-T).
    Title,
    /// Title followed by content (IR-TC).
    TitleContent,
}

impl IndexMode {
    pub fn text(self, article: &Article) -> TokenSeq {
        match self {
            IndexMode::Title => article.title.clone(),
            IndexMode::TitleContent => article.title_content(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            IndexMode::Title => "title",
            IndexMode::TitleContent => "title-content",
        }
    }
}

impl fmt::Display for IndexMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for IndexMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "title" => Ok(IndexMode::Title),
            "title-content" => Ok(IndexMode::TitleContent),
            other => Err(Error::InvalidConfig(format!("unknown index mode {other:?}"))),
        }
    }
}
