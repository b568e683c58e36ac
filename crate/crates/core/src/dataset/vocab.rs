use std::collections::HashMap;

use super::Article;
use crate::error::{Error, Result};
use crate::textcore::TokenSeq;

pub const DEFAULT_VOCAB_CAP: usize = 30_000;
pub const DEFAULT_UNK: &str = "<unk>";
/// Comments are clipped to this many tokens before training.
pub const MAX_COMMENT_LEN: usize = 50;

/// Frequency-ranked vocabulary. Ties rank by first occurrence in the corpus
/// (title, then content, then comments, article by article).
#[derive(Debug, Clone, PartialEq)]
pub struct Vocabulary {
    entries: Vec<(String, u64)>,
    index: HashMap<String, usize>,
    cap: usize,
    unk: String,
}

impl Vocabulary {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn unk(&self) -> &str {
        &self.unk
    }

    pub fn contains(&self, token: &str) -> bool {
        self.index.contains_key(token)
    }

    pub fn rank(&self, token: &str) -> Option<usize> {
        self.index.get(token).copied()
    }

    /// `(token, corpus frequency)` in rank order.
    pub fn entries(&self) -> &[(String, u64)] {
        &self.entries
    }

    /// Replaces out-of-vocabulary tokens with the unknown symbol.
    pub fn apply(&self, seq: &TokenSeq) -> TokenSeq {
        let tokens = seq
            .tokens()
            .iter()
            .map(|t| if self.contains(t) { t.clone() } else { self.unk.clone() })
            .collect();
        TokenSeq::new(tokens).expect("vocabulary tokens and unk symbol are nonempty")
    }

    pub fn apply_article(&self, article: &Article) -> Article {
        let mut out = article.clone();
        out.title = self.apply(&article.title);
        out.content = self.apply(&article.content);
        for c in &mut out.comments {
            c.tokens = self.apply(&c.tokens);
        }
        out
    }
}

/// Keeps the `cap` most frequent tokens over titles, contents and comments.
pub fn build_vocab(articles: &[Article], cap: usize, unk: &str) -> Result<Vocabulary> {
    if articles.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    if unk.is_empty() || unk.chars().any(char::is_whitespace) {
        return Err(Error::InvalidConfig(format!("invalid unknown-token symbol {unk:?}")));
    }
    // token -> (count, first occurrence)
    let mut counts: HashMap<&str, (u64, usize)> = HashMap::new();
    let mut position = 0usize;
    for a in articles {
        let seqs = std::iter::once(&a.title)
            .chain(std::iter::once(&a.content))
            .chain(a.comments.iter().map(|c| &c.tokens));
        for seq in seqs {
            for tok in seq.tokens() {
                let entry = counts.entry(tok.as_str()).or_insert((0, position));
                entry.0 += 1;
                position += 1;
            }
        }
    }
    if counts.contains_key(unk) {
        return Err(Error::UnkCollision(unk.to_owned()));
    }
    let mut ranked: Vec<(&str, u64, usize)> = counts.into_iter().map(|(t, (c, first))| (t, c, first)).collect();
    ranked.sort_unstable_by(|a, b| b.1.cmp(&a.1).then(a.2.cmp(&b.2)));
    ranked.truncate(cap);
    let entries: Vec<(String, u64)> = ranked.into_iter().map(|(t, c, _)| (t.to_owned(), c)).collect();
    let index = entries.iter().enumerate().map(|(i, (t, _))| (t.clone(), i)).collect();
    Ok(Vocabulary {
        entries,
        index,
        cap,
        unk: unk.to_owned(),
    })
}

/// Clips every comment to its first `max_len` tokens.
pub fn truncate_comments(mut articles: Vec<Article>, max_len: usize) -> Vec<Article> {
    for a in &mut articles {
        for c in &mut a.comments {
            c.tokens.truncate(max_len);
        }
    }
    articles
}
