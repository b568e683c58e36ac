use rand::seq::index;
use rand::Rng;
use serde::Serialize;

use super::Article;

/// Articles with fewer content tokens are dropped.
pub const MIN_CONTENT_TOKENS: usize = 30;
/// Articles with fewer comments are dropped.
pub const MIN_COMMENTS: usize = 20;

pub fn is_retained(article: &Article) -> bool {
    article.content.len() >= MIN_CONTENT_TOKENS && article.comments.len() >= MIN_COMMENTS
}

/// Keeps articles with at least 30 content tokens and at least 20 comments.
pub fn filter_corpus(articles: Vec<Article>) -> Vec<Article> {
    articles.into_iter().filter(is_retained).collect()
}

/// Eligibility thresholds for the annotated test set.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TestSetRules {
    /// Required number of comments longer than `min_comment_tokens`.
    pub min_comments: usize,
    /// Comments must have strictly more tokens than this.
    pub min_comment_tokens: usize,
    /// Total upvotes over all comments must strictly exceed this.
    pub min_total_upvotes: u64,
    /// Comments sampled per article.
    pub sample_size: usize,
    /// Optional cap on the number of articles, drawn uniformly from the
    /// eligible ones.
    pub max_articles: Option<usize>,
}

impl Default for TestSetRules {
    fn default() -> Self {
        Self {
            min_comments: 30,
            min_comment_tokens: 5,
            min_total_upvotes: 200,
            sample_size: 27,
            max_articles: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "reason", rename_all = "kebab-case")]
pub enum SkipReason {
    TooFewLongComments { found: usize },
    TooFewUpvotes { total: u64 },
    NotDrawn,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TestSelection {
    /// Selected articles, each carrying only its sampled comments in their
    /// original order.
    pub selected: Vec<Article>,
    pub skipped: Vec<(String, SkipReason)>,
}

impl TestSetRules {
    fn long_comments(&self, article: &Article) -> Vec<usize> {
        (0..article.comments.len())
            .filter(|&i| article.comments[i].tokens.len() > self.min_comment_tokens)
            .collect()
    }

    pub fn check(&self, article: &Article) -> Result<Vec<usize>, SkipReason> {
        let long = self.long_comments(article);
        let needed = self.min_comments.max(self.sample_size);
        if long.len() < needed {
            return Err(SkipReason::TooFewLongComments { found: long.len() });
        }
        let total = article.total_upvotes();
        if total <= self.min_total_upvotes {
            return Err(SkipReason::TooFewUpvotes { total });
        }
        Ok(long)
    }
}

/// Picks test articles and samples `sample_size` distinct long comments from
/// each. Input order is preserved in the output.
pub fn select_test_candidates(articles: &[Article], rules: &TestSetRules, rng: &mut impl Rng) -> TestSelection {
    let mut eligible: Vec<(usize, Vec<usize>)> = Vec::new();
    let mut skipped = Vec::new();
    for (i, a) in articles.iter().enumerate() {
        match rules.check(a) {
            Ok(long) => eligible.push((i, long)),
            Err(reason) => skipped.push((a.id.clone(), reason)),
        }
    }
    if let Some(cap) = rules.max_articles.filter(|&cap| cap < eligible.len()) {
        let mut keep = index::sample(rng, eligible.len(), cap).into_vec();
        keep.sort_unstable();
        let mut keep = keep.into_iter().peekable();
        let mut kept = Vec::with_capacity(cap);
        for (pos, entry) in eligible.into_iter().enumerate() {
            if keep.peek() == Some(&pos) {
                keep.next();
                kept.push(entry);
            } else {
                skipped.push((articles[entry.0].id.clone(), SkipReason::NotDrawn));
            }
        }
        eligible = kept;
    }
    let selected = eligible
        .into_iter()
        .map(|(i, long)| {
            let mut picks = index::sample(rng, long.len(), rules.sample_size).into_vec();
            picks.sort_unstable();
            let source = &articles[i];
            Article {
                comments: picks.into_iter().map(|p| source.comments[long[p]].clone()).collect(),
                ..source.clone()
            }
        })
        .collect();
    TestSelection { selected, skipped }
}
