use rand::seq::SliceRandom;
use rand::Rng;

use super::Article;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SplitSizes {
    pub train: usize,
    pub dev: usize,
    pub test: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusSplit {
    pub train: Vec<Article>,
    pub dev: Vec<Article>,
    pub test: Vec<Article>,
}

/// Random disjoint split with exactly the requested sizes; articles left over
/// are dropped. Each part keeps the input order.
pub fn split_corpus(articles: Vec<Article>, sizes: SplitSizes, rng: &mut impl Rng) -> Result<CorpusSplit> {
    let requested = sizes.train + sizes.dev + sizes.test;
    if requested > articles.len() {
        return Err(Error::OversubscribedSplit {
            requested,
            available: articles.len(),
        });
    }
    let mut order: Vec<usize> = (0..articles.len()).collect();
    order.shuffle(rng);
    // 0 = train, 1 = dev, 2 = test, 3 = unused
    let mut part = vec![3u8; articles.len()];
    let bounds = [sizes.train, sizes.train + sizes.dev, requested];
    for (rank, &idx) in order.iter().enumerate() {
        part[idx] = bounds.iter().position(|&b| rank < b).unwrap_or(3) as u8;
    }
    let mut split = CorpusSplit {
        train: Vec::with_capacity(sizes.train),
        dev: Vec::with_capacity(sizes.dev),
        test: Vec::with_capacity(sizes.test),
    };
    for (article, p) in articles.into_iter().zip(part) {
        match p {
            0 => split.train.push(article),
            1 => split.dev.push(article),
            2 => split.test.push(article),
            _ => {}
        }
    }
    Ok(split)
}
