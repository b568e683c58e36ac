use rustc_hash::FxHashMap as HashMap;

use super::{Breakdown, MetricConfig, MetricScore, ReferenceSet, Smoothing};
use crate::error::{Error, Result};
use crate::textcore::{ngram_profile, sum_unordered, NGramProfile, TokenSeq};

/// Sufficient statistics for BLEU. Summing them over sentences and scoring
/// once gives corpus BLEU.
#[derive(Debug, Clone, PartialEq)]
pub struct BleuStats {
    /// Per order, `sum_w min(count(w, c), max_j s_j count(w, r_j))`.
    pub clipped: Vec<f64>,
    /// Per order, total candidate n-grams.
    pub totals: Vec<usize>,
    pub candidate_len: usize,
    /// Length of the reference closest to the candidate, ties to the shorter.
    pub reference_len: usize,
}

impl BleuStats {
    pub fn zero(max_order: usize) -> Self {
        Self {
            clipped: vec![0.0; max_order],
            totals: vec![0; max_order],
            candidate_len: 0,
            reference_len: 0,
        }
    }

    pub fn max_order(&self) -> usize {
        self.totals.len()
    }

    /// Element-wise sum. Associative and commutative.
    pub fn merge(&mut self, other: &BleuStats) {
        assert_eq!(self.max_order(), other.max_order(), "merging BLEU stats of different orders");
        for (a, b) in self.clipped.iter_mut().zip(&other.clipped) {
            *a += b;
        }
        for (a, b) in self.totals.iter_mut().zip(&other.totals) {
            *a += b;
        }
        self.candidate_len += other.candidate_len;
        self.reference_len += other.reference_len;
    }

    pub fn score(&self, smoothing: Smoothing) -> MetricScore {
        let precisions: Vec<f64> = self
            .clipped
            .iter()
            .zip(&self.totals)
            .map(|(&clip, &total)| match smoothing {
                _ if clip > 0.0 => clip / total as f64,
                Smoothing::Off => 0.0,
                Smoothing::Epsilon(eps) => eps / total.max(1) as f64,
            })
            .collect();
        let brevity_penalty = brevity_penalty(self.candidate_len, self.reference_len);
        let value = if self.candidate_len == 0 || precisions.iter().any(|&p| p <= 0.0) {
            0.0
        } else {
            let weight = 1.0 / precisions.len() as f64;
            let log_mean: f64 = precisions.iter().map(|p| weight * p.ln()).sum();
            (brevity_penalty * log_mean.exp()).min(1.0)
        };
        MetricScore {
            value,
            breakdown: Breakdown::Bleu {
                precisions,
                brevity_penalty,
                candidate_len: self.candidate_len,
                reference_len: self.reference_len,
            },
        }
    }
}

fn brevity_penalty(candidate_len: usize, reference_len: usize) -> f64 {
    if candidate_len == 0 {
        0.0
    } else if candidate_len < reference_len {
        (1.0 - reference_len as f64 / candidate_len as f64).exp()
    } else {
        1.0
    }
}

pub(crate) fn closest_length(candidate_len: usize, refs: &ReferenceSet) -> usize {
    refs.sequences()
        .map(|r| r.len())
        .min_by_key(|&len| (len.abs_diff(candidate_len), len))
        .unwrap_or(0)
}

pub fn bleu_stats(candidate: &TokenSeq, refs: &ReferenceSet, max_order: usize) -> Result<BleuStats> {
    if refs.is_empty() {
        return Err(Error::EmptyReferenceSet);
    }
    if max_order == 0 {
        return Err(Error::ZeroOrder);
    }
    let mut stats = BleuStats::zero(max_order);
    stats.candidate_len = candidate.len();
    stats.reference_len = closest_length(candidate.len(), refs);
    for n in 1..=max_order {
        let cand = ngram_profile(candidate, n)?;
        let ref_profiles: Vec<(f64, NGramProfile<'_>)> = refs
            .iter()
            .map(|r| ngram_profile(r.tokens(), n).map(|p| (r.quality(), p)))
            .collect::<Result<_>>()?;
        let mut ceiling: HashMap<&[String], f64> = HashMap::with_capacity_and_hasher(cand.len(), Default::default());
        for (gram, _) in cand.iter() {
            let max_ref = ref_profiles
                .iter()
                .map(|(s, p)| s * p.count(gram) as f64)
                .fold(0.0, f64::max);
            ceiling.insert(gram, max_ref);
        }
        stats.clipped[n - 1] = sum_unordered(cand.iter().map(|(g, c)| (c as f64).min(ceiling[g])));
        stats.totals[n - 1] = cand.total();
    }
    Ok(stats)
}

/// Sentence BLEU with quality-weighted clipping.
pub fn weighted_bleu(candidate: &TokenSeq, refs: &ReferenceSet, cfg: &MetricConfig) -> Result<MetricScore> {
    cfg.validate()?;
    Ok(bleu_stats(candidate, refs, cfg.bleu_max_order)?.score(cfg.bleu_smoothing))
}
