use super::{weighted_f, Breakdown, MetricConfig, MetricScore, ReferenceSet};
use crate::error::{Error, Result};
use crate::textcore::{lcs_positions, TokenSeq};

/// ROUGE-L over the weighted union of per-reference LCS position sets.
///
/// Each candidate position weighs the largest quality among the references
/// whose canonical LCS covers it. Recall divides by the mean reference length.
pub fn weighted_rouge_l(candidate: &TokenSeq, refs: &ReferenceSet, cfg: &MetricConfig) -> Result<MetricScore> {
    cfg.validate()?;
    if refs.is_empty() {
        return Err(Error::EmptyReferenceSet);
    }
    let mut coverage = vec![0.0f64; candidate.len()];
    let mut lcs_lengths = Vec::with_capacity(refs.len());
    for r in refs {
        let positions = lcs_positions(candidate, r.tokens());
        lcs_lengths.push(positions.len());
        for p in positions {
            coverage[p] = coverage[p].max(r.quality());
        }
    }
    let union_weight: f64 = coverage.iter().sum();
    let (precision, recall) = if candidate.is_empty() {
        (0.0, 0.0)
    } else {
        (
            union_weight / candidate.len() as f64,
            union_weight / refs.mean_length(),
        )
    };
    let beta2 = cfg.rouge_beta * cfg.rouge_beta;
    Ok(MetricScore {
        value: weighted_f(precision, recall, beta2),
        breakdown: Breakdown::RougeL {
            union_weight,
            precision,
            recall,
            lcs_lengths,
        },
    })
}
