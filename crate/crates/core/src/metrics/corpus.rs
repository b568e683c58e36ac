use super::{
    bleu_stats, meteor_stats, weighted_cider, weighted_rouge_l, BleuStats, Breakdown, Metric, MetricConfig,
    MetricScore, MeteorStats, ReferenceSet,
};
use crate::error::{Error, Result};
use crate::textcore::{DocumentFrequencyTable, TokenSeq};

/// Corpus-level score.
///
/// BLEU and METEOR sum their sentence statistics and score once; ROUGE-L and
/// CIDEr average sentence scores. `df` is only consulted for CIDEr.
pub fn corpus_score(
    metric: Metric,
    candidates: &[TokenSeq],
    references: &[ReferenceSet],
    df: &[DocumentFrequencyTable],
    cfg: &MetricConfig,
) -> Result<MetricScore> {
    cfg.validate()?;
    if candidates.len() != references.len() || candidates.is_empty() {
        return Err(Error::LengthMismatch {
            candidates: candidates.len(),
            references: references.len(),
        });
    }
    let pairs = candidates.iter().zip(references);
    match metric {
        Metric::Bleu => {
            let mut total = BleuStats::zero(cfg.bleu_max_order);
            for (c, r) in pairs {
                total.merge(&bleu_stats(c, r, cfg.bleu_max_order)?);
            }
            Ok(total.score(cfg.bleu_smoothing))
        }
        Metric::Meteor => {
            let mut total = MeteorStats::default();
            for (c, r) in pairs {
                total.merge(&meteor_stats(c, r, cfg)?);
            }
            Ok(total.score(cfg))
        }
        Metric::RougeL => mean_of(pairs.map(|(c, r)| weighted_rouge_l(c, r, cfg))),
        Metric::Cider => mean_of(pairs.map(|(c, r)| weighted_cider(c, r, df, cfg))),
    }
}

fn mean_of(scores: impl Iterator<Item = Result<MetricScore>>) -> Result<MetricScore> {
    let mut sum = 0.0;
    let mut count = 0;
    for s in scores {
        sum += s?.value;
        count += 1;
    }
    Ok(MetricScore {
        value: sum / count as f64,
        breakdown: Breakdown::Mean { count },
    })
}
