use super::{Breakdown, MetricConfig, MetricScore, ReferenceSet};
use crate::error::{Error, Result};
use crate::textcore::{tfidf_vector, DocumentFrequencyTable, TokenSeq};

/// `(1/K) sum_n (1/N) sum_j s_j cos(g_n(c), g_n(r_j))`, without the x10
/// rescaling some CIDEr implementations apply.
pub fn weighted_cider(
    candidate: &TokenSeq,
    refs: &ReferenceSet,
    df: &[DocumentFrequencyTable],
    cfg: &MetricConfig,
) -> Result<MetricScore> {
    cfg.validate()?;
    if refs.is_empty() {
        return Err(Error::EmptyReferenceSet);
    }
    let max_order = cfg.cider_max_order;
    let beta = 1.0 / max_order as f64;
    let k = refs.len() as f64;
    let mut per_order = Vec::with_capacity(max_order);
    let mut per_reference = vec![0.0; refs.len()];
    for n in 1..=max_order {
        let table = df.iter().find(|t| t.order() == n).ok_or(Error::MissingDfOrder(n))?;
        let cand = tfidf_vector(candidate, n, table)?;
        let mut order_sum = 0.0;
        for (j, r) in refs.iter().enumerate() {
            let term = r.quality() * cand.cosine(&tfidf_vector(r.tokens(), n, table)?);
            order_sum += term;
            per_reference[j] += beta * term;
        }
        per_order.push(order_sum / k);
    }
    let value = per_order.iter().map(|v| beta * v).sum();
    Ok(MetricScore {
        value,
        breakdown: Breakdown::Cider {
            per_order,
            per_reference,
        },
    })
}
