//! Sentence- and corpus-level BLEU, METEOR, ROUGE-L and CIDEr over
//! quality-weighted references.
//!
//! Every reference carries a weight `s` in `[0, 1]`. With all weights equal
//! to one each metric reduces to its usual unweighted form, so there is a
//! single code path for both.

mod bleu;
mod cider;
mod corpus;
mod meteor;
mod rouge;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::textcore::TokenSeq;

pub use bleu::{bleu_stats, weighted_bleu, BleuStats};
pub use cider::weighted_cider;
pub use corpus::corpus_score;
pub use meteor::{align, meteor_stats, weighted_meteor, Alignment, MeteorStats};
pub use rouge::weighted_rouge_l;

/// A reference sequence with its quality weight.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QualityReference {
    tokens: TokenSeq,
    quality: f64,
}

impl QualityReference {
    pub fn new(tokens: TokenSeq, quality: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&quality) {
            return Err(Error::QualityOutOfRange(quality));
        }
        Ok(Self { tokens, quality })
    }

    /// A reference with weight 1.
    pub fn full(tokens: TokenSeq) -> Self {
        Self { tokens, quality: 1.0 }
    }

    pub fn tokens(&self) -> &TokenSeq {
        &self.tokens
    }

    pub fn quality(&self) -> f64 {
        self.quality
    }
}

/// A nonempty list of nonempty references.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReferenceSet {
    refs: Vec<QualityReference>,
}

impl ReferenceSet {
    pub fn new(refs: Vec<QualityReference>) -> Result<Self> {
        if refs.is_empty() {
            return Err(Error::EmptyReferenceSet);
        }
        if let Some(idx) = refs.iter().position(|r| r.tokens.is_empty()) {
            return Err(Error::EmptyReference(idx));
        }
        Ok(Self { refs })
    }

    /// All references at weight 1.
    pub fn unweighted(refs: Vec<TokenSeq>) -> Result<Self> {
        Self::new(refs.into_iter().map(QualityReference::full).collect())
    }

    /// Same references with every weight reset to 1.
    pub fn with_unit_quality(&self) -> Self {
        Self {
            refs: self
                .refs
                .iter()
                .map(|r| QualityReference::full(r.tokens.clone()))
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.refs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.refs.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, QualityReference> {
        self.refs.iter()
    }

    pub fn sequences(&self) -> impl Iterator<Item = &TokenSeq> {
        self.refs.iter().map(|r| &r.tokens)
    }

    pub fn mean_length(&self) -> f64 {
        self.refs.iter().map(|r| r.tokens.len() as f64).sum::<f64>() / self.refs.len() as f64
    }
}

impl<'a> IntoIterator for &'a ReferenceSet {
    type Item = &'a QualityReference;
    type IntoIter = std::slice::Iter<'a, QualityReference>;

    fn into_iter(self) -> Self::IntoIter {
        self.refs.iter()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "epsilon")]
pub enum Smoothing {
    Off,
    /// Zero n-gram matches are replaced by this mass.
    Epsilon(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricConfig {
    pub bleu_max_order: usize,
    pub bleu_smoothing: Smoothing,
    pub rouge_beta: f64,
    pub meteor_penalty_gamma: f64,
    pub meteor_penalty_power: f64,
    /// `F = (1 + w) P R / (R + w P)`; 9 gives METEOR's `10PR / (R + 9P)`.
    pub meteor_recall_weight: f64,
    pub cider_max_order: usize,
}

impl Default for MetricConfig {
    fn default() -> Self {
        Self {
            bleu_max_order: 4,
            bleu_smoothing: Smoothing::Off,
            rouge_beta: 1.2,
            meteor_penalty_gamma: 0.5,
            meteor_penalty_power: 3.0,
            meteor_recall_weight: 9.0,
            cider_max_order: 4,
        }
    }
}

impl MetricConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidConfig(msg.to_owned()));
        if self.bleu_max_order == 0 || self.cider_max_order == 0 {
            return bad("n-gram orders must be at least 1");
        }
        if !(self.rouge_beta > 0.0 && self.rouge_beta.is_finite()) {
            return bad("rouge beta must be positive");
        }
        if let Smoothing::Epsilon(eps) = self.bleu_smoothing {
            if !(eps > 0.0 && eps.is_finite()) {
                return bad("smoothing epsilon must be positive");
            }
        }
        if !(0.0..=1.0).contains(&self.meteor_penalty_gamma) {
            return bad("meteor penalty gamma must lie in [0, 1]");
        }
        if !(self.meteor_penalty_power >= 0.0 && self.meteor_penalty_power.is_finite()) {
            return bad("meteor penalty power must be non-negative");
        }
        if !(self.meteor_recall_weight >= 0.0 && self.meteor_recall_weight.is_finite()) {
            return bad("meteor recall weight must be non-negative");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Metric {
    Bleu,
    Meteor,
    RougeL,
    Cider,
}

impl Metric {
    pub const ALL: [Metric; 4] = [Metric::Bleu, Metric::Meteor, Metric::RougeL, Metric::Cider];

    pub fn name(self) -> &'static str {
        match self {
            Metric::Bleu => "bleu",
            Metric::Meteor => "meteor",
            Metric::RougeL => "rouge-l",
            Metric::Cider => "cider",
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Metric::ALL
            .into_iter()
            .find(|m| m.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidConfig(format!("unknown metric {s:?}")))
    }
}

/// A metric value with the intermediate quantities that produced it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricScore {
    pub value: f64,
    pub breakdown: Breakdown,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "metric", rename_all = "kebab-case")]
pub enum Breakdown {
    Bleu {
        precisions: Vec<f64>,
        brevity_penalty: f64,
        candidate_len: usize,
        reference_len: usize,
    },
    Meteor {
        /// Index of the maximising reference; `None` for corpus aggregates.
        reference_index: Option<usize>,
        matches: usize,
        chunks: usize,
        precision: f64,
        recall: f64,
        fmean: f64,
        penalty: f64,
        per_reference: Vec<f64>,
    },
    RougeL {
        union_weight: f64,
        precision: f64,
        recall: f64,
        lcs_lengths: Vec<usize>,
    },
    Cider {
        per_order: Vec<f64>,
        per_reference: Vec<f64>,
    },
    /// Arithmetic mean of sentence scores.
    Mean { count: usize },
}

/// Weighted harmonic-style mean `(1 + w) P R / (R + w P)`; 0 when either is 0.
pub(crate) fn weighted_f(precision: f64, recall: f64, recall_weight: f64) -> f64 {
    if precision <= 0.0 || recall <= 0.0 {
        return 0.0;
    }
    (1.0 + recall_weight) * precision * recall / (recall + recall_weight * precision)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quality_bounds() {
        let seq = TokenSeq::from_text("a");
        assert!(QualityReference::new(seq.clone(), 1.0).is_ok());
        assert!(QualityReference::new(seq.clone(), 0.0).is_ok());
        assert!(QualityReference::new(seq.clone(), 1.5).is_err());
        assert!(QualityReference::new(seq.clone(), -0.1).is_err());
        assert!(QualityReference::new(seq, f64::NAN).is_err());
    }

    #[test]
    fn reference_set_rejects_empty() {
        assert!(matches!(ReferenceSet::new(vec![]), Err(Error::EmptyReferenceSet)));
        let refs = vec![
            QualityReference::full(TokenSeq::from_text("a")),
            QualityReference::full(TokenSeq::from_text("")),
        ];
        assert!(matches!(ReferenceSet::new(refs), Err(Error::EmptyReference(1))));
    }

    #[test]
    fn config_validation() {
        assert!(MetricConfig::default().validate().is_ok());
        let cfg = MetricConfig {
            rouge_beta: 0.0,
            ..MetricConfig::default()
        };
        assert!(cfg.validate().is_err());
        let cfg = MetricConfig {
            bleu_smoothing: Smoothing::Epsilon(0.0),
            ..MetricConfig::default()
        };
        assert!(cfg.validate().is_err());
        let cfg = MetricConfig {
            bleu_max_order: 0,
            ..MetricConfig::default()
        };
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn metric_names_round_trip() {
        for m in Metric::ALL {
            assert_eq!(m.name().parse::<Metric>().unwrap(), m);
        }
        assert!("bleu-5x".parse::<Metric>().is_err());
    }
}
