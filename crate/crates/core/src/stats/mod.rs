//! Correlation against human grades, inter-annotator agreement and score
//! normalisation.
//!
//! Randomised routines take the generator explicitly.

mod agreement;
mod correlation;
mod normalize;

pub use agreement::{cohen_weighted_kappa, human_human_baseline, AnnotationRecord, HumanBaseline, KappaWeights};
pub use correlation::{pearson, permutation_p_value, spearman, average_ranks, CorrelationMethod, CorrelationResult, PairedScores, MAX_SHUFFLES};
pub use normalize::{jitter, mean_and_std, normalize_quality, normalize_to_human, quality_from_grades, HumanScale};
