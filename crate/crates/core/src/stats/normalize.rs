use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::Serialize;

use crate::error::{Error, Result};

/// Lowest and highest human grade.
pub const GRADE_RANGE: (f64, f64) = (1.0, 5.0);

/// Grade 1..=5 mapped linearly onto `[0, 1]` as `(g - 1) / 4`.
pub fn normalize_quality(grade: i64) -> Result<f64> {
    if !(1..=5).contains(&grade) {
        return Err(Error::GradeOutOfRange(grade));
    }
    Ok((grade - 1) as f64 / 4.0)
}

/// Quality of a reference graded by several annotators: the mean of the
/// per-grade qualities.
pub fn quality_from_grades(grades: &[u8]) -> Result<f64> {
    if grades.is_empty() {
        return Err(Error::InvalidConfig("no grades to derive quality from".into()));
    }
    let mut sum = 0.0;
    for &g in grades {
        sum += normalize_quality(g.into())?;
    }
    Ok(sum / grades.len() as f64)
}

/// Population mean and standard deviation.
pub fn mean_and_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    (mean, var.sqrt())
}

/// Affine map taking metric scores to the human mean and standard deviation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HumanScale {
    pub metric_mean: f64,
    pub metric_std: f64,
    pub human_mean: f64,
    pub human_std: f64,
}

impl HumanScale {
    pub fn fit(metric_scores: &[f64], human_scores: &[f64]) -> Result<Self> {
        if human_scores.is_empty() || metric_scores.is_empty() {
            return Err(Error::TooFewPairs(human_scores.len().min(metric_scores.len())));
        }
        let (human_mean, human_std) = mean_and_std(human_scores);
        let (metric_mean, metric_std) = mean_and_std(metric_scores);
        if human_std == 0.0 || !human_std.is_finite() {
            return Err(Error::ZeroVariance("human scores"));
        }
        if metric_std == 0.0 || !metric_std.is_finite() {
            return Err(Error::ZeroVariance("metric scores"));
        }
        Ok(Self {
            metric_mean,
            metric_std,
            human_mean,
            human_std,
        })
    }

    /// Unclipped transform.
    pub fn apply(&self, score: f64) -> f64 {
        self.human_mean + (score - self.metric_mean) / self.metric_std * self.human_std
    }
}

/// Rescales metric scores to the human mean and variance, then clips to the
/// grade range.
pub fn normalize_to_human(metric_scores: &[f64], human_scores: &[f64]) -> Result<Vec<f64>> {
    let scale = HumanScale::fit(metric_scores, human_scores)?;
    Ok(metric_scores
        .iter()
        .map(|&s| scale.apply(s).clamp(GRADE_RANGE.0, GRADE_RANGE.1))
        .collect())
}

/// Adds i.i.d. `N(0, sigma^2)` noise, e.g. to spread integer grades in a
/// scatter plot.
pub fn jitter(scores: &[f64], sigma: f64, rng: &mut impl Rng) -> Result<Vec<f64>> {
    if !(sigma >= 0.0) || !sigma.is_finite() {
        return Err(Error::NegativeSigma(sigma));
    }
    if sigma == 0.0 {
        return Ok(scores.to_vec());
    }
    let noise = Normal::new(0.0, sigma).map_err(|e| Error::InvalidConfig(e.to_string()))?;
    Ok(scores.iter().map(|s| s + noise.sample(rng)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn quality_map() {
        assert_eq!(normalize_quality(1).unwrap(), 0.0);
        assert_eq!(normalize_quality(3).unwrap(), 0.5);
        assert_eq!(normalize_quality(5).unwrap(), 1.0);
        assert!(normalize_quality(0).is_err());
        assert!(normalize_quality(6).is_err());
        assert_eq!(quality_from_grades(&[5, 5]).unwrap(), 1.0);
        assert_eq!(quality_from_grades(&[4, 5]).unwrap(), 0.875);
    }

    #[test]
    fn identity_when_moments_match() {
        let human = [2.0, 3.0, 4.0];
        assert_eq!(normalize_to_human(&human, &human).unwrap(), human.to_vec());
    }

    #[test]
    fn two_point_affine() {
        // human mean 3, population std 1
        let out = normalize_to_human(&[0.0, 1.0], &[2.0, 4.0]).unwrap();
        assert_eq!(out, vec![2.0, 4.0]);
    }

    #[test]
    fn clips_to_grade_range() {
        // metric z-score of the outlier is 2; human std is sqrt(3.2), so 3 + 2 * 1.789 = 6.58
        let metric = [0.0, 0.0, 0.0, 0.0, 1.0];
        let human = [1.0, 5.0, 1.0, 5.0, 3.0];
        let out = normalize_to_human(&metric, &human).unwrap();
        assert_eq!(out[4], 5.0);
        let scale = HumanScale::fit(&metric, &human).unwrap();
        assert!((scale.apply(1.0) - (3.0 + 2.0 * 3.2f64.sqrt())).abs() < 1e-12);
    }

    #[test]
    fn zero_variance_rejected() {
        assert!(normalize_to_human(&[1.0, 1.0], &[2.0, 4.0]).is_err());
        assert!(normalize_to_human(&[1.0, 2.0], &[3.0, 3.0]).is_err());
    }

    #[test]
    fn jitter_contract() {
        let scores = [1.0, 2.0, 5.0];
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(jitter(&scores, 0.0, &mut rng).unwrap(), scores.to_vec());
        assert!(jitter(&scores, -0.1, &mut rng).is_err());
        let a = jitter(&scores, 0.05, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        let b = jitter(&scores, 0.05, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, scores.to_vec());
    }

    #[test]
    fn jitter_mean_near_zero() {
        let zeros = vec![0.0; 100_000];
        let noisy = jitter(&zeros, 0.05, &mut ChaCha8Rng::seed_from_u64(2024)).unwrap();
        let mean = noisy.iter().sum::<f64>() / noisy.len() as f64;
        assert!(mean.abs() < 3.0 * 0.05 / (1e5f64).sqrt());
    }

    proptest! {
        #[test]
        fn restores_human_moments(
            metric in prop::collection::vec(0.0f64..1.0, 2..50),
            human in prop::collection::vec(1.0f64..5.0, 2..50),
        ) {
            if let Ok(scale) = HumanScale::fit(&metric, &human) {
                let mapped: Vec<f64> = metric.iter().map(|&m| scale.apply(m)).collect();
                let (m, s) = mean_and_std(&mapped);
                let (hm, hs) = mean_and_std(&human);
                prop_assert!((m - hm).abs() < 1e-9);
                prop_assert!((s * s - hs * hs).abs() < 1e-9);
            }
        }
    }
}
