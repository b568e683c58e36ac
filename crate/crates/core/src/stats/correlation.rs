use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::error::{Error, Result};

/// Upper limit on shuffles for permutation p-values.
pub const MAX_SHUFFLES: usize = 10_000;

/// `(human, metric)` pairs with finite components.
#[derive(Debug, Clone, PartialEq)]
pub struct PairedScores {
    human: Vec<f64>,
    metric: Vec<f64>,
}

impl PairedScores {
    pub fn new(items: impl IntoIterator<Item = (f64, f64)>) -> Result<Self> {
        let (human, metric): (Vec<f64>, Vec<f64>) = items.into_iter().unzip();
        if let Some(i) = human.iter().zip(&metric).position(|(h, m)| !h.is_finite() || !m.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        Ok(Self { human, metric })
    }

    pub fn len(&self) -> usize {
        self.human.len()
    }

    pub fn is_empty(&self) -> bool {
        self.human.is_empty()
    }

    pub fn human(&self) -> &[f64] {
        &self.human
    }

    pub fn metric(&self) -> &[f64] {
        &self.metric
    }

    pub fn swapped(&self) -> Self {
        Self {
            human: self.metric.clone(),
            metric: self.human.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CorrelationResult {
    pub coefficient: f64,
    /// Two-sided, from the t approximation with `n - 2` degrees of freedom.
    pub p_value: f64,
    pub n: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorrelationMethod {
    Pearson,
    Spearman,
}

fn pearson_coefficient(x: &[f64], y: &[f64]) -> Result<f64> {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 {
        return Err(Error::ZeroVariance("human scores"));
    }
    if syy == 0.0 {
        return Err(Error::ZeroVariance("metric scores"));
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

fn t_test_p_value(r: f64, n: usize) -> f64 {
    let dof = (n - 2) as f64;
    if r.abs() >= 1.0 {
        return 0.0;
    }
    let t = r * (dof / (1.0 - r * r)).sqrt();
    let dist = StudentsT::new(0.0, 1.0, dof).expect("degrees of freedom are positive");
    (2.0 * dist.sf(t.abs())).min(1.0)
}

fn correlate(x: &[f64], y: &[f64]) -> Result<CorrelationResult> {
    let n = x.len();
    if n < 3 {
        return Err(Error::TooFewPairs(n));
    }
    let coefficient = pearson_coefficient(x, y)?;
    Ok(CorrelationResult {
        coefficient,
        p_value: t_test_p_value(coefficient, n),
        n,
    })
}

pub fn pearson(pairs: &PairedScores) -> Result<CorrelationResult> {
    correlate(&pairs.human, &pairs.metric)
}

/// 1-based ranks; tied values share the mean of the ranks they span.
pub fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && values[order[end]] == values[order[start]] {
            end += 1;
        }
        // positions start..end hold ranks start+1 ..= end
        let rank = (start + end + 1) as f64 / 2.0;
        for &idx in &order[start..end] {
            ranks[idx] = rank;
        }
        start = end;
    }
    ranks
}

pub fn spearman(pairs: &PairedScores) -> Result<CorrelationResult> {
    if pairs.len() < 3 {
        return Err(Error::TooFewPairs(pairs.len()));
    }
    correlate(&average_ranks(&pairs.human), &average_ranks(&pairs.metric))
}

/// Two-sided permutation p-value: the share of metric-column shuffles whose
/// absolute coefficient reaches the observed one, with the usual +1
/// correction. At most [`MAX_SHUFFLES`] shuffles are drawn.
pub fn permutation_p_value(
    pairs: &PairedScores,
    method: CorrelationMethod,
    shuffles: usize,
    rng: &mut impl Rng,
) -> Result<f64> {
    let shuffles = shuffles.clamp(1, MAX_SHUFFLES);
    let (x, mut y) = match method {
        CorrelationMethod::Pearson => (pairs.human.clone(), pairs.metric.clone()),
        CorrelationMethod::Spearman => (average_ranks(&pairs.human), average_ranks(&pairs.metric)),
    };
    let observed = correlate(&x, &y)?.coefficient.abs();
    let mut hits = 0usize;
    for _ in 0..shuffles {
        y.shuffle(rng);
        if pearson_coefficient(&x, &y)?.abs() >= observed - 1e-12 {
            hits += 1;
        }
    }
    Ok((hits + 1) as f64 / (shuffles + 1) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn pairs(items: &[(f64, f64)]) -> PairedScores {
        PairedScores::new(items.iter().copied()).unwrap()
    }

    #[test]
    fn pearson_exact_linear() {
        let r = pearson(&pairs(&[(1.0, 2.0), (2.0, 4.0), (3.0, 6.0)])).unwrap();
        assert!((r.coefficient - 1.0).abs() < 1e-12);
        assert!(r.p_value < 1e-6);
        assert_eq!(r.n, 3);
        let r = pearson(&pairs(&[(1.0, 3.0), (2.0, 2.0), (3.0, 1.0)])).unwrap();
        assert!((r.coefficient + 1.0).abs() < 1e-12);
    }

    #[test]
    fn pearson_hand_computed() {
        // sxy = 4, sxx = syy = 5
        let r = pearson(&pairs(&[(1.0, 1.0), (2.0, 3.0), (3.0, 2.0), (4.0, 4.0)])).unwrap();
        assert!((r.coefficient - 0.8).abs() < 1e-12);
        // t = 0.8 * sqrt(2 / 0.36) = 1.8856; two-sided p with 2 dof
        let t: f64 = 0.8 * (2.0f64 / 0.36).sqrt();
        let expected = 1.0 - t / (2.0 + t * t).sqrt();
        assert!((r.p_value - expected).abs() < 1e-9, "{} vs {expected}", r.p_value);
    }

    #[test]
    fn spearman_examples() {
        let r = spearman(&pairs(&[(1.0, 10.0), (2.0, 100.0), (3.0, 101.0)])).unwrap();
        assert!((r.coefficient - 1.0).abs() < 1e-12);
        let r = spearman(&pairs(&[(1.0, 3.0), (2.0, 2.0), (3.0, 1.0)])).unwrap();
        assert!((r.coefficient + 1.0).abs() < 1e-12);
    }

    #[test]
    fn spearman_with_ties() {
        // ranks (1, 2.5, 2.5, 4) vs (1, 2, 3, 4): sxy = 4.5, sxx = 4.5, syy = 5
        let r = spearman(&pairs(&[(1.0, 1.0), (2.0, 2.0), (2.0, 3.0), (4.0, 4.0)])).unwrap();
        assert!((r.coefficient - (4.5f64 / 5.0).sqrt()).abs() < 1e-12);
        assert!((r.coefficient - 0.9486832980505138).abs() < 1e-12);
    }

    #[test]
    fn ranks_average_ties() {
        assert_eq!(average_ranks(&[1.0, 2.0, 2.0, 4.0]), vec![1.0, 2.5, 2.5, 4.0]);
        assert_eq!(average_ranks(&[3.0, 3.0, 3.0]), vec![2.0, 2.0, 2.0]);
    }

    #[test]
    fn errors() {
        assert!(matches!(pearson(&pairs(&[(1.0, 1.0), (2.0, 2.0)])), Err(Error::TooFewPairs(2))));
        assert!(matches!(
            pearson(&pairs(&[(1.0, 1.0), (1.0, 2.0), (1.0, 3.0)])),
            Err(Error::ZeroVariance(_))
        ));
        assert!(matches!(
            spearman(&pairs(&[(1.0, 1.0), (2.0, 1.0), (3.0, 1.0)])),
            Err(Error::ZeroVariance(_))
        ));
        assert!(matches!(PairedScores::new([(1.0, f64::NAN)]), Err(Error::NonFinite(0))));
    }

    #[test]
    fn permutation_is_seeded() {
        let p = pairs(&[(1.0, 2.0), (2.0, 1.0), (3.0, 4.0), (4.0, 3.0), (5.0, 6.0), (6.0, 5.0)]);
        let a = permutation_p_value(&p, CorrelationMethod::Spearman, 500, &mut ChaCha8Rng::seed_from_u64(7)).unwrap();
        let b = permutation_p_value(&p, CorrelationMethod::Spearman, 500, &mut ChaCha8Rng::seed_from_u64(7)).unwrap();
        assert_eq!(a, b);
        assert!(a > 0.0 && a < 0.2);
    }

    fn sample() -> impl Strategy<Value = Vec<(f64, f64)>> {
        prop::collection::vec((-100.0f64..100.0, -100.0f64..100.0), 3..40)
    }

    proptest! {
        #[test]
        fn bounded_and_symmetric(items in sample()) {
            let p = pairs(&items);
            if let (Ok(a), Ok(b)) = (pearson(&p), pearson(&p.swapped())) {
                prop_assert!(a.coefficient.abs() <= 1.0);
                prop_assert!((0.0..=1.0).contains(&a.p_value));
                prop_assert!((a.coefficient - b.coefficient).abs() < 1e-12);
            }
            if let (Ok(a), Ok(b)) = (spearman(&p), spearman(&p.swapped())) {
                prop_assert!(a.coefficient.abs() <= 1.0);
                prop_assert!((a.coefficient - b.coefficient).abs() < 1e-12);
            }
        }

        #[test]
        fn pearson_affine_invariant(items in sample(), scale in 0.1f64..10.0, shift in -50.0f64..50.0) {
            let p = pairs(&items);
            let q = pairs(&items.iter().map(|&(h, m)| (h, scale * m + shift)).collect::<Vec<_>>());
            if let (Ok(a), Ok(b)) = (pearson(&p), pearson(&q)) {
                prop_assert!((a.coefficient - b.coefficient).abs() < 1e-9);
            }
        }

        #[test]
        fn spearman_monotone_invariant(items in sample()) {
            let p = pairs(&items);
            let q = pairs(&items.iter().map(|&(h, m)| (h.powi(3), (m / 50.0).exp())).collect::<Vec<_>>());
            if let (Ok(a), Ok(b)) = (spearman(&p), spearman(&q)) {
                prop_assert!((a.coefficient - b.coefficient).abs() < 1e-12);
            }
        }
    }
}
