use rand::Rng;
use serde::{Deserialize, Serialize};

use super::correlation::{pearson, spearman, CorrelationResult, PairedScores};
use crate::error::{Error, Result};

const GRADES: usize = 5;

/// Two annotators' grades (1..=5) for one item.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnnotationRecord {
    pub item_id: String,
    grades: [u8; 2],
}

impl AnnotationRecord {
    pub fn new(item_id: impl Into<String>, first: u8, second: u8) -> Result<Self> {
        for g in [first, second] {
            if !(1..=GRADES as u8).contains(&g) {
                return Err(Error::GradeOutOfRange(g.into()));
            }
        }
        Ok(Self {
            item_id: item_id.into(),
            grades: [first, second],
        })
    }

    pub fn grades(&self) -> [u8; 2] {
        self.grades
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KappaWeights {
    /// `|i - j|`
    #[default]
    Linear,
    /// `(i - j)^2`
    Quadratic,
}

impl KappaWeights {
    fn disagreement(self, i: usize, j: usize) -> f64 {
        let d = i.abs_diff(j) as f64;
        match self {
            KappaWeights::Linear => d,
            KappaWeights::Quadratic => d * d,
        }
    }
}

/// Weighted kappa over the 5x5 grade table:
/// `1 - sum(w * observed) / sum(w * expected)`.
///
/// When the marginals leave no expected disagreement (both annotators always
/// give the same single grade) kappa is 1.
pub fn cohen_weighted_kappa(records: &[AnnotationRecord], weights: KappaWeights) -> Result<f64> {
    if records.len() < 2 {
        return Err(Error::TooFewRecords(records.len()));
    }
    let n = records.len() as f64;
    let mut observed = [[0.0f64; GRADES]; GRADES];
    let mut first = [0.0f64; GRADES];
    let mut second = [0.0f64; GRADES];
    for r in records {
        let (a, b) = (r.grades[0] as usize - 1, r.grades[1] as usize - 1);
        observed[a][b] += 1.0 / n;
        first[a] += 1.0 / n;
        second[b] += 1.0 / n;
    }
    let mut obs_dis = 0.0;
    let mut exp_dis = 0.0;
    for i in 0..GRADES {
        for j in 0..GRADES {
            let w = weights.disagreement(i, j);
            obs_dis += w * observed[i][j];
            exp_dis += w * first[i] * second[j];
        }
    }
    if exp_dis == 0.0 {
        return Ok(1.0);
    }
    Ok(1.0 - obs_dis / exp_dis)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HumanBaseline {
    pub spearman: CorrelationResult,
    pub pearson: CorrelationResult,
}

/// Splits each record's two grades at random between groups A and B and
/// correlates the groups.
pub fn human_human_baseline(records: &[AnnotationRecord], rng: &mut impl Rng) -> Result<HumanBaseline> {
    let split = records.iter().map(|r| {
        let [a, b] = r.grades.map(f64::from);
        if rng.random_bool(0.5) {
            (b, a)
        } else {
            (a, b)
        }
    });
    let pairs = PairedScores::new(split.collect::<Vec<_>>())?;
    Ok(HumanBaseline {
        spearman: spearman(&pairs)?,
        pearson: pearson(&pairs)?,
    })
}
