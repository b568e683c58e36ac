use rustc_hash::FxHashMap as HashMap;

use super::{weighted_f, Breakdown, MetricConfig, MetricScore, ReferenceSet};
use crate::error::{Error, Result};
use crate::textcore::TokenSeq;

/// Upper bound on memoised search states per alignment before falling back to
/// the greedy alignment.
const STATE_BUDGET: usize = 1 << 20;

/// Size of a one-to-one exact-match alignment and its chunk count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Alignment {
    pub matches: usize,
    pub chunks: usize,
    /// False when the search budget ran out and the chunk count comes from
    /// the greedy alignment (still maximal in matches).
    pub exact: bool,
}

/// Aligns candidate tokens to reference tokens one-to-one by exact match.
///
/// The number of matches is maximal; among maximal alignments the number of
/// chunks (runs contiguous in both sequences) is minimal.
pub fn align(candidate: &TokenSeq, reference: &TokenSeq) -> Alignment {
    let problem = AlignProblem::new(candidate.tokens(), reference.tokens());
    if problem.matches == 0 {
        return Alignment {
            matches: 0,
            chunks: 0,
            exact: true,
        };
    }
    let mut search = Search {
        problem: &problem,
        memo: HashMap::default(),
        exhausted: false,
    };
    let used = vec![0u64; problem.reference_len.div_ceil(64)];
    let chunks = search.best(0, None, used);
    if search.exhausted {
        return Alignment {
            matches: problem.matches,
            chunks: problem.greedy_chunks(),
            exact: false,
        };
    }
    Alignment {
        matches: problem.matches,
        chunks: chunks as usize,
        exact: true,
    }
}

struct AlignProblem<'a> {
    candidate: &'a [String],
    reference: &'a [String],
    reference_len: usize,
    /// Reference positions holding the same token as each candidate position.
    options: Vec<Vec<usize>>,
    /// Candidate occurrences of the same token after each position.
    later_same: Vec<usize>,
    /// Reference positions still reachable from each candidate position on.
    live: Vec<Vec<u64>>,
    matches: usize,
}

impl<'a> AlignProblem<'a> {
    fn new(candidate: &'a [String], reference: &'a [String]) -> Self {
        let mut ref_positions: HashMap<&str, Vec<usize>> = HashMap::default();
        for (j, tok) in reference.iter().enumerate() {
            ref_positions.entry(tok.as_str()).or_default().push(j);
        }
        let options: Vec<Vec<usize>> = candidate
            .iter()
            .map(|t| ref_positions.get(t.as_str()).cloned().unwrap_or_default())
            .collect();

        let mut seen: HashMap<&str, usize> = HashMap::default();
        let mut later_same = vec![0; candidate.len()];
        for (i, tok) in candidate.iter().enumerate().rev() {
            let c = seen.entry(tok.as_str()).or_default();
            later_same[i] = *c;
            *c += 1;
        }
        let words = reference.len().div_ceil(64);
        let mut live = vec![vec![0u64; words]; candidate.len() + 1];
        for i in (0..candidate.len()).rev() {
            let mut mask = live[i + 1].clone();
            for &j in &options[i] {
                mask[j / 64] |= 1 << (j % 64);
            }
            live[i] = mask;
        }
        let matches = seen
            .iter()
            .map(|(tok, &cc)| cc.min(ref_positions.get(tok).map_or(0, Vec::len)))
            .sum();
        Self {
            candidate,
            reference,
            reference_len: reference.len(),
            options,
            later_same,
            live,
            matches,
        }
    }

    /// Keeps the previous reference position only if it can extend a chunk
    /// into candidate position `next`.
    fn link_state(&self, next: usize, j: usize) -> Option<usize> {
        (next < self.candidate.len() && j + 1 < self.reference_len && self.reference[j + 1] == self.candidate[next])
            .then_some(j)
    }

    /// Left-to-right alignment that extends the current chunk when it can
    /// and otherwise takes the earliest free reference position.
    fn greedy_chunks(&self) -> usize {
        let mut used = vec![false; self.reference_len];
        let mut prev: Option<usize> = None;
        let mut chunks = 0;
        for i in 0..self.candidate.len() {
            let free: Vec<usize> = self.options[i].iter().copied().filter(|&j| !used[j]).collect();
            let linked = prev.map(|p| p + 1).filter(|j| free.contains(j));
            let must_match = self.later_same[i] < free.len();
            let pick = match linked {
                Some(j) => Some(j),
                None if must_match => free.first().copied(),
                None => None,
            };
            match pick {
                Some(j) => {
                    if linked.is_none() {
                        chunks += 1;
                    }
                    used[j] = true;
                    prev = Some(j);
                }
                None => prev = None,
            }
        }
        chunks
    }
}

type StateKey = (usize, Option<usize>, Vec<u64>);

struct Search<'p, 'a> {
    problem: &'p AlignProblem<'a>,
    memo: HashMap<StateKey, u32>,
    exhausted: bool,
}

impl Search<'_, '_> {
    /// Minimum chunks over candidate positions `i..`, given the reference
    /// position aligned to `i - 1` (if it can link) and the used set.
    fn best(&mut self, i: usize, prev: Option<usize>, used: Vec<u64>) -> u32 {
        let p = self.problem;
        if i == p.candidate.len() || self.exhausted {
            return 0;
        }
        // Positions no later candidate can use do not affect the rest.
        let used: Vec<u64> = used.iter().zip(&p.live[i]).map(|(u, l)| u & l).collect();
        let key = (i, prev, used);
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        if self.memo.len() >= STATE_BUDGET {
            self.exhausted = true;
            return 0;
        }
        let (_, _, used) = &key;
        let is_used = |j: usize| used[j / 64] & (1 << (j % 64)) != 0;
        let free: Vec<usize> = p.options[i].iter().copied().filter(|&j| !is_used(j)).collect();

        let mut result = u32::MAX;
        for &j in &free {
            let mut next_used = used.clone();
            next_used[j / 64] |= 1 << (j % 64);
            let start = u32::from(prev.map_or(true, |q| q + 1 != j));
            let rest = self.best(i + 1, p.link_state(i + 1, j), next_used);
            result = result.min(start + rest);
        }
        // Leaving this position unaligned must not cost a match.
        if p.later_same[i] >= free.len() {
            let rest = self.best(i + 1, None, used.clone());
            result = result.min(rest);
        }
        self.memo.insert(key, result);
        result
    }
}

/// Statistics of the maximising reference, summable across sentences.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct MeteorStats {
    /// Matches scaled by the quality of the reference they were counted on.
    pub weighted_matches: f64,
    pub matches: usize,
    pub chunks: usize,
    pub candidate_len: usize,
    pub reference_len: usize,
}

impl MeteorStats {
    pub fn merge(&mut self, other: &MeteorStats) {
        self.weighted_matches += other.weighted_matches;
        self.matches += other.matches;
        self.chunks += other.chunks;
        self.candidate_len += other.candidate_len;
        self.reference_len += other.reference_len;
    }

    /// Applies the F-mean and fragmentation penalty once to the aggregate.
    pub fn score(&self, cfg: &MetricConfig) -> MetricScore {
        let (precision, recall) = if self.candidate_len == 0 || self.reference_len == 0 {
            (0.0, 0.0)
        } else {
            (
                self.weighted_matches / self.candidate_len as f64,
                self.weighted_matches / self.reference_len as f64,
            )
        };
        let fmean = weighted_f(precision, recall, cfg.meteor_recall_weight);
        let penalty = fragmentation_penalty(self.matches, self.chunks, cfg);
        MetricScore {
            value: (1.0 - penalty) * fmean,
            breakdown: Breakdown::Meteor {
                reference_index: None,
                matches: self.matches,
                chunks: self.chunks,
                precision,
                recall,
                fmean,
                penalty,
                per_reference: Vec::new(),
            },
        }
    }
}

fn fragmentation_penalty(matches: usize, chunks: usize, cfg: &MetricConfig) -> f64 {
    if matches == 0 {
        return 0.0;
    }
    cfg.meteor_penalty_gamma * (chunks as f64 / matches as f64).powf(cfg.meteor_penalty_power)
}

struct PerReference {
    alignment: Alignment,
    precision: f64,
    recall: f64,
    fmean: f64,
    penalty: f64,
    weighted: f64,
}

fn score_against(candidate: &TokenSeq, reference: &TokenSeq, quality: f64, cfg: &MetricConfig) -> PerReference {
    let alignment = align(candidate, reference);
    let m = alignment.matches as f64;
    let precision = if candidate.is_empty() { 0.0 } else { m / candidate.len() as f64 };
    let recall = m / reference.len() as f64;
    let fmean = weighted_f(precision, recall, cfg.meteor_recall_weight);
    let penalty = fragmentation_penalty(alignment.matches, alignment.chunks, cfg);
    PerReference {
        alignment,
        precision,
        recall,
        fmean,
        penalty,
        weighted: quality * (1.0 - penalty) * fmean,
    }
}

fn best_reference(candidate: &TokenSeq, refs: &ReferenceSet, cfg: &MetricConfig) -> Result<(usize, PerReference, Vec<f64>)> {
    if refs.is_empty() {
        return Err(Error::EmptyReferenceSet);
    }
    let mut best: Option<(usize, PerReference)> = None;
    let mut per_reference = Vec::with_capacity(refs.len());
    for (j, r) in refs.iter().enumerate() {
        let s = score_against(candidate, r.tokens(), r.quality(), cfg);
        per_reference.push(s.weighted);
        if best.as_ref().map_or(true, |(_, b)| s.weighted > b.weighted) {
            best = Some((j, s));
        }
    }
    let (j, b) = best.expect("reference set is nonempty");
    Ok((j, b, per_reference))
}

/// Per-sentence statistics for corpus aggregation, taken from the reference
/// that maximises the sentence score.
pub fn meteor_stats(candidate: &TokenSeq, refs: &ReferenceSet, cfg: &MetricConfig) -> Result<MeteorStats> {
    let (j, best, _) = best_reference(candidate, refs, cfg)?;
    let quality = refs.iter().nth(j).map_or(0.0, |r| r.quality());
    Ok(MeteorStats {
        weighted_matches: quality * best.alignment.matches as f64,
        matches: best.alignment.matches,
        chunks: best.alignment.chunks,
        candidate_len: candidate.len(),
        reference_len: refs.iter().nth(j).map_or(0, |r| r.tokens().len()),
    })
}

/// `max_j s_j (1 - Penalty_j) F_j`, with the fragmentation penalty taken per
/// reference.
pub fn weighted_meteor(candidate: &TokenSeq, refs: &ReferenceSet, cfg: &MetricConfig) -> Result<MetricScore> {
    cfg.validate()?;
    let (j, best, per_reference) = best_reference(candidate, refs, cfg)?;
    Ok(MetricScore {
        value: best.weighted,
        breakdown: Breakdown::Meteor {
            reference_index: Some(j),
            matches: best.alignment.matches,
            chunks: best.alignment.chunks,
            precision: best.precision,
            recall: best.recall,
            fmean: best.fmean,
            penalty: best.penalty,
            per_reference,
        },
    })
}
