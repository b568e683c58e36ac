use super::TokenSeq;

/// Length of the longest common subsequence.
pub fn lcs_length(a: &TokenSeq, b: &TokenSeq) -> usize {
    let (a, b) = (a.tokens(), b.tokens());
    let mut prev = vec![0usize; b.len() + 1];
    let mut cur = vec![0usize; b.len() + 1];
    for x in a {
        for (j, y) in b.iter().enumerate() {
            cur[j + 1] = if x == y {
                prev[j] + 1
            } else {
                cur[j].max(prev[j + 1])
            };
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

/// Candidate positions covered by one longest common subsequence with
/// `reference`, in ascending order.
///
/// When several LCSs exist the lexicographically smallest position set is
/// returned: positions are taken left to right whenever the remaining suffixes
/// can still complete an LCS, each matched to the earliest usable reference
/// position.
pub fn lcs_positions(candidate: &TokenSeq, reference: &TokenSeq) -> Vec<usize> {
    let (c, r) = (candidate.tokens(), reference.tokens());
    let (n, m) = (c.len(), r.len());
    let width = m + 1;
    // suffix[i * width + j] = |LCS(c[i..], r[j..])|
    let mut suffix = vec![0u32; (n + 1) * width];
    for i in (0..n).rev() {
        for j in (0..m).rev() {
            suffix[i * width + j] = if c[i] == r[j] {
                suffix[(i + 1) * width + j + 1] + 1
            } else {
                suffix[(i + 1) * width + j].max(suffix[i * width + j + 1])
            };
        }
    }

    let mut positions = Vec::with_capacity(suffix[0] as usize);
    let mut j = 0;
    for i in 0..n {
        let remaining = suffix[i * width + j];
        if remaining == 0 {
            break;
        }
        let next = (j..m).find(|&k| c[i] == r[k] && suffix[(i + 1) * width + k + 1] + 1 == remaining);
        if let Some(k) = next {
            positions.push(i);
            j = k + 1;
        }
    }
    positions
}
