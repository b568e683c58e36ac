//! Straightforward reference implementations used as test oracles. None of
//! this calls into the library's metric code paths.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

pub type Toks = Vec<String>;

pub fn toks(s: &str) -> Toks {
    s.split_whitespace().map(str::to_owned).collect()
}

fn grams(seq: &[String], n: usize) -> BTreeMap<Vec<String>, usize> {
    let mut out = BTreeMap::new();
    if seq.len() >= n {
        for i in 0..=seq.len() - n {
            *out.entry(seq[i..i + n].to_vec()).or_insert(0) += 1;
        }
    }
    out
}

/// Unweighted BLEU with integer clipping and closest-length brevity penalty.
pub fn bleu(c: &[String], refs: &[Toks], max_n: usize) -> f64 {
    if c.is_empty() {
        return 0.0;
    }
    let mut log_sum = 0.0;
    for n in 1..=max_n {
        let cg = grams(c, n);
        let total: usize = cg.values().sum();
        let mut clipped = 0usize;
        for (g, &cnt) in &cg {
            let max_ref = refs.iter().map(|r| grams(r, n).get(g).copied().unwrap_or(0)).max().unwrap_or(0);
            clipped += cnt.min(max_ref);
        }
        if clipped == 0 {
            return 0.0;
        }
        log_sum += (clipped as f64 / total as f64).ln() / max_n as f64;
    }
    let mut best = refs[0].len();
    for r in refs {
        let d = r.len().abs_diff(c.len());
        let bd = best.abs_diff(c.len());
        if d < bd || (d == bd && r.len() < best) {
            best = r.len();
        }
    }
    let bp = if c.len() < best {
        (1.0 - best as f64 / c.len() as f64).exp()
    } else {
        1.0
    };
    bp * log_sum.exp()
}

/// Every one-to-one exact alignment; returns (max matches, min chunks).
pub fn brute_alignment(c: &[String], r: &[String]) -> (usize, usize) {
    fn rec(i: usize, c: &[String], r: &[String], used: &mut [bool], map: &mut Vec<Option<usize>>, best: &mut (usize, usize)) {
        if i == c.len() {
            let matches = map.iter().flatten().count();
            let chunks = (0..c.len())
                .filter(|&k| match map[k] {
                    Some(j) => !(k > 0 && j > 0 && map[k - 1] == Some(j - 1)),
                    None => false,
                })
                .count();
            if matches > best.0 || (matches == best.0 && chunks < best.1) {
                *best = (matches, chunks);
            }
            return;
        }
        map.push(None);
        rec(i + 1, c, r, used, map, best);
        map.pop();
        for j in 0..r.len() {
            if !used[j] && r[j] == c[i] {
                used[j] = true;
                map.push(Some(j));
                rec(i + 1, c, r, used, map, best);
                map.pop();
                used[j] = false;
            }
        }
    }
    let mut best = (0, 0);
    rec(0, c, r, &mut vec![false; r.len()], &mut Vec::new(), &mut best);
    best
}

/// Unweighted METEOR: best reference by `(1 - 0.5 (ch/m)^3) * 10PR/(R+9P)`.
pub fn meteor(c: &[String], refs: &[Toks]) -> f64 {
    refs.iter()
        .map(|r| {
            let (m, ch) = brute_alignment(c, r);
            if m == 0 {
                return 0.0;
            }
            let p = m as f64 / c.len() as f64;
            let rec = m as f64 / r.len() as f64;
            let f = 10.0 * p * rec / (rec + 9.0 * p);
            let pen = 0.5 * (ch as f64 / m as f64).powi(3);
            (1.0 - pen) * f
        })
        .fold(0.0, f64::max)
}

fn is_subsequence(needle: &[&String], hay: &[String]) -> bool {
    let mut it = hay.iter();
    needle.iter().all(|x| it.any(|y| y == *x))
}

/// Lexicographically smallest candidate position set among all LCSs, by
/// enumerating subsets (candidate length must be small).
pub fn brute_lcs_positions(c: &[String], r: &[String]) -> Vec<usize> {
    assert!(c.len() <= 16);
    let mut best: Option<Vec<usize>> = None;
    for mask in 0u32..(1 << c.len()) {
        let picked: Vec<usize> = (0..c.len()).filter(|i| mask & (1 << i) != 0).collect();
        let words: Vec<&String> = picked.iter().map(|&i| &c[i]).collect();
        if !is_subsequence(&words, r) {
            continue;
        }
        best = match best {
            None => Some(picked),
            Some(b) if picked.len() > b.len() || (picked.len() == b.len() && picked < b) => Some(picked),
            keep => keep,
        };
    }
    best.unwrap_or_default()
}

pub fn brute_lcs_length(c: &[String], r: &[String]) -> usize {
    brute_lcs_positions(c, r).len()
}

/// Unweighted union-LCS ROUGE-L with recall over the mean reference length.
pub fn rouge_l(c: &[String], refs: &[Toks], beta: f64) -> f64 {
    if c.is_empty() {
        return 0.0;
    }
    let union: BTreeSet<usize> = refs.iter().flat_map(|r| brute_lcs_positions(c, r)).collect();
    if union.is_empty() {
        return 0.0;
    }
    let u = union.len() as f64;
    let mean_len = refs.iter().map(|r| r.len() as f64).sum::<f64>() / refs.len() as f64;
    let p = u / c.len() as f64;
    let rec = u / mean_len;
    (1.0 + beta * beta) * p * rec / (rec + beta * beta * p)
}

/// Document frequencies where each document is one reference set.
pub fn doc_freq(corpus: &[Vec<Toks>], n: usize) -> (usize, BTreeMap<Vec<String>, usize>) {
    let mut df = BTreeMap::new();
    for doc in corpus {
        let mut seen = BTreeSet::new();
        for r in doc {
            seen.extend(grams(r, n).into_keys());
        }
        for g in seen {
            *df.entry(g).or_insert(0) += 1;
        }
    }
    (corpus.len(), df)
}

fn tfidf(seq: &[String], n: usize, d: usize, df: &BTreeMap<Vec<String>, usize>) -> BTreeMap<Vec<String>, f64> {
    grams(seq, n)
        .into_iter()
        .map(|(g, tf)| {
            let f = df.get(&g).copied().unwrap_or(1);
            let w = tf as f64 * (d as f64 / f as f64).ln();
            (g, w)
        })
        .collect()
}

pub fn cosine(a: &BTreeMap<Vec<String>, f64>, b: &BTreeMap<Vec<String>, f64>) -> f64 {
    let na = a.values().map(|x| x * x).sum::<f64>().sqrt();
    let nb = b.values().map(|x| x * x).sum::<f64>().sqrt();
    if na == 0.0 || nb == 0.0 {
        return 0.0;
    }
    let dot: f64 = a.iter().map(|(g, w)| w * b.get(g).copied().unwrap_or(0.0)).sum();
    dot / (na * nb)
}

/// Unweighted CIDEr (no x10), df computed over `corpus`.
pub fn cider(c: &[String], refs: &[Toks], corpus: &[Vec<Toks>], max_n: usize) -> f64 {
    let mut total = 0.0;
    for n in 1..=max_n {
        let (d, df) = doc_freq(corpus, n);
        let cv = tfidf(c, n, d, &df);
        let s: f64 = refs.iter().map(|r| cosine(&cv, &tfidf(r, n, d, &df))).sum();
        total += s / max_n as f64;
    }
    total / refs.len() as f64
}

/// Unigram TF-IDF cosine between every document and a query; the documents
/// define the df table.
pub fn cosine_scan(docs: &[Toks], query: &[String]) -> Vec<f64> {
    let corpus: Vec<Vec<Toks>> = docs.iter().map(|d| vec![d.clone()]).collect();
    let (d, df) = doc_freq(&corpus, 1);
    let q = tfidf(query, 1, d, &df);
    docs.iter().map(|doc| cosine(&q, &tfidf(doc, 1, d, &df))).collect()
}

/// Pearson's r from the textbook definition.
pub fn pearson_r(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let cov: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let vx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let vy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    cov / (vx * vy).sqrt()
}

/// Rank of each value: 1 + number smaller + (number equal - 1) / 2.
pub fn definitional_ranks(v: &[f64]) -> Vec<f64> {
    v.iter()
        .map(|x| {
            let less = v.iter().filter(|y| *y < x).count() as f64;
            let equal = v.iter().filter(|y| *y == x).count() as f64;
            1.0 + less + (equal - 1.0) / 2.0
        })
        .collect()
}
