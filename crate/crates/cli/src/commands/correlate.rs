use std::collections::HashMap;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use qwm::metrics::Metric;
use qwm::stats::{
    human_human_baseline, jitter, normalize_to_human, pearson, permutation_p_value, spearman, AnnotationRecord,
    CorrelationMethod, CorrelationResult, HumanScale, PairedScores, MAX_SHUFFLES,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{Map, Value};

use crate::input::{json_lines, path_value, resolve_seed, str_field};
use crate::report::{num, Report, Section};

#[derive(clap::Args, Debug)]
pub struct Args {
    /// JSONL of {"article_id", "candidate_id", "score"} or {..., "grades": [a, b]}.
    #[arg(long)]
    pub human: PathBuf,

    /// JSONL report written by `qwm score`.
    #[arg(long)]
    pub metrics: PathBuf,

    /// Add metric scores rescaled to the human mean and spread.
    #[arg(long)]
    pub normalize: bool,

    /// Add jittered scatter columns with this noise level.
    #[arg(long, value_name = "SIGMA")]
    pub jitter_sigma: Option<f64>,

    /// Replace the t-approximation p-values with a permutation test using
    /// this many shuffles (at most 10000).
    #[arg(long, value_name = "N")]
    pub permutations: Option<usize>,

    #[arg(long)]
    pub seed: Option<u64>,
}

type Key = (String, String);

struct Human {
    score: f64,
    grades: Option<[u8; 2]>,
}

fn candidate_id(map: &Map<String, Value>, at: &str) -> Result<String> {
    match map.get("candidate_id") {
        Some(Value::String(s)) => Ok(s.clone()),
        Some(Value::Number(n)) => Ok(n.to_string()),
        _ => bail!("{at}: candidate_id: expected a string"),
    }
}

fn read_human(path: &PathBuf) -> Result<(Vec<Key>, HashMap<Key, Human>)> {
    let mut order = Vec::new();
    let mut out = HashMap::new();
    for (line, map) in json_lines(path)? {
        let at = format!("{}:{line}", path.display());
        let key = (str_field(&map, "article_id", &at)?.to_owned(), candidate_id(&map, &at)?);
        let human = match (map.get("score"), map.get("grades")) {
            (Some(s), None) => Human {
                score: s.as_f64().with_context(|| format!("{at}: score: expected a number"))?,
                grades: None,
            },
            (None, Some(g)) => {
                let g: [u8; 2] =
                    serde_json::from_value(g.clone()).with_context(|| format!("{at}: grades: expected two integers"))?;
                AnnotationRecord::new("", g[0], g[1]).with_context(|| format!("{at}: grades"))?;
                Human {
                    score: (f64::from(g[0]) + f64::from(g[1])) / 2.0,
                    grades: Some(g),
                }
            }
            _ => bail!("{at}: expected exactly one of score or grades"),
        };
        if out.insert(key.clone(), human).is_some() {
            bail!("{at}: duplicate entry ({:?}, {:?})", key.0, key.1);
        }
        order.push(key);
    }
    Ok((order, out))
}

fn read_metrics(path: &PathBuf) -> Result<(Vec<Metric>, HashMap<Key, Vec<f64>>)> {
    let lines = json_lines(path)?;
    let header = lines
        .first()
        .and_then(|(_, m)| m.get("header"))
        .with_context(|| format!("{}: missing report header", path.display()))?;
    if header.get("command").and_then(Value::as_str) != Some("score") {
        bail!("{}: not a score report", path.display());
    }
    let mut metrics: Option<Vec<Metric>> = None;
    let mut out = HashMap::new();
    for (line, map) in &lines[1..] {
        if map.get("section").and_then(Value::as_str) != Some("instance") {
            continue;
        }
        let at = format!("{}:{line}", path.display());
        let present: Vec<Metric> = Metric::ALL.into_iter().filter(|m| map.contains_key(m.name())).collect();
        match &metrics {
            None => metrics = Some(present.clone()),
            Some(m) if *m != present => bail!("{at}: metric columns differ from earlier rows"),
            Some(_) => {}
        }
        let key = (str_field(map, "article_id", &at)?.to_owned(), candidate_id(map, &at)?);
        let scores = present
            .iter()
            .map(|m| map[m.name()].as_f64().with_context(|| format!("{at}: {}: expected a number", m.name())))
            .collect::<Result<Vec<_>>>()?;
        out.insert(key, scores);
    }
    let metrics = metrics.with_context(|| format!("{}: no instance rows", path.display()))?;
    Ok((metrics, out))
}

fn describe(keys: &[&Key]) -> String {
    let shown: Vec<String> = keys.iter().take(5).map(|(a, c)| format!("({a:?}, {c:?})")).collect();
    let more = if keys.len() > 5 { format!(" and {} more", keys.len() - 5) } else { String::new() };
    format!("{}{more}", shown.join(", "))
}

fn result_row(name: &str, s: &CorrelationResult, p: &CorrelationResult) -> Vec<Value> {
    vec![
        name.into(),
        num(s.coefficient),
        num(p.coefficient),
        num(s.p_value),
        num(p.p_value),
        s.n.into(),
    ]
}

pub fn run(args: &Args) -> Result<Report> {
    if let Some(sigma) = args.jitter_sigma {
        if !(sigma >= 0.0 && sigma.is_finite()) {
            bail!("--jitter-sigma must be a finite non-negative number");
        }
    }
    let (order, human) = read_human(&args.human)?;
    let (metrics, scores) = read_metrics(&args.metrics)?;

    let missing_scores: Vec<&Key> = order.iter().filter(|k| !scores.contains_key(*k)).collect();
    if !missing_scores.is_empty() {
        bail!("human entries without metric scores: {}", describe(&missing_scores));
    }
    let mut missing_human: Vec<&Key> = scores.keys().filter(|k| !human.contains_key(*k)).collect();
    if !missing_human.is_empty() {
        missing_human.sort();
        bail!("metric scores without human entries: {}", describe(&missing_human));
    }

    let graded: Vec<AnnotationRecord> = order
        .iter()
        .filter_map(|k| human[k].grades.map(|g| (k, g)))
        .map(|((a, c), g)| AnnotationRecord::new(format!("{a}/{c}"), g[0], g[1]))
        .collect::<Result<_, _>>()?;
    let needs_rng = args.jitter_sigma.is_some() || args.permutations.is_some() || !graded.is_empty();
    if let Some(n) = args.permutations {
        if !(1..=MAX_SHUFFLES).contains(&n) {
            bail!("--permutations must lie in 1..={MAX_SHUFFLES}");
        }
    }

    let mut config = Map::new();
    config.insert("human".into(), path_value(&args.human));
    config.insert("metrics".into(), path_value(&args.metrics));
    config.insert("normalize".into(), args.normalize.into());
    config.insert("jitter_sigma".into(), args.jitter_sigma.map_or(Value::Null, num));
    config.insert(
        "p_value".into(),
        match args.permutations {
            Some(n) => format!("two-sided permutation test, {n} shuffles"),
            None => "two-sided t approximation".to_owned(),
        }
        .into(),
    );
    let mut rng = needs_rng.then(|| ChaCha8Rng::seed_from_u64(resolve_seed(args.seed, &mut config)));

    let human_scores: Vec<f64> = order.iter().map(|k| human[k].score).collect();
    let mut table = Section::new("correlation", ["metric", "spearman", "pearson", "spearman_p", "pearson_p", "n"]);
    let mut columns: Vec<Vec<f64>> = Vec::with_capacity(metrics.len());
    for (j, m) in metrics.iter().enumerate() {
        let xs: Vec<f64> = order.iter().map(|k| scores[k][j]).collect();
        let pairs = PairedScores::new(human_scores.iter().copied().zip(xs.iter().copied()))?;
        let mut s = spearman(&pairs).with_context(|| format!("{} spearman", m.name()))?;
        let mut p = pearson(&pairs).with_context(|| format!("{} pearson", m.name()))?;
        if let Some(n) = args.permutations {
            let rng = rng.as_mut().expect("rng exists when permutations are requested");
            s.p_value = permutation_p_value(&pairs, CorrelationMethod::Spearman, n, rng)?;
            p.p_value = permutation_p_value(&pairs, CorrelationMethod::Pearson, n, rng)?;
        }
        table.push(result_row(m.name(), &s, &p));
        columns.push(xs);
    }
    if !graded.is_empty() {
        let rng = rng.as_mut().expect("rng exists when grades are present");
        let baseline = human_human_baseline(&graded, rng).context("human baseline")?;
        table.push(result_row("human", &baseline.spearman, &baseline.pearson));
    }

    let mut report = Report::new("correlate", config);
    report.sections.push(table);

    if args.normalize || args.jitter_sigma.is_some() {
        let mut names = vec!["article_id".to_owned(), "candidate_id".to_owned(), "human".to_owned()];
        let mut cols: Vec<Vec<f64>> = Vec::new();
        let mut scales = Section::new("normalization", ["metric", "metric_mean", "metric_std", "human_mean", "human_std"]);
        for (j, m) in metrics.iter().enumerate() {
            let xs = &columns[j];
            names.push(m.name().to_owned());
            cols.push(xs.clone());
            if args.normalize {
                let scale = HumanScale::fit(xs, &human_scores).with_context(|| format!("normalizing {}", m.name()))?;
                scales.push(vec![
                    m.name().into(),
                    num(scale.metric_mean),
                    num(scale.metric_std),
                    num(scale.human_mean),
                    num(scale.human_std),
                ]);
                names.push(format!("{}_normalized", m.name()));
                cols.push(normalize_to_human(xs, &human_scores)?);
            }
        }
        if let Some(sigma) = args.jitter_sigma {
            let rng = rng.as_mut().expect("rng exists when jitter is requested");
            let base: Vec<Vec<f64>> = std::iter::once(human_scores.clone()).chain(cols.iter().cloned()).collect();
            let base_names: Vec<String> = names[2..].to_vec();
            for (name, col) in base_names.iter().zip(base) {
                names.push(format!("{name}_jittered"));
                cols.push(jitter(&col, sigma, rng)?);
            }
        }
        let mut points = Section::new("points", names);
        for (i, (a, c)) in order.iter().enumerate() {
            let mut row = vec![Value::from(a.clone()), Value::from(c.clone()), num(human_scores[i])];
            row.extend(cols.iter().map(|col| num(col[i])));
            points.push(row);
        }
        if args.normalize {
            report.sections.push(scales);
        }
        report.sections.push(points);
    }
    Ok(report)
}
