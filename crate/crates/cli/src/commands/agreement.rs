use std::path::PathBuf;

use anyhow::{bail, Result};
use clap::ValueEnum;
use qwm::stats::{cohen_weighted_kappa, human_human_baseline, mean_and_std, AnnotationRecord, KappaWeights};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Map;

use crate::input::{load_corpus, path_value, resolve_seed};
use crate::report::{num, Report, Section};

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Weights {
    Linear,
    Quadratic,
}

#[derive(clap::Args, Debug)]
pub struct Args {
    /// Corpus whose graded comments are the annotated items.
    #[arg(long)]
    pub corpus: PathBuf,
    #[arg(long, value_enum, default_value = "linear")]
    pub weights: Weights,
    /// Seed for the random split of the human baseline.
    #[arg(long)]
    pub seed: Option<u64>,
}

pub fn run(args: &Args) -> Result<Report> {
    let weights = match args.weights {
        Weights::Linear => KappaWeights::Linear,
        Weights::Quadratic => KappaWeights::Quadratic,
    };
    let mut config = Map::new();
    config.insert("corpus".into(), path_value(&args.corpus));
    config.insert("weights".into(), serde_json::to_value(weights)?);
    let seed = resolve_seed(args.seed, &mut config);

    let articles = load_corpus(&args.corpus)?;
    let mut records = Vec::new();
    for a in &articles {
        for (i, c) in a.comments.iter().enumerate() {
            if let Some([x, y]) = c.grades {
                records.push(AnnotationRecord::new(format!("{}#{i}", a.id), x, y)?);
            }
        }
    }
    if records.is_empty() {
        bail!("{}: no graded comments", args.corpus.display());
    }
    let kappa = cohen_weighted_kappa(&records, weights)?;
    let first: Vec<f64> = records.iter().map(|r| f64::from(r.grades()[0])).collect();
    let second: Vec<f64> = records.iter().map(|r| f64::from(r.grades()[1])).collect();
    let both: Vec<f64> = first.iter().chain(&second).copied().collect();
    let (m1, s1) = mean_and_std(&first);
    let (m2, s2) = mean_and_std(&second);
    let (m, s) = mean_and_std(&both);
    let any_five = records.iter().filter(|r| r.grades().contains(&5)).count() as f64 / records.len() as f64;
    let baseline = human_human_baseline(&records, &mut ChaCha8Rng::seed_from_u64(seed))?;

    let mut section = Section::new(
        "agreement",
        [
            "items",
            "kappa",
            "grade_mean",
            "grade_std",
            "annotator1_mean",
            "annotator1_std",
            "annotator2_mean",
            "annotator2_std",
            "share_with_a_5",
            "human_spearman",
            "human_spearman_p",
            "human_pearson",
            "human_pearson_p",
        ],
    )
    .transposed();
    section.push(vec![
        records.len().into(),
        num(kappa),
        num(m),
        num(s),
        num(m1),
        num(s1),
        num(m2),
        num(s2),
        num(any_five),
        num(baseline.spearman.coefficient),
        num(baseline.spearman.p_value),
        num(baseline.pearson.coefficient),
        num(baseline.pearson.p_value),
    ]);
    let mut report = Report::new("agreement", config);
    report.sections.push(section);
    Ok(report)
}
