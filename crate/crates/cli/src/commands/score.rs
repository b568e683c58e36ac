use std::collections::{HashMap, HashSet};
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use qwm::dataset::Article;
use qwm::metrics::{
    corpus_score, weighted_bleu, weighted_cider, weighted_meteor, weighted_rouge_l, Metric, MetricConfig,
    QualityReference, ReferenceSet, Smoothing,
};
use qwm::stats::quality_from_grades;
use qwm::textcore::{build_df_tables, DocumentFrequencyTable};
use qwm::TokenSeq;
use serde_json::{Map, Value};

use crate::input::{json_lines, load_corpus, path_value, str_field};
use crate::report::{num, Report, Section};

#[derive(clap::Args, Debug)]
pub struct Args {
    /// Corpus whose comments are the references.
    #[arg(long)]
    pub corpus: PathBuf,

    /// JSONL of {"article_id", "candidate_id", "tokens"}.
    #[arg(long)]
    pub candidates: PathBuf,

    /// Metrics to compute; defaults to all four.
    #[arg(long, value_delimiter = ',')]
    pub metric: Vec<Metric>,

    /// Weight references by their grades (the default).
    #[arg(long, conflicts_with = "unweighted")]
    pub weighted: bool,

    /// Give every reference quality 1.
    #[arg(long)]
    pub unweighted: bool,

    /// Quality for references without grades.
    #[arg(long, value_name = "S", conflicts_with = "unweighted")]
    pub assume_quality: Option<f64>,

    #[arg(long, default_value_t = 4)]
    pub bleu_order: usize,

    /// Add this to zero BLEU precision counts.
    #[arg(long, value_name = "EPS")]
    pub bleu_smoothing: Option<f64>,

    #[arg(long, default_value_t = 1.2)]
    pub rouge_beta: f64,

    #[arg(long, default_value_t = 4)]
    pub cider_order: usize,
}

struct Instance {
    article_id: String,
    candidate_id: String,
    tokens: TokenSeq,
}

fn read_candidates(args: &Args, known: &HashMap<&str, usize>) -> Result<Vec<Instance>> {
    let path = args.candidates.display();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for (line, map) in json_lines(&args.candidates)? {
        let at = format!("{path}:{line}");
        let article_id = str_field(&map, "article_id", &at)?.to_owned();
        let candidate_id = match map.get("candidate_id") {
            Some(Value::String(s)) => s.clone(),
            Some(Value::Number(n)) => n.to_string(),
            _ => bail!("{at}: candidate_id: expected a string"),
        };
        let tokens: Vec<String> = serde_json::from_value(map.get("tokens").cloned().unwrap_or(Value::Null))
            .with_context(|| format!("{at}: tokens: expected an array of strings"))?;
        let tokens = TokenSeq::new(tokens).with_context(|| format!("{at}: tokens"))?;
        if !known.contains_key(article_id.as_str()) {
            bail!("{at}: article_id {article_id:?} is not in the corpus");
        }
        if !seen.insert((article_id.clone(), candidate_id.clone())) {
            bail!("{at}: duplicate candidate ({article_id:?}, {candidate_id:?})");
        }
        out.push(Instance {
            article_id,
            candidate_id,
            tokens,
        });
    }
    Ok(out)
}

fn references(article: &Article, args: &Args) -> Result<ReferenceSet> {
    let mut refs = Vec::with_capacity(article.comments.len());
    for (i, c) in article.comments.iter().enumerate() {
        let quality = if args.unweighted {
            1.0
        } else {
            match (c.grades, args.assume_quality) {
                (Some(g), _) => quality_from_grades(&g)?,
                (None, Some(s)) => s,
                (None, None) => bail!(
                    "article {:?}: comments[{i}].grades: missing; weighted scoring needs grades \
                     (use --unweighted or --assume-quality)",
                    article.id
                ),
            }
        };
        refs.push(
            QualityReference::new(c.tokens.clone(), quality)
                .with_context(|| format!("article {:?}: comments[{i}]", article.id))?,
        );
    }
    ReferenceSet::new(refs).with_context(|| format!("article {:?}", article.id))
}

pub fn run(args: &Args) -> Result<Report> {
    let metrics: Vec<Metric> = if args.metric.is_empty() {
        Metric::ALL.to_vec()
    } else {
        Metric::ALL.into_iter().filter(|m| args.metric.contains(m)).collect()
    };
    let cfg = MetricConfig {
        bleu_max_order: args.bleu_order,
        bleu_smoothing: args.bleu_smoothing.map_or(Smoothing::Off, Smoothing::Epsilon),
        rouge_beta: args.rouge_beta,
        cider_max_order: args.cider_order,
        ..MetricConfig::default()
    };
    cfg.validate()?;
    if let Some(s) = args.assume_quality {
        if !(0.0..=1.0).contains(&s) {
            bail!("--assume-quality must lie in [0, 1], got {s}");
        }
    }

    let mut config = Map::new();
    config.insert("corpus".into(), path_value(&args.corpus));
    config.insert("candidates".into(), path_value(&args.candidates));
    config.insert("metrics".into(), metrics.iter().map(|m| m.name()).collect::<Vec<_>>().into());
    config.insert("weighting".into(), if args.unweighted { "unweighted" } else { "weighted" }.into());
    config.insert("quality_map".into(), "mean over both grades of (g - 1) / 4".into());
    config.insert("assume_quality".into(), args.assume_quality.map_or(Value::Null, num));
    config.insert("metric_config".into(), serde_json::to_value(&cfg)?);
    config.insert("cider_df".into(), "reference sets of the scored articles".into());

    let corpus = load_corpus(&args.corpus)?;
    let by_id: HashMap<&str, usize> = corpus.iter().enumerate().map(|(i, a)| (a.id.as_str(), i)).collect();
    let instances = read_candidates(args, &by_id)?;
    if instances.is_empty() {
        bail!("{}: no candidates", args.candidates.display());
    }

    let mut ref_sets: HashMap<&str, ReferenceSet> = HashMap::new();
    let mut order: Vec<&str> = Vec::new();
    for inst in &instances {
        if !ref_sets.contains_key(inst.article_id.as_str()) {
            let article = &corpus[by_id[inst.article_id.as_str()]];
            ref_sets.insert(article.id.as_str(), references(article, args)?);
            order.push(article.id.as_str());
        }
    }
    let df: Vec<DocumentFrequencyTable> = if metrics.contains(&Metric::Cider) {
        build_df_tables(order.iter().map(|id| ref_sets[id].sequences()), cfg.cider_max_order)?
    } else {
        Vec::new()
    };

    let candidates: Vec<TokenSeq> = instances.iter().map(|i| i.tokens.clone()).collect();
    let refs: Vec<ReferenceSet> = instances.iter().map(|i| ref_sets[i.article_id.as_str()].clone()).collect();

    let mut columns = vec!["article_id".to_owned(), "candidate_id".to_owned()];
    columns.extend(metrics.iter().map(|m| m.name().to_owned()));
    let mut per_instance = Section::new("instance", columns);
    for (i, inst) in instances.iter().enumerate() {
        let mut row = vec![Value::from(inst.article_id.clone()), Value::from(inst.candidate_id.clone())];
        for m in &metrics {
            let s = match m {
                Metric::Bleu => weighted_bleu(&candidates[i], &refs[i], &cfg),
                Metric::Meteor => weighted_meteor(&candidates[i], &refs[i], &cfg),
                Metric::RougeL => weighted_rouge_l(&candidates[i], &refs[i], &cfg),
                Metric::Cider => weighted_cider(&candidates[i], &refs[i], &df, &cfg),
            }
            .with_context(|| format!("scoring ({:?}, {:?})", inst.article_id, inst.candidate_id))?;
            row.push(num(s.value));
        }
        per_instance.push(row);
    }

    let mut totals = Section::new("corpus", ["metric", "score", "instances"]);
    for m in &metrics {
        let s = corpus_score(*m, &candidates, &refs, &df, &cfg)?;
        totals.push(vec![m.name().into(), num(s.value), instances.len().into()]);
    }

    let mut report = Report::new("score", config);
    report.sections.push(per_instance);
    report.sections.push(totals);
    Ok(report)
}
