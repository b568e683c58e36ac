use std::io::Write;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use qwm::retrieval::{
    build_index, load_index, save_index, IndexMode, Retriever, TfIdfCosineScorer, TfIdfIndex, DEFAULT_K,
    INDEX_FORMAT, INDEX_VERSION,
};
use serde_json::{Map, Value};

use crate::input::{create, load_corpus, open, path_value};
use crate::report::{num, Report, Section};

#[derive(clap::Args, Debug)]
pub struct IndexArgs {
    #[arg(long)]
    pub corpus: PathBuf,
    #[arg(long)]
    pub mode: IndexMode,
    #[arg(long)]
    pub output: PathBuf,
}

#[derive(clap::Args, Debug)]
pub struct RetrieveArgs {
    /// Articles to retrieve from.
    #[arg(long)]
    pub corpus: PathBuf,
    /// Query articles.
    #[arg(long)]
    pub queries: PathBuf,
    /// Matching text; taken from the index when --index is given.
    #[arg(long, required_unless_present = "index")]
    pub mode: Option<IndexMode>,
    /// Articles retrieved per query.
    #[arg(long, default_value_t = DEFAULT_K)]
    pub k: usize,
    /// Load a saved index built from --corpus.
    #[arg(long, conflicts_with = "save_index")]
    pub index: Option<PathBuf>,
    /// Save the index built from --corpus.
    #[arg(long)]
    pub save_index: Option<PathBuf>,
}

fn index_row(index: &TfIdfIndex) -> Vec<Value> {
    vec![
        index.mode().name().into(),
        index.len().into(),
        index.df().len().into(),
        index.vocab_sha256().into(),
    ]
}

const INDEX_COLUMNS: [&str; 4] = ["mode", "documents", "terms", "vocab_sha256"];

fn write_index(index: &TfIdfIndex, path: &PathBuf) -> Result<()> {
    let mut out = create(path)?;
    save_index(&mut out, index)?;
    out.flush()?;
    Ok(())
}

pub fn index(args: &IndexArgs) -> Result<Report> {
    let mut config = Map::new();
    config.insert("corpus".into(), path_value(&args.corpus));
    config.insert("mode".into(), args.mode.name().into());
    config.insert("output".into(), path_value(&args.output));
    config.insert("format".into(), format!("{INDEX_FORMAT} v{INDEX_VERSION}").into());

    let articles = load_corpus(&args.corpus)?;
    let index = build_index(&articles, args.mode)?;
    write_index(&index, &args.output)?;

    let mut section = Section::new("index", INDEX_COLUMNS).transposed();
    section.push(index_row(&index));
    let mut report = Report::new("index", config);
    report.sections.push(section);
    Ok(report)
}

pub fn retrieve(args: &RetrieveArgs) -> Result<Report> {
    let corpus = load_corpus(&args.corpus)?;
    let queries = load_corpus(&args.queries)?;
    let index = match &args.index {
        Some(path) => {
            let index = load_index(open(path)?).with_context(|| format!("loading index {}", path.display()))?;
            if let Some(mode) = args.mode {
                if mode != index.mode() {
                    bail!("--mode {mode} disagrees with the index mode {}", index.mode());
                }
            }
            index
        }
        None => build_index(&corpus, args.mode.expect("clap requires --mode without --index"))?,
    };
    if let Some(path) = &args.save_index {
        write_index(&index, path)?;
    }

    let mut config = Map::new();
    config.insert("corpus".into(), path_value(&args.corpus));
    config.insert("queries".into(), path_value(&args.queries));
    config.insert("mode".into(), index.mode().name().into());
    config.insert("k".into(), args.k.into());
    config.insert("index".into(), args.index.as_deref().map_or(Value::Null, path_value));
    config.insert("save_index".into(), args.save_index.as_deref().map_or(Value::Null, path_value));
    config.insert("scorer".into(), "tfidf-cosine(title+content)".into());

    let mut summary = Section::new("index", INDEX_COLUMNS).transposed();
    summary.push(index_row(&index));

    let scorer = TfIdfCosineScorer::from_index(&index);
    let retriever = Retriever::new(index, &corpus, scorer, args.k)
        .with_context(|| format!("index does not match corpus {}", args.corpus.display()))?;
    let mut answers = Section::new(
        "answer",
        ["query_id", "source_id", "comment_score", "comment", "truncated", "candidates"],
    );
    for q in &queries {
        let r = retriever.answer(q).with_context(|| format!("query {:?}", q.id))?;
        let candidates: Vec<Value> = r
            .candidates
            .iter()
            .map(|c| serde_json::json!({"id": c.id, "cosine": num(c.cosine)}))
            .collect();
        answers.push(vec![
            r.query_id.into(),
            r.source_id.into(),
            num(r.comment_score),
            r.comment.to_string().into(),
            r.truncated.into(),
            candidates.into(),
        ]);
    }
    let mut report = Report::new("retrieve", config);
    report.sections.push(summary);
    report.sections.push(answers);
    Ok(report)
}
