use std::io::Write;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use qwm::dataset::{
    build_vocab, is_retained, read_articles, select_test_candidates, split_corpus, truncate_comments, write_article, write_corpus,
    SkipReason, SplitSizes, StatsAccumulator, TestSetRules, DEFAULT_UNK, DEFAULT_VOCAB_CAP, MAX_COMMENT_LEN,
    MIN_COMMENTS, MIN_CONTENT_TOKENS,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{Map, Value};

use crate::input::{create, load_corpus, open, path_value, resolve_seed};
use crate::report::{num, Report, Section};

#[derive(clap::Args, Debug)]
pub struct StatsArgs {
    /// Corpus files; each becomes one column, named by its file stem.
    #[arg(required = true)]
    pub corpora: Vec<PathBuf>,
}

#[derive(clap::Args, Debug)]
pub struct FilterArgs {
    #[arg(long)]
    pub corpus: PathBuf,
    /// Where to write the retained articles.
    #[arg(long)]
    pub output: PathBuf,
}

#[derive(clap::Args, Debug)]
pub struct TestSetArgs {
    #[arg(long)]
    pub corpus: PathBuf,
    #[arg(long)]
    pub output: PathBuf,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Comments sampled per article.
    #[arg(long, default_value_t = 27)]
    pub sample_size: usize,
    /// Keep at most this many eligible articles, drawn at random.
    #[arg(long)]
    pub max_articles: Option<usize>,
}

#[derive(clap::Args, Debug)]
pub struct VocabArgs {
    #[arg(long)]
    pub corpus: PathBuf,
    /// Where to write the mapped, truncated corpus.
    #[arg(long)]
    pub output: PathBuf,
    /// Where to write the vocabulary as {"token", "count"} lines.
    #[arg(long)]
    pub vocab_out: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_VOCAB_CAP)]
    pub cap: usize,
    #[arg(long, default_value = DEFAULT_UNK)]
    pub unk: String,
    /// Comment length limit in tokens.
    #[arg(long, default_value_t = MAX_COMMENT_LEN)]
    pub max_len: usize,
}

#[derive(clap::Args, Debug)]
pub struct SplitArgs {
    #[arg(long)]
    pub corpus: PathBuf,
    /// Directory receiving train.jsonl, dev.jsonl and test.jsonl.
    #[arg(long)]
    pub out_dir: PathBuf,
    #[arg(long)]
    pub train: usize,
    #[arg(long)]
    pub dev: usize,
    #[arg(long)]
    pub test: usize,
    #[arg(long)]
    pub seed: Option<u64>,
}

fn split_name(path: &PathBuf) -> String {
    path.file_stem().map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned())
}

pub fn stats(args: &StatsArgs) -> Result<Report> {
    let mut config = Map::new();
    config.insert("corpora".into(), args.corpora.iter().map(|p| path_value(p)).collect::<Vec<_>>().into());
    config.insert("token_unit".into(), "word".into());
    let mut section = Section::new(
        "stats",
        [
            "split",
            "articles",
            "comments",
            "comments_per_article",
            "upvotes_per_comment",
            "vocab_size",
            "avg_title_len",
            "avg_content_len",
            "avg_comment_len",
            "categories",
        ],
    )
    .transposed();
    for path in &args.corpora {
        let mut acc = StatsAccumulator::default();
        for article in read_articles(open(path)?) {
            acc.add(&article.with_context(|| format!("reading corpus {}", path.display()))?);
        }
        let s = acc.finish().with_context(|| format!("{}", path.display()))?;
        section.push(vec![
            split_name(path).into(),
            s.article_count.into(),
            s.comment_count.into(),
            num(s.comments_per_article),
            num(s.upvotes_per_comment),
            s.vocab_size.into(),
            num(s.avg_title_len),
            num(s.avg_content_len),
            num(s.avg_comment_len),
            serde_json::to_value(&s.category_histogram)?,
        ]);
    }
    let mut report = Report::new("stats", config);
    report.sections.push(section);
    Ok(report)
}

pub fn filter(args: &FilterArgs) -> Result<Report> {
    let mut config = Map::new();
    config.insert("corpus".into(), path_value(&args.corpus));
    config.insert("output".into(), path_value(&args.output));
    config.insert("min_content_tokens".into(), MIN_CONTENT_TOKENS.into());
    config.insert("min_comments".into(), MIN_COMMENTS.into());

    let mut out = create(&args.output)?;
    let (mut input, mut kept, mut short, mut few) = (0usize, 0usize, 0usize, 0usize);
    for article in read_articles(open(&args.corpus)?) {
        let article = article.with_context(|| format!("reading corpus {}", args.corpus.display()))?;
        input += 1;
        let short_content = article.content.len() < MIN_CONTENT_TOKENS;
        let few_comments = article.comments.len() < MIN_COMMENTS;
        short += usize::from(short_content);
        few += usize::from(few_comments);
        if is_retained(&article) {
            kept += 1;
            write_article(&mut out, &article)?;
        }
    }
    out.flush()?;

    let mut section = Section::new("filter", ["input", "retained", "short_content", "few_comments"]).transposed();
    section.push(vec![input.into(), kept.into(), short.into(), few.into()]);
    let mut report = Report::new("filter", config);
    report.sections.push(section);
    Ok(report)
}

fn skip_row(id: &str, reason: &SkipReason) -> Vec<Value> {
    let (name, detail) = match reason {
        SkipReason::TooFewLongComments { found } => ("too-few-long-comments", Value::from(*found)),
        SkipReason::TooFewUpvotes { total } => ("too-few-upvotes", Value::from(*total)),
        SkipReason::NotDrawn => ("not-drawn", Value::Null),
    };
    vec![id.into(), name.into(), detail]
}

pub fn make_test_set(args: &TestSetArgs) -> Result<Report> {
    let rules = TestSetRules {
        sample_size: args.sample_size,
        max_articles: args.max_articles,
        ..TestSetRules::default()
    };
    if rules.sample_size == 0 || rules.sample_size > rules.min_comments {
        bail!("--sample-size must lie in 1..={}", rules.min_comments);
    }
    let mut config = Map::new();
    config.insert("corpus".into(), path_value(&args.corpus));
    config.insert("output".into(), path_value(&args.output));
    config.insert("rules".into(), serde_json::to_value(&rules)?);
    let seed = resolve_seed(args.seed, &mut config);

    let articles = load_corpus(&args.corpus)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let selection = select_test_candidates(&articles, &rules, &mut rng);
    for (id, reason) in &selection.skipped {
        if let SkipReason::TooFewLongComments { found } = reason {
            eprintln!(
                "warning: article {id:?} skipped: {found} comments longer than {} tokens",
                rules.min_comment_tokens
            );
        }
    }
    let mut out = create(&args.output)?;
    write_corpus(&mut out, &selection.selected)?;
    out.flush()?;

    let mut summary = Section::new("selection", ["articles", "selected", "skipped", "comments_per_article"]).transposed();
    summary.push(vec![
        articles.len().into(),
        selection.selected.len().into(),
        selection.skipped.len().into(),
        rules.sample_size.into(),
    ]);
    let mut skipped = Section::new("skipped", ["article_id", "reason", "detail"]);
    for (id, reason) in &selection.skipped {
        skipped.push(skip_row(id, reason));
    }
    let mut report = Report::new("make-test-set", config);
    report.sections.push(summary);
    report.sections.push(skipped);
    Ok(report)
}

pub fn vocab(args: &VocabArgs) -> Result<Report> {
    let mut config = Map::new();
    config.insert("corpus".into(), path_value(&args.corpus));
    config.insert("output".into(), path_value(&args.output));
    config.insert("vocab_out".into(), args.vocab_out.as_deref().map_or(Value::Null, path_value));
    config.insert("cap".into(), args.cap.into());
    config.insert("unk".into(), args.unk.clone().into());
    config.insert("max_len".into(), args.max_len.into());

    let articles = load_corpus(&args.corpus)?;
    let vocab = build_vocab(&articles, args.cap, &args.unk)?;
    let mapped: Vec<_> = articles.iter().map(|a| vocab.apply_article(a)).collect();
    let replaced: usize = articles
        .iter()
        .zip(&mapped)
        .flat_map(|(a, m)| {
            let before = a.comments.iter().map(|c| &c.tokens).chain([&a.title, &a.content]);
            let after = m.comments.iter().map(|c| &c.tokens).chain([&m.title, &m.content]);
            before.zip(after)
        })
        .map(|(b, a)| b.tokens().iter().zip(a.tokens()).filter(|(x, y)| x != y).count())
        .sum();
    let clipped = mapped
        .iter()
        .flat_map(|a| &a.comments)
        .filter(|c| c.tokens.len() > args.max_len)
        .count();
    let truncated = truncate_comments(mapped, args.max_len);

    let mut out = create(&args.output)?;
    write_corpus(&mut out, &truncated)?;
    out.flush()?;
    if let Some(path) = &args.vocab_out {
        let mut v = create(path)?;
        for (token, count) in vocab.entries() {
            serde_json::to_writer(&mut v, &serde_json::json!({"token": token, "count": count}))?;
            v.write_all(b"\n")?;
        }
        v.flush()?;
    }

    let mut section = Section::new(
        "vocab",
        ["articles", "vocab_size", "replaced_tokens", "truncated_comments"],
    )
    .transposed();
    section.push(vec![
        truncated.len().into(),
        vocab.len().into(),
        replaced.into(),
        clipped.into(),
    ]);
    let mut report = Report::new("vocab", config);
    report.sections.push(section);
    Ok(report)
}

pub fn split(args: &SplitArgs) -> Result<Report> {
    let sizes = SplitSizes {
        train: args.train,
        dev: args.dev,
        test: args.test,
    };
    let mut config = Map::new();
    config.insert("corpus".into(), path_value(&args.corpus));
    config.insert("out_dir".into(), path_value(&args.out_dir));
    config.insert(
        "sizes".into(),
        serde_json::json!({"train": sizes.train, "dev": sizes.dev, "test": sizes.test}),
    );
    let seed = resolve_seed(args.seed, &mut config);

    let articles = load_corpus(&args.corpus)?;
    let total = articles.len();
    let parts = split_corpus(articles, sizes, &mut ChaCha8Rng::seed_from_u64(seed))?;
    std::fs::create_dir_all(&args.out_dir).with_context(|| format!("creating {}", args.out_dir.display()))?;
    let mut section = Section::new("split", ["split", "articles"]);
    for (name, part) in [("train", &parts.train), ("dev", &parts.dev), ("test", &parts.test)] {
        let mut out = create(&args.out_dir.join(format!("{name}.jsonl")))?;
        write_corpus(&mut out, part)?;
        out.flush()?;
        section.push(vec![name.into(), part.len().into()]);
    }
    let used = parts.train.len() + parts.dev.len() + parts.test.len();
    section.push(vec!["unused".into(), (total - used).into()]);
    let mut report = Report::new("split", config);
    report.sections.push(section);
    Ok(report)
}
