use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

mod commands;
mod input;
mod report;

use report::{Format, Report};

#[derive(Parser, Debug)]
#[command(name = "qwm", version, about = "Quality-weighted reference metrics and corpus tooling")]
struct Cli {
    /// Report layout.
    #[arg(long, global = true, value_enum, default_value = "jsonl")]
    format: Format,

    /// Write the report here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    report: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Score candidate comments against each article's reference comments.
    Score(commands::score::Args),
    /// Correlate metric scores with human judgements.
    Correlate(commands::correlate::Args),
    /// Corpus statistics, one column per input file.
    Stats(commands::corpus::StatsArgs),
    /// Drop articles with short content or few comments.
    Filter(commands::corpus::FilterArgs),
    /// Select annotation candidates and sample their comments.
    MakeTestSet(commands::corpus::TestSetArgs),
    /// Build a capped vocabulary, replace rare tokens and truncate comments.
    Vocab(commands::corpus::VocabArgs),
    /// Random train/dev/test split with exact sizes.
    Split(commands::corpus::SplitArgs),
    /// Build and save a TF-IDF article index.
    Index(commands::retrieve::IndexArgs),
    /// Answer query articles with a comment from retrieved articles.
    Retrieve(commands::retrieve::RetrieveArgs),
    /// Inter-annotator agreement over graded comments.
    Agreement(commands::agreement::Args),
}

fn run(cli: Cli) -> Result<()> {
    let mut report: Report = match &cli.command {
        Command::Score(a) => commands::score::run(a)?,
        Command::Correlate(a) => commands::correlate::run(a)?,
        Command::Stats(a) => commands::corpus::stats(a)?,
        Command::Filter(a) => commands::corpus::filter(a)?,
        Command::MakeTestSet(a) => commands::corpus::make_test_set(a)?,
        Command::Vocab(a) => commands::corpus::vocab(a)?,
        Command::Split(a) => commands::corpus::split(a)?,
        Command::Index(a) => commands::retrieve::index(a)?,
        Command::Retrieve(a) => commands::retrieve::retrieve(a)?,
        Command::Agreement(a) => commands::agreement::run(a)?,
    };
    report.config.insert("format".into(), cli.format.name().into());
    let mut out: Box<dyn Write> = match &cli.report {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).with_context(|| format!("creating {}", path.display()))?,
        )),
        None => Box::new(io::stdout().lock()),
    };
    report.write(cli.format, &mut out)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
