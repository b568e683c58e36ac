use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter};
use std::path::Path;

use anyhow::{Context, Result};
use qwm::dataset::{read_articles, Article};
use serde_json::{Map, Value};

pub fn open(path: &Path) -> Result<BufReader<File>> {
    let f = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    Ok(BufReader::new(f))
}

pub fn create(path: &Path) -> Result<BufWriter<File>> {
    let f = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    Ok(BufWriter::new(f))
}

pub fn load_corpus(path: &Path) -> Result<Vec<Article>> {
    read_articles(open(path)?)
        .collect::<Result<Vec<_>, _>>()
        .with_context(|| format!("reading corpus {}", path.display()))
}

/// Lines of a JSONL file as objects, with 1-based line numbers. Blank lines
/// are skipped.
pub fn json_lines(path: &Path) -> Result<Vec<(usize, Map<String, Value>)>> {
    let mut out = Vec::new();
    for (i, line) in open(path)?.lines().enumerate() {
        let line = line.with_context(|| format!("reading {}", path.display()))?;
        if line.trim().is_empty() {
            continue;
        }
        let value: Value =
            serde_json::from_str(&line).with_context(|| format!("{}:{}: invalid JSON", path.display(), i + 1))?;
        match value {
            Value::Object(map) => out.push((i + 1, map)),
            _ => anyhow::bail!("{}:{}: expected a JSON object", path.display(), i + 1),
        }
    }
    Ok(out)
}

pub fn str_field<'a>(map: &'a Map<String, Value>, key: &str, at: &str) -> Result<&'a str> {
    map.get(key)
        .and_then(Value::as_str)
        .with_context(|| format!("{at}: {key}: expected a string"))
}

/// The given seed, or a fresh one. Both are recorded in the report header.
pub fn resolve_seed(seed: Option<u64>, config: &mut Map<String, Value>) -> u64 {
    let (value, source) = match seed {
        Some(s) => (s, "given"),
        None => (rand::random::<u64>(), "generated"),
    };
    config.insert("seed".into(), value.into());
    config.insert("seed_source".into(), source.into());
    value
}

pub fn path_value(path: &Path) -> Value {
    Value::String(path.display().to_string())
}
