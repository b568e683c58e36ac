//! Line-delimited index file.
//!
//! ```text
//! {"format":"qwm-tfidf-index","version":1,"mode":"title","doc_count":D,"terms":T,"vocab_sha256":"<hex>"}
//! {"term":"<token>","df":<int>}                   T lines, sorted by term
//! {"id":"<article id>","weights":[["<token>",w]]}  D lines, index order, weights sorted by token
//! ```
//!
//! `vocab_sha256` hashes the sorted terms joined by `\n`.

use std::collections::HashMap;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{IndexMode, TfIdfIndex};
use crate::error::{Error, Result};
use crate::textcore::{DocumentFrequencyTable, TfIdfVector};

pub const INDEX_FORMAT: &str = "qwm-tfidf-index";
pub const INDEX_VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
struct Header {
    format: String,
    version: u32,
    mode: IndexMode,
    doc_count: usize,
    terms: usize,
    vocab_sha256: String,
}

#[derive(Debug, Serialize, Deserialize)]
struct TermLine {
    term: String,
    df: usize,
}

#[derive(Debug, Serialize, Deserialize)]
struct DocLine {
    id: String,
    weights: Vec<(String, f64)>,
}

fn vocab_hash<'a>(sorted_terms: impl Iterator<Item = &'a str>) -> String {
    let mut hasher = Sha256::new();
    for (i, t) in sorted_terms.enumerate() {
        if i > 0 {
            hasher.update(b"\n");
        }
        hasher.update(t.as_bytes());
    }
    hex::encode(hasher.finalize())
}

fn write_line<W: Write, T: Serialize>(w: &mut W, value: &T) -> Result<()> {
    serde_json::to_writer(&mut *w, value)?;
    w.write_all(b"\n")?;
    Ok(())
}

fn sorted_terms(index: &TfIdfIndex) -> Vec<(&str, usize)> {
    let mut terms: Vec<(&str, usize)> = index.df().iter().map(|(g, c)| (g[0].as_str(), c)).collect();
    terms.sort_unstable();
    terms
}

impl TfIdfIndex {
    /// The vocabulary hash recorded in a saved index header.
    pub fn vocab_sha256(&self) -> String {
        vocab_hash(sorted_terms(self).into_iter().map(|(t, _)| t))
    }
}

pub fn save_index<W: Write>(mut writer: W, index: &TfIdfIndex) -> Result<()> {
    let terms = sorted_terms(index);
    let header = Header {
        format: INDEX_FORMAT.to_owned(),
        version: INDEX_VERSION,
        mode: index.mode(),
        doc_count: index.len(),
        terms: terms.len(),
        vocab_sha256: vocab_hash(terms.iter().map(|(t, _)| *t)),
    };
    write_line(&mut writer, &header)?;
    for (term, df) in &terms {
        write_line(
            &mut writer,
            &TermLine {
                term: (*term).to_owned(),
                df: *df,
            },
        )?;
    }
    for (id, v) in index.ids().iter().zip(index.vectors()) {
        let mut weights: Vec<(String, f64)> = v.iter().map(|(g, w)| (g[0].clone(), w)).collect();
        weights.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        write_line(&mut writer, &DocLine { id: id.clone(), weights })?;
    }
    Ok(())
}

pub fn load_index<R: BufRead>(reader: R) -> Result<TfIdfIndex> {
    let mut lines = reader.lines().enumerate();
    let mut next_line = |what: &str| -> Result<(usize, String)> {
        match lines.next() {
            Some((i, line)) => Ok((i + 1, line?)),
            None => Err(Error::IndexFormat(format!("unexpected end of file, expected {what}"))),
        }
    };
    let parse_err = |line: usize, e: serde_json::Error| Error::Parse {
        line,
        message: e.to_string(),
    };

    let (n, line) = next_line("header")?;
    let header: Header = serde_json::from_str(&line).map_err(|e| parse_err(n, e))?;
    if header.format != INDEX_FORMAT {
        return Err(Error::IndexFormat(format!("unknown format {:?}", header.format)));
    }
    if header.version != INDEX_VERSION {
        return Err(Error::IndexFormat(format!("unsupported version {}", header.version)));
    }

    let mut terms = Vec::with_capacity(header.terms);
    for _ in 0..header.terms {
        let (n, line) = next_line("term line")?;
        let t: TermLine = serde_json::from_str(&line).map_err(|e| parse_err(n, e))?;
        terms.push(t);
    }
    if terms.windows(2).any(|w| w[0].term >= w[1].term) {
        return Err(Error::IndexFormat("term lines are not strictly sorted".into()));
    }
    let hash = vocab_hash(terms.iter().map(|t| t.term.as_str()));
    if hash != header.vocab_sha256 {
        return Err(Error::IndexFormat("vocabulary hash mismatch".into()));
    }
    let df: HashMap<Vec<String>, usize> = terms.into_iter().map(|t| (vec![t.term], t.df)).collect();
    let df = DocumentFrequencyTable::from_parts(1, header.doc_count, df)?;

    let mut ids = Vec::with_capacity(header.doc_count);
    let mut vectors = Vec::with_capacity(header.doc_count);
    for _ in 0..header.doc_count {
        let (n, line) = next_line("document line")?;
        let doc: DocLine = serde_json::from_str(&line).map_err(|e| parse_err(n, e))?;
        let weights = doc.weights.into_iter().map(|(t, w)| (vec![t], w)).collect();
        ids.push(doc.id);
        vectors.push(TfIdfVector::from_weights(1, weights)?);
    }
    if let Some((i, line)) = lines.next() {
        if !line?.trim().is_empty() {
            return Err(Error::IndexFormat(format!("trailing data at line {}", i + 1)));
        }
    }
    TfIdfIndex::from_parts(header.mode, df, ids, vectors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::Article;
    use crate::retrieval::{build_index, retrieve_articles};
    use crate::textcore::TokenSeq;

    fn corpus() -> Vec<Article> {
        ["a b c", "b c d", "e f", "a a g"]
            .iter()
            .enumerate()
            .map(|(i, t)| Article {
                id: format!("d{i}"),
                title: TokenSeq::from_text(t),
                content: TokenSeq::from_text("x y"),
                category: "c".into(),
                comments: Vec::new(),
            })
            .collect()
    }

    fn saved(index: &TfIdfIndex) -> String {
        let mut buf = Vec::new();
        save_index(&mut buf, index).unwrap();
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn round_trip() {
        let corpus = corpus();
        let index = build_index(&corpus, IndexMode::TitleContent).unwrap();
        let text = saved(&index);
        let loaded = load_index(text.as_bytes()).unwrap();
        assert_eq!(loaded.mode(), IndexMode::TitleContent);
        assert_eq!(loaded.ids(), index.ids());
        assert_eq!(loaded.vectors(), index.vectors());
        assert_eq!(loaded.df(), index.df());
        assert_eq!(saved(&loaded), text);
        let q = &corpus[0];
        assert_eq!(
            retrieve_articles(&loaded, q, 3).unwrap(),
            retrieve_articles(&index, q, 3).unwrap()
        );
    }

    #[test]
    fn header_is_self_describing() {
        let index = build_index(&corpus(), IndexMode::Title).unwrap();
        let text = saved(&index);
        let header: serde_json::Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
        assert_eq!(header["format"], INDEX_FORMAT);
        assert_eq!(header["version"], 1);
        assert_eq!(header["mode"], "title");
        assert_eq!(header["doc_count"], 4);
    }

    #[test]
    fn tampering_detected() {
        let index = build_index(&corpus(), IndexMode::Title).unwrap();
        let text = saved(&index);
        let tampered = text.replacen("\"term\":\"a\"", "\"term\":\"A\"", 1);
        assert!(load_index(tampered.as_bytes()).is_err());
        let truncated: String = text.lines().take(3).collect::<Vec<_>>().join("\n");
        assert!(load_index(truncated.as_bytes()).is_err());
        let wrong_version = text.replacen("\"version\":1", "\"version\":2", 1);
        assert!(load_index(wrong_version.as_bytes()).is_err());
    }
}
