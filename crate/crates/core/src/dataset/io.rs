use std::collections::HashSet;
use std::io::{BufRead, Write};

use serde_json::{Map, Value};

use super::{Article, CommentRecord};
use crate::error::{Error, Result};
use crate::textcore::TokenSeq;

/// Streams articles from canonical JSONL, one object per line. Blank lines
/// are skipped; duplicate ids are rejected.
pub struct ArticleReader<R> {
    lines: std::io::Lines<R>,
    line_no: usize,
    seen: HashSet<String>,
}

pub fn read_articles<R: BufRead>(reader: R) -> ArticleReader<R> {
    ArticleReader {
        lines: reader.lines(),
        line_no: 0,
        seen: HashSet::new(),
    }
}

impl<R: BufRead> Iterator for ArticleReader<R> {
    type Item = Result<Article>;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            let line = match self.lines.next()? {
                Ok(line) => line,
                Err(e) => return Some(Err(e.into())),
            };
            self.line_no += 1;
            if line.trim().is_empty() {
                continue;
            }
            let line_no = self.line_no;
            let parsed = parse_line(&line).map_err(|message| Error::Parse { line: line_no, message });
            return Some(parsed.and_then(|article| {
                if self.seen.insert(article.id.clone()) {
                    Ok(article)
                } else {
                    Err(Error::DuplicateId {
                        line: line_no,
                        id: article.id,
                    })
                }
            }));
        }
    }
}

pub fn parse_corpus<R: BufRead>(reader: R) -> Result<Vec<Article>> {
    read_articles(reader).collect()
}

pub fn write_article<W: Write>(mut writer: W, article: &Article) -> Result<()> {
    serde_json::to_writer(&mut writer, article)?;
    writer.write_all(b"\n")?;
    Ok(())
}

pub fn write_corpus<W: Write>(mut writer: W, articles: &[Article]) -> Result<()> {
    for a in articles {
        write_article(&mut writer, a)?;
    }
    Ok(())
}

type FieldResult<T> = std::result::Result<T, String>;

fn parse_line(line: &str) -> FieldResult<Article> {
    let value: Value = serde_json::from_str(line).map_err(|e| format!("invalid JSON: {e}"))?;
    let obj = value.as_object().ok_or("record is not a JSON object")?;
    let id = string_field(obj, "id")?;
    let title = tokens_field(obj, "title", "title")?;
    if title.is_empty() {
        return Err("title: must not be empty".into());
    }
    let content = tokens_field(obj, "content", "content")?;
    let category = string_field(obj, "category")?;
    let comments = obj
        .get("comments")
        .ok_or("comments: missing field")?
        .as_array()
        .ok_or("comments: expected an array")?
        .iter()
        .enumerate()
        .map(|(i, c)| parse_comment(c, i))
        .collect::<FieldResult<Vec<_>>>()?;
    Ok(Article {
        id,
        title,
        content,
        category,
        comments,
    })
}

fn string_field(obj: &Map<String, Value>, name: &str) -> FieldResult<String> {
    match obj.get(name) {
        Some(Value::String(s)) => Ok(s.clone()),
        Some(_) => Err(format!("{name}: expected a string")),
        None => Err(format!("{name}: missing field")),
    }
}

fn tokens_field(obj: &Map<String, Value>, name: &str, path: &str) -> FieldResult<TokenSeq> {
    let items = obj
        .get(name)
        .ok_or_else(|| format!("{path}: missing field"))?
        .as_array()
        .ok_or_else(|| format!("{path}: expected an array of tokens"))?;
    let tokens = items
        .iter()
        .enumerate()
        .map(|(i, t)| match t {
            Value::String(s) if !s.is_empty() && !s.chars().any(char::is_whitespace) => Ok(s.clone()),
            Value::String(_) => Err(format!("{path}[{i}]: tokens must be nonempty without whitespace")),
            _ => Err(format!("{path}[{i}]: expected a string")),
        })
        .collect::<FieldResult<Vec<_>>>()?;
    TokenSeq::new(tokens).map_err(|e| format!("{path}: {e}"))
}

fn parse_comment(value: &Value, idx: usize) -> FieldResult<CommentRecord> {
    let path = format!("comments[{idx}]");
    let obj = value.as_object().ok_or_else(|| format!("{path}: expected an object"))?;
    let tokens = tokens_field(obj, "tokens", &format!("{path}.tokens"))?;
    let upvotes = match obj.get("upvotes") {
        Some(v) => v
            .as_u64()
            .ok_or_else(|| format!("{path}.upvotes: expected a non-negative integer, got {v}"))?,
        None => return Err(format!("{path}.upvotes: missing field")),
    };
    let grades = match obj.get("grades") {
        None | Some(Value::Null) => None,
        Some(Value::Array(items)) if items.len() == 2 => {
            let mut grades = [0u8; 2];
            for (k, g) in items.iter().enumerate() {
                grades[k] = g
                    .as_u64()
                    .filter(|g| (1..=5).contains(g))
                    .ok_or_else(|| format!("{path}.grades[{k}]: expected an integer grade in 1..=5, got {g}"))?
                    as u8;
            }
            Some(grades)
        }
        Some(_) => return Err(format!("{path}.grades: expected exactly two grades")),
    };
    Ok(CommentRecord { tokens, upvotes, grades })
}
