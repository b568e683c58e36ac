//! Report rendering shared by every command.
//!
//! JSONL: a header line `{"header":{...}}`, then one object per row with a
//! leading `"section"` key and the section's columns in order. Table: `#`
//! comment lines for the header, then one aligned block per section.

use std::fmt::Write as _;
use std::io::Write;

use anyhow::Result;
use clap::ValueEnum;
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Jsonl,
    Table,
}

impl Format {
    pub fn name(self) -> &'static str {
        match self {
            Format::Jsonl => "jsonl",
            Format::Table => "table",
        }
    }
}

pub struct Section {
    pub name: &'static str,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
    /// Render as statistic-per-row in table mode.
    pub transpose: bool,
}

impl Section {
    pub fn new(name: &'static str, columns: impl IntoIterator<Item = impl Into<String>>) -> Self {
        Self {
            name,
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
            transpose: false,
        }
    }

    pub fn transposed(mut self) -> Self {
        self.transpose = true;
        self
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

pub struct Report {
    pub command: &'static str,
    pub config: Map<String, Value>,
    pub sections: Vec<Section>,
}

impl Report {
    pub fn new(command: &'static str, config: Map<String, Value>) -> Self {
        Self {
            command,
            config,
            sections: Vec::new(),
        }
    }

    pub fn write(&self, format: Format, out: &mut dyn Write) -> Result<()> {
        let text = match format {
            Format::Jsonl => self.jsonl()?,
            Format::Table => self.table(),
        };
        out.write_all(text.as_bytes())?;
        out.flush()?;
        Ok(())
    }

    fn header(&self) -> Value {
        serde_json::json!({
            "command": self.command,
            "version": env!("CARGO_PKG_VERSION"),
            "config": self.config,
        })
    }

    fn jsonl(&self) -> Result<String> {
        let mut out = String::new();
        writeln!(out, "{{\"header\":{}}}", serde_json::to_string(&self.header())?)?;
        for s in &self.sections {
            for row in &s.rows {
                write!(out, "{{\"section\":{}", serde_json::to_string(s.name)?)?;
                for (c, v) in s.columns.iter().zip(row) {
                    write!(out, ",{}:{}", serde_json::to_string(c)?, serde_json::to_string(v)?)?;
                }
                out.push_str("}\n");
            }
        }
        Ok(out)
    }

    fn table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# command: {}", self.command);
        let _ = writeln!(out, "# version: {}", env!("CARGO_PKG_VERSION"));
        for (k, v) in &self.config {
            let _ = writeln!(out, "# {k}: {}", cell(v));
        }
        for s in &self.sections {
            out.push('\n');
            let _ = writeln!(out, "[{}]", s.name);
            let grid: Vec<Vec<String>> = if s.transpose {
                s.columns
                    .iter()
                    .enumerate()
                    .map(|(i, c)| std::iter::once(c.clone()).chain(s.rows.iter().map(|r| cell(&r[i]))).collect())
                    .collect()
            } else {
                std::iter::once(s.columns.clone())
                    .chain(s.rows.iter().map(|r| r.iter().map(cell).collect()))
                    .collect()
            };
            aligned(&mut out, &grid);
        }
        out
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        Value::Number(n) if n.is_f64() => format!("{:.6}", n.as_f64().unwrap_or(f64::NAN)),
        other => other.to_string(),
    }
}

fn aligned(out: &mut String, grid: &[Vec<String>]) {
    let cols = grid.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|c| grid.iter().filter_map(|r| r.get(c)).map(|s| s.chars().count()).max().unwrap_or(0))
        .collect();
    for row in grid {
        let mut line = String::new();
        for (c, s) in row.iter().enumerate() {
            if c > 0 {
                line.push_str("  ");
            }
            let _ = write!(line, "{s:<w$}", w = widths[c]);
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
}

/// A float as a JSON value; non-finite values become null.
pub fn num(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        let mut config = Map::new();
        config.insert("seed".into(), 7.into());
        let mut r = Report::new("demo", config);
        let mut s = Section::new("rows", ["name", "value"]);
        s.push(vec!["a".into(), num(0.5)]);
        s.push(vec!["bb".into(), num(1.0)]);
        r.sections.push(s);
        r
    }

    #[test]
    fn jsonl_keeps_column_order() {
        let text = sample().jsonl().unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert!(lines[0].starts_with("{\"header\":"));
        assert_eq!(lines[1], r#"{"section":"rows","name":"a","value":0.5}"#);
    }

    #[test]
    fn table_aligns_columns() {
        let text = sample().table();
        assert!(text.contains("# seed: 7\n"));
        assert!(text.contains("name  value\na     0.500000\nbb    1.000000\n"));
    }
}
