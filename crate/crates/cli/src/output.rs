//! CSV and JSON emitters plus the matching readers.
//!
//! CSV files start with `#`-prefixed metadata lines (tool, command and the
//! full effective config as one JSON line), followed by a header row and data
//! rows. Floats are written with 17 significant digits so they read back
//! bit-exact.

use std::io::Write;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::CliError;

pub const TOOL: &str = concat!("pcmap ", env!("CARGO_PKG_VERSION"));

/// 17 significant digits in scientific notation.
pub fn fmt_num(v: f64) -> String {
    format!("{v:.16e}")
}

/// A rectangular result with its provenance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub command: String,
    pub config: Value,
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Cell {
    Int(u64),
    Num(f64),
    Text(String),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Num(v) => fmt_num(*v),
            Cell::Text(s) => s.clone(),
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Num(v) => Some(*v),
            Cell::Int(v) => Some(*v as f64),
            Cell::Text(s) => s.parse().ok(),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as u64)
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl Table {
    pub fn new(command: &str, config: Value, header: &[&str]) -> Self {
        Self {
            command: command.to_string(),
            config,
            header: header.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn write_csv(&self, out: &mut dyn Write) -> Result<(), CliError> {
        writeln!(out, "# tool: {TOOL}")?;
        writeln!(out, "# command: {}", self.command)?;
        writeln!(out, "# config: {}", serde_json::to_string(&self.config)?)?;
        let mut w = csv::WriterBuilder::new().from_writer(out);
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_json(&self, out: &mut dyn Write) -> Result<(), CliError> {
        let rows: Vec<serde_json::Map<String, Value>> = self
            .rows
            .iter()
            .map(|row| {
                self.header
                    .iter()
                    .cloned()
                    .zip(row.iter().map(|c| serde_json::to_value(c).unwrap()))
                    .collect()
            })
            .collect();
        let doc = serde_json::json!({
            "tool": TOOL,
            "command": self.command,
            "config": self.config,
            "data": rows,
        });
        serde_json::to_writer_pretty(&mut *out, &doc)?;
        writeln!(out)?;
        Ok(())
    }
}

/// A JSON document: tool, command, config and an arbitrary `data` payload.
pub fn write_json_doc(
    out: &mut dyn Write,
    command: &str,
    config: &Value,
    data: &Value,
) -> Result<(), CliError> {
    let doc = serde_json::json!({
        "tool": TOOL,
        "command": command,
        "config": config,
        "data": data,
    });
    serde_json::to_writer_pretty(&mut *out, &doc)?;
    writeln!(out)?;
    Ok(())
}

/// A CSV file read back: metadata, header and numeric-or-text cells.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedCsv {
    pub tool: Option<String>,
    pub command: Option<String>,
    pub config: Option<Value>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl ParsedCsv {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.header.iter().position(|h| h == name)?;
        self.rows.iter().map(|r| r[idx].parse().ok()).collect()
    }
}

pub fn read_csv(text: &str) -> Result<ParsedCsv, CliError> {
    let mut tool = None;
    let mut command = None;
    let mut config = None;
    for line in text.lines().filter_map(|l| l.strip_prefix("# ")) {
        if let Some(v) = line.strip_prefix("tool: ") {
            tool = Some(v.to_string());
        } else if let Some(v) = line.strip_prefix("command: ") {
            command = Some(v.to_string());
        } else if let Some(v) = line.strip_prefix("config: ") {
            config = Some(serde_json::from_str(v)?);
        }
    }
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let header = reader.headers()?.iter().map(str::to_string).collect();
    let rows = reader
        .records()
        .map(|r| r.map(|rec| rec.iter().map(str::to_string).collect()))
        .collect::<Result<_, _>>()?;
    Ok(ParsedCsv {
        tool,
        command,
        config,
        header,
        rows,
    })
}

/// Lines of a CSV document that are not metadata, the part that must be
/// byte-stable across runs.
pub fn data_payload(text: &str) -> String {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| format!("{l}\n"))
        .collect()
}
