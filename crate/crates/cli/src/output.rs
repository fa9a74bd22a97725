//! Tables and their CSV and JSON encodings.
//!
//! Numbers are written as `{:.16e}` (17 significant digits) in both
//! encodings, so each format parses back to the same `f64` bit pattern.

use serde::ser::{SerializeMap, SerializeSeq};
use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

use crate::config::{Format, Settings};

pub const PROGRAM: &str = "sphere-casimir";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
    Empty,
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Cell::Empty, Cell::Num)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_owned())
    }
}

/// Round-trip formatting with 17 significant digits.
pub fn format_number(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(x) => format_number(*x),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }
}

impl Serialize for Cell {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Cell::Num(x) if x.is_finite() => {
                RawValue::from_string(format_number(*x)).map_err(serde::ser::Error::custom)?.serialize(serializer)
            }
            Cell::Num(_) | Cell::Empty => serializer.serialize_none(),
            Cell::Text(s) => serializer.serialize_str(s),
        }
    }
}

/// Result of one command: scalar metadata, diagnostics and a table.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: &'static str,
    pub meta: Vec<(String, Cell)>,
    pub warnings: Vec<String>,
    pub notes: Vec<String>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Report {
    pub fn new(command: &'static str, columns: Vec<&'static str>) -> Self {
        Report { command, meta: Vec::new(), warnings: Vec::new(), notes: Vec::new(), columns, rows: Vec::new() }
    }

    pub fn meta(&mut self, key: &str, value: impl Into<Cell>) {
        self.meta.push((key.to_owned(), value.into()));
    }

    pub fn render(&self, settings: &Settings) -> String {
        match settings.format {
            Format::Csv => self.to_csv(settings),
            Format::Json => self.to_json(settings),
        }
    }

    pub fn to_csv(&self, settings: &Settings) -> String {
        let mut out = format!("# {PROGRAM} {VERSION}\n# command = \"{}\"\n", self.command);
        for line in settings.to_toml().lines() {
            out.push_str(&format!("# {line}\n"));
        }
        for (key, value) in &self.meta {
            out.push_str(&format!("# {key} = {}\n", value.csv()));
        }
        for w in &self.warnings {
            out.push_str(&format!("# warning: {w}\n"));
        }
        for n in &self.notes {
            out.push_str(&format!("# note: {n}\n"));
        }
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self, settings: &Settings) -> String {
        let doc = JsonReport {
            program: PROGRAM,
            version: VERSION,
            command: self.command,
            config: settings,
            meta: Pairs(&self.meta),
            warnings: &self.warnings,
            notes: &self.notes,
            columns: &self.columns,
            rows: Rows(&self.rows),
        };
        let mut text = serde_json::to_string_pretty(&doc).expect("report always serializes");
        text.push('\n');
        text
    }
}

#[derive(Serialize)]
struct JsonReport<'a> {
    program: &'static str,
    version: &'static str,
    command: &'static str,
    config: &'a Settings,
    meta: Pairs<'a>,
    warnings: &'a [String],
    notes: &'a [String],
    columns: &'a [&'static str],
    rows: Rows<'a>,
}

struct Pairs<'a>(&'a [(String, Cell)]);

impl Serialize for Pairs<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.0.len()))?;
        for (k, v) in self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

/// Rows as arrays, one row per line.
struct Rows<'a>(&'a [Vec<Cell>]);

impl Serialize for Rows<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.0.len()))?;
        for row in self.0 {
            let line = serde_json::to_string(row).map_err(serde::ser::Error::custom)?;
            seq.serialize_element(&RawValue::from_string(line).map_err(serde::ser::Error::custom)?)?;
        }
        seq.end()
    }
}
