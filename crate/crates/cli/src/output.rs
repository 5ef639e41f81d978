//! CSV tables and the JSON run report.
//!
//! CSV dialect: comma separator, header row, LF line endings, floats with
//! 17 significant digits.

use std::fs;
use std::path::{Path, PathBuf};

use serde_json::Value;

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Self::Num(x) => format_float(*x),
            Self::Int(i) => i.to_string(),
            Self::Text(s) => s.clone(),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Self::Num(x)
    }
}

impl From<usize> for Cell {
    fn from(i: usize) -> Self {
        Self::Int(i as i64)
    }
}

impl From<i64> for Cell {
    fn from(i: i64) -> Self {
        Self::Int(i)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Self::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Self::Text(s)
    }
}

/// 17 significant digits in scientific notation; round-trips every f64.
pub fn format_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    /// File stem; the table is written to `<stem>.csv`.
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: impl Into<String>, header: &[&str]) -> Self {
        Self {
            name: name.into(),
            header: header.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn with_header(name: impl Into<String>, header: Vec<String>) -> Self {
        Self {
            name: name.into(),
            header,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len(), "row width for table {}", self.name);
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Result<Vec<u8>, CliError> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render))?;
        }
        w.into_inner().map_err(|e| CliError::Io {
            path: PathBuf::from(format!("{}.csv", self.name)),
            source: e.into_error(),
        })
    }

    /// Two whitespace-separated numeric columns per line, for gnuplot.
    pub fn to_dat(&self, x: usize, y: usize) -> String {
        let mut out = format!("# {} {}\n", self.header[x], self.header[y]);
        for row in &self.rows {
            out.push_str(&format!("{} {}\n", row[x].render(), row[y].render()));
        }
        out
    }
}

/// Output of one scenario: a JSON summary and zero or more tables.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub summary: Value,
    pub tables: Vec<Table>,
    /// `(table, x column, y column)` streams for gnuplot.
    pub plots: Vec<(String, usize, usize)>,
}

impl Outcome {
    pub fn new(summary: Value) -> Self {
        Self {
            summary,
            tables: Vec::new(),
            plots: Vec::new(),
        }
    }

    pub fn table(&self, name: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.name == name)
    }
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    fs::write(path, bytes).map_err(|e| CliError::Io {
        path: path.to_path_buf(),
        source: e,
    })
}

/// Writes every table and the report into `dir`, returning the paths.
pub fn write_outputs(dir: &Path, outcome: &Outcome, report: &Value, gnuplot: bool) -> Result<Vec<PathBuf>, CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::Io {
        path: dir.to_path_buf(),
        source: e,
    })?;
    let mut written = Vec::new();
    for t in &outcome.tables {
        let path = dir.join(format!("{}.csv", t.name));
        write_file(&path, &t.to_csv()?)?;
        written.push(path);
    }
    if gnuplot {
        for (name, x, y) in &outcome.plots {
            if let Some(t) = outcome.table(name) {
                let path = dir.join(format!("{name}_{}.dat", t.header[*y]));
                write_file(&path, t.to_dat(*x, *y).as_bytes())?;
                written.push(path);
            }
        }
    }
    let path = dir.join("report.json");
    let mut text = serde_json::to_string_pretty(report)?;
    text.push('\n');
    write_file(&path, text.as_bytes())?;
    written.push(path);
    Ok(written)
}
