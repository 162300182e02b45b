//! Tabular results with deterministic serialization: fixed column schemas,
//! fixed row order, floats at 17 significant digits so output files are
//! byte-identical across runs of the same build.

use std::io::Write;
use std::path::Path;

use crate::error::Error;
use crate::Result;

/// One table cell.
#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(i64),
    Text(String),
}

/// 17 significant digits round-trips every finite double exactly.
pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        "NaN".to_string()
    } else {
        format!("{:.16e}", x)
    }
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Float(x) => format_float(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn to_json(&self) -> serde_json::Value {
        match self {
            Cell::Float(x) if x.is_nan() => serde_json::Value::Null,
            Cell::Float(x) => serde_json::json!(x),
            Cell::Int(i) => serde_json::json!(i),
            Cell::Text(s) => serde_json::json!(s),
        }
    }
}

/// Output format for result files.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl std::str::FromStr for OutputFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(Error::InvalidInput(format!(
                "unknown format '{other}' (expected csv|json)"
            ))),
        }
    }
}

/// A tabular sweep record: metadata, a fixed column schema, and rows.
#[derive(Clone, Debug, Default)]
pub struct SweepResult {
    /// Resolved configuration and engine version, in insertion order.
    pub metadata: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    /// Per-run notes (nudged sweep points, per-row failures).
    pub notes: Vec<String>,
}

impl SweepResult {
    pub fn new(columns: Vec<String>) -> Self {
        Self {
            metadata: Vec::new(),
            columns,
            rows: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn push_meta(&mut self, key: impl Into<String>, value: impl Into<String>) {
        self.metadata.push((key.into(), value.into()));
    }

    pub fn push_note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    pub fn push_row(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// Float value at (row, col); NaN for non-float cells.
    pub fn float_at(&self, row: usize, col: usize) -> f64 {
        match &self.rows[row][col] {
            Cell::Float(v) => *v,
            Cell::Int(i) => *i as f64,
            Cell::Text(_) => f64::NAN,
        }
    }

    pub fn to_csv_string(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.metadata {
            out.push_str(&format!("# {k} = {v}\n"));
        }
        for note in &self.notes {
            out.push_str(&format!("# note: {note}\n"));
        }
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::render).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json_string(&self) -> String {
        let metadata: serde_json::Map<String, serde_json::Value> = self
            .metadata
            .iter()
            .map(|(k, v)| (k.clone(), serde_json::json!(v)))
            .collect();
        let rows: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|row| serde_json::Value::Array(row.iter().map(Cell::to_json).collect()))
            .collect();
        let value = serde_json::json!({
            "metadata": metadata,
            "notes": self.notes,
            "columns": self.columns,
            "rows": rows,
        });
        serde_json::to_string_pretty(&value).expect("json serialization cannot fail")
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Csv => self.to_csv_string(),
            OutputFormat::Json => self.to_json_string(),
        }
    }
}

/// Write a result to `path` in the requested format.
pub fn write_output(result: &SweepResult, path: &Path, format: OutputFormat) -> Result<()> {
    let mut file = std::fs::File::create(path)?;
    file.write_all(result.render(format).as_bytes())?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> SweepResult {
        let mut r = SweepResult::new(vec!["x".into(), "y".into(), "tag".into()]);
        r.push_meta("command", "demo");
        r.push_row(vec![Cell::Float(1.0), Cell::Float(0.1), Cell::Text("a".into())]);
        r.push_row(vec![Cell::Float(f64::NAN), Cell::Int(3), Cell::Text("b".into())]);
        r
    }

    #[test]
    fn csv_layout() {
        let text = sample().to_csv_string();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "# command = demo");
        assert_eq!(lines.next().unwrap(), "x,y,tag");
        assert!(lines.next().unwrap().starts_with("1.0000000000000000e0,"));
        assert!(lines.next().unwrap().starts_with("NaN,3,b"));
    }

    #[test]
    fn float_format_round_trips() {
        for &x in &[1.0 / 3.0, 2.0, 1e-17, -1234.5678901234567, 6.02e23] {
            let s = format_float(x);
            let back: f64 = s.parse().unwrap();
            assert_eq!(back, x, "{s}");
        }
    }

    #[test]
    fn rendering_is_reproducible() {
        let a = sample().to_csv_string();
        let b = sample().to_csv_string();
        assert_eq!(a, b);
        let ja = sample().to_json_string();
        let jb = sample().to_json_string();
        assert_eq!(ja, jb);
        assert!(ja.contains("\"rows\""));
    }

    #[test]
    fn write_and_read_back() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.csv");
        write_output(&sample(), &path, OutputFormat::Csv).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text, sample().to_csv_string());
    }
}
