//! Result tables rendered as text, CSV or JSON.
//!
//! Numbers are rounded to strings once; CSV and text print those strings
//! and JSON parses them back, so the three formats carry the same values.

use serde_json::{Map, Number, Value as Json};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    /// A real number; `decimals` overrides the table precision.
    Num { value: f64, decimals: Option<usize> },
    Int(i64),
    Text(String),
    Bool(bool),
}

impl Value {
    pub fn num(value: f64) -> Self {
        Value::Num { value, decimals: None }
    }

    pub fn fixed(value: f64, decimals: usize) -> Self {
        Value::Num { value, decimals: Some(decimals) }
    }

    /// As many decimals as the shortest round-trip form of `value` needs,
    /// for inputs such as grid coordinates that should print as typed.
    pub fn shortest(value: f64) -> Self {
        let s = value.to_string();
        let decimals = s.split_once('.').map_or(0, |(_, f)| f.len());
        Value::fixed(value, decimals)
    }

    pub fn int(value: usize) -> Self {
        Value::Int(value as i64)
    }

    pub fn text(value: impl Into<String>) -> Self {
        Value::Text(value.into())
    }

    fn render(&self, precision: usize) -> String {
        match self {
            Value::Num { value, decimals } => round(*value, decimals.unwrap_or(precision)),
            Value::Int(v) => v.to_string(),
            Value::Text(s) => s.clone(),
            Value::Bool(b) => b.to_string(),
        }
    }

    fn to_json(&self, precision: usize) -> Json {
        match self {
            Value::Num { .. } => self
                .render(precision)
                .parse::<f64>()
                .ok()
                .and_then(Number::from_f64)
                .map_or(Json::Null, Json::Number),
            Value::Int(v) => Json::from(*v),
            Value::Text(s) => Json::from(s.as_str()),
            Value::Bool(b) => Json::from(*b),
        }
    }

    fn is_numeric(&self) -> bool {
        matches!(self, Value::Num { .. } | Value::Int(_))
    }
}

/// Fixed-point rounding without a negative sign on zero.
pub fn round(value: f64, decimals: usize) -> String {
    if !value.is_finite() {
        return value.to_string();
    }
    let s = format!("{value:.decimals$}");
    match s.strip_prefix('-') {
        Some(rest) if rest.bytes().all(|b| b == b'0' || b == b'.') => rest.to_string(),
        _ => s,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Layout {
    /// One object; text output lists `name  value` lines.
    Record,
    Rows,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    columns: Vec<String>,
    rows: Vec<Vec<Value>>,
    layout: Layout,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self { columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new(), layout: Layout::Rows }
    }

    /// A single named record.
    pub fn record(fields: Vec<(String, Value)>) -> Self {
        let (columns, row) = fields.into_iter().unzip();
        Self { columns, rows: vec![row], layout: Layout::Record }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<Value>] {
        &self.rows
    }

    pub fn render(&self, format: Format, precision: usize) -> String {
        match format {
            Format::Text => self.text(precision),
            Format::Csv => self.csv(precision),
            Format::Json => self.json(precision),
        }
    }

    fn text(&self, precision: usize) -> String {
        let cells: Vec<Vec<String>> = self.rows.iter().map(|r| r.iter().map(|v| v.render(precision)).collect()).collect();
        let mut out = String::new();
        if self.layout == Layout::Record {
            let w = self.columns.iter().map(|c| c.chars().count()).max().unwrap_or(0);
            for (c, v) in self.columns.iter().zip(&cells[0]) {
                out.push_str(&format!("{c:<w$}  {v}\n"));
            }
            return out;
        }
        let widths: Vec<usize> = (0..self.columns.len())
            .map(|j| cells.iter().map(|r| r[j].chars().count()).chain([self.columns[j].chars().count()]).max().unwrap_or(0))
            .collect();
        let numeric: Vec<bool> = (0..self.columns.len())
            .map(|j| !self.rows.is_empty() && self.rows.iter().all(|r| r[j].is_numeric()))
            .collect();
        let line = |fields: &[String]| {
            let parts: Vec<String> = fields
                .iter()
                .enumerate()
                .map(|(j, f)| if numeric[j] { format!("{f:>w$}", w = widths[j]) } else { format!("{f:<w$}", w = widths[j]) })
                .collect();
            parts.join("  ").trim_end().to_string() + "\n"
        };
        out.push_str(&line(&self.columns));
        for r in &cells {
            out.push_str(&line(r));
        }
        out
    }

    fn csv(&self, precision: usize) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        // Writing to memory cannot fail.
        w.write_record(&self.columns).expect("in-memory CSV");
        for r in &self.rows {
            w.write_record(r.iter().map(|v| v.render(precision))).expect("in-memory CSV");
        }
        String::from_utf8(w.into_inner().expect("in-memory CSV")).expect("UTF-8 CSV")
    }

    fn json(&self, precision: usize) -> String {
        let object = |r: &Vec<Value>| {
            Json::Object(self.columns.iter().cloned().zip(r.iter().map(|v| v.to_json(precision))).collect::<Map<_, _>>())
        };
        let doc = match self.layout {
            Layout::Record => object(&self.rows[0]),
            Layout::Rows => Json::Array(self.rows.iter().map(object).collect()),
        };
        serde_json::to_string_pretty(&doc).expect("JSON of plain values") + "\n"
    }
}
