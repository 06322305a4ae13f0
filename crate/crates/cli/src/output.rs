//! Tables rendered as CSV (with `#` metadata lines) or JSON.

use std::io::Write;

use anyhow::Result;
use serde_json::{json, Map, Number, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => anyhow::bail!("unknown output format '{other}' (expected csv or json)"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
    Bool(bool),
    Empty,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(v.into())
    }
}

impl From<i32> for Cell {
    fn from(v: i32) -> Self {
        Cell::Int(v.into())
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.into())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Empty, Into::into)
    }
}

impl Cell {
    fn text(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => fmt_g15(*v),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => json!(v),
            Cell::Float(v) => float_json(*v),
            Cell::Text(s) => json!(s),
            Cell::Bool(b) => json!(b),
            Cell::Empty => Value::Null,
        }
    }
}

/// `%.15g`: 15 significant digits, shortest of fixed and scientific
/// notation, trailing zeros removed. Independent of locale.
pub fn fmt_g15(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return "0".into();
    }
    let sci = format!("{v:.14e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..15).contains(&exp) {
        let decimals = (14 - exp).max(0) as usize;
        trim_zeros(&format!("{v:.decimals$}"))
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs())
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

/// The JSON number with the same decimal text as the CSV cell.
pub fn float_json(v: f64) -> Value {
    if !v.is_finite() {
        return Value::Null;
    }
    let rounded: f64 = fmt_g15(v).parse().expect("formatted float parses");
    Number::from_f64(rounded).map_or(Value::Null, Value::Number)
}

#[derive(Debug, Clone)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    /// Leading `# key: value` lines of the CSV; `meta` entries of the JSON.
    pub metadata: Vec<(String, Value)>,
    pub inputs: Map<String, Value>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>, inputs: Map<String, Value>) -> Self {
        Table { columns, rows: Vec::new(), metadata: Vec::new(), inputs }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn meta(&mut self, key: &str, value: impl Into<Value>) {
        self.metadata.push((key.to_string(), value.into()));
    }

    pub fn meta_float(&mut self, key: &str, value: f64) {
        self.meta(key, float_json(value));
    }

    pub fn write(&self, format: Format, tolerances: &Map<String, Value>, out: &mut dyn Write) -> Result<()> {
        match format {
            Format::Csv => self.write_csv(out),
            Format::Json => self.write_json(tolerances, out),
        }
    }

    fn write_csv(&self, out: &mut dyn Write) -> Result<()> {
        writeln!(out, "# curvaspec {}", env!("CARGO_PKG_VERSION"))?;
        for (key, value) in &self.inputs {
            writeln!(out, "# input {key}: {}", meta_text(value))?;
        }
        for (key, value) in &self.metadata {
            match value {
                Value::Array(items) => {
                    for item in items {
                        writeln!(out, "# {key}: {}", meta_text(item))?;
                    }
                }
                _ => writeln!(out, "# {key}: {}", meta_text(value))?,
            }
        }
        let mut writer = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
        writer.write_record(&self.columns)?;
        for row in &self.rows {
            writer.write_record(row.iter().map(Cell::text))?;
        }
        writer.flush()?;
        Ok(())
    }

    fn write_json(&self, tolerances: &Map<String, Value>, out: &mut dyn Write) -> Result<()> {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let object: Map<String, Value> =
                    self.columns.iter().zip(row).map(|(c, v)| (c.to_string(), v.json())).collect();
                Value::Object(object)
            })
            .collect();
        let mut meta = Map::new();
        meta.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
        meta.insert("tolerances".into(), Value::Object(tolerances.clone()));
        for (key, value) in &self.metadata {
            meta.insert(key.clone(), value.clone());
        }
        let doc = json!({ "inputs": self.inputs, "rows": rows, "meta": meta });
        serde_json::to_writer_pretty(&mut *out, &doc)?;
        writeln!(out)?;
        Ok(())
    }
}

fn meta_text(value: &Value) -> String {
    match value {
        Value::String(s) => s.clone(),
        Value::Number(n) => n.as_f64().map_or_else(|| n.to_string(), |f| {
            if n.is_f64() {
                fmt_g15(f)
            } else {
                n.to_string()
            }
        }),
        Value::Null => String::new(),
        Value::Object(map) => map.iter().map(|(k, v)| format!("{k}={}", meta_text(v))).collect::<Vec<_>>().join(" "),
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g15_formatting() {
        assert_eq!(fmt_g15(1.0), "1");
        assert_eq!(fmt_g15(-2.5), "-2.5");
        assert_eq!(fmt_g15(1.618033988749895), "1.61803398874989");
        assert_eq!(fmt_g15(0.1 + 0.2), "0.3");
        assert_eq!(fmt_g15(1e-7), "1e-07");
        assert_eq!(fmt_g15(123456789012345680.0), "1.23456789012346e+17");
        assert_eq!(fmt_g15(0.0001), "0.0001");
        assert_eq!(fmt_g15(f64::NAN), "nan");
        assert_eq!(fmt_g15(99999.99999999999), "100000");
    }

    #[test]
    fn json_numbers_match_csv_text() {
        for v in [std::f64::consts::PI, 1e-300, -7.25e12, 0.3] {
            let j = float_json(v);
            let text = fmt_g15(v);
            assert_eq!(j.as_f64().unwrap(), text.parse::<f64>().unwrap());
        }
        assert_eq!(float_json(f64::INFINITY), Value::Null);
    }

    #[test]
    fn csv_has_metadata_header_and_lf() {
        let mut t = Table::new(vec!["a", "b"], Map::new());
        t.meta("note", "x, y");
        t.push(vec![Cell::Float(0.5), Cell::Text("p,q".into())]);
        let mut buf = Vec::new();
        t.write(Format::Csv, &Map::new(), &mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert!(!s.contains('\r'));
        assert!(s.ends_with("0.5,\"p,q\"\n"), "{s}");
        assert!(s.contains("# note: x, y\na,b\n"));
    }
}
