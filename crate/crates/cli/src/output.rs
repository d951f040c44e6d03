use std::io::Write;
use std::path::Path;

use clap::ValueEnum;
use quadcf::fmt::CsvRecord;
use serde_json::{Map, Number, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Rows of already formatted fields under a fixed header.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
    /// Columns always emitted as JSON strings, such as space-separated lists.
    pub text: Vec<String>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new(), text: Vec::new() }
    }

    pub fn from_records<R: CsvRecord>(records: &[R]) -> Self {
        let mut t = Self::new(R::header());
        t.rows = records.iter().map(CsvRecord::fields).collect();
        t
    }

    pub fn with_text(mut self, columns: &[&str]) -> Self {
        self.text = columns.iter().map(|s| s.to_string()).collect();
        self
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    /// Appends a column; `values` has one entry per row.
    pub fn add_column(&mut self, name: &str, values: Vec<String>) {
        assert_eq!(values.len(), self.rows.len());
        self.header.push(name.to_string());
        for (row, v) in self.rows.iter_mut().zip(values) {
            row.push(v);
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => {
                let mut out = self.header.join(",");
                out.push('\n');
                for row in &self.rows {
                    out.push_str(&row.join(","));
                    out.push('\n');
                }
                out
            }
            Format::Json => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let obj: Map<String, Value> = self
                            .header
                            .iter()
                            .zip(row)
                            .map(|(h, f)| {
                                let v = if self.text.contains(h) { Value::String(f.clone()) } else { json_field(f) };
                                (h.clone(), v)
                            })
                            .collect();
                        Value::Object(obj)
                    })
                    .collect();
                let mut out = serde_json::to_string_pretty(&Value::Array(rows)).expect("plain values");
                out.push('\n');
                out
            }
        }
    }
}

/// The JSON value of a CSV field: numbers and booleans keep their type,
/// empty fields become null.
fn json_field(f: &str) -> Value {
    if f.is_empty() {
        return Value::Null;
    }
    if let Ok(i) = f.parse::<i64>() {
        return Value::Number(i.into());
    }
    if let Ok(b) = f.parse::<bool>() {
        return Value::Bool(b);
    }
    if let Some(n) = f.parse::<f64>().ok().and_then(Number::from_f64) {
        return Value::Number(n);
    }
    Value::String(f.to_string())
}

pub fn emit(text: &str, path: Option<&Path>) -> std::io::Result<()> {
    match path {
        Some(p) => std::fs::write(p, text),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_mirrors_csv() {
        let mut t = Table::new(&["s", "name", "x", "ok", "gap", "list"]).with_text(&["list"]);
        t.push(vec!["1".into(), "1 2".into(), "0.5".into(), "true".into(), String::new(), "7".into()]);
        assert_eq!(t.render(Format::Csv), "s,name,x,ok,gap,list\n1,1 2,0.5,true,,7\n");
        let v: Value = serde_json::from_str(&t.render(Format::Json)).unwrap();
        assert_eq!(v[0]["s"], 1);
        assert_eq!(v[0]["name"], "1 2");
        assert_eq!(v[0]["x"], 0.5);
        assert_eq!(v[0]["ok"], true);
        assert!(v[0]["gap"].is_null());
        assert_eq!(v[0]["list"], "7");
        let keys: Vec<&String> = v[0].as_object().unwrap().keys().collect();
        assert_eq!(keys, ["s", "name", "x", "ok", "gap", "list"]);
    }
}
