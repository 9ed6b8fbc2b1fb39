//! Tabular results rendered as aligned text, CSV or JSON.

use std::io::Write;

use clap::ValueEnum;
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Field {
    Text(String),
    /// Already truncated for display; JSON emits it as a number.
    Number(String),
}

impl Field {
    fn as_str(&self) -> &str {
        match self {
            Field::Text(s) | Field::Number(s) => s,
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Field::Text(s) => Value::String(s.clone()),
            Field::Number(s) => s
                .parse::<i64>()
                .map(Value::from)
                .ok()
                .or_else(|| s.parse::<f64>().ok().and_then(serde_json::Number::from_f64).map(Value::Number))
                .unwrap_or_else(|| Value::String(s.clone())),
        }
    }
}

impl From<&str> for Field {
    fn from(s: &str) -> Self {
        Field::Text(s.to_string())
    }
}

impl From<String> for Field {
    fn from(s: String) -> Self {
        Field::Text(s)
    }
}

impl From<u64> for Field {
    fn from(v: u64) -> Self {
        Field::Number(v.to_string())
    }
}

impl From<i64> for Field {
    fn from(v: i64) -> Self {
        Field::Number(v.to_string())
    }
}

impl From<f64> for Field {
    fn from(v: f64) -> Self {
        Field::Number(trunc3(v))
    }
}

/// Three decimals, truncated toward zero.
pub fn trunc3(v: f64) -> String {
    if !v.is_finite() {
        return v.to_string();
    }
    // absorb binary noise such as 4.0909999... for 4.091
    let scaled = v * 1000.0;
    let t = (scaled + scaled.signum() * 1e-7).trunc() / 1000.0;
    let s = format!("{t:.3}");
    if s == "-0.000" {
        "0.000".to_string()
    } else {
        s
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Field>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table { columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Field>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn write(&self, fmt: OutputFormat, out: &mut dyn Write) -> std::io::Result<()> {
        match fmt {
            OutputFormat::Text => self.write_text(out),
            OutputFormat::Csv => self.write_csv(out),
            OutputFormat::Json => self.write_json(out),
        }
    }

    fn write_text(&self, out: &mut dyn Write) -> std::io::Result<()> {
        let mut widths: Vec<usize> = self.columns.iter().map(|c| c.len()).collect();
        for row in &self.rows {
            for (w, f) in widths.iter_mut().zip(row) {
                *w = (*w).max(f.as_str().len());
            }
        }
        let line = |cells: Vec<&str>| {
            let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
            padded.join("  ").trim_end().to_string()
        };
        writeln!(out, "{}", line(self.columns.iter().map(|c| c.as_str()).collect()))?;
        for row in &self.rows {
            writeln!(out, "{}", line(row.iter().map(|f| f.as_str()).collect()))?;
        }
        Ok(())
    }

    fn write_csv(&self, out: &mut dyn Write) -> std::io::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|f| f.as_str()))?;
        }
        w.flush()
    }

    fn write_json(&self, out: &mut dyn Write) -> std::io::Result<()> {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let m: Map<String, Value> = self.columns.iter().cloned().zip(row.iter().map(Field::to_json)).collect();
                Value::Object(m)
            })
            .collect();
        serde_json::to_writer_pretty(&mut *out, &Value::Array(rows))?;
        writeln!(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn truncation() {
        assert_eq!(trunc3(4.091), "4.091");
        assert_eq!(trunc3(2.7999), "2.799");
        assert_eq!(trunc3(-0.0004), "0.000");
        assert_eq!(trunc3(-1.2345), "-1.234");
        assert_eq!(trunc3(16.0), "16.000");
    }

    #[test]
    fn formats_agree() {
        let mut t = Table::new(&["desc", "count"]);
        t.push(vec!["posit:16:2:RE".into(), 26587u64.into()]);
        let mut csv = Vec::new();
        t.write(OutputFormat::Csv, &mut csv).unwrap();
        assert_eq!(String::from_utf8(csv).unwrap(), "desc,count\nposit:16:2:RE,26587\n");
        let mut js = Vec::new();
        t.write(OutputFormat::Json, &mut js).unwrap();
        let v: Value = serde_json::from_slice(&js).unwrap();
        assert_eq!(v[0]["count"], 26587);
        assert_eq!(v[0]["desc"], "posit:16:2:RE");
    }
}
