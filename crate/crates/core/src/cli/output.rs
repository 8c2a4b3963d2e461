use std::io::Write;

use clap::ValueEnum;
use serde::Serialize;
use serde_json::{Map, Value};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

/// One command's result. Rows share the column list; cells are strings,
/// integers, booleans or null.
#[derive(Clone, Debug, Serialize)]
pub struct OutputRecord {
    pub schema: u32,
    pub command: String,
    pub parameters: Map<String, Value>,
    pub rows: Vec<Map<String, Value>>,
    pub diagnostics: Map<String, Value>,
    #[serde(skip)]
    columns: Vec<String>,
}

impl OutputRecord {
    pub fn new(command: &str, columns: &[&str]) -> Self {
        Self {
            schema: SCHEMA_VERSION,
            command: command.to_string(),
            parameters: Map::new(),
            rows: Vec::new(),
            diagnostics: Map::new(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
        }
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn param(&mut self, name: &str, value: impl Into<Value>) {
        self.parameters.insert(name.to_string(), value.into());
    }

    pub fn diagnostic(&mut self, name: &str, value: impl Into<Value>) {
        self.diagnostics.insert(name.to_string(), value.into());
    }

    /// Appends a row; cells are matched to columns by position.
    pub fn push_row(&mut self, cells: Vec<Value>) {
        debug_assert_eq!(cells.len(), self.columns.len());
        let row = self.columns.iter().cloned().zip(cells).collect();
        self.rows.push(row);
    }

    pub fn write(&self, format: Format, out: &mut dyn Write) -> std::io::Result<()> {
        match format {
            Format::Json => {
                serde_json::to_writer_pretty(&mut *out, self)?;
                writeln!(out)
            }
            Format::Csv => self.write_csv(out),
            Format::Text => self.write_text(out),
        }
    }

    fn write_csv(&self, out: &mut dyn Write) -> std::io::Result<()> {
        let mut w = csv::WriterBuilder::new()
            .quote_style(csv::QuoteStyle::NonNumeric)
            .from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(self.columns.iter().map(|c| cell_csv(&row[c])))?;
        }
        w.flush()
    }

    fn write_text(&self, out: &mut dyn Write) -> std::io::Result<()> {
        let params: Vec<String> = self
            .parameters
            .iter()
            .map(|(k, v)| format!("{k}={}", plain(v)))
            .collect();
        writeln!(out, "# {} {}", self.command, params.join(" "))?;
        let cells: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|row| self.columns.iter().map(|c| cell_text(&row[c])).collect())
            .collect();
        let widths: Vec<usize> = (0..self.columns.len())
            .map(|i| {
                cells
                    .iter()
                    .map(|r| r[i].len())
                    .chain([self.columns[i].len()])
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        let line = |parts: &[String]| -> String {
            let padded: Vec<String> = parts
                .iter()
                .zip(&widths)
                .map(|(p, w)| format!("{p:<w$}"))
                .collect();
            padded.join("  ").trim_end().to_string()
        };
        writeln!(out, "{}", line(&self.columns))?;
        for r in &cells {
            writeln!(out, "{}", line(r))?;
        }
        for (k, v) in &self.diagnostics {
            writeln!(out, "# {k}: {}", plain(v))?;
        }
        Ok(())
    }
}

fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

fn cell_csv(v: &Value) -> String {
    plain(v)
}

/// Text cells print integral fractions without the `/1` denominator.
fn cell_text(v: &Value) -> String {
    match v {
        Value::Null => "-".to_string(),
        Value::String(s) => s.strip_suffix("/1").unwrap_or(s).to_string(),
        other => plain(other),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> OutputRecord {
        let mut r = OutputRecord::new("demo", &["k", "value", "ok"]);
        r.param("n", "1");
        r.push_row(vec![0.into(), "3/1".into(), true.into()]);
        r.push_row(vec![1.into(), "11/4".into(), Value::Null]);
        r.diagnostic("note", "done");
        r
    }

    fn render(r: &OutputRecord, f: Format) -> String {
        let mut buf = Vec::new();
        r.write(f, &mut buf).unwrap();
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn csv_quotes_fractions() {
        assert_eq!(
            render(&sample(), Format::Csv),
            "\"k\",\"value\",\"ok\"\n0,\"3/1\",\"true\"\n1,\"11/4\",\"\"\n"
        );
    }

    #[test]
    fn text_table() {
        let text = render(&sample(), Format::Text);
        assert_eq!(
            text,
            "# demo n=1\nk  value  ok\n0  3      true\n1  11/4   -\n# note: done\n"
        );
    }

    #[test]
    fn json_is_versioned() {
        let v: Value = serde_json::from_str(&render(&sample(), Format::Json)).unwrap();
        assert_eq!(v["schema"], 1);
        assert_eq!(v["rows"][1]["value"], "11/4");
        assert_eq!(v["rows"][0]["k"], 0);
    }
}
