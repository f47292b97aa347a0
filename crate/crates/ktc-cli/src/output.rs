//! Table and line emission: CSV or JSON, to stdout or a file, with a
//! suppressible timestamp header. Numeric cells are always full decimal
//! strings; nothing is ever truncated to floating point.

use std::io::Write;
use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{Context, Result};

pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Self { columns, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

pub struct OutputSink {
    out: Option<PathBuf>,
    format: String,
    no_header: bool,
}

impl OutputSink {
    pub fn new(out: Option<PathBuf>, format: String, no_header: bool) -> Self {
        Self { out, format, no_header }
    }

    fn header_line(&self, subcommand: &str) -> Option<String> {
        if self.no_header {
            return None;
        }
        let stamp = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        Some(format!("# ktc {subcommand} generated-at-unix {stamp}"))
    }

    fn deliver(&self, body: String) -> Result<()> {
        match &self.out {
            Some(path) => std::fs::write(path, body).with_context(|| format!("writing {}", path.display())),
            None => {
                let mut stdout = std::io::stdout().lock();
                stdout.write_all(body.as_bytes()).context("writing stdout")?;
                Ok(())
            }
        }
    }

    pub fn write_table(&self, subcommand: &str, table: &Table) -> Result<()> {
        let body = match self.format.as_str() {
            "json" => self.render_json(subcommand, table)?,
            _ => self.render_csv(subcommand, table)?,
        };
        self.deliver(body)
    }

    fn render_csv(&self, subcommand: &str, table: &Table) -> Result<String> {
        let mut out = String::new();
        if let Some(h) = self.header_line(subcommand) {
            out.push_str(&h);
            out.push('\n');
        }
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer.write_record(&table.columns)?;
        for row in &table.rows {
            writer.write_record(row)?;
        }
        out.push_str(&String::from_utf8(writer.into_inner()?)?);
        Ok(out)
    }

    fn render_json(&self, subcommand: &str, table: &Table) -> Result<String> {
        let rows: Vec<serde_json::Value> = table
            .rows
            .iter()
            .map(|row| {
                let obj: serde_json::Map<String, serde_json::Value> = table
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(c, v)| (c.to_string(), serde_json::Value::String(v.clone())))
                    .collect();
                serde_json::Value::Object(obj)
            })
            .collect();
        let doc = if self.no_header {
            serde_json::Value::Array(rows)
        } else {
            let stamp = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
            serde_json::json!({
                "subcommand": subcommand,
                "generated_at_unix": stamp,
                "rows": rows,
            })
        };
        Ok(serde_json::to_string_pretty(&doc)? + "\n")
    }

    /// Raw line output (graph6 streams).
    pub fn write_lines(&self, subcommand: &str, lines: &[String]) -> Result<()> {
        let mut body = String::new();
        if let Some(h) = self.header_line(subcommand) {
            body.push_str(&h);
            body.push('\n');
        }
        for line in lines {
            body.push_str(line);
            body.push('\n');
        }
        self.deliver(body)
    }
}
