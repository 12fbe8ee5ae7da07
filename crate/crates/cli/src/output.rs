use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use clap::ValueEnum;
use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Rows of exact strings under fixed column names, plus the run
/// configuration and an optional summary for the JSON envelope.
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    pub config: Value,
    pub summary: Option<Value>,
}

impl Table {
    pub fn new(columns: &[&'static str], config: Value) -> Self {
        Table {
            columns: columns.to_vec(),
            rows: Vec::new(),
            config,
            summary: None,
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                let obj: Map<String, Value> = self
                    .columns
                    .iter()
                    .zip(r)
                    .map(|(c, v)| (c.to_string(), Value::String(v.clone())))
                    .collect();
                Value::Object(obj)
            })
            .collect();
        let mut env = Map::new();
        env.insert("config".into(), self.config.clone());
        env.insert("rows".into(), Value::Array(rows));
        if let Some(s) = &self.summary {
            env.insert("summary".into(), s.clone());
        }
        Value::Object(env)
    }

    pub fn write_to(&self, out: impl Write, format: Format) -> io::Result<()> {
        match format {
            Format::Csv => {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(&self.columns)?;
                for r in &self.rows {
                    w.write_record(r)?;
                }
                w.flush()
            }
            Format::Json => {
                let mut out = out;
                serde_json::to_writer_pretty(&mut out, &self.to_json())?;
                writeln!(out)
            }
        }
    }

    pub fn emit(&self, path: Option<&Path>, format: Format) -> io::Result<()> {
        match path {
            Some(p) => self.write_to(File::create(p)?, format),
            None => self.write_to(io::stdout().lock(), format),
        }
    }
}
