//! Table writer: CSV with `#`-prefixed metadata lines, or one JSON object
//! with a metadata block and a rows array. Data rows are byte-identical
//! across reruns with the same configuration and seed; wall time lives only
//! in the metadata.

use std::collections::BTreeMap;
use std::io::Write;

use serde_json::{json, Value};

use crate::config::CliError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug)]
pub struct Table {
    pub command: &'static str,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
    pub params: BTreeMap<String, String>,
    pub seed: u64,
    pub workers: usize,
    pub wall_ms: u128,
}

impl Table {
    pub fn new(command: &'static str, columns: Vec<&'static str>) -> Self {
        Self {
            command,
            columns,
            rows: Vec::new(),
            params: BTreeMap::new(),
            seed: 0,
            workers: 1,
            wall_ms: 0,
        }
    }

    pub fn param(&mut self, key: &str, value: impl ToString) {
        self.params.insert(key.to_string(), value.to_string());
    }

    pub fn push_row(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn write(
        &self,
        format: &str,
        out: Option<&std::path::Path>,
    ) -> Result<(), CliError> {
        let body = match format {
            "json" => self.to_json()?,
            "csv" => self.to_csv()?,
            other => return Err(CliError::Config(format!("unknown format '{other}'"))),
        };
        match out {
            Some(path) => std::fs::write(path, body)?,
            None => {
                let stdout = std::io::stdout();
                let mut lock = stdout.lock();
                lock.write_all(body.as_bytes())?;
            }
        }
        Ok(())
    }

    fn metadata(&self) -> Vec<(String, String)> {
        let mut meta = vec![
            ("tool".to_string(), format!("cvbench {}", env!("CARGO_PKG_VERSION"))),
            ("schema_version".to_string(), SCHEMA_VERSION.to_string()),
            ("command".to_string(), self.command.to_string()),
            ("seed".to_string(), self.seed.to_string()),
            ("workers".to_string(), self.workers.to_string()),
        ];
        for (k, v) in &self.params {
            meta.push((k.clone(), v.clone()));
        }
        meta.push(("wall_ms".to_string(), self.wall_ms.to_string()));
        meta
    }

    fn to_csv(&self) -> Result<String, CliError> {
        let mut text = String::new();
        for (k, v) in self.metadata() {
            text.push_str(&format!("# {k} = {v}\n"));
        }
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer
            .write_record(&self.columns)
            .map_err(|e| CliError::Io(std::io::Error::other(e)))?;
        for row in &self.rows {
            let record: Vec<String> = row.iter().map(value_to_csv).collect();
            writer.write_record(&record).map_err(|e| CliError::Io(std::io::Error::other(e)))?;
        }
        let bytes = writer.into_inner().map_err(|e| CliError::Io(std::io::Error::other(e)))?;
        text.push_str(&String::from_utf8(bytes).expect("csv output is utf8"));
        Ok(text)
    }

    fn to_json(&self) -> Result<String, CliError> {
        let meta: serde_json::Map<String, Value> =
            self.metadata().into_iter().map(|(k, v)| (k, Value::String(v))).collect();
        let obj = json!({
            "metadata": meta,
            "columns": self.columns,
            "rows": self.rows,
        });
        let mut text = serde_json::to_string_pretty(&obj)
            .map_err(|e| CliError::Io(std::io::Error::other(e)))?;
        text.push('\n');
        Ok(text)
    }
}

// Rust's shortest-round-trip float formatting preserves the exact f64, which
// is stronger than the 15-significant-digit floor the format promises.
fn value_to_csv(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Bool(b) => b.to_string(),
        Value::Number(n) => n.to_string(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

pub fn float(x: f64) -> Value {
    match serde_json::Number::from_f64(x) {
        Some(n) => Value::Number(n),
        None => Value::String(format!("{x}")), // inf/nan fall back to strings
    }
}
