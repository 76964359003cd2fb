//! Table and report writers.
//!
//! CSV output is a block of `#` comment lines followed by exactly one
//! header row and the data rows. The only run-dependent line is the
//! timestamp in the banner, which `--no-banner` drops together with the
//! rest of the banner; the resolved configuration is always echoed.

use std::io::Write;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use serde_json::{Map, Value};

use crate::config::{Format, RunConfig};
use crate::error::{CliError, CliResult};

/// Numeric table with optional cells.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Option<f64>>>,
    /// Extra comment lines (metadata, warnings), written after the config.
    pub notes: Vec<String>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            ..Self::default()
        }
    }

    pub fn note(&mut self, line: impl Into<String>) {
        self.notes.push(line.into());
    }
}

/// Shortest round-trip text; exponent form outside `[1e-4, 1e15)`.
pub fn fmt_num(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 || (1e-4..1e15).contains(&a) || !v.is_finite() {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

fn banner(command: &str) -> Vec<String> {
    let secs = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    vec![
        format!("psusy {} {command}", env!("CARGO_PKG_VERSION")),
        format!("generated at unix time {secs}"),
    ]
}

fn comment_lines(command: &str, cfg: &RunConfig, notes: &[String]) -> Vec<String> {
    let mut lines = if cfg.no_banner { Vec::new() } else { banner(command) };
    lines.push(format!("command = {command}"));
    lines.extend(cfg.entries().into_iter().map(|(k, v)| format!("{k} = {v}")));
    lines.extend(notes.iter().cloned());
    lines
}

pub fn render_csv(command: &str, cfg: &RunConfig, table: &Table) -> CliResult<Vec<u8>> {
    let mut buf = Vec::new();
    for line in comment_lines(command, cfg, &table.notes) {
        writeln!(buf, "# {line}")?;
    }
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(buf);
    let csv_err = |e: csv::Error| CliError::Io(std::io::Error::other(e));
    w.write_record(&table.columns).map_err(csv_err)?;
    for row in &table.rows {
        w.write_record(row.iter().map(|c| c.map(fmt_num).unwrap_or_default()))
            .map_err(csv_err)?;
    }
    w.into_inner().map_err(|e| CliError::Io(std::io::Error::other(e.to_string())))
}

fn config_json(cfg: &RunConfig) -> Value {
    let mut m = Map::new();
    for (k, v) in cfg.entries() {
        m.insert(k.to_string(), Value::String(v));
    }
    Value::Object(m)
}

fn num(v: f64) -> Value {
    serde_json::Number::from_f64(v).map(Value::Number).unwrap_or(Value::Null)
}

pub fn render_json<T: Serialize>(command: &str, cfg: &RunConfig, body: &T) -> CliResult<Vec<u8>> {
    let mut root = Map::new();
    if !cfg.no_banner {
        root.insert("banner".into(), Value::from(banner(command)));
    }
    root.insert("command".into(), Value::from(command));
    root.insert("config".into(), config_json(cfg));
    let body = serde_json::to_value(body).map_err(|e| CliError::Io(std::io::Error::other(e)))?;
    if let Value::Object(fields) = body {
        root.extend(fields);
    }
    let mut out = serde_json::to_vec_pretty(&Value::Object(root)).map_err(|e| CliError::Io(std::io::Error::other(e)))?;
    out.push(b'\n');
    Ok(out)
}

#[derive(Serialize)]
struct JsonTable {
    notes: Vec<String>,
    columns: Vec<String>,
    rows: Vec<Vec<Value>>,
}

/// Renders a table in the configured format.
pub fn render_table(command: &str, cfg: &RunConfig, table: &Table) -> CliResult<Vec<u8>> {
    match cfg.format {
        Format::Csv => render_csv(command, cfg, table),
        Format::Json => {
            let body = JsonTable {
                notes: table.notes.clone(),
                columns: table.columns.clone(),
                rows: table
                    .rows
                    .iter()
                    .map(|r| r.iter().map(|c| c.map(num).unwrap_or(Value::Null)).collect())
                    .collect(),
            };
            render_json(command, cfg, &body)
        }
    }
}

/// Writes to `--out` when given, otherwise to stdout.
pub fn emit(cfg: &RunConfig, bytes: &[u8]) -> CliResult<()> {
    match &cfg.out {
        Some(path) => std::fs::write(path, bytes)?,
        None => {
            let mut out = std::io::stdout().lock();
            let written = out.write_all(bytes).and_then(|_| out.flush());
            match written {
                // A reader that stops early (e.g. `head`) is not our failure.
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => {}
                other => other?,
            }
        }
    }
    Ok(())
}
