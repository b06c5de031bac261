//! CSV tables and their metadata sidecar.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::commands::Table;
use crate::config::RunConfig;
use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunMetadata {
    pub command: String,
    pub seed: u64,
    pub n_trials: u64,
    pub timestamp_unix: u64,
    pub config_hash: String,
    pub version: String,
    pub columns: Vec<String>,
}

impl RunMetadata {
    pub fn new(command: &str, cfg: &RunConfig, table: &Table) -> Self {
        Self {
            command: command.to_string(),
            seed: cfg.scenario.seed,
            n_trials: cfg.scenario.n_trials,
            timestamp_unix: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map_or(0, |d| d.as_secs()),
            config_hash: cfg.hash(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            columns: table.header.clone(),
        }
    }
}

/// Shortest round-trip form; exponent notation only for very small or
/// very large magnitudes.
pub fn format_value(v: f64) -> String {
    let a = v.abs();
    if a != 0.0 && !(1e-6..1e16).contains(&a) {
        format!("{v:e}")
    } else {
        v.to_string()
    }
}

pub fn write_csv<W: Write>(table: &Table, sink: W) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(sink);
    let err = |e: csv::Error| CliError::Runtime(e.to_string());
    w.write_record(&table.header).map_err(err)?;
    for row in &table.rows {
        w.write_record(row.iter().map(|v| format_value(*v))).map_err(err)?;
    }
    w.flush()?;
    Ok(())
}

/// `results.csv` -> `results.csv.meta.json`
pub fn meta_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_os_string();
    name.push(".meta.json");
    PathBuf::from(name)
}

/// Writes the table to `out` and the metadata next to it, or the table to
/// stdout and the metadata to stderr when no path is given.
pub fn emit(table: &Table, meta: &RunMetadata, out: Option<&Path>) -> Result<(), CliError> {
    let meta_json = serde_json::to_string_pretty(meta).expect("metadata serializes");
    match out {
        Some(path) => {
            write_csv(table, std::fs::File::create(path)?)?;
            std::fs::write(meta_path(path), meta_json + "\n")?;
        }
        None => {
            write_csv(table, std::io::stdout().lock())?;
            eprintln!("{meta_json}");
        }
    }
    Ok(())
}
