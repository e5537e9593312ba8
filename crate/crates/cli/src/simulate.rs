//! The simulate command: synthetic event logs from a chain specification.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use seqent::ingest::EventLog;
use seqent::synth::{gen_event_log, TransitionMatrix};

use crate::config::RunConfig;

/// Chain specification: either an explicit matrix file or a symmetric
/// stay-probability chain.
#[derive(Debug, Clone)]
pub enum ChainSpec {
    /// CSV file of K rows with K probabilities each, no header.
    MatrixFile(std::path::PathBuf),
    /// `stay_chain(states, stay)`.
    Stay { states: usize, stay: f64 },
}

impl ChainSpec {
    pub fn build(&self) -> Result<TransitionMatrix> {
        match self {
            ChainSpec::MatrixFile(path) => {
                let text = fs::read_to_string(path)
                    .with_context(|| format!("cannot read {}", path.display()))?;
                let mut rows = Vec::new();
                for (i, line) in text.lines().enumerate() {
                    let line = line.trim();
                    if line.is_empty() {
                        continue;
                    }
                    let row: Result<Vec<f64>, _> =
                        line.split(',').map(|f| f.trim().parse::<f64>()).collect();
                    match row {
                        Ok(row) => rows.push(row),
                        Err(e) => bail!("matrix line {}: {e}", i + 1),
                    }
                }
                Ok(TransitionMatrix::new(rows)?)
            }
            ChainSpec::Stay { states, stay } => Ok(TransitionMatrix::stay_chain(*states, *stay)?),
        }
    }
}

/// Generates a synthetic log for `egos` individuals over `span_secs`.
pub fn simulate(
    spec: &ChainSpec,
    egos: usize,
    span_secs: u64,
    config: &RunConfig,
) -> Result<EventLog> {
    let matrix = spec.build()?;
    Ok(gen_event_log(
        egos,
        &matrix,
        span_secs,
        config.bin_width,
        config.seed,
    )?)
}

/// Renders a log as the ingestion CSV.
pub fn log_to_csv(log: &EventLog) -> Result<String> {
    let mut buf = Vec::new();
    log.write_csv(&mut buf)?;
    Ok(String::from_utf8(buf).expect("csv output is utf-8"))
}

/// Writes a log to `path` in the ingestion CSV format.
pub fn write_log(log: &EventLog, path: &Path) -> Result<()> {
    fs::write(path, log_to_csv(log)?).with_context(|| format!("cannot write {}", path.display()))
}
