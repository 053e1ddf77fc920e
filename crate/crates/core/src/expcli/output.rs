use std::io::Write;

use serde_json::{json, Map, Value};

use super::config::{ExperimentConfig, OutputFormat};
use super::ExpError;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Provenance lines written at the top of every output, each starting with `#`.
pub fn header_lines(command: &str, config: &ExperimentConfig) -> Vec<String> {
    let mut lines = vec![
        format!("# wstlab {VERSION}"),
        format!("# command={command} seed={} config_sha256={}", config.seed, config.hash()),
    ];
    lines.extend(config.canonical().lines().map(|l| format!("# {l}")));
    lines
}

/// One point of a β sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub beta: f64,
    pub estimate: f64,
    pub std_error: f64,
    pub replicas: usize,
    /// Seed of this row's streams; replica `i` reads streams derived from `i`.
    pub row_seed: u64,
    /// `None` for a completed row, otherwise the failure message.
    pub failure: Option<String>,
    pub wall_time: Option<f64>,
    /// Experiment-specific columns, in output order.
    pub aux: Vec<(&'static str, f64)>,
}

impl SweepRow {
    pub fn failed(beta: f64, replicas: usize, row_seed: u64, message: String) -> Self {
        SweepRow {
            beta,
            estimate: f64::NAN,
            std_error: f64::NAN,
            replicas,
            row_seed,
            failure: Some(message),
            wall_time: None,
            aux: Vec::new(),
        }
    }

    pub fn aux(&self, name: &str) -> Option<f64> {
        self.aux.iter().find(|(k, _)| *k == name).map(|&(_, v)| v)
    }
}

fn cell(x: f64) -> String {
    if x.is_finite() {
        x.to_string()
    } else {
        String::new()
    }
}

pub(crate) fn csv_escape(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Writes sweep rows with the provenance header. Columns of failed rows are
/// taken from the first completed row.
pub fn write_sweep<W: Write>(
    mut out: W,
    command: &str,
    config: &ExperimentConfig,
    rows: &[SweepRow],
    format: OutputFormat,
) -> Result<(), ExpError> {
    let aux_names: Vec<&str> = rows
        .iter()
        .find(|r| r.failure.is_none())
        .map(|r| r.aux.iter().map(|(k, _)| *k).collect())
        .unwrap_or_default();
    let timed = rows.iter().any(|r| r.wall_time.is_some());
    match format {
        OutputFormat::Csv => {
            for l in header_lines(command, config) {
                writeln!(out, "{l}")?;
            }
            let mut head = vec!["beta", "estimate", "std_error", "replicas", "row_seed", "status"];
            if timed {
                head.push("wall_time");
            }
            head.extend(&aux_names);
            writeln!(out, "{}", head.join(","))?;
            for r in rows {
                let mut cells = vec![
                    r.beta.to_string(),
                    cell(r.estimate),
                    cell(r.std_error),
                    r.replicas.to_string(),
                    r.row_seed.to_string(),
                    match &r.failure {
                        None => "ok".into(),
                        Some(m) => csv_escape(&format!("failed: {m}")),
                    },
                ];
                if timed {
                    cells.push(r.wall_time.map(cell).unwrap_or_default());
                }
                cells.extend(aux_names.iter().map(|k| r.aux(k).map(cell).unwrap_or_default()));
                writeln!(out, "{}", cells.join(","))?;
            }
        }
        OutputFormat::Json => {
            let rows: Vec<Value> = rows
                .iter()
                .map(|r| {
                    let mut m = Map::new();
                    m.insert("beta".into(), json!(r.beta));
                    m.insert("estimate".into(), json!(r.estimate));
                    m.insert("std_error".into(), json!(r.std_error));
                    m.insert("replicas".into(), json!(r.replicas));
                    m.insert("row_seed".into(), json!(r.row_seed));
                    m.insert("failure".into(), json!(r.failure));
                    if timed {
                        m.insert("wall_time".into(), json!(r.wall_time));
                    }
                    for (k, v) in &r.aux {
                        m.insert((*k).into(), json!(v));
                    }
                    Value::Object(m)
                })
                .collect();
            let doc = json!({
                "header": header_lines(command, config),
                "rows": rows,
            });
            serde_json::to_writer_pretty(&mut out, &doc)?;
            writeln!(out)?;
        }
    }
    Ok(())
}
