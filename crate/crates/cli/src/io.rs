//! CSV and sidecar emission. Floats are written with Rust's shortest
//! round-trip formatting so every reader below reproduces the values
//! bit-exactly.

use std::fs;
use std::path::Path;

use serde::Serialize;

use sttlab_core::trace::CurrentTrace;
use sttlab_core::variation::HistogramBin;

use crate::error::{CliError, Result};

pub const ARTIFACT_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Serialize)]
pub struct Sidecar<'a> {
    pub config_hash: &'a str,
    pub seed: u64,
    pub artifact_version: &'a str,
}

/// Write `<stem>.meta.json` next to an artifact.
pub fn write_sidecar(artifact: &Path, config_hash: &str, seed: u64) -> Result<()> {
    let meta = Sidecar {
        config_hash,
        seed,
        artifact_version: ARTIFACT_VERSION,
    };
    let path = artifact.with_extension("meta.json");
    write_json(&path, &meta)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    text.push('\n');
    fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    Ok(())
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => CliError::MissingFile(path.display().to_string()),
        _ => CliError::Io(format!("{}: {e}", path.display())),
    })
}

fn parse_f64(field: &str, path: &Path, line: usize) -> Result<f64> {
    field.trim().parse().map_err(|_| {
        CliError::Parse(format!(
            "{}:{line}: not a number: {field:?}",
            path.display()
        ))
    })
}

/// Split a CSV body into rows of exactly `arity` fields, checking the
/// header line.
fn rows<'a>(text: &'a str, header: &str, path: &Path) -> Result<Vec<(usize, Vec<&'a str>)>> {
    let arity = header.split(',').count();
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, first)) if first == header => {}
        other => {
            return Err(CliError::Parse(format!(
                "{}: expected header {header:?}, got {:?}",
                path.display(),
                other.map(|(_, l)| l).unwrap_or("")
            )))
        }
    }
    let mut out = Vec::new();
    for (i, line) in lines {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != arity {
            return Err(CliError::Parse(format!(
                "{}:{}: expected {arity} fields, got {}",
                path.display(),
                i + 1,
                fields.len()
            )));
        }
        out.push((i + 1, fields));
    }
    Ok(out)
}

pub const TRACE_HEADER: &str = "time_s,current_A";

pub fn write_trace_csv(path: &Path, trace: &CurrentTrace) -> Result<()> {
    let mut text = String::from(TRACE_HEADER);
    text.push('\n');
    for (i, &s) in trace.samples.iter().enumerate() {
        text.push_str(&format!("{},{}\n", trace.time(i), s));
    }
    write_text(path, &text)
}

pub fn read_trace_csv(path: &Path) -> Result<Vec<(f64, f64)>> {
    let text = read_text(path)?;
    rows(&text, TRACE_HEADER, path)?
        .into_iter()
        .map(|(line, f)| Ok((parse_f64(f[0], path, line)?, parse_f64(f[1], path, line)?)))
        .collect()
}

pub const HIST_HEADER: &str = "bin_low,bin_high,count";

pub fn write_hist_csv(path: &Path, bins: &[HistogramBin]) -> Result<()> {
    let mut text = String::from(HIST_HEADER);
    text.push('\n');
    for b in bins {
        text.push_str(&format!("{},{},{}\n", b.low, b.high, b.count));
    }
    write_text(path, &text)
}

pub fn read_hist_csv(path: &Path) -> Result<Vec<HistogramBin>> {
    let text = read_text(path)?;
    rows(&text, HIST_HEADER, path)?
        .into_iter()
        .map(|(line, f)| {
            Ok(HistogramBin {
                low: parse_f64(f[0], path, line)?,
                high: parse_f64(f[1], path, line)?,
                count: f[2].trim().parse().map_err(|_| {
                    CliError::Parse(format!(
                        "{}:{line}: not a count: {:?}",
                        path.display(),
                        f[2]
                    ))
                })?,
            })
        })
        .collect()
}

pub const MATRIX_HEADER: &str = "width,scheme,driver,states,reduction_pct,\
unique_decodable_fraction,mean_posterior_entropy_bits,mean_effort_bits";

/// One defense-matrix CSV row, already stringly typed for emission.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixRow {
    pub width: usize,
    pub scheme: String,
    pub driver: String,
    pub states: usize,
    pub reduction_pct: f64,
    pub unique_decodable_fraction: f64,
    pub mean_posterior_entropy_bits: f64,
    pub mean_effort_bits: f64,
}

pub fn write_matrix_csv(path: &Path, cells: &[MatrixRow]) -> Result<()> {
    let mut text = String::from(MATRIX_HEADER);
    text.push('\n');
    for c in cells {
        text.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            c.width,
            c.scheme,
            c.driver,
            c.states,
            c.reduction_pct,
            c.unique_decodable_fraction,
            c.mean_posterior_entropy_bits,
            c.mean_effort_bits
        ));
    }
    write_text(path, &text)
}

pub fn read_matrix_csv(path: &Path) -> Result<Vec<MatrixRow>> {
    let text = read_text(path)?;
    rows(&text, MATRIX_HEADER, path)?
        .into_iter()
        .map(|(line, f)| {
            let count = |field: &str| -> Result<usize> {
                field.trim().parse().map_err(|_| {
                    CliError::Parse(format!("{}:{line}: not a count: {field:?}", path.display()))
                })
            };
            Ok(MatrixRow {
                width: count(f[0])?,
                scheme: f[1].to_string(),
                driver: f[2].to_string(),
                states: count(f[3])?,
                reduction_pct: parse_f64(f[4], path, line)?,
                unique_decodable_fraction: parse_f64(f[5], path, line)?,
                mean_posterior_entropy_bits: parse_f64(f[6], path, line)?,
                mean_effort_bits: parse_f64(f[7], path, line)?,
            })
        })
        .collect()
}

/// Two-column sweep CSV with caller-chosen header names.
pub fn write_sweep_csv(path: &Path, var: &str, metric: &str, points: &[(f64, f64)]) -> Result<()> {
    let mut text = format!("{var},{metric}\n");
    for (x, y) in points {
        text.push_str(&format!("{x},{y}\n"));
    }
    write_text(path, &text)
}

pub fn read_sweep_csv(path: &Path, var: &str, metric: &str) -> Result<Vec<(f64, f64)>> {
    let text = read_text(path)?;
    rows(&text, &format!("{var},{metric}"), path)?
        .into_iter()
        .map(|(line, f)| Ok((parse_f64(f[0], path, line)?, parse_f64(f[1], path, line)?)))
        .collect()
}
