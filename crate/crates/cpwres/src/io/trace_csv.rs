//! CSV trace format.
//!
//! Column schema (header required):
//!   `freq_hz,s21_re,s21_im`            — complex rectangular, or
//!   `freq_hz,s21_mag_db,s21_phase_deg` — magnitude/phase.
//!
//! Lines starting with `#` are comments; `# key = value` pairs written by
//! the dataset generator (vna_power_dbm, temperature_k, label) are read
//! back into the sweep metadata. Rows are sorted by frequency; duplicate
//! frequencies are rejected.

use crate::error::{Error, Result};
use crate::notch::{FrequencySweep, SweepMetadata};
use num_complex::Complex64;
use std::io::Write;
use std::path::Path;

/// How to interpret the two value columns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ColumnSpec {
    /// Decide from the header names.
    #[default]
    Auto,
    ReIm,
    MagDbPhaseDeg,
}

fn parse_error(path: &Path, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.display().to_string(),
        line,
        message: message.into(),
    }
}

/// Read a trace file. Comment metadata (`# key = value`) is merged into the
/// returned sweep's metadata.
pub fn parse_csv_trace(path: &Path, spec: ColumnSpec) -> Result<FrequencySweep> {
    let content = std::fs::read_to_string(path)?;
    let mut meta = SweepMetadata::default();
    let mut header: Option<(usize, Vec<String>)> = None;
    let mut rows: Vec<(f64, f64, f64)> = Vec::new();

    for (idx, raw) in content.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            if let Some((key, value)) = comment.split_once('=') {
                let (key, value) = (key.trim(), value.trim());
                match key {
                    "vna_power_dbm" => meta.vna_power_dbm = value.parse().ok(),
                    "temperature_k" => meta.temperature_k = value.parse().ok(),
                    "label" => meta.label = value.to_string(),
                    _ => {}
                }
            }
            continue;
        }
        if header.is_none() {
            let cols: Vec<String> = line
                .split(',')
                .map(|c| c.trim().to_ascii_lowercase())
                .collect();
            if cols.len() != 3 {
                return Err(parse_error(
                    path,
                    line_no,
                    format!("expected 3 header columns, found {}", cols.len()),
                ));
            }
            header = Some((line_no, cols));
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 3 {
            return Err(parse_error(
                path,
                line_no,
                format!("expected 3 columns, found {}", fields.len()),
            ));
        }
        let mut nums = [0.0f64; 3];
        for (slot, field) in nums.iter_mut().zip(&fields) {
            *slot = field
                .parse()
                .map_err(|e| parse_error(path, line_no, format!("bad number {field:?}: {e}")))?;
        }
        rows.push((nums[0], nums[1], nums[2]));
    }

    let (header_line, cols) =
        header.ok_or_else(|| parse_error(path, content.lines().count().max(1), "no header row"))?;
    let resolved = match spec {
        ColumnSpec::ReIm => ColumnSpec::ReIm,
        ColumnSpec::MagDbPhaseDeg => ColumnSpec::MagDbPhaseDeg,
        ColumnSpec::Auto => {
            if cols[1].contains("re") && cols[2].contains("im") {
                ColumnSpec::ReIm
            } else if cols[1].contains("db") && cols[2].contains("phase") {
                ColumnSpec::MagDbPhaseDeg
            } else {
                return Err(parse_error(
                    path,
                    header_line,
                    format!(
                        "cannot infer column meaning from header {:?} (expected \
                         freq_hz,s21_re,s21_im or freq_hz,s21_mag_db,s21_phase_deg)",
                        cols.join(",")
                    ),
                ));
            }
        }
    };
    if rows.is_empty() {
        return Err(parse_error(path, header_line, "no data rows"));
    }

    rows.sort_by(|a, b| a.0.total_cmp(&b.0));
    for pair in rows.windows(2) {
        if pair[0].0 == pair[1].0 {
            return Err(Error::DuplicateFrequency(pair[0].0));
        }
    }

    let frequencies: Vec<f64> = rows.iter().map(|r| r.0).collect();
    let s21: Vec<Complex64> = rows
        .iter()
        .map(|&(_, a, b)| match resolved {
            ColumnSpec::ReIm => Complex64::new(a, b),
            ColumnSpec::MagDbPhaseDeg => {
                Complex64::from_polar(10f64.powf(a / 20.0), b.to_radians())
            }
            ColumnSpec::Auto => unreachable!(),
        })
        .collect();
    FrequencySweep::new(frequencies, s21, meta)
}

/// Write a trace in the rectangular (`freq_hz,s21_re,s21_im`) schema, with
/// metadata as `# key = value` comment lines. Floats use the shortest
/// round-trip representation, so write → parse is exact.
pub fn write_csv_trace(path: &Path, sweep: &FrequencySweep) -> Result<()> {
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    if !sweep.meta.label.is_empty() {
        writeln!(out, "# label = {}", sweep.meta.label)?;
    }
    if let Some(p) = sweep.meta.vna_power_dbm {
        writeln!(out, "# vna_power_dbm = {p}")?;
    }
    if let Some(t) = sweep.meta.temperature_k {
        writeln!(out, "# temperature_k = {t}")?;
    }
    writeln!(out, "freq_hz,s21_re,s21_im")?;
    for (f, z) in sweep.frequencies().iter().zip(sweep.s21()) {
        writeln!(out, "{f},{},{}", z.re, z.im)?;
    }
    Ok(())
}
