//! Touchstone v1 two-port (`.s2p`) reader.
//!
//! Supports the RI/MA/DB formats and any frequency-unit keyword. Only the
//! S-parameter type is accepted; records must carry the full two-port row
//! (frequency plus four complex pairs). Comment lines are preserved as
//! metadata.

use crate::error::{Error, Result};
use crate::notch::{FrequencySweep, SweepMetadata};
use num_complex::Complex64;
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ValueFormat {
    RealImag,
    MagAngle,
    DbAngle,
}

impl ValueFormat {
    fn to_complex(self, a: f64, b: f64) -> Complex64 {
        match self {
            ValueFormat::RealImag => Complex64::new(a, b),
            ValueFormat::MagAngle => Complex64::from_polar(a, b.to_radians()),
            ValueFormat::DbAngle => Complex64::from_polar(10f64.powf(a / 20.0), b.to_radians()),
        }
    }
}

/// Parsed two-port network data. S-parameters are linear complex values;
/// frequencies are in hertz, strictly increasing.
#[derive(Debug, Clone)]
pub struct TwoPortData {
    pub frequencies: Vec<f64>,
    pub s11: Vec<Complex64>,
    pub s21: Vec<Complex64>,
    pub s12: Vec<Complex64>,
    pub s22: Vec<Complex64>,
    pub reference_ohms: f64,
    /// `!`-comment lines, in file order.
    pub comments: Vec<String>,
}

impl TwoPortData {
    /// View the forward transmission as a sweep, attaching metadata.
    pub fn s21_sweep(&self, mut meta: SweepMetadata) -> Result<FrequencySweep> {
        if meta.label.is_empty() {
            if let Some(first) = self.comments.first() {
                meta.label = first.clone();
            }
        }
        FrequencySweep::new(self.frequencies.clone(), self.s21.clone(), meta)
    }
}

fn parse_error(path: &Path, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.display().to_string(),
        line,
        message: message.into(),
    }
}

/// Parse a Touchstone v1 two-port file.
pub fn parse_touchstone(path: &Path) -> Result<TwoPortData> {
    let content = std::fs::read_to_string(path)?;
    let mut comments = Vec::new();
    let mut option: Option<(f64, ValueFormat, f64)> = None; // (unit scale, format, R)
    let mut rows: Vec<(usize, Vec<f64>)> = Vec::new();

    for (idx, raw) in content.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.find('!') {
            Some(pos) => {
                let comment = raw[pos + 1..].trim();
                if !comment.is_empty() {
                    comments.push(comment.to_string());
                }
                &raw[..pos]
            }
            None => raw,
        };
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            if option.is_none() {
                option = Some(parse_option_line(path, line_no, rest)?);
            }
            continue; // v1: only the first option line counts
        }
        if option.is_none() {
            return Err(parse_error(
                path,
                line_no,
                "data before the option line (expected e.g. \"# GHz S RI R 50\")",
            ));
        }
        let values: std::result::Result<Vec<f64>, _> =
            line.split_whitespace().map(str::parse::<f64>).collect();
        let values = values.map_err(|e| parse_error(path, line_no, format!("bad number: {e}")))?;
        match values.len() {
            9 => rows.push((line_no, values)),
            3 => {
                return Err(Error::UnsupportedFormat(format!(
                    "{}: one-port record at line {line_no}; only two-port (.s2p) files are \
                     supported",
                    path.display()
                )))
            }
            n => {
                return Err(parse_error(
                    path,
                    line_no,
                    format!("expected 9 values for a two-port record, found {n}"),
                ))
            }
        }
    }

    let (scale, format, reference_ohms) = option
        .ok_or_else(|| parse_error(path, content.lines().count().max(1), "missing option line"))?;
    if rows.is_empty() {
        return Err(parse_error(
            path,
            content.lines().count().max(1),
            "no data rows",
        ));
    }

    // sort by frequency; strict monotonicity is required downstream
    rows.sort_by(|a, b| a.1[0].total_cmp(&b.1[0]));
    for pair in rows.windows(2) {
        if pair[0].1[0] == pair[1].1[0] {
            return Err(Error::DuplicateFrequency(pair[0].1[0] * scale));
        }
    }

    let n = rows.len();
    let mut out = TwoPortData {
        frequencies: Vec::with_capacity(n),
        s11: Vec::with_capacity(n),
        s21: Vec::with_capacity(n),
        s12: Vec::with_capacity(n),
        s22: Vec::with_capacity(n),
        reference_ohms,
        comments,
    };
    for (_, v) in rows {
        out.frequencies.push(v[0] * scale);
        // Touchstone two-port order: S11 S21 S12 S22
        out.s11.push(format.to_complex(v[1], v[2]));
        out.s21.push(format.to_complex(v[3], v[4]));
        out.s12.push(format.to_complex(v[5], v[6]));
        out.s22.push(format.to_complex(v[7], v[8]));
    }
    Ok(out)
}

fn parse_option_line(path: &Path, line_no: usize, rest: &str) -> Result<(f64, ValueFormat, f64)> {
    let mut scale = 1e9; // touchstone default unit is GHz
    let mut format = ValueFormat::MagAngle; // default MA
    let mut reference = 50.0;
    let tokens: Vec<String> = rest
        .split_whitespace()
        .map(|t| t.to_ascii_uppercase())
        .collect();
    let mut i = 0;
    while i < tokens.len() {
        match tokens[i].as_str() {
            "HZ" => scale = 1.0,
            "KHZ" => scale = 1e3,
            "MHZ" => scale = 1e6,
            "GHZ" => scale = 1e9,
            "RI" => format = ValueFormat::RealImag,
            "MA" => format = ValueFormat::MagAngle,
            "DB" => format = ValueFormat::DbAngle,
            "S" => {}
            "R" => {
                i += 1;
                if let Some(v) = tokens.get(i) {
                    reference = v.parse::<f64>().map_err(|e| {
                        parse_error(path, line_no, format!("bad reference impedance: {e}"))
                    })?;
                }
            }
            "Y" | "Z" | "H" | "G" => {
                return Err(Error::UnsupportedFormat(format!(
                    "{}: parameter type {} (only S-parameters supported)",
                    path.display(),
                    tokens[i]
                )))
            }
            other => {
                return Err(parse_error(
                    path,
                    line_no,
                    format!("unknown option token {other:?}"),
                ))
            }
        }
        i += 1;
    }
    Ok((scale, format, reference))
}
