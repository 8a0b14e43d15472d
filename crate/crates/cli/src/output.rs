//! Number formatting, JSON/CSV rendering and the run manifest.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::Context;
use serde_json::{json, Number, Value};

use crate::CliError;

/// `x` with `digits` significant digits, trailing zeros dropped; plain
/// notation for exponents in `-5..17`, otherwise `d.ddde±x`.
pub fn sig(x: f64, digits: usize) -> String {
    if !x.is_finite() {
        return if x.is_nan() { "NaN".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let digits = digits.clamp(1, 17);
    let s = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = s.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    let (sign, mantissa) = match mantissa.strip_prefix('-') {
        Some(m) => ("-", m),
        None => ("", mantissa),
    };
    let all: String = mantissa.chars().filter(|c| *c != '.').collect();
    let all = all.trim_end_matches('0');
    let all = if all.is_empty() { "0" } else { all };

    if (-5..17).contains(&exp) {
        let body = if exp < 0 {
            format!("0.{}{}", "0".repeat((-exp - 1) as usize), all)
        } else {
            let int_len = exp as usize + 1;
            if all.len() <= int_len {
                format!("{}{}", all, "0".repeat(int_len - all.len()))
            } else {
                format!("{}.{}", &all[..int_len], &all[int_len..])
            }
        };
        format!("{sign}{body}")
    } else {
        let (head, tail) = all.split_at(1);
        if tail.is_empty() {
            format!("{sign}{head}e{exp}")
        } else {
            format!("{sign}{head}.{tail}e{exp}")
        }
    }
}

/// JSON number with 17 significant digits; non-finite values become null.
pub fn num(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    let n: Number = sig(x, 17).parse().expect("formatted float is valid JSON");
    Value::Number(n)
}

pub fn nums(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| num(x)).collect())
}

pub fn opt_num(x: Option<f64>) -> Value {
    x.map_or(Value::Null, num)
}

/// CSV cell for an optional float.
pub fn cell(x: Option<f64>, digits: usize) -> String {
    x.map(|v| sig(v, digits)).unwrap_or_default()
}

/// A command's result in both renderings.
pub struct Report {
    pub json: Value,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

impl Format {
    pub fn as_str(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
        }
    }
}

pub fn render(report: &Report, format: Format) -> anyhow::Result<Vec<u8>> {
    match format {
        Format::Json => {
            let mut out = serde_json::to_vec_pretty(&report.json)?;
            out.push(b'\n');
            Ok(out)
        }
        Format::Csv => {
            let mut w = csv::WriterBuilder::new()
                .terminator(csv::Terminator::Any(b'\n'))
                .from_writer(Vec::new());
            w.write_record(&report.header)?;
            for row in &report.rows {
                w.write_record(row)?;
            }
            Ok(w.into_inner().map_err(|e| anyhow::anyhow!("{e}"))?)
        }
    }
}

pub fn manifest_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".manifest.json");
    PathBuf::from(s)
}

pub struct Manifest {
    pub command: &'static str,
    pub parameters: Value,
    pub tier: &'static str,
    pub format: Format,
    pub outputs: Vec<PathBuf>,
    pub wall_time_s: f64,
}

impl Manifest {
    pub fn to_json(&self) -> Value {
        json!({
            "command": self.command,
            "parameters": self.parameters,
            "artifact": { "name": "ince", "version": env!("CARGO_PKG_VERSION") },
            "tier": self.tier,
            "format": self.format.as_str(),
            "outputs": self.outputs.iter().map(|p| p.display().to_string()).collect::<Vec<_>>(),
            "wall_time_s": num(self.wall_time_s),
        })
    }
}

/// Writes the data to `out` (and its sidecar manifest) or to stdout.
pub fn emit(
    data: &[u8],
    out: Option<&Path>,
    manifest: impl FnOnce(Vec<PathBuf>) -> Manifest,
) -> Result<(), CliError> {
    match out {
        None => std::io::stdout()
            .lock()
            .write_all(data)
            .context("writing to stdout")
            .map_err(CliError::io),
        Some(path) => {
            fs::write(path, data)
                .with_context(|| format!("writing {}", path.display()))
                .map_err(CliError::io)?;
            let m = manifest(vec![path.to_path_buf()]);
            let side = manifest_path(path);
            let mut bytes = serde_json::to_vec_pretty(&m.to_json()).map_err(|e| CliError::io(e.into()))?;
            bytes.push(b'\n');
            fs::write(&side, bytes)
                .with_context(|| format!("writing {}", side.display()))
                .map_err(CliError::io)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits() {
        assert_eq!(sig(718.0928584847421, 17), "718.09285848474212");
        assert_eq!(sig(0.1, 17), "0.10000000000000001");
        assert_eq!(sig(1.0, 17), "1");
        assert_eq!(sig(-36.0, 17), "-36");
        assert_eq!(sig(1e20, 17), "1e20");
        assert_eq!(sig(7.242e20, 17), "7.242e20");
        assert_eq!(sig(2f64.powi(-30), 17), "9.3132257461547852e-10");
        assert_eq!(sig(0.000125, 17), "0.000125");
        assert_eq!(sig(123456.0, 3), "123000");
        assert_eq!(sig(2.0f64.sqrt(), 6), "1.41421");
        assert_eq!(sig(0.0, 17), "0");
        assert_eq!(sig(-0.0, 17), "0");
    }

    #[test]
    fn round_trips_through_json() {
        for x in [718.0928584847421, -163.70616441570896, 1e-300, 6.02e23, std::f64::consts::PI] {
            let v = num(x);
            let back: f64 = serde_json::from_str(&v.to_string()).unwrap();
            assert_eq!(back, x);
        }
        assert_eq!(num(f64::NAN), Value::Null);
    }

    #[test]
    fn csv_uses_lf() {
        let r = Report { json: Value::Null, header: vec!["a", "b"], rows: vec![vec!["1".into(), "x,y".into()]] };
        assert_eq!(render(&r, Format::Csv).unwrap(), b"a,b\n1,\"x,y\"\n");
    }
}
