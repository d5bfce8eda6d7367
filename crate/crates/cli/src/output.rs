use std::io::Write;

use clap::ValueEnum;
use freeconv::rational::{self, Rational};
use serde_json::{json, Map, Value};

use crate::error::CliResult;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Provenance written at the top of every output.
#[derive(Debug, Clone)]
pub struct Header {
    pub version: &'static str,
    pub command_line: String,
    pub seed: Option<u64>,
}

impl Header {
    pub fn from_env(seed: Option<u64>) -> Self {
        let command_line = std::env::args().map(|a| quote(&a)).collect::<Vec<_>>().join(" ");
        Self { version: env!("CARGO_PKG_VERSION"), command_line, seed }
    }
}

fn quote(arg: &str) -> String {
    if arg.is_empty() || arg.chars().any(|c| c.is_whitespace() || c == '"') {
        format!("{arg:?}")
    } else {
        arg.to_string()
    }
}

/// Result of one command: a table for CSV, an object for JSON, and summary lines.
#[derive(Debug, Clone, Default)]
pub struct Report {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    pub json: Map<String, Value>,
    /// `(key, value)` lines printed after the CSV table, e.g. verdicts.
    pub summary: Vec<(&'static str, String)>,
}

impl Report {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Self { columns, ..Self::default() }
    }

    pub fn row(&mut self, cells: Vec<String>) {
        debug_assert_eq!(cells.len(), self.columns.len());
        self.rows.push(cells);
    }

    pub fn set(&mut self, key: &str, value: Value) {
        self.json.insert(key.to_string(), value);
    }

    pub fn summary(&mut self, key: &'static str, value: String) {
        self.summary.push((key, value));
    }

    pub fn write(&self, header: &Header, format: Format, out: &mut dyn Write) -> CliResult<()> {
        match format {
            Format::Csv => {
                writeln!(out, "# freeconv {}", header.version)?;
                writeln!(out, "# command: {}", header.command_line)?;
                writeln!(out, "# seed: {}", header.seed.map_or("none".to_string(), |s| s.to_string()))?;
                {
                    let mut w = csv::Writer::from_writer(&mut *out);
                    w.write_record(&self.columns)?;
                    for r in &self.rows {
                        w.write_record(r)?;
                    }
                    w.flush()?;
                }
                for (k, v) in &self.summary {
                    writeln!(out, "# {k}: {v}")?;
                }
            }
            Format::Json => {
                let mut obj = Map::new();
                obj.insert(
                    "header".into(),
                    json!({
                        "version": header.version,
                        "command_line": header.command_line,
                        "seed": header.seed,
                    }),
                );
                obj.extend(self.json.clone());
                serde_json::to_writer_pretty(&mut *out, &Value::Object(obj))
                    .map_err(|e| crate::error::CliError::parse(format!("json error: {e}")))?;
                writeln!(out)?;
            }
        }
        Ok(())
    }
}

pub fn rat(x: &Rational) -> String {
    rational::format(x)
}

pub fn rats(xs: &[Rational]) -> Value {
    Value::Array(xs.iter().map(|x| Value::String(rat(x))).collect())
}

/// `x` with 12 significant digits, trailing zeros dropped.
pub fn float(x: f64) -> String {
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa))
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

/// A JSON number carrying the 12-digit rendering of `x`.
pub fn float_json(x: f64) -> Value {
    float(x).parse::<f64>().ok().and_then(serde_json::Number::from_f64).map_or(Value::Null, Value::Number)
}

pub fn floats_json(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| float_json(x)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(float(0.5), "0.5");
        assert_eq!(float(1.0), "1");
        assert_eq!(float(-2.0 / 3.0), "-0.666666666667");
        assert_eq!(float(123456.0), "123456");
        assert_eq!(float(1.0 / 3.0 * 1e-7), "3.33333333333e-8");
        assert_eq!(float(6.02214076e23), "6.02214076e23");
        assert_eq!(float(0.0), "0");
    }

    #[test]
    fn json_numbers_keep_the_rounding() {
        assert_eq!(float_json(0.1 + 0.2).to_string(), "0.3");
    }
}
