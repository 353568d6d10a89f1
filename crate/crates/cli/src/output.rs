use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use serde_json::{json, Value};

use crate::svg::Plot;

pub const SCHEMA: &str = "mp3/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Debug, Clone, Args)]
pub struct OutputSpec {
    /// Output format [default: csv, json for critical].
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Significant digits in text output.
    #[arg(long, default_value_t = 12, value_parser = clap::value_parser!(u32).range(6..=17))]
    pub precision: u32,
}

impl OutputSpec {
    pub fn format_or(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }

    pub fn num(&self, v: f64) -> String {
        format_sig(v, self.precision as usize)
    }

    /// `v` rounded to the output precision, for JSON.
    pub fn round(&self, v: f64) -> Value {
        if v.is_finite() {
            json!(self.num(v).parse::<f64>().unwrap_or(v))
        } else {
            Value::Null
        }
    }

    pub fn round_all(&self, vs: &[f64]) -> Value {
        Value::Array(vs.iter().map(|&v| self.round(v)).collect())
    }

    pub fn write(&self, body: &str) -> io::Result<()> {
        match &self.out {
            Some(path) => {
                let mut w = BufWriter::new(File::create(path)?);
                w.write_all(body.as_bytes())?;
                w.flush()
            }
            None => {
                let stdout = io::stdout();
                let mut lock = stdout.lock();
                lock.write_all(body.as_bytes())?;
                lock.flush()
            }
        }
    }
}

/// Shortest of fixed or scientific notation with `digits` significant
/// digits, trailing zeros removed.
pub fn format_sig(v: f64, digits: usize) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{:.*e}", digits - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if (-5..digits as i32).contains(&exp) {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(format!("{v:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// Numeric columns with `key = value` annotations.
#[derive(Debug, Clone)]
pub struct Table {
    pub command: &'static str,
    pub params: Value,
    pub annotations: Vec<(String, f64)>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn csv(&self, out: &OutputSpec) -> String {
        let mut s = String::new();
        for (k, v) in &self.annotations {
            s.push_str(&format!("# {k}={}\n", out.num(*v)));
        }
        s.push_str(&self.columns.join(","));
        s.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|&v| out.num(v)).collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        s
    }

    pub fn json(&self, out: &OutputSpec) -> Value {
        let annotations: serde_json::Map<String, Value> = self
            .annotations
            .iter()
            .map(|(k, v)| (k.clone(), out.round(*v)))
            .collect();
        json!({
            "schema": SCHEMA,
            "command": self.command,
            "params": self.params,
            "annotations": annotations,
            "columns": self.columns,
            "rows": self.rows.iter().map(|r| out.round_all(r)).collect::<Vec<_>>(),
        })
    }

    /// Column 0 against each other column.
    pub fn plot(&self, title: String, y_label: &str) -> Plot {
        let mut plot = Plot::new(title, self.columns[0], y_label);
        for (j, name) in self.columns.iter().enumerate().skip(1) {
            plot.line(name, self.rows.iter().map(|r| (r[0], r[j])).collect());
        }
        plot
    }

    pub fn render(&self, out: &OutputSpec, title: String, y_label: &str) -> String {
        match out.format_or(Format::Csv) {
            Format::Csv => self.csv(out),
            Format::Json => pretty(&self.json(out)),
            Format::Svg => self.plot(title, y_label).render(out, &self.csv(out)),
        }
    }
}

pub fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(format_sig(0.275664, 6), "0.275664");
        assert_eq!(format_sig(1.0, 12), "1");
        assert_eq!(format_sig(-2.5e-9, 6), "-2.5e-9");
        assert_eq!(format_sig(123456.789, 6), "123457");
        assert_eq!(format_sig(1.5e20, 8), "1.5e20");
        assert_eq!(format_sig(f64::NAN, 8), "nan");
        let x = 0.1 + 0.2;
        assert_eq!(format_sig(x, 17).parse::<f64>().unwrap(), x);
    }
}
