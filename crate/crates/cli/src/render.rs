//! Output formats. Numbers are printed with a fixed number of significant
//! digits so that identical invocations produce identical bytes.

use std::io::{self, Write};

use clap::ValueEnum;
use serde::Serialize;

/// Significant digits in CSV and JSON output.
pub const MACHINE_DIGITS: usize = 12;
/// Significant digits in human-readable tables.
pub const TABLE_DIGITS: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Table,
    Csv,
    Json,
}

/// `%g`-style formatting: `digits` significant digits, trailing zeros
/// trimmed, scientific notation outside `1e-5 ≤ |v| < 10^digits`.
pub fn format_sig(v: f64, digits: usize) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    if !v.is_finite() {
        return if v.is_nan() {
            "nan".to_string()
        } else if v > 0.0 {
            "inf".to_string()
        } else {
            "-inf".to_string()
        };
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent in scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= digits as i32 {
        format!("{}e{}", trim_zeros(mantissa), exp)
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{v:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// `v` rounded to [`MACHINE_DIGITS`] significant digits, for JSON output.
pub fn round_sig(v: f64) -> f64 {
    if v.is_finite() {
        format_sig(v, MACHINE_DIGITS).parse().unwrap_or(v)
    } else {
        v
    }
}

pub fn csv_number(v: f64) -> String {
    format_sig(v, MACHINE_DIGITS)
}

pub fn table_number(v: f64) -> String {
    format_sig(v, TABLE_DIGITS)
}

/// Writes `{"inputs": …, "results": …}` with a trailing newline.
pub fn write_json<W: Write, I: Serialize, R: Serialize>(out: &mut W, inputs: &I, results: &R) -> io::Result<()> {
    #[derive(Serialize)]
    struct Document<'a, I, R> {
        inputs: &'a I,
        results: &'a R,
    }
    serde_json::to_writer_pretty(&mut *out, &Document { inputs, results })?;
    writeln!(out)
}

pub fn write_csv<W: Write>(out: &mut W, header: &[&str], rows: &[Vec<String>]) -> io::Result<()> {
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(&mut *out);
    writer.write_record(header)?;
    for row in rows {
        writer.write_record(row)?;
    }
    writer.flush()?;
    Ok(())
}

/// Left-aligned text table with a dashed rule under the header.
pub fn write_table<W: Write>(out: &mut W, header: &[&str], rows: &[Vec<String>]) -> io::Result<()> {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: Vec<&str>| -> String {
        cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect::<Vec<_>>()
            .join("  ")
            .trim_end()
            .to_string()
    };
    writeln!(out, "{}", line(header.to_vec()))?;
    let rule: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
    writeln!(out, "{}", line(rule.iter().map(String::as_str).collect()))?;
    for row in rows {
        writeln!(out, "{}", line(row.iter().map(String::as_str).collect()))?;
    }
    Ok(())
}
