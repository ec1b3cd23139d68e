//! Rendering of command results. Exact integers are always decimal strings.

use std::io::{self, Write};

use serde_json::Value;

use crate::CliError;

pub fn print_json(value: &Value) -> Result<(), CliError> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value).map_err(|e| CliError::Io(e.to_string()))?;
    writeln!(out).map_err(|e| CliError::Io(e.to_string()))
}

/// Header plus rows, comma-separated with LF endings. Fields are numeric or
/// plain words, so nothing is quoted.
pub fn print_csv(header: &[&str], rows: &[Vec<String>]) -> Result<(), CliError> {
    let mut out = io::BufWriter::new(io::stdout().lock());
    let io_err = |e: io::Error| CliError::Io(e.to_string());
    writeln!(out, "{}", header.join(",")).map_err(io_err)?;
    for row in rows {
        writeln!(out, "{}", row.join(",")).map_err(io_err)?;
    }
    out.flush().map_err(io_err)
}

/// Shortest representation that round-trips, so repeated runs match byte for byte.
pub fn real(x: f64) -> String {
    format!("{x}")
}
