//! Plot-ready CSV: header row, comma separator, LF line endings.

use std::path::Path;

use crate::error::{Error, Result};

use super::json::format_g17;

fn csv_err(e: csv::Error) -> Error {
    Error::Parse(e.to_string())
}

/// Writes equal-length columns under the given headers.
pub fn write_columns(path: &Path, headers: &[&str], columns: &[&[f64]]) -> Result<()> {
    let n = columns.first().map_or(0, |c| c.len());
    if headers.len() != columns.len() || columns.iter().any(|c| c.len() != n) {
        return Err(Error::InvalidInput("CSV columns must match the headers and each other in length".into()));
    }
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_path(path).map_err(csv_err)?;
    w.write_record(headers).map_err(csv_err)?;
    for i in 0..n {
        w.write_record(columns.iter().map(|c| format_g17(c[i]))).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

/// Reads numeric columns from a CSV file with a header row.
pub fn read_columns(path: &Path) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let mut r = csv::ReaderBuilder::new().trim(csv::Trim::All).comment(Some(b'#')).from_path(path).map_err(csv_err)?;
    let headers: Vec<String> = r.headers().map_err(csv_err)?.iter().map(String::from).collect();
    let mut cols = vec![Vec::new(); headers.len()];
    for (line, rec) in r.records().enumerate() {
        let rec = rec.map_err(csv_err)?;
        for (j, field) in rec.iter().enumerate() {
            let v: f64 = field.parse().map_err(|_| Error::Parse(format!("{}: row {}: \"{field}\" is not a number", path.display(), line + 2)))?;
            cols[j].push(v);
        }
    }
    Ok((headers, cols))
}
