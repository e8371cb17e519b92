//! Reading and writing matrices.
//!
//! The canonical format is JSON, `{"rows": r, "cols": c, "data": [[[re, im], ...], ...], "name": ...}`.
//! Plain text with one row per line and whitespace-separated `a+bi` tokens
//! is accepted on input; blank lines and lines starting with `#` are skipped.

use std::path::Path;

use num_complex::Complex;
use serde::{Deserialize, Serialize};
use winverse::ComplexMatrix;

use crate::CliError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

impl MatrixFile {
    pub fn new(m: &ComplexMatrix, name: Option<&str>) -> Self {
        MatrixFile { rows: m.rows(), cols: m.cols(), data: m.to_f64_pairs(), name: name.map(str::to_string) }
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix, String> {
        if self.data.len() != self.rows {
            return Err(format!("expected {} rows of data, found {}", self.rows, self.data.len()));
        }
        let mut entries = Vec::with_capacity(self.rows * self.cols);
        for (i, row) in self.data.iter().enumerate() {
            if row.len() != self.cols {
                return Err(format!("row {i} has {} entries, expected {}", row.len(), self.cols));
            }
            entries.extend(row.iter().map(|&[re, im]| Complex::new(re, im)));
        }
        ComplexMatrix::from_entries(self.rows, self.cols, entries).map_err(|e| e.to_string())
    }
}

pub fn parse_matrix(text: &str) -> Result<ComplexMatrix, String> {
    if text.trim_start().starts_with('{') {
        let file: MatrixFile = serde_json::from_str(text).map_err(|e| e.to_string())?;
        file.to_matrix()
    } else {
        parse_text(text)
    }
}

fn parse_text(text: &str) -> Result<ComplexMatrix, String> {
    let mut rows: Vec<Vec<Complex<f64>>> = Vec::new();
    for (line_no, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let row = line
            .split_whitespace()
            .map(|tok| tok.parse::<Complex<f64>>().map_err(|_| format!("line {}: cannot parse `{tok}`", line_no + 1)))
            .collect::<Result<Vec<_>, _>>()?;
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(format!("line {}: {} entries, expected {}", line_no + 1, row.len(), first.len()));
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err("no matrix rows found".into());
    }
    let (r, c) = (rows.len(), rows[0].len());
    ComplexMatrix::from_entries(r, c, rows.into_iter().flatten().collect()).map_err(|e| e.to_string())
}

pub fn read_matrix(path: &Path) -> Result<ComplexMatrix, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    parse_matrix(&text).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

/// A vector argument; a single row is read as a column.
pub fn read_vector(path: &Path) -> Result<ComplexMatrix, CliError> {
    let m = read_matrix(path)?;
    Ok(if m.rows() == 1 { m.transpose() } else { m })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn text_format() {
        let m = parse_text("# a comment\n1 2-i\n\n-3.5 4i\n").unwrap();
        assert_eq!(m.shape(), (2, 2));
        assert_eq!(m[(0, 1)], Complex::new(2.0, -1.0));
        assert_eq!(m[(1, 1)], Complex::new(0.0, 4.0));
        assert!(parse_text("1 2\n3\n").is_err());
        assert!(parse_text("1 x\n").is_err());
        assert!(parse_text("").is_err());
    }

    #[test]
    fn json_shape_is_checked() {
        let bad = r#"{"rows": 2, "cols": 1, "data": [[[1, 0]]]}"#;
        assert!(parse_matrix(bad).is_err());
        let nan = r#"{"rows": 1, "cols": 1, "data": [[[1e999, 0]]]}"#;
        assert!(parse_matrix(nan).is_err());
    }

    proptest! {
        #[test]
        fn json_round_trip_is_exact(entries in prop::collection::vec((-1e6f64..1e6, -1e6f64..1e6), 1..20), cols in 1usize..5) {
            let rows = entries.len().div_ceil(cols);
            let m = ComplexMatrix::from_fn(rows, cols, |i, j| {
                let (re, im) = entries[(i * cols + j) % entries.len()];
                Complex::new(re, im)
            });
            let json = serde_json::to_string(&MatrixFile::new(&m, Some("m"))).unwrap();
            let back = parse_matrix(&json).unwrap();
            prop_assert_eq!(back.entries(), m.entries());
        }
    }
}
