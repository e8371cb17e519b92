//! Rendering of command results as JSON or an aligned table.

use std::io::{self, Write};

use serde_json::{json, Map, Value};
use winverse::ComplexMatrix;

use crate::matrix_file::MatrixFile;
use crate::Format;

enum Field {
    Matrix(ComplexMatrix),
    Integer(usize),
    Number(f64),
    Flag(bool),
}

/// An ordered set of named outputs. A `result` matrix, when present, is the
/// top-level JSON object, which `verify --x` reads back as a matrix file.
pub struct Report {
    title: String,
    result: Option<ComplexMatrix>,
    fields: Vec<(String, Field)>,
    residuals: Option<Vec<(String, f64)>>,
}

impl Report {
    pub fn new(title: &str) -> Self {
        Report { title: title.to_string(), result: None, fields: Vec::new(), residuals: None }
    }

    pub fn result(&mut self, m: ComplexMatrix) -> &mut Self {
        self.result = Some(m);
        self
    }

    pub fn matrix(&mut self, name: &str, m: ComplexMatrix) -> &mut Self {
        self.fields.push((name.to_string(), Field::Matrix(m)));
        self
    }

    pub fn scalar(&mut self, name: &str, v: usize) -> &mut Self {
        self.fields.push((name.to_string(), Field::Integer(v)));
        self
    }

    pub fn number(&mut self, name: &str, v: f64) -> &mut Self {
        self.fields.push((name.to_string(), Field::Number(v)));
        self
    }

    pub fn flag(&mut self, name: &str, v: bool) -> &mut Self {
        self.fields.push((name.to_string(), Field::Flag(v)));
        self
    }

    pub fn residuals(&mut self, r: Vec<(String, f64)>) -> &mut Self {
        self.residuals = Some(r);
        self
    }

    pub fn write(&self, out: &mut dyn Write, format: Format, digits: usize) -> io::Result<()> {
        match format {
            Format::Json => {
                serde_json::to_writer(&mut *out, &self.to_json())?;
                writeln!(out)
            }
            Format::Table => self.write_table(out, digits),
        }
    }

    fn to_json(&self) -> Value {
        let mut obj = match &self.result {
            Some(m) => match serde_json::to_value(MatrixFile::new(m, Some(&self.title))) {
                Ok(Value::Object(map)) => map,
                _ => Map::new(),
            },
            None => {
                let mut map = Map::new();
                map.insert("name".into(), json!(self.title));
                map
            }
        };
        for (name, field) in &self.fields {
            let v = match field {
                Field::Matrix(m) => serde_json::to_value(MatrixFile::new(m, None)).unwrap_or(Value::Null),
                Field::Integer(v) => json!(v),
                Field::Number(v) => json!(v),
                Field::Flag(v) => json!(v),
            };
            obj.insert(name.clone(), v);
        }
        if let Some(r) = &self.residuals {
            let list = r.iter().map(|(label, v)| json!({"equation": label, "residual": v})).collect();
            obj.insert("residuals".into(), Value::Array(list));
        }
        Value::Object(obj)
    }

    fn write_table(&self, out: &mut dyn Write, digits: usize) -> io::Result<()> {
        writeln!(out, "{}", self.title)?;
        if let Some(m) = &self.result {
            write_matrix(out, "X", m, digits)?;
        }
        for (name, field) in &self.fields {
            match field {
                Field::Matrix(m) => write_matrix(out, name, m, digits)?,
                Field::Integer(v) => writeln!(out, "{name} = {v}")?,
                Field::Number(v) => writeln!(out, "{name} = {v:.3e}")?,
                Field::Flag(v) => writeln!(out, "{name} = {v}")?,
            }
        }
        if let Some(r) = &self.residuals {
            let width = r.iter().map(|(label, _)| label.chars().count()).max().unwrap_or(0);
            writeln!(out, "residuals:")?;
            for (label, v) in r {
                let pad = width - label.chars().count();
                writeln!(out, "  {label}{}  {v:.3e}", " ".repeat(pad))?;
            }
        }
        Ok(())
    }
}

fn write_matrix(out: &mut dyn Write, name: &str, m: &ComplexMatrix, digits: usize) -> io::Result<()> {
    writeln!(out, "{name} ({}x{}):", m.rows(), m.cols())?;
    let floor = m.max_norm() * NOISE;
    let cells: Vec<String> = m.entries().iter().map(|z| format_complex(z.re, z.im, digits, floor)).collect();
    let width = cells.iter().map(|c| c.len()).max().unwrap_or(0);
    for row in cells.chunks(m.cols().max(1)) {
        let line: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
        writeln!(out, "  {}", line.join("  "))?;
    }
    Ok(())
}

/// Entries this far below the largest one are shown as zero.
const NOISE: f64 = 1e-14;

/// Rounds to `digits` significant digits. Parts at most `floor` in size, or
/// below `digits` relative to the other part, are dropped.
pub fn format_complex(re: f64, im: f64, digits: usize, floor: f64) -> String {
    let mag = re.abs().max(im.abs());
    let floor = floor.max(mag * 10f64.powi(-(digits as i32)));
    let clean = |v: f64| if v.abs() <= floor { 0.0 } else { v };
    let (re, im) = (clean(re), clean(im));
    let fmt = |v: f64| {
        let s = format!("{:.*e}", digits.saturating_sub(1), v);
        let parsed: f64 = s.parse().unwrap_or(v);
        format!("{parsed}")
    };
    match (re == 0.0, im == 0.0) {
        (_, true) => fmt(re),
        (true, false) => format!("{}i", fmt(im)),
        (false, false) => {
            let sign = if im < 0.0 { '-' } else { '+' };
            format!("{}{sign}{}i", fmt(re), fmt(im.abs()))
        }
    }
}
