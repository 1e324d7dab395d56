use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use hsdensity::ComplexMatrix;
use serde::{Deserialize, Serialize};

use crate::config::CliError;

/// One matrix per NDJSON line. Floats use the shortest decimal that parses
/// back to the same `f64`, so records round-trip exactly.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixRecord {
    pub d: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl From<&ComplexMatrix> for MatrixRecord {
    fn from(m: &ComplexMatrix) -> Self {
        Self { d: m.dim(), re: m.real_parts(), im: m.imag_parts() }
    }
}

/// One CSV row per matrix entry.
#[derive(Debug, Serialize)]
struct EntryRow {
    sample: usize,
    row: usize,
    col: usize,
    re: f64,
    im: f64,
}

pub fn open(path: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

pub fn write_ndjson(w: &mut dyn Write, matrices: &[ComplexMatrix]) -> Result<(), CliError> {
    for m in matrices {
        serde_json::to_writer(&mut *w, &MatrixRecord::from(m))?;
        w.write_all(b"\n")?;
    }
    Ok(())
}

pub fn write_csv(w: &mut dyn Write, matrices: &[ComplexMatrix]) -> Result<(), CliError> {
    let mut out = csv::Writer::from_writer(w);
    for (sample, m) in matrices.iter().enumerate() {
        for row in 0..m.dim() {
            for col in 0..m.dim() {
                let z = m[(row, col)];
                out.serialize(EntryRow { sample, row, col, re: z.re, im: z.im })?;
            }
        }
    }
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ndjson_round_trips_exactly() {
        let pi = std::f64::consts::PI;
        let re = vec![vec![0.1 + 0.2, 1.0 / 3.0], vec![1.0 / 3.0, f64::MIN_POSITIVE]];
        let im = vec![vec![0.0, -pi], vec![pi, 0.0]];
        let m = ComplexMatrix::from_parts(&re, &im).unwrap();
        let mut buf = Vec::new();
        write_ndjson(&mut buf, std::slice::from_ref(&m)).unwrap();
        let back: MatrixRecord = serde_json::from_slice(&buf).unwrap();
        let m2 = ComplexMatrix::from_parts(&back.re, &back.im).unwrap();
        assert_eq!(m, m2);
    }

    #[test]
    fn csv_has_one_row_per_entry() {
        let m = ComplexMatrix::identity(3);
        let mut buf = Vec::new();
        write_csv(&mut buf, &[m.clone(), m]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 1 + 2 * 9);
        assert_eq!(text.lines().next().unwrap(), "sample,row,col,re,im");
    }
}
