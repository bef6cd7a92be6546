//! Text serialization of matrices and time series.
//!
//! All floating-point values are written in scientific notation with 17
//! significant digits, enough to round-trip f64 exactly, so repeated
//! runs diff byte-identically.

use std::io::Write;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Fixed 17-significant-digit scientific rendering.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn parse_float(token: &str, line: usize) -> Result<f64> {
    token.trim().parse::<f64>().map_err(|e| Error::CsvParse {
        line,
        msg: format!("bad number {token:?}: {e}"),
    })
}

/// Real matrix as CSV, row-major, with a header row of vertex indices
/// (`v0,v1,...`; the prefix keeps the header distinguishable from data).
pub fn write_real_matrix_csv<W: Write>(w: &mut W, m: &DMatrix<f64>) -> Result<()> {
    let header: Vec<String> = (0..m.ncols()).map(|j| format!("v{j}")).collect();
    writeln!(w, "{}", header.join(","))?;
    for i in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols()).map(|j| format_float(m[(i, j)])).collect();
        writeln!(w, "{}", row.join(","))?;
    }
    Ok(())
}

/// Complex matrix as CSV with interleaved `(re, im)` column pairs and a
/// `re_j,im_j` header.
pub fn write_complex_matrix_csv<W: Write>(w: &mut W, m: &DMatrix<Complex64>) -> Result<()> {
    let header: Vec<String> = (0..m.ncols())
        .flat_map(|j| [format!("re_{j}"), format!("im_{j}")])
        .collect();
    writeln!(w, "{}", header.join(","))?;
    for i in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols())
            .flat_map(|j| [format_float(m[(i, j)].re), format_float(m[(i, j)].im)])
            .collect();
        writeln!(w, "{}", row.join(","))?;
    }
    Ok(())
}

/// Time series as CSV: one `t` column plus named value columns.
pub fn write_series_csv<W: Write>(
    w: &mut W,
    value_names: &[String],
    rows: &[(f64, Vec<f64>)],
) -> Result<()> {
    writeln!(w, "t,{}", value_names.join(","))?;
    for (t, values) in rows {
        if values.len() != value_names.len() {
            return Err(Error::Internal(format!(
                "series row has {} values for {} columns",
                values.len(),
                value_names.len()
            )));
        }
        let mut row = vec![format_float(*t)];
        row.extend(values.iter().map(|&x| format_float(x)));
        writeln!(w, "{}", row.join(","))?;
    }
    Ok(())
}

fn split_rows(text: &str) -> Vec<(usize, Vec<&str>)> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| (i + 1, l.split(',').collect()))
        .collect()
}

fn looks_like_header(fields: &[&str]) -> bool {
    fields
        .iter()
        .any(|f| f.trim().parse::<f64>().is_err())
}

/// Parses a real matrix from CSV; a leading non-numeric row is treated
/// as a header and skipped.
pub fn read_real_matrix_csv(text: &str) -> Result<DMatrix<f64>> {
    let mut rows = split_rows(text);
    if rows.is_empty() {
        return Err(Error::CsvParse {
            line: 1,
            msg: "empty matrix file".into(),
        });
    }
    if looks_like_header(&rows[0].1) {
        rows.remove(0);
    }
    let ncols = rows
        .first()
        .map(|(_, r)| r.len())
        .ok_or(Error::CsvParse {
            line: 1,
            msg: "matrix file has a header but no data".into(),
        })?;
    let mut data = Vec::with_capacity(rows.len() * ncols);
    for (line, fields) in &rows {
        if fields.len() != ncols {
            return Err(Error::CsvParse {
                line: *line,
                msg: format!("expected {ncols} fields, got {}", fields.len()),
            });
        }
        for f in fields {
            data.push(parse_float(f, *line)?);
        }
    }
    Ok(DMatrix::from_row_slice(rows.len(), ncols, &data))
}

/// Parses a complex matrix from CSV with interleaved `(re, im)` pairs.
pub fn read_complex_matrix_csv(text: &str) -> Result<DMatrix<Complex64>> {
    let real = read_real_matrix_csv(text)?;
    if real.ncols() % 2 != 0 {
        return Err(Error::CsvParse {
            line: 1,
            msg: format!(
                "complex matrix needs an even column count, got {}",
                real.ncols()
            ),
        });
    }
    let ncols = real.ncols() / 2;
    Ok(DMatrix::from_fn(real.nrows(), ncols, |i, j| {
        Complex64::new(real[(i, 2 * j)], real[(i, 2 * j + 1)])
    }))
}
