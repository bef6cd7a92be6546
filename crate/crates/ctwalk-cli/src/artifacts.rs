//! Artifact emission honoring the `--format` flag: tabular data goes
//! out as CSV by default or as JSON arrays on request. Reports are
//! always JSON.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde_json::json;

use ctwalk::io::{write_complex_matrix_csv, write_real_matrix_csv, write_series_csv};
use ctwalk::Result;

use crate::context::{Context, OutputFormat};

pub fn emit_real_matrix(ctx: &Context, stem: &str, m: &DMatrix<f64>) -> Result<String> {
    match ctx.format {
        OutputFormat::Csv => {
            let mut bytes = Vec::new();
            write_real_matrix_csv(&mut bytes, m)?;
            let name = format!("{stem}.csv");
            ctx.write_artifact(&name, &bytes)?;
            Ok(name)
        }
        OutputFormat::Json => {
            let rows: Vec<Vec<f64>> = (0..m.nrows())
                .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
                .collect();
            let name = format!("{stem}.json");
            ctx.write_json(&name, &json!({ "rows": rows }))?;
            Ok(name)
        }
    }
}

pub fn emit_complex_matrix(ctx: &Context, stem: &str, m: &DMatrix<Complex64>) -> Result<String> {
    match ctx.format {
        OutputFormat::Csv => {
            let mut bytes = Vec::new();
            write_complex_matrix_csv(&mut bytes, m)?;
            let name = format!("{stem}.csv");
            ctx.write_artifact(&name, &bytes)?;
            Ok(name)
        }
        OutputFormat::Json => {
            let rows: Vec<Vec<[f64; 2]>> = (0..m.nrows())
                .map(|i| {
                    (0..m.ncols())
                        .map(|j| [m[(i, j)].re, m[(i, j)].im])
                        .collect()
                })
                .collect();
            let name = format!("{stem}.json");
            ctx.write_json(&name, &json!({ "rows": rows }))?;
            Ok(name)
        }
    }
}

pub fn emit_series(
    ctx: &Context,
    stem: &str,
    value_names: &[String],
    rows: &[(f64, Vec<f64>)],
) -> Result<String> {
    match ctx.format {
        OutputFormat::Csv => {
            let mut bytes = Vec::new();
            write_series_csv(&mut bytes, value_names, rows)?;
            let name = format!("{stem}.csv");
            ctx.write_artifact(&name, &bytes)?;
            Ok(name)
        }
        OutputFormat::Json => {
            let name = format!("{stem}.json");
            let data: Vec<serde_json::Value> = rows
                .iter()
                .map(|(t, values)| json!({ "t": t, "values": values }))
                .collect();
            ctx.write_json(&name, &json!({ "columns": value_names, "rows": data }))?;
            Ok(name)
        }
    }
}
