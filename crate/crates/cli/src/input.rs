//! Parsing of command-line values: elements, complex lists and matrices.

use std::path::Path;
use std::str::FromStr;

use jordan_cr::json;
use jordan_cr::{Algebra, Element};
use nalgebra::DMatrix;
use num_complex::Complex64;

/// Failure to read user input; always maps to exit code 2.
#[derive(Debug)]
pub struct InputError(pub String);

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

pub type InputResult<T> = Result<T, InputError>;

/// Inline text, or the contents of the file it names.
pub fn read_source(arg: &str) -> InputResult<String> {
    let path = Path::new(arg);
    if !arg.trim_start().starts_with(['[', '{']) && path.is_file() {
        return std::fs::read_to_string(path).map_err(|e| InputError(format!("cannot read {arg}: {e}")));
    }
    Ok(arg.to_string())
}

/// `diag(a, b, …)` → the numbers inside.
fn diag_entries(text: &str) -> Option<InputResult<Vec<f64>>> {
    let inner = text.trim().strip_prefix("diag(")?.strip_suffix(')')?;
    Some(
        inner
            .split(',')
            .map(|t| t.trim().parse::<f64>().map_err(|e| InputError(format!("bad diagonal entry {t:?}: {e}"))))
            .collect(),
    )
}

/// An element given as a coordinate array or as `diag(λ₁, …, λ_r)` on the standard frame.
pub fn parse_element(alg: &Algebra, arg: &str) -> InputResult<Element> {
    let text = read_source(arg)?;
    let x = match diag_entries(&text) {
        Some(entries) => alg.diagonal(&entries?).map_err(|e| InputError(e.to_string()))?,
        None => json::parse_vector(&text).map_err(|e| InputError(format!("element: {e}")))?,
    };
    if x.len() != alg.dim() {
        return Err(InputError(format!(
            "element has {} coordinates, the algebra has dimension {}",
            x.len(),
            alg.dim()
        )));
    }
    Ok(x)
}

/// Real list: a JSON array, a single number, or comma-separated numbers.
pub fn parse_reals(arg: &str) -> InputResult<Vec<f64>> {
    let t = arg.trim();
    if t.starts_with('[') {
        return serde_json::from_str(t).map_err(|e| InputError(format!("{e}")));
    }
    t.split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|e| InputError(format!("bad number {s:?}: {e}"))))
        .collect()
}

/// Complex list: JSON (`[re, im]` pairs or reals) or comma-separated `a+bi` literals.
pub fn parse_complexes(arg: &str) -> InputResult<Vec<Complex64>> {
    let t = arg.trim();
    if t.starts_with('[') {
        return json::parse_complex_vector(t)
            .map(|v| v.iter().copied().collect())
            .map_err(|e| InputError(format!("{e}")));
    }
    t.split(',')
        .map(|s| {
            let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
            Complex64::from_str(&s).map_err(|_| InputError(format!("bad complex number {s:?}")))
        })
        .collect()
}

/// Real matrix: JSON rows or `diag(…)`.
pub fn parse_real_matrix(arg: &str) -> InputResult<DMatrix<f64>> {
    let text = read_source(arg)?;
    if let Some(entries) = diag_entries(&text) {
        return Ok(DMatrix::from_diagonal(&nalgebra::DVector::from_vec(entries?)));
    }
    json::parse_matrix(&text).map_err(|e| InputError(format!("matrix: {e}")))
}

/// Complex matrix: JSON rows whose entries are reals or `[re, im]` pairs.
pub fn parse_complex_matrix(arg: &str) -> InputResult<DMatrix<Complex64>> {
    let text = read_source(arg)?;
    let rows: Vec<serde_json::Value> = serde_json::from_str(&text).map_err(|e| InputError(format!("matrix: {e}")))?;
    let rows: Vec<Vec<Complex64>> = rows
        .iter()
        .map(|r| {
            json::parse_complex_vector(&r.to_string())
                .map(|v| v.iter().copied().collect())
                .map_err(|e| InputError(format!("matrix row: {e}")))
        })
        .collect::<InputResult<_>>()?;
    let n = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != n) {
        return Err(InputError("ragged matrix rows".into()));
    }
    Ok(DMatrix::from_fn(rows.len(), n, |i, j| rows[i][j]))
}
