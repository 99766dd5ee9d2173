//! JSON encodings and text formatting shared by the commands.
//!
//! Complex numbers are `[re, im]`; matrices are row-major arrays of rows.
//! `serde_json` prints the shortest representation that round-trips, so
//! every `f64` survives a write and read unchanged.

use std::f64::consts::PI;

use num_complex::Complex64;
use vspin::matrix::fmt_complex;
use vspin::Matrix4;

pub type JsonComplex = [f64; 2];
pub type JsonMatrix = [[JsonComplex; 4]; 4];

pub fn complex(z: Complex64) -> JsonComplex {
    [z.re, z.im]
}

pub fn matrix(m: &Matrix4) -> JsonMatrix {
    (*m.rows()).map(|row| row.map(complex))
}

/// Inverse of [`matrix`].
pub fn matrix_from_json(rows: &JsonMatrix) -> Matrix4 {
    Matrix4::from_rows(rows.map(|row| row.map(|[re, im]| Complex64::new(re, im))))
}

/// `arg(z)/π`, in `(−1, 1]`.
pub fn phase_over_pi(z: Complex64) -> f64 {
    let t = z.arg() / PI;
    if t <= -1.0 { t + 2.0 } else { t }
}

/// `exp(i·0.250000·pi)` style.
pub fn fmt_phase(z: Complex64) -> String {
    let t = phase_over_pi(z);
    let t = if t.abs() < 5e-13 { 0.0 } else { t };
    format!("exp(i*{t:+.6}*pi)")
}

pub fn fmt_opt_phase(z: Option<Complex64>) -> String {
    z.map_or_else(|| "-".to_string(), fmt_phase)
}

pub fn fmt_value(z: Complex64) -> String {
    fmt_complex(z)
}

/// Matrix as indented rows.
pub fn fmt_matrix(m: &Matrix4, indent: &str) -> String {
    m.to_string().lines().map(|l| format!("{indent}{l}\n")).collect()
}
