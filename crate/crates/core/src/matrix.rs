//! Dense 4×4 complex algebra over the level basis |Ψ₀⟩..|Ψ₃⟩.
//!
//! Level index 0..3 follows increasing energy. Everything here is a small
//! `Copy` value; operations return new matrices.

use std::fmt;
use std::ops::{Add, Index, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Number of levels of a spin-3/2.
pub const LEVELS: usize = 4;

/// Tolerance for exact analytic identities.
pub const IDENTITY_TOL: f64 = 1e-12;

/// Tolerance used when checking that an input is unitary before comparing
/// it up to phase. Long pulse products drift slightly past [`IDENTITY_TOL`].
pub const UNITARY_INPUT_TOL: f64 = 1e-10;

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub(crate) const I: Complex64 = Complex64::new(0.0, 1.0);

pub(crate) fn check_level(k: usize) -> Result<usize> {
    if k < LEVELS {
        Ok(k)
    } else {
        Err(Error::LevelOutOfRange(k))
    }
}

#[derive(Clone, Copy, PartialEq, Debug)]
pub struct Matrix4 {
    rows: [[Complex64; LEVELS]; LEVELS],
}

impl Default for Matrix4 {
    fn default() -> Self {
        Self::zero()
    }
}

impl Matrix4 {
    /// Wraps `rows` without validation. Intended for literal tables.
    pub const fn from_rows(rows: [[Complex64; LEVELS]; LEVELS]) -> Self {
        Self { rows }
    }

    pub fn try_from_rows(rows: [[Complex64; LEVELS]; LEVELS]) -> Result<Self> {
        let m = Self { rows };
        if m.is_finite() {
            Ok(m)
        } else {
            Err(Error::NonFinite)
        }
    }

    pub fn from_real(rows: [[f64; LEVELS]; LEVELS]) -> Self {
        let mut out = Self::zero();
        for (r, row) in rows.iter().enumerate() {
            for (c, &x) in row.iter().enumerate() {
                out.rows[r][c] = Complex64::new(x, 0.0);
            }
        }
        out
    }

    pub const fn zero() -> Self {
        Self { rows: [[ZERO; LEVELS]; LEVELS] }
    }

    pub fn identity() -> Self {
        Self::diag([ONE; LEVELS])
    }

    pub fn diag(d: [Complex64; LEVELS]) -> Self {
        let mut out = Self::zero();
        for (k, z) in d.into_iter().enumerate() {
            out.rows[k][k] = z;
        }
        out
    }

    pub fn rows(&self) -> &[[Complex64; LEVELS]; LEVELS] {
        &self.rows
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.rows[r][c]
    }

    /// Returns a copy with entry `(r, c)` replaced.
    pub fn with(mut self, r: usize, c: usize, value: Complex64) -> Self {
        self.rows[r][c] = value;
        self
    }

    pub fn diagonal(&self) -> [Complex64; LEVELS] {
        std::array::from_fn(|k| self.rows[k][k])
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zero();
        for r in 0..LEVELS {
            for c in 0..LEVELS {
                out.rows[c][r] = self.rows[r][c].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        (0..LEVELS).map(|k| self.rows[k][k]).sum()
    }

    pub fn scale(&self, s: Complex64) -> Self {
        self.map(|z| z * s)
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        let mut out = *self;
        for row in out.rows.iter_mut() {
            for z in row.iter_mut() {
                *z = f(*z);
            }
        }
        out
    }

    /// Applies `f` to off-diagonal entries only.
    pub fn map_off_diagonal(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        let mut out = *self;
        for r in 0..LEVELS {
            for c in 0..LEVELS {
                if r != c {
                    out.rows[r][c] = f(out.rows[r][c]);
                }
            }
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.rows
            .iter()
            .flatten()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// Max-norm of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (*self - *other).max_abs()
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.max_abs_diff(other) <= tol
    }

    pub fn is_finite(&self) -> bool {
        self.rows.iter().flatten().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// `‖U†U − E‖_max`.
    pub fn unitarity_defect(&self) -> f64 {
        (self.adjoint() * *self).max_abs_diff(&Self::identity())
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_defect() <= tol
    }

    pub fn hermiticity_defect(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    pub fn is_diagonal(&self, tol: f64) -> bool {
        (0..LEVELS).all(|r| (0..LEVELS).all(|c| r == c || self.rows[r][c].norm() <= tol))
    }

    pub fn apply(&self, ket: &Ket4) -> Ket4 {
        let a = ket.amplitudes();
        Ket4::new(std::array::from_fn(|r| {
            (0..LEVELS).map(|c| self.rows[r][c] * a[c]).sum()
        }))
    }

    /// `U · self · U†`.
    pub fn conjugate_by(&self, u: &Matrix4) -> Self {
        *u * *self * u.adjoint()
    }

    pub fn determinant(&self) -> Complex64 {
        // Laplace expansion along the first row; exact enough for 4×4.
        fn minor3(m: &[[Complex64; 4]; 4], skip_col: usize) -> Complex64 {
            let cols: Vec<usize> = (0..4).filter(|&c| c != skip_col).collect();
            let a = |r: usize, c: usize| m[r][cols[c]];
            a(1, 0) * (a(2, 1) * a(3, 2) - a(2, 2) * a(3, 1))
                - a(1, 1) * (a(2, 0) * a(3, 2) - a(2, 2) * a(3, 0))
                + a(1, 2) * (a(2, 0) * a(3, 1) - a(2, 1) * a(3, 0))
        }
        (0..4)
            .map(|c| {
                let sign = if c % 2 == 0 { 1.0 } else { -1.0 };
                self.rows[0][c] * minor3(&self.rows, c) * sign
            })
            .sum()
    }
}

impl Index<(usize, usize)> for Matrix4 {
    type Output = Complex64;
    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        &self.rows[r][c]
    }
}

impl Mul for Matrix4 {
    type Output = Matrix4;
    fn mul(self, rhs: Matrix4) -> Matrix4 {
        let mut out = Matrix4::zero();
        for r in 0..LEVELS {
            for c in 0..LEVELS {
                out.rows[r][c] = (0..LEVELS).map(|k| self.rows[r][k] * rhs.rows[k][c]).sum();
            }
        }
        out
    }
}

impl Mul<Complex64> for Matrix4 {
    type Output = Matrix4;
    fn mul(self, rhs: Complex64) -> Matrix4 {
        self.scale(rhs)
    }
}

impl Mul<f64> for Matrix4 {
    type Output = Matrix4;
    fn mul(self, rhs: f64) -> Matrix4 {
        self.map(|z| z * rhs)
    }
}

impl Add for Matrix4 {
    type Output = Matrix4;
    fn add(mut self, rhs: Matrix4) -> Matrix4 {
        for r in 0..LEVELS {
            for c in 0..LEVELS {
                self.rows[r][c] += rhs.rows[r][c];
            }
        }
        self
    }
}

impl Sub for Matrix4 {
    type Output = Matrix4;
    fn sub(self, rhs: Matrix4) -> Matrix4 {
        self + (-rhs)
    }
}

impl Neg for Matrix4 {
    type Output = Matrix4;
    fn neg(self) -> Matrix4 {
        self.map(|z| -z)
    }
}

impl std::iter::Product for Matrix4 {
    fn product<It: Iterator<Item = Matrix4>>(iter: It) -> Matrix4 {
        iter.fold(Matrix4::identity(), |acc, m| acc * m)
    }
}

impl std::iter::Sum for Matrix4 {
    fn sum<It: Iterator<Item = Matrix4>>(iter: It) -> Matrix4 {
        iter.fold(Matrix4::zero(), |acc, m| acc + m)
    }
}

impl fmt::Display for Matrix4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|z| fmt_complex(*z)).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

pub fn fmt_complex(z: Complex64) -> String {
    let clean = |x: f64| if x.abs() < 5e-13 { 0.0 } else { x };
    let (re, im) = (clean(z.re), clean(z.im));
    if im == 0.0 {
        format!("{re:+.6}")
    } else if re == 0.0 {
        format!("{im:+.6}i")
    } else {
        format!("{re:+.6}{im:+.6}i")
    }
}

/// Matrix unit `I_mn`: 1 at row `m`, column `n`.
pub fn projector(m: usize, n: usize) -> Result<Matrix4> {
    check_level(m)?;
    check_level(n)?;
    Ok(Matrix4::zero().with(m, n, ONE))
}

/// Infallible `I_mn` for indices already known to be valid.
pub(crate) fn unit(m: usize, n: usize) -> Matrix4 {
    Matrix4::zero().with(m, n, ONE)
}

/// Sum of matrix units with unit coefficients.
pub(crate) fn units(pairs: &[(usize, usize)]) -> Matrix4 {
    pairs.iter().map(|&(m, n)| unit(m, n)).sum()
}

fn require_unitary(u: &Matrix4) -> Result<()> {
    let defect = u.unitarity_defect();
    if defect <= UNITARY_INPUT_TOL {
        Ok(())
    } else {
        Err(Error::NotUnitary { defect })
    }
}

/// `1 − |tr(u†v)|/4`; zero exactly when `v = e^{iα}u`.
pub fn phase_distance(u: &Matrix4, v: &Matrix4) -> Result<f64> {
    require_unitary(u)?;
    require_unitary(v)?;
    Ok(phase_distance_unchecked(u, v))
}

pub(crate) fn phase_distance_unchecked(u: &Matrix4, v: &Matrix4) -> f64 {
    let overlap = (u.adjoint() * *v).trace().norm() / LEVELS as f64;
    (1.0 - overlap).max(0.0)
}

/// The unit scalar `e^{iα}` with `v ≈ e^{iα}u`.
pub fn global_phase(u: &Matrix4, v: &Matrix4, tol: f64) -> Result<Complex64> {
    let distance = phase_distance(u, v)?;
    if distance > tol {
        return Err(Error::NotPhaseEquivalent { distance });
    }
    let t = (u.adjoint() * *v).trace();
    Ok(t / t.norm())
}

/// Kronecker product of two 2×2 blocks in the `|ξ ζ⟩` ordering, index `2ξ+ζ`.
pub fn kron2(a: &[[Complex64; 2]; 2], b: &[[Complex64; 2]; 2]) -> Matrix4 {
    let mut out = Matrix4::zero();
    for (ar, arow) in a.iter().enumerate() {
        for (ac, &x) in arow.iter().enumerate() {
            for (br, brow) in b.iter().enumerate() {
                for (bc, &y) in brow.iter().enumerate() {
                    out.rows[2 * ar + br][2 * ac + bc] = x * y;
                }
            }
        }
    }
    out
}

/// State vector over the four levels.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct Ket4 {
    amps: [Complex64; LEVELS],
}

impl Ket4 {
    pub const fn new(amps: [Complex64; LEVELS]) -> Self {
        Self { amps }
    }

    pub fn basis(k: usize) -> Result<Self> {
        check_level(k)?;
        let mut amps = [ZERO; LEVELS];
        amps[k] = ONE;
        Ok(Self { amps })
    }

    pub fn amplitudes(&self) -> &[Complex64; LEVELS] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_normalized(&self, tol: f64) -> bool {
        (self.norm() - 1.0).abs() <= tol
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Ket4) -> Complex64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self { amps: self.amps.map(|z| z * s) }
    }

    pub fn populations(&self) -> [f64; LEVELS] {
        self.amps.map(|z| z.norm_sqr())
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn outer(&self) -> Matrix4 {
        let mut out = Matrix4::zero();
        for r in 0..LEVELS {
            for c in 0..LEVELS {
                out.rows[r][c] = self.amps[r] * self.amps[c].conj();
            }
        }
        out
    }
}
