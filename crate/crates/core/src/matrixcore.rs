//! Dense complex matrices, nilpotent exponentials and the invariant form.
//!
//! All group and Lie algebra elements are `(m+n) x (m+n)` complex matrices in
//! the basis `e_1..e_{m+n}` where `e_i` pairs with `e_{i+n}` for `i <= n` and
//! the trailing `m-n` vectors are orthonormal.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    #[serde(rename = "so")]
    Orthogonal,
    #[serde(rename = "su")]
    Unitary,
}

impl Family {
    pub fn as_str(self) -> &'static str {
        match self {
            Family::Orthogonal => "so",
            Family::Unitary => "su",
        }
    }
}

impl std::str::FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "so" | "SO" | "orthogonal" => Ok(Family::Orthogonal),
            "su" | "SU" | "unitary" => Ok(Family::Unitary),
            other => Err(Error::ParseError(format!("unknown family {other:?}"))),
        }
    }
}

/// A group `SO+(m,n)` or `SU(m,n)` with `m >= n >= 3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupSpec {
    pub family: Family,
    pub m: usize,
    pub n: usize,
}

impl GroupSpec {
    pub fn new(family: Family, m: usize, n: usize) -> Result<Self> {
        if n < 3 || m < n {
            return Err(Error::InvalidSpec("m ≥ n ≥ 3 required".into()));
        }
        Ok(GroupSpec { family, m, n })
    }

    pub fn so(m: usize, n: usize) -> Result<Self> {
        Self::new(Family::Orthogonal, m, n)
    }

    pub fn su(m: usize, n: usize) -> Result<Self> {
        Self::new(Family::Unitary, m, n)
    }

    /// Ambient matrix size `m + n`.
    pub fn size(&self) -> usize {
        self.m + self.n
    }

    /// Length `m - n` of the compact tail block.
    pub fn k(&self) -> usize {
        self.m - self.n
    }

    /// Real dimension of the Lie algebra.
    pub fn lie_dim(&self) -> usize {
        let s = self.size();
        match self.family {
            Family::Orthogonal => s * (s - 1) / 2,
            Family::Unitary => s * s - 1,
        }
    }

    pub fn is_unitary(&self) -> bool {
        self.family == Family::Unitary
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::Orthogonal => write!(f, "SO+({},{})", self.m, self.n),
            Family::Unitary => write!(f, "SU({},{})", self.m, self.n),
        }
    }
}

/// Relative Frobenius tolerance: `A ≈ B` iff
/// `‖A−B‖ ≤ rel·(1 + max(‖A‖, ‖B‖))`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub rel: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { rel: 1e-9 }
    }
}

impl Tolerance {
    pub const ENV_VAR: &'static str = "RIGIDKIT_TOL";

    pub fn new(rel: f64) -> Self {
        Tolerance { rel }
    }

    /// Default tolerance, overridden by `RIGIDKIT_TOL` when it parses.
    pub fn from_env() -> Self {
        std::env::var(Self::ENV_VAR)
            .ok()
            .and_then(|v| v.trim().parse::<f64>().ok())
            .filter(|v| v.is_finite() && *v >= 0.0)
            .map(Tolerance::new)
            .unwrap_or_default()
    }

    /// The scaled distance compared against `rel`.
    pub fn residual(a: &Mat, b: &Mat) -> f64 {
        let d = a.sub_mat(b).norm();
        d / (1.0 + a.norm().max(b.norm()))
    }

    pub fn approx(&self, a: &Mat, b: &Mat) -> bool {
        Self::residual(a, b) <= self.rel
    }
}

/// Dense square complex matrix, row-major.
#[derive(Clone, PartialEq)]
pub struct Mat {
    size: usize,
    data: Vec<C64>,
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat({})", self.size)?;
        for r in 0..self.size {
            let row: Vec<String> = (0..self.size)
                .map(|c| {
                    let z = self[(r, c)];
                    format!("{:+.4}{:+.4}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "  [{}]", row.join(" "))?;
        }
        Ok(())
    }
}

impl Index<(usize, usize)> for Mat {
    type Output = C64;
    fn index(&self, (r, c): (usize, usize)) -> &C64 {
        &self.data[r * self.size + c]
    }
}

impl IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C64 {
        &mut self.data[r * self.size + c]
    }
}

impl Mat {
    pub fn zeros(size: usize) -> Self {
        Mat { size, data: vec![ZERO; size * size] }
    }

    pub fn identity(size: usize) -> Self {
        let mut m = Self::zeros(size);
        for i in 0..size {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(size: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = Self::zeros(size);
        for r in 0..size {
            for c in 0..size {
                m[(r, c)] = f(r, c);
            }
        }
        m
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Self {
        let size = rows.len();
        Self::from_fn(size, |r, c| C64::new(rows[r][c], 0.0))
    }

    /// Matrix unit `e_{r,c}` scaled by `z` (0-based indices).
    pub fn unit(size: usize, r: usize, c: usize, z: C64) -> Self {
        let mut m = Self::zeros(size);
        m[(r, c)] = z;
        m
    }

    pub fn diag(entries: &[C64]) -> Self {
        let mut m = Self::zeros(entries.len());
        for (i, &z) in entries.iter().enumerate() {
            m[(i, i)] = z;
        }
        m
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn entries(&self) -> &[C64] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }

    pub fn norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn trace(&self) -> C64 {
        (0..self.size).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, z: C64) -> Self {
        Mat { size: self.size, data: self.data.iter().map(|&x| x * z).collect() }
    }

    pub fn scale_re(&self, x: f64) -> Self {
        Mat { size: self.size, data: self.data.iter().map(|&v| v * x).collect() }
    }

    pub fn add_mat(&self, o: &Mat) -> Self {
        assert_eq!(self.size, o.size, "matrix size mismatch");
        Mat {
            size: self.size,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub_mat(&self, o: &Mat) -> Self {
        assert_eq!(self.size, o.size, "matrix size mismatch");
        Mat {
            size: self.size,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn mul_mat(&self, o: &Mat) -> Self {
        assert_eq!(self.size, o.size, "matrix size mismatch");
        let n = self.size;
        let mut out = Mat::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let a = self.data[r * n + k];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                let row = &o.data[k * n..(k + 1) * n];
                let dst = &mut out.data[r * n..(r + 1) * n];
                for (d, b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.size, |r, c| self[(c, r)])
    }

    pub fn conj(&self) -> Self {
        Mat { size: self.size, data: self.data.iter().map(|z| z.conj()).collect() }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.size, |r, c| self[(c, r)].conj())
    }

    /// Square sub-block starting at `(start, start)`.
    pub fn block(&self, start: usize, len: usize) -> Self {
        Self::from_fn(len, |r, c| self[(start + r, start + c)])
    }

    /// Copy of `self` with `b` written at `(start, start)`.
    pub fn with_block(&self, start: usize, b: &Mat) -> Self {
        let mut out = self.clone();
        for r in 0..b.size {
            for c in 0..b.size {
                out[(start + r, start + c)] = b[(r, c)];
            }
        }
        out
    }

    /// Determinant by LU with partial pivoting.
    pub fn det(&self) -> C64 {
        let n = self.size;
        let mut a = self.data.clone();
        let mut det = ONE;
        for col in 0..n {
            let piv = (col..n)
                .max_by(|&x, &y| a[x * n + col].norm().total_cmp(&a[y * n + col].norm()))
                .unwrap_or(col);
            let p = a[piv * n + col];
            if p.norm() == 0.0 {
                return ZERO;
            }
            if piv != col {
                for c in 0..n {
                    a.swap(col * n + c, piv * n + c);
                }
                det = -det;
            }
            det *= p;
            for r in col + 1..n {
                let f = a[r * n + col] / p;
                if f.norm() == 0.0 {
                    continue;
                }
                for c in col..n {
                    let v = a[col * n + c];
                    a[r * n + c] -= f * v;
                }
            }
        }
        det
    }

    /// Inverse by Gauss-Jordan elimination with partial pivoting.
    pub fn inverse(&self) -> Option<Self> {
        let n = self.size;
        let mut a = self.data.clone();
        let mut inv = Mat::identity(n).data;
        for col in 0..n {
            let piv = (col..n)
                .max_by(|&x, &y| a[x * n + col].norm().total_cmp(&a[y * n + col].norm()))
                .unwrap_or(col);
            let p = a[piv * n + col];
            if p.norm() == 0.0 {
                return None;
            }
            if piv != col {
                for c in 0..n {
                    a.swap(col * n + c, piv * n + c);
                    inv.swap(col * n + c, piv * n + c);
                }
            }
            let pinv = ONE / p;
            for c in 0..n {
                a[col * n + c] *= pinv;
                inv[col * n + c] *= pinv;
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = a[r * n + col];
                if f.norm() == 0.0 {
                    continue;
                }
                for c in 0..n {
                    let (va, vi) = (a[col * n + c], inv[col * n + c]);
                    a[r * n + c] -= f * va;
                    inv[r * n + c] -= f * vi;
                }
            }
        }
        Some(Mat { size: n, data: inv })
    }

    /// Inverse of a matrix known to be invertible (group elements).
    pub fn inv(&self) -> Self {
        self.inverse().expect("singular matrix")
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Mat::identity(self.size);
        for _ in 0..k {
            out = out.mul_mat(self);
        }
        out
    }

    /// `{"size": k, "entries": [[re, im], ...]}` with 17 significant digits.
    pub fn to_json_string(&self) -> String {
        let entries: Vec<String> = self
            .data
            .iter()
            .map(|z| format!("[{},{}]", fmt_f64(z.re), fmt_f64(z.im)))
            .collect();
        format!("{{\"size\":{},\"entries\":[{}]}}", self.size, entries.join(","))
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let raw: MatJson =
            serde_json::from_str(s).map_err(|e| Error::ParseError(e.to_string()))?;
        raw.try_into()
    }
}

/// Full-precision JSON number (17 significant digits).
pub fn fmt_f64(x: f64) -> String {
    if x == 0.0 {
        "0.0".to_string()
    } else if x.is_finite() {
        format!("{x:.16e}")
    } else {
        "null".to_string()
    }
}

#[derive(Deserialize)]
struct MatJson {
    size: usize,
    entries: Vec<[f64; 2]>,
}

impl TryFrom<MatJson> for Mat {
    type Error = Error;
    fn try_from(raw: MatJson) -> Result<Mat> {
        if raw.entries.len() != raw.size * raw.size {
            return Err(Error::SizeMismatch { expected: raw.size * raw.size, got: raw.entries.len() });
        }
        Ok(Mat {
            size: raw.size,
            data: raw.entries.iter().map(|&[re, im]| C64::new(re, im)).collect(),
        })
    }
}

impl Serialize for Mat {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let raw = serde_json::value::RawValue::from_string(self.to_json_string())
            .map_err(serde::ser::Error::custom)?;
        raw.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Mat {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        MatJson::deserialize(d)?.try_into().map_err(serde::de::Error::custom)
    }
}

impl<'a> Mul<&'a Mat> for &'a Mat {
    type Output = Mat;
    fn mul(self, o: &Mat) -> Mat {
        self.mul_mat(o)
    }
}

impl Mul for Mat {
    type Output = Mat;
    fn mul(self, o: Mat) -> Mat {
        self.mul_mat(&o)
    }
}

impl<'a> Add<&'a Mat> for &'a Mat {
    type Output = Mat;
    fn add(self, o: &Mat) -> Mat {
        self.add_mat(o)
    }
}

impl<'a> Sub<&'a Mat> for &'a Mat {
    type Output = Mat;
    fn sub(self, o: &Mat) -> Mat {
        self.sub_mat(o)
    }
}

impl Neg for &Mat {
    type Output = Mat;
    fn neg(self) -> Mat {
        self.scale_re(-1.0)
    }
}

/// Ordered product of a sequence of matrices.
pub fn product<'a>(size: usize, factors: impl IntoIterator<Item = &'a Mat>) -> Mat {
    factors.into_iter().fold(Mat::identity(size), |acc, f| acc.mul_mat(f))
}

/// Gram matrix of the invariant form: `G[i][i+n] = G[i+n][i] = 1` and
/// `G[j][j] = 1` on the tail.
pub fn form_matrix(spec: &GroupSpec) -> Mat {
    let (n, s) = (spec.n, spec.size());
    let mut g = Mat::zeros(s);
    for i in 0..n {
        g[(i, i + n)] = ONE;
        g[(i + n, i)] = ONE;
    }
    for j in 2 * n..s {
        g[(j, j)] = ONE;
    }
    g
}

fn nilpotent_residual(x: &Mat) -> (Mat, f64) {
    let p = x.pow(x.size() as u32);
    let scale = x.norm().powi(x.size() as i32);
    let r = if p.is_zero() { 0.0 } else { p.norm() / scale.max(f64::MIN_POSITIVE) };
    (p, r)
}

/// Finite exponential series of a nilpotent matrix.
pub fn exp_nilpotent(x: &Mat) -> Result<Mat> {
    exp_nilpotent_tol(x, &Tolerance::default())
}

pub fn exp_nilpotent_tol(x: &Mat, tol: &Tolerance) -> Result<Mat> {
    let n = x.size();
    let mut out = Mat::identity(n);
    let mut p = Mat::identity(n);
    for k in 1..n {
        p = p.mul_mat(x).scale_re(1.0 / k as f64);
        if p.is_zero() {
            return Ok(out);
        }
        out = out.add_mat(&p);
    }
    let (_, r) = nilpotent_residual(x);
    if r > tol.rel {
        return Err(Error::NotNilpotent);
    }
    Ok(out)
}

/// Finite logarithm series of a unipotent matrix.
pub fn log_unipotent(m: &Mat) -> Result<Mat> {
    let n = m.size();
    let x = m.sub_mat(&Mat::identity(n));
    let mut out = Mat::zeros(n);
    let mut p = Mat::identity(n);
    for k in 1..n {
        p = p.mul_mat(&x);
        if p.is_zero() {
            return Ok(out);
        }
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        out = out.add_mat(&p.scale_re(sign / k as f64));
    }
    let (_, r) = nilpotent_residual(&x);
    if r > Tolerance::default().rel {
        return Err(Error::NotNilpotent);
    }
    Ok(out)
}

pub fn bracket(x: &Mat, y: &Mat) -> Result<Mat> {
    if x.size() != y.size() {
        return Err(Error::SizeMismatch { expected: x.size(), got: y.size() });
    }
    Ok(x.mul_mat(y).sub_mat(&y.mul_mat(x)))
}

fn star(spec: &GroupSpec, m: &Mat) -> Mat {
    match spec.family {
        Family::Orthogonal => m.transpose(),
        Family::Unitary => m.adjoint(),
    }
}

/// `MᵀGM ≈ G` (resp. `M̄ᵀGM ≈ G`) and `det M ≈ 1`.
pub fn in_group(m: &Mat, spec: &GroupSpec, tol: &Tolerance) -> bool {
    if m.size() != spec.size() {
        return false;
    }
    let g = form_matrix(spec);
    let lhs = star(spec, m).mul_mat(&g).mul_mat(m);
    if !tol.approx(&lhs, &g) {
        return false;
    }
    if spec.family == Family::Orthogonal && m.data.iter().any(|z| z.im.abs() > tol.rel * (1.0 + m.norm())) {
        return false;
    }
    let d = m.det();
    (d - ONE).norm() <= tol.rel * (1.0 + d.norm())
}

/// `XᵀG + GX ≈ 0` (resp. with `X̄ᵀ`) and, for Unitary, `tr X ≈ 0`.
pub fn in_algebra(x: &Mat, spec: &GroupSpec, tol: &Tolerance) -> bool {
    if x.size() != spec.size() {
        return false;
    }
    let g = form_matrix(spec);
    let s = star(spec, x).mul_mat(&g).add_mat(&g.mul_mat(x));
    let scale = 1.0 + x.norm();
    if s.norm() > tol.rel * scale {
        return false;
    }
    match spec.family {
        Family::Orthogonal => x.data.iter().all(|z| z.im.abs() <= tol.rel * scale),
        Family::Unitary => x.trace().norm() <= tol.rel * scale,
    }
}
