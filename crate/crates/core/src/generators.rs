//! Unipotent generators `x_r`, chain elements `w_r = x·y·x`, the diagonal
//! elements `h_r` and the planar rotation words `h^j`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrixcore::{exp_nilpotent, in_group, product, Family, GroupSpec, Mat, Tolerance, C64, I, ONE, ZERO};
use crate::rootsystem::{
    check_root, embed, long_unit, pair_units, reflect, short_units, two_piece, CartanVector, RootKind, RootLabel,
};

/// Parameters below this absolute size count as zero.
pub const ZERO_PARAM: f64 = 1e-12;

/// The parameter of a one-root generator; its shape is fixed by the family
/// and the kind of root.
#[derive(Clone, Debug, PartialEq)]
pub enum RootParam {
    Scalar(f64),
    Cx(C64),
    RVec(Vec<f64>),
    Heis { t: f64, a: Vec<C64> },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParamShape {
    Scalar,
    Cx,
    RVec(usize),
    Heis(usize),
}

impl RootParam {
    pub fn heis(t: f64, a: Vec<C64>) -> Self {
        RootParam::Heis { t, a }
    }

    pub fn shape(&self) -> ParamShape {
        match self {
            RootParam::Scalar(_) => ParamShape::Scalar,
            RootParam::Cx(_) => ParamShape::Cx,
            RootParam::RVec(v) => ParamShape::RVec(v.len()),
            RootParam::Heis { a, .. } => ParamShape::Heis(a.len()),
        }
    }

    pub fn norm(&self) -> f64 {
        match self {
            RootParam::Scalar(t) => t.abs(),
            RootParam::Cx(z) => z.norm(),
            RootParam::RVec(v) => v.iter().map(|x| x * x).sum::<f64>().sqrt(),
            RootParam::Heis { t, a } => (t * t + a.iter().map(|z| z.norm_sqr()).sum::<f64>()).sqrt(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.norm() <= ZERO_PARAM
    }

    /// Componentwise sum; `None` for Heisenberg parameters, whose composition
    /// is read off the matrix product instead.
    pub fn add(&self, o: &RootParam) -> Option<RootParam> {
        match (self, o) {
            (RootParam::Scalar(a), RootParam::Scalar(b)) => Some(RootParam::Scalar(a + b)),
            (RootParam::Cx(a), RootParam::Cx(b)) => Some(RootParam::Cx(a + b)),
            (RootParam::RVec(a), RootParam::RVec(b)) if a.len() == b.len() => {
                Some(RootParam::RVec(a.iter().zip(b).map(|(x, y)| x + y).collect()))
            }
            _ => None,
        }
    }

    /// Parameter of the inverse generator.
    pub fn neg(&self) -> RootParam {
        match self {
            RootParam::Scalar(t) => RootParam::Scalar(-t),
            RootParam::Cx(z) => RootParam::Cx(-z),
            RootParam::RVec(v) => RootParam::RVec(v.iter().map(|x| -x).collect()),
            RootParam::Heis { t, a } => RootParam::Heis { t: -t, a: a.iter().map(|z| -z).collect() },
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum AVecJson {
    Real(Vec<f64>),
    Cx(Vec<[f64; 2]>),
}

#[derive(Serialize, Deserialize)]
struct ParamJson {
    #[serde(skip_serializing_if = "Option::is_none")]
    t: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    z: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    a: Option<AVecJson>,
}

impl Serialize for RootParam {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let j = match self {
            RootParam::Scalar(t) => ParamJson { t: Some(*t), z: None, a: None },
            RootParam::Cx(z) => ParamJson { t: None, z: Some([z.re, z.im]), a: None },
            RootParam::RVec(v) => ParamJson { t: None, z: None, a: Some(AVecJson::Real(v.clone())) },
            RootParam::Heis { t, a } => ParamJson {
                t: Some(*t),
                z: None,
                a: Some(AVecJson::Cx(a.iter().map(|z| [z.re, z.im]).collect())),
            },
        };
        j.serialize(s)
    }
}

impl<'de> Deserialize<'de> for RootParam {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = ParamJson::deserialize(d)?;
        match (j.t, j.z, j.a) {
            (None, Some([re, im]), None) => Ok(RootParam::Cx(C64::new(re, im))),
            (Some(t), None, None) => Ok(RootParam::Scalar(t)),
            (None, None, Some(AVecJson::Real(v))) => Ok(RootParam::RVec(v)),
            (Some(t), None, Some(a)) => {
                let a = match a {
                    AVecJson::Real(v) => v.into_iter().map(|x| C64::new(x, 0.0)).collect(),
                    AVecJson::Cx(v) => v.into_iter().map(|[re, im]| C64::new(re, im)).collect(),
                };
                Ok(RootParam::Heis { t, a })
            }
            _ => Err(serde::de::Error::custom("unrecognized parameter encoding")),
        }
    }
}

/// Shape a parameter must have for `root` in `spec`.
pub fn expected_shape(spec: &GroupSpec, root: &RootLabel) -> Result<ParamShape> {
    let kind = check_root(spec, root)?;
    Ok(match (spec.family, kind) {
        (Family::Orthogonal, RootKind::Pair { .. }) => ParamShape::Scalar,
        (Family::Orthogonal, RootKind::Short { .. }) => ParamShape::RVec(spec.k()),
        (Family::Unitary, RootKind::Pair { .. }) => ParamShape::Cx,
        (Family::Unitary, RootKind::Short { .. }) => ParamShape::Heis(spec.k()),
        (_, RootKind::Long { .. }) => ParamShape::Scalar,
    })
}

pub fn check_shape(spec: &GroupSpec, root: &RootLabel, p: &RootParam) -> Result<RootKind> {
    if expected_shape(spec, root)? != p.shape() {
        return Err(Error::ShapeMismatch(root.to_string()));
    }
    Ok(root.kind().expect("validated root"))
}

fn long_vector(spec: &GroupSpec, i: usize, s: i32, t: f64) -> Mat {
    let (p, q) = long_unit(spec.n, i, s);
    Mat::unit(spec.size(), p, q, C64::new(0.0, t))
}

/// Lie algebra element `f_r(p)` for scalar-type parameters.
pub fn root_vector(spec: &GroupSpec, root: &RootLabel, p: &RootParam) -> Result<Mat> {
    let kind = check_shape(spec, root, p)?;
    let (n, size) = (spec.n, spec.size());
    Ok(match (kind, p) {
        (RootKind::Pair { i, si, j, sj }, RootParam::Scalar(t)) => {
            two_piece(size, pair_units(n, i, si, j, sj), C64::new(*t, 0.0))
        }
        (RootKind::Pair { i, si, j, sj }, RootParam::Cx(z)) => two_piece(size, pair_units(n, i, si, j, sj), *z),
        (RootKind::Long { i, s }, RootParam::Scalar(t)) => long_vector(spec, i, s, *t),
        (RootKind::Short { i, s }, RootParam::RVec(a)) => a.iter().enumerate().fold(Mat::zeros(size), |acc, (l, &x)| {
            acc.add_mat(&two_piece(size, short_units(n, i, s, l), C64::new(x, 0.0)))
        }),
        _ => return Err(Error::ShapeMismatch(root.to_string())),
    })
}

/// The unipotent generator `x_r(p)`.
pub fn x_elem(spec: &GroupSpec, root: &RootLabel, p: &RootParam) -> Result<Mat> {
    let kind = check_shape(spec, root, p)?;
    let (n, size) = (spec.n, spec.size());
    match (kind, p) {
        (RootKind::Short { i, s }, RootParam::RVec(a)) => {
            let mut out = Mat::identity(size);
            for (l, &x) in a.iter().enumerate() {
                if x != 0.0 {
                    out = out.mul_mat(&exp_nilpotent(&two_piece(size, short_units(n, i, s, l), C64::new(x, 0.0)))?);
                }
            }
            Ok(out)
        }
        (RootKind::Short { i, s }, RootParam::Heis { t, a }) => {
            let corr = t - a.iter().map(|z| z.re * z.im).sum::<f64>();
            let mut out = exp_nilpotent(&long_vector(spec, i, s, corr))?;
            for (l, z) in a.iter().enumerate() {
                let u = short_units(n, i, s, l);
                for piece in [C64::new(z.re, 0.0), C64::new(0.0, z.im)] {
                    if piece != ZERO {
                        out = out.mul_mat(&exp_nilpotent(&two_piece(size, u, piece))?);
                    }
                }
            }
            Ok(out)
        }
        _ => exp_nilpotent(&root_vector(spec, root, p)?),
    }
}

/// Reads `(t, a)` back from a matrix in the Heisenberg group of a short
/// Unitary root.
pub fn heis_params(spec: &GroupSpec, root: &RootLabel, m: &Mat) -> Result<(f64, Vec<C64>)> {
    let (i, s) = match check_root(spec, root)? {
        RootKind::Short { i, s } if spec.is_unitary() => (i, s),
        _ => return Err(Error::ShapeMismatch(root.to_string())),
    };
    let n = spec.n;
    let (p, q) = if s > 0 { (i, i + n) } else { (i + n, i) };
    let a: Vec<C64> = (0..spec.k()).map(|l| m[(p, 2 * n + l)]).collect();
    let x0 = x_elem(spec, root, &RootParam::Heis { t: 0.0, a: a.clone() })?;
    Ok(((m[(p, q)] - x0[(p, q)]).im, a))
}

/// `w = x·y·x` with its factors and the outcome of the normalizer checks.
#[derive(Clone, Debug, Serialize)]
pub struct ChainCertificate {
    pub root: RootLabel,
    pub factors: Vec<(RootLabel, RootParam)>,
    pub x: Mat,
    pub y: Mat,
    pub w: Mat,
    /// `−|a|²/2 + t·i` for the Unitary Heisenberg chain.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a0: Option<[f64; 2]>,
    pub in_group: bool,
    pub reflection_checked: bool,
}

/// Root/parameter pairs of a product, in order.
pub type Factors = Vec<(RootLabel, RootParam)>;

/// The three chain parameters `(x, y, x')` for `root` and `p`.
pub fn chain_factors(spec: &GroupSpec, root: &RootLabel, p: &RootParam) -> Result<(Factors, Option<C64>)> {
    let kind = check_shape(spec, root, p)?;
    if p.is_zero() {
        return Err(Error::ZeroParameter);
    }
    let r = root.clone();
    let nr = root.neg();
    let (y, x2, a0) = match (kind, p) {
        (RootKind::Pair { .. }, RootParam::Scalar(t)) => (RootParam::Scalar(-1.0 / t), p.clone(), None),
        (RootKind::Pair { .. }, RootParam::Cx(z)) => (RootParam::Cx(-z.inv()), p.clone(), None),
        (RootKind::Long { .. }, RootParam::Scalar(t)) => (RootParam::Scalar(1.0 / t), p.clone(), None),
        (RootKind::Short { .. }, RootParam::RVec(a)) => {
            let nn: f64 = a.iter().map(|x| x * x).sum();
            (RootParam::RVec(a.iter().map(|x| 2.0 * x / nn).collect()), p.clone(), None)
        }
        (RootKind::Short { .. }, RootParam::Heis { t, a }) => {
            let nn: f64 = a.iter().map(|z| z.norm_sqr()).sum();
            if nn.sqrt() <= ZERO_PARAM {
                let zero = vec![ZERO; a.len()];
                (RootParam::Heis { t: 1.0 / t, a: zero }, p.clone(), None)
            } else {
                let a0 = C64::new(-0.5 * nn, *t);
                let y = RootParam::Heis { t: t / a0.norm_sqr(), a: a.iter().map(|z| -z / a0).collect() };
                let ph = a0.conj() / a0;
                let x2 = RootParam::Heis { t: *t, a: a.iter().map(|z| ph * z).collect() };
                (y, x2, Some(a0))
            }
        }
        _ => return Err(Error::ShapeMismatch(root.to_string())),
    };
    Ok((vec![(r.clone(), p.clone()), (nr, y), (r, x2)], a0))
}

/// Chain element for `root` and nonzero `p`, with its certificate.
pub fn w_elem(spec: &GroupSpec, root: &RootLabel, p: &RootParam) -> Result<ChainCertificate> {
    let (factors, a0) = chain_factors(spec, root, p)?;
    let mats: Vec<Mat> = factors.iter().map(|(r, q)| x_elem(spec, r, q)).collect::<Result<_>>()?;
    let w = product(spec.size(), &mats);
    let tol = Tolerance::default();
    let grp = in_group(&w, spec, &tol);
    let refl = normalizes_as_reflection(spec, root, &w, &tol)?;
    let [x, y, _] = <[Mat; 3]>::try_from(mats).expect("three factors");
    Ok(ChainCertificate {
        root: root.clone(),
        factors,
        x,
        y,
        w,
        a0: a0.map(|z| [z.re, z.im]),
        in_group: grp,
        reflection_checked: grp && refl,
    })
}

/// Matrix of the chain element without the certificate bookkeeping.
pub fn w_mat(spec: &GroupSpec, root: &RootLabel, p: &RootParam) -> Result<Mat> {
    let (factors, _) = chain_factors(spec, root, p)?;
    factors.iter().try_fold(Mat::identity(spec.size()), |acc, (r, q)| Ok(acc.mul_mat(&x_elem(spec, r, q)?)))
}

/// `w·embed(e_k)·w⁻¹ ≈ embed(s_α e_k)` for every standard basis vector.
pub fn normalizes_as_reflection(spec: &GroupSpec, root: &RootLabel, w: &Mat, tol: &Tolerance) -> Result<bool> {
    let winv = w.inverse().ok_or(Error::NotInGroup)?;
    for k in 0..spec.n {
        let mut e = vec![0.0; spec.n];
        e[k] = 1.0;
        let t = CartanVector::new(e);
        let lhs = w.mul_mat(&embed(spec, &t)?).mul_mat(&winv);
        let rhs = embed(spec, &reflect(root, &t)?)?;
        if !tol.approx(&lhs, &rhs) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `h_r(p1, p2) = w_r(p1)·w_r(p2)⁻¹`.
pub fn h_elem(spec: &GroupSpec, root: &RootLabel, p1: &RootParam, p2: &RootParam) -> Result<Mat> {
    if p1.shape() != p2.shape() {
        return Err(Error::ShapeMismatch(root.to_string()));
    }
    let w1 = w_mat(spec, root, p1)?;
    let w2 = w_mat(spec, root, p2)?;
    Ok(w1.mul_mat(&w2.inv()))
}

/// Monomial form `p(π)·diag(d)` with an optional compact tail block:
/// column `j` has its single nonzero entry `diag[j]` in row `perm[j]`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PermDiag {
    pub perm: Vec<usize>,
    pub diag: Vec<C64>,
    pub block: Mat,
}

impl PermDiag {
    fn identity(spec: &GroupSpec) -> Self {
        PermDiag {
            perm: (0..spec.size()).collect(),
            diag: vec![ONE; spec.size()],
            block: Mat::identity(spec.k()),
        }
    }

    /// Places `c` at `(p, q)` and `−1/c` at `(q, p)`.
    fn swap_pair(&mut self, (p, q): (usize, usize), c: C64) {
        self.perm[q] = p;
        self.diag[q] = c;
        self.perm[p] = q;
        self.diag[p] = -c.inv();
    }

    pub fn assemble(&self) -> Mat {
        let s = self.perm.len();
        let k = self.block.size();
        let mut m = Mat::zeros(s);
        for j in 0..s - k {
            m[(self.perm[j], j)] = self.diag[j];
        }
        m.with_block(s - k, &self.block)
    }
}

/// Closed monomial form of the chain element.
pub fn w_closed_form(spec: &GroupSpec, root: &RootLabel, p: &RootParam) -> Result<PermDiag> {
    let kind = check_shape(spec, root, p)?;
    if p.is_zero() {
        return Err(Error::ZeroParameter);
    }
    let n = spec.n;
    let mut pd = PermDiag::identity(spec);
    match (kind, p) {
        (RootKind::Pair { i, si, j, sj }, RootParam::Scalar(_) | RootParam::Cx(_)) => {
            let z = match p {
                RootParam::Scalar(t) => C64::new(*t, 0.0),
                RootParam::Cx(z) => *z,
                _ => unreachable!(),
            };
            let (u1, u2) = pair_units(n, i, si, j, sj);
            pd.swap_pair(u1, z);
            pd.swap_pair(u2, -z.conj());
        }
        (RootKind::Long { i, s }, RootParam::Scalar(t)) => pd.swap_pair(long_unit(n, i, s), C64::new(0.0, *t)),
        (RootKind::Short { i, s }, RootParam::RVec(a)) => {
            let nn: f64 = a.iter().map(|x| x * x).sum();
            let (p, q) = long_unit(n, i, s);
            pd.perm[q] = p;
            pd.diag[q] = C64::new(-nn / 2.0, 0.0);
            pd.perm[p] = q;
            pd.diag[p] = C64::new(-2.0 / nn, 0.0);
            pd.block = Mat::from_fn(spec.k(), |r, c| {
                let d = if r == c { 1.0 } else { 0.0 };
                C64::new(d - 2.0 * a[r] * a[c] / nn, 0.0)
            });
        }
        (RootKind::Short { i, s }, RootParam::Heis { t, a }) => {
            let nn: f64 = a.iter().map(|z| z.norm_sqr()).sum();
            let pq = long_unit(n, i, s);
            if nn.sqrt() <= ZERO_PARAM {
                pd.swap_pair(pq, C64::new(0.0, *t));
            } else {
                let a0 = C64::new(-0.5 * nn, *t);
                pd.perm[pq.1] = pq.0;
                pd.diag[pq.1] = a0;
                pd.perm[pq.0] = pq.1;
                pd.diag[pq.0] = a0.inv().conj();
                pd.block = Mat::from_fn(spec.k(), |r, c| {
                    let d = if r == c { ONE } else { ZERO };
                    d + a[r].conj() * a[c] / a0
                });
            }
        }
        _ => return Err(Error::ShapeMismatch(root.to_string())),
    }
    Ok(pd)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RotVariant {
    Real,
    Imag,
}

/// The rotation word `h^j_{L_n}(√2a, √2b)`: `w_{L_n}(√2 v)·w_{L_n}(−√2 e_j)`
/// with `v = a·e_j + b·e_{j+1}` (`Real`) or `a·e_j + i·b·e_{j+1}` (`Imag`),
/// as its literal letters. `j` is 1-based.
pub fn h_rot_factors(
    spec: &GroupSpec,
    j: usize,
    (a, b): (C64, C64),
    variant: RotVariant,
) -> Result<Vec<(RootLabel, RootParam)>> {
    let k = spec.k();
    if j == 0 || j + 1 > k {
        return Err(Error::OutOfRange(format!("rotation index {j} needs 1 ≤ j ≤ m−n−1 = {}", k as i64 - 1)));
    }
    if ((a.norm_sqr() + b.norm_sqr()) - 1.0).abs() > 1e-9 {
        return Err(Error::NotOnSphere);
    }
    let b = match variant {
        RotVariant::Real => b,
        RotVariant::Imag if spec.is_unitary() => b * I,
        RotVariant::Imag => return Err(Error::VariantUnsupported),
    };
    let ln = RootLabel::short(spec.n, spec.n, 1);
    let mln = ln.neg();
    let s2 = std::f64::consts::SQRT_2;
    let (c, d) = (j - 1, j);
    match spec.family {
        Family::Orthogonal => {
            if a.im != 0.0 || b.im != 0.0 {
                return Err(Error::ShapeMismatch(ln.to_string()));
            }
            let f = |slot: usize, x: f64| {
                let mut v = vec![0.0; k];
                v[slot] = x;
                RootParam::RVec(v)
            };
            let (sa, sb) = (s2 * a.re, s2 * b.re);
            Ok(vec![
                (ln.clone(), f(c, sa)),
                (ln.clone(), f(d, sb)),
                (mln.clone(), f(c, sa)),
                (mln.clone(), f(d, sb)),
                (ln.clone(), f(c, sa)),
                (ln.clone(), f(d, sb)),
                (ln.clone(), f(c, -s2)),
                (mln, f(c, -s2)),
                (ln, f(c, -s2)),
            ])
        }
        Family::Unitary => {
            let mut v = vec![ZERO; k];
            v[c] = a * s2;
            v[d] = b * s2;
            let mut e = vec![ZERO; k];
            e[c] = C64::new(-s2, 0.0);
            let hv = RootParam::Heis { t: 0.0, a: v };
            let he = RootParam::Heis { t: 0.0, a: e };
            Ok(vec![
                (ln.clone(), hv.clone()),
                (mln.clone(), hv.clone()),
                (ln.clone(), hv),
                (ln.clone(), he.clone()),
                (mln, he.clone()),
                (ln, he),
            ])
        }
    }
}

/// Evaluated rotation word; its tail block rotates the `(j, j+1)` plane by
/// twice the angle of `(a, b)`.
pub fn h_rot(spec: &GroupSpec, j: usize, pair: (C64, C64), variant: RotVariant) -> Result<Mat> {
    h_rot_factors(spec, j, pair, variant)?
        .iter()
        .try_fold(Mat::identity(spec.size()), |acc, (r, p)| Ok(acc.mul_mat(&x_elem(spec, r, p)?)))
}

/// `h_rot` at real `(cos θ, sin θ)`.
pub fn h_rot_angle(spec: &GroupSpec, j: usize, theta: f64, variant: RotVariant) -> Result<Mat> {
    h_rot(spec, j, (C64::new(theta.cos(), 0.0), C64::new(theta.sin(), 0.0)), variant)
}
