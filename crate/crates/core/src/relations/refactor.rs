//! Constructive exchanges among the rotation words: the trace pairing of two
//! reflections, the SU(2) transporter, shape exchange of reflection pairs
//! and the braid exchange `H^j H^{j+1} H^j ↔ H^{j+1} H^j H^{j+1}`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generators::{w_mat, RootParam};
use crate::matrixcore::{Family, GroupSpec, Mat, Tolerance, C64, ONE, ZERO};
use crate::rootsystem::RootLabel;
use crate::words::{
    embed_plane, euler_yxy, so3_split_outer01, so3_split_outer12, step_block, step_element, su3_split_outer01,
    su3_split_outer12, StairStep,
};

const SPHERE_TOL: f64 = 1e-9;

fn on_sphere(v: &[C64]) -> bool {
    (v.iter().map(|z| z.norm_sqr()).sum::<f64>() - 1.0).abs() <= SPHERE_TOL
}

/// `⟨a, b⟩ = Σ a_i·b̄_i`.
pub fn inner(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x * y.conj()).sum()
}

fn ln(spec: &GroupSpec) -> RootLabel {
    RootLabel::short(spec.n, spec.n, 1)
}

/// `w_{L_n}(√2·a)` for a unit vector `a` of the tail.
fn w_unit(spec: &GroupSpec, a: &[C64]) -> Result<Mat> {
    let s2 = std::f64::consts::SQRT_2;
    let p = match spec.family {
        Family::Orthogonal => RootParam::RVec(a.iter().map(|z| s2 * z.re).collect()),
        Family::Unitary => RootParam::Heis { t: 0.0, a: a.iter().map(|z| z * s2).collect() },
    };
    w_mat(spec, &ln(spec), &p)
}

/// Both sides of `4|⟨a,b⟩|² + m − n − 4 = tr C`, `C` the tail block of
/// `w_{L_n}(0,√2a)·w_{L_n}(0,√2b)`.
pub fn trace_pairing(spec: &GroupSpec, a: &[C64], b: &[C64]) -> Result<(f64, f64)> {
    let k = spec.k();
    if !spec.is_unitary() || k == 0 {
        return Err(Error::SideConditionViolated("SU with m−n ≥ 1".into()));
    }
    for v in [a, b] {
        if v.len() != k {
            return Err(Error::SizeMismatch { expected: k, got: v.len() });
        }
        if !on_sphere(v) {
            return Err(Error::NotOnSphere);
        }
    }
    let lhs = 4.0 * inner(a, b).norm_sqr() + k as f64 - 4.0;
    let c = w_unit(spec, a)?.mul_mat(&w_unit(spec, b)?).block(2 * spec.n, k);
    Ok((lhs, c.trace().re))
}

/// `(g, h)` with `h ∈ SU(2)`, `|g| = 1`, `h·a = g·c` and `h·b = g·d`.
pub fn su2_transporter(a: [C64; 2], b: [C64; 2], c: [C64; 2], d: [C64; 2]) -> Result<(C64, Mat)> {
    if [a, b, c, d].iter().any(|v| !on_sphere(v)) {
        return Err(Error::NotOnSphere);
    }
    let gap = (inner(&a, &b) - inner(&c, &d)).norm();
    if gap > SPHERE_TOL {
        return Err(Error::PairingMismatch(gap));
    }
    let rows = |m: [[C64; 2]; 2]| Mat::from_fn(2, |r, col| m[r][col]);
    let apply = |m: &Mat, v: [C64; 2]| [m[(0, 0)] * v[0] + m[(0, 1)] * v[1], m[(1, 0)] * v[0] + m[(1, 1)] * v[1]];
    let hc = rows([[c[0].conj(), c[1].conj()], [-c[1], c[0]]]);
    let dd = apply(&hc, d);
    let cross = a[0] * b[1] - a[1] * b[0];
    let g = if cross.norm() <= 1e-12 {
        ONE
    } else {
        let ratio = dd[1] / cross;
        let gbar = C64::from_polar(1.0, ratio.arg() / 2.0);
        gbar.conj()
    };
    let h0 = rows([[a[0].conj() * g, a[1].conj() * g], [-a[1] * g.conj(), a[0] * g.conj()]]);
    Ok((g, hc.adjoint().mul_mat(&h0)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    /// Trailing factor moves to the `(j+1, j+2)` plane (Orthogonal) or to the
    /// `(cos y, i·sin y)` shape (Unitary).
    ToImag,
    /// The reverse move.
    ToReal,
}

/// Leading reflection parameter: a point of `S²` in slots `j..j+2`
/// (Orthogonal) or the angles of `g₁`/`g₂` (Unitary).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum WpairLead {
    Sphere([f64; 3]),
    Angles([f64; 2]),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct WpairResult {
    pub lead: WpairLead,
    pub trail_angle: f64,
    pub residual: f64,
}

/// `g₁(a,b) = (cos a cos b − i sin a sin b, cos a sin b − i sin a cos b)`.
pub fn g1(a: f64, b: f64) -> [C64; 2] {
    let (sa, ca) = a.sin_cos();
    let (sb, cb) = b.sin_cos();
    [C64::new(ca * cb, -sa * sb), C64::new(ca * sb, -sa * cb)]
}

/// `g₂(a,b) = (cos a cos b − i sin a sin b, sin a cos b + i cos a sin b)`.
pub fn g2(a: f64, b: f64) -> [C64; 2] {
    let (sa, ca) = a.sin_cos();
    let (sb, cb) = b.sin_cos();
    [C64::new(ca * cb, -sa * sb), C64::new(sa * cb, ca * sb)]
}

fn placed(k: usize, start: usize, v: &[C64]) -> Vec<C64> {
    let mut out = vec![ZERO; k];
    out[start..start + v.len()].copy_from_slice(v);
    out
}

fn real(v: &[f64]) -> Vec<C64> {
    v.iter().map(|&x| C64::new(x, 0.0)).collect()
}

/// Root of a continuous function on `[lo, hi]`, located by a sign scan
/// followed by bisection.
fn scan_root(f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> Option<f64> {
    const STEPS: usize = 128;
    let xs: Vec<f64> = (0..=STEPS).map(|s| lo + (hi - lo) * s as f64 / STEPS as f64).collect();
    let vals: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
    let scale = vals.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1e-300);
    for s in 0..STEPS {
        if vals[s].abs() <= 1e-15 * scale {
            return Some(xs[s]);
        }
        if vals[s].signum() != vals[s + 1].signum() {
            let (mut a, mut b, mut fa) = (xs[s], xs[s + 1], vals[s]);
            for _ in 0..200 {
                let m = 0.5 * (a + b);
                let fm = f(m);
                if fm == 0.0 {
                    return Some(m);
                }
                if fm.signum() == fa.signum() {
                    a = m;
                    fa = fm;
                } else {
                    b = m;
                }
            }
            return Some(0.5 * (a + b));
        }
    }
    let best = (0..=STEPS).min_by(|&a, &b| vals[a].abs().total_cmp(&vals[b].abs()))?;
    let (mut a, mut b) = (xs[best.saturating_sub(1)], xs[(best + 1).min(STEPS)]);
    for _ in 0..200 {
        let m1 = a + (b - a) / 3.0;
        let m2 = b - (b - a) / 3.0;
        if f(m1).abs() <= f(m2).abs() {
            b = m2;
        } else {
            a = m1;
        }
    }
    let x = 0.5 * (a + b);
    (f(x).abs() <= 1e-10 * scale).then_some(x)
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn dot3(a: [f64; 3], b: [f64; 3]) -> f64 {
    a.iter().zip(&b).map(|(x, y)| x * y).sum()
}

fn unit3(a: [f64; 3]) -> Option<[f64; 3]> {
    let r = dot3(a, a).sqrt();
    (r > 1e-12).then(|| a.map(|x| x / r))
}

/// Reflection pair `(u', v')` in `S²` with `B(u')B(v') = B(u)B(v)` and `v'`
/// orthogonal to `axis_out`.
fn so_refactor(u: [f64; 3], v: [f64; 3], axis_out: [f64; 3]) -> ([f64; 3], [f64; 3]) {
    let fallback = cross(axis_out, [1.0, 0.0, 0.0]);
    let fallback = unit3(fallback).or_else(|| unit3(cross(axis_out, [0.0, 1.0, 0.0]))).expect("nonzero axis");
    let Some(nh) = unit3(cross(v, u)) else {
        return (fallback, fallback);
    };
    let vp = unit3(cross(axis_out, nh)).unwrap_or(fallback);
    let theta = dot3(v, u).clamp(-1.0, 1.0).acos();
    let w = cross(nh, vp);
    let up = [0, 1, 2].map(|i| theta.cos() * vp[i] + theta.sin() * w[i]);
    (up, vp)
}

/// 2×2 tail block `I − 2ū·uᵀ` of `w_{L_n}(0, √2u)`.
fn su_reflection(u: [C64; 2]) -> Mat {
    Mat::from_fn(2, |r, c| {
        let d = if r == c { ONE } else { ZERO };
        d - u[r].conj() * u[c] * 2.0
    })
}

fn imag_vec(y: f64) -> [C64; 2] {
    [C64::new(y.cos(), 0.0), C64::new(0.0, y.sin())]
}

fn real_vec(y: f64) -> [C64; 2] {
    [C64::new(y.cos(), 0.0), C64::new(y.sin(), 0.0)]
}

fn rot_apply(m: &Mat, v: [C64; 2]) -> [C64; 2] {
    [m[(0, 0)] * v[0] + m[(0, 1)] * v[1], m[(1, 0)] * v[0] + m[(1, 1)] * v[1]]
}

fn su_refactor(lead: [f64; 2], x: f64, dir: Direction) -> Option<([f64; 2], f64)> {
    let (u, v) = match dir {
        Direction::ToImag => (g2(lead[0], lead[1]), real_vec(x)),
        Direction::ToReal => (g1(lead[0], lead[1]), imag_vec(x)),
    };
    let t = su_reflection(u).mul_mat(&su_reflection(v));
    let trail = |y: f64| match dir {
        Direction::ToImag => imag_vec(y),
        Direction::ToReal => real_vec(y),
    };
    let y = scan_root(|y| t.mul_mat(&su_reflection(trail(y))).trace().im, 0.0, std::f64::consts::PI)?;
    let refl = t.mul_mat(&su_reflection(trail(y)));
    let proj = Mat::identity(2).sub_mat(&refl).scale_re(0.5);
    let col = (0..2).max_by(|&a, &b| {
        let na = proj[(0, a)].norm_sqr() + proj[(1, a)].norm_sqr();
        let nb = proj[(0, b)].norm_sqr() + proj[(1, b)].norm_sqr();
        na.total_cmp(&nb)
    })?;
    let r = (proj[(0, col)].norm_sqr() + proj[(1, col)].norm_sqr()).sqrt();
    let up = [proj[(0, col)].conj() / r, proj[(1, col)].conj() / r];
    let (c, w) = match dir {
        Direction::ToImag => {
            let pre = |c: f64| rot_apply(&crate::words::rot_x(-c), up);
            let c = scan_root(|c| { let w = pre(c); (w[0] * w[1].conj()).im }, 0.0, std::f64::consts::PI)?;
            (c, pre(c))
        }
        Direction::ToReal => {
            let pre = |c: f64| rot_apply(&crate::words::rot_y(-c), up);
            let c = scan_root(|c| { let w = pre(c); (w[0] * w[1].conj()).re }, 0.0, std::f64::consts::PI)?;
            (c, pre(c))
        }
    };
    let lam = if w[0].norm() >= w[1].norm() {
        C64::from_polar(1.0, -w[0].arg())
    } else if dir == Direction::ToImag {
        C64::from_polar(1.0, -w[1].arg())
    } else {
        C64::from_polar(1.0, std::f64::consts::FRAC_PI_2 - w[1].arg())
    };
    let (w0, w1) = (w[0] * lam, w[1] * lam);
    let d = match dir {
        Direction::ToImag => w1.re.atan2(w0.re),
        Direction::ToReal => w1.im.atan2(w0.re),
    };
    Some(([c, d], y))
}

/// Rewrites `w^j(lead)·w^j(trail)` as a pair of the exchanged shape and
/// certifies the equality of the evaluated products (`j` is 1-based).
pub fn wpair_refactor(spec: &GroupSpec, j: usize, lead: WpairLead, trail_angle: f64, dir: Direction) -> Result<WpairResult> {
    let k = spec.k();
    let x = trail_angle;
    let (lhs, rhs, out) = match (spec.family, lead) {
        (Family::Orthogonal, WpairLead::Sphere(u)) => {
            if k < 3 {
                return Err(Error::SideConditionViolated("m−n ≥ 3".into()));
            }
            if j == 0 || j + 2 > k {
                return Err(Error::OutOfRange(format!("pair index {j} needs 1 ≤ j ≤ m−n−2 = {}", k - 2)));
            }
            if (dot3(u, u) - 1.0).abs() > SPHERE_TOL {
                return Err(Error::NotOnSphere);
            }
            let (v, axis_out) = match dir {
                Direction::ToImag => ([x.cos(), x.sin(), 0.0], [1.0, 0.0, 0.0]),
                Direction::ToReal => ([0.0, x.cos(), x.sin()], [0.0, 0.0, 1.0]),
            };
            let (up, vp) = so_refactor(u, v, axis_out);
            let y = match dir {
                Direction::ToImag => vp[2].atan2(vp[1]),
                Direction::ToReal => vp[1].atan2(vp[0]),
            };
            let vp = match dir {
                Direction::ToImag => [0.0, y.cos(), y.sin()],
                Direction::ToReal => [y.cos(), y.sin(), 0.0],
            };
            let at = |w: &[f64; 3]| w_unit(spec, &placed(k, j - 1, &real(w)));
            let lhs = at(&u)?.mul_mat(&at(&v)?);
            let rhs = at(&up)?.mul_mat(&at(&vp)?);
            (lhs, rhs, (WpairLead::Sphere(up), y))
        }
        (Family::Unitary, WpairLead::Angles(ab)) => {
            if k < 2 {
                return Err(Error::SideConditionViolated("m−n ≥ 2".into()));
            }
            if j == 0 || j + 1 > k {
                return Err(Error::OutOfRange(format!("pair index {j} needs 1 ≤ j ≤ m−n−1 = {}", k - 1)));
            }
            let (cd, y) = su_refactor(ab, x, dir).ok_or(Error::NoSolution)?;
            let (u, v, up, vp) = match dir {
                Direction::ToImag => (g2(ab[0], ab[1]), real_vec(x), g1(cd[0], cd[1]), imag_vec(y)),
                Direction::ToReal => (g1(ab[0], ab[1]), imag_vec(x), g2(cd[0], cd[1]), real_vec(y)),
            };
            let at = |w: &[C64; 2]| w_unit(spec, &placed(k, j - 1, w));
            let lhs = at(&u)?.mul_mat(&at(&v)?);
            let rhs = at(&up)?.mul_mat(&at(&vp)?);
            (lhs, rhs, (WpairLead::Angles(cd), y))
        }
        _ => return Err(Error::ShapeMismatch(ln(spec).to_string())),
    };
    let residual = Tolerance::residual(&lhs, &rhs);
    if residual > Tolerance::default().rel {
        return Err(Error::NoSolution);
    }
    Ok(WpairResult { lead: out.0, trail_angle: out.1, residual })
}

/// Which pattern the input triple follows.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BraidOrder {
    /// `H^j·H^{j+1}·H^j`.
    Lower,
    /// `H^{j+1}·H^j·H^{j+1}`.
    Upper,
}

fn step_of_block(family: Family, b: &Mat) -> StairStep {
    match family {
        Family::Orthogonal => StairStep::Angle(b[(1, 0)].re.atan2(b[(0, 0)].re)),
        Family::Unitary => StairStep::Euler(euler_yxy(b)),
    }
}

/// Planes `(j, j+1)` of the output triple, in product order.
pub fn braid_planes(j: usize, order: BraidOrder) -> [usize; 3] {
    match order {
        BraidOrder::Lower => [j, j + 1, j],
        BraidOrder::Upper => [j + 1, j, j + 1],
    }
}

/// Rewrites a triple in the `order` pattern as a triple in the opposite
/// pattern with the same product (`j` is 1-based).
pub fn braid_exchange(spec: &GroupSpec, j: usize, order: BraidOrder, steps: [StairStep; 3]) -> Result<[StairStep; 3]> {
    let k = spec.k();
    if k < 3 {
        return Err(Error::SideConditionViolated("m−n ≥ 3".into()));
    }
    if j == 0 || j + 2 > k {
        return Err(Error::OutOfRange(format!("braid index {j} needs 1 ≤ j ≤ m−n−2 = {}", k - 2)));
    }
    let planes = braid_planes(j, order);
    let u = steps
        .iter()
        .zip(planes)
        .fold(Mat::identity(3), |acc, (s, p)| acc.mul_mat(&embed_plane(3, p - j, &step_block(s))));
    let fam = spec.family;
    let out = match (fam, order) {
        (Family::Orthogonal, BraidOrder::Lower) => {
            let [a, b, c] = so3_split_outer12(&u);
            [StairStep::Angle(a), StairStep::Angle(b), StairStep::Angle(c)]
        }
        (Family::Orthogonal, BraidOrder::Upper) => {
            let [a, b, c] = so3_split_outer01(&u);
            [StairStep::Angle(a), StairStep::Angle(b), StairStep::Angle(c)]
        }
        (Family::Unitary, BraidOrder::Lower) => su3_split_outer12(&u).map(|b| step_of_block(fam, &b)),
        (Family::Unitary, BraidOrder::Upper) => su3_split_outer01(&u).map(|b| step_of_block(fam, &b)),
    };
    Ok(out)
}

/// Group element of a braid triple.
pub fn braid_product(spec: &GroupSpec, j: usize, order: BraidOrder, steps: &[StairStep; 3]) -> Result<Mat> {
    steps
        .iter()
        .zip(braid_planes(j, order))
        .try_fold(Mat::identity(spec.size()), |acc, (s, p)| Ok(acc.mul_mat(&step_element(spec, p, s)?)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn trace_pairing_corners() {
        let s = GroupSpec::su(6, 3).unwrap();
        let e1 = [ONE, ZERO, ZERO];
        let e2 = [ZERO, ONE, ZERO];
        let (l, r) = trace_pairing(&s, &e1, &e1).unwrap();
        assert!((l - 3.0).abs() < 1e-12 && (r - 3.0).abs() < 1e-9);
        let (l, r) = trace_pairing(&s, &e1, &e2).unwrap();
        assert!((l + 1.0).abs() < 1e-12 && (r + 1.0).abs() < 1e-9);
        assert_eq!(trace_pairing(&s, &[ONE, ONE, ZERO], &e1), Err(Error::NotOnSphere));
    }

    #[test]
    fn transporter_examples() {
        let e1 = [ONE, ZERO];
        let e2 = [ZERO, ONE];
        let (g, h) = su2_transporter(e1, e2, e1, e2).unwrap();
        assert!((g - ONE).norm() < 1e-12);
        assert!(Tolerance::default().approx(&h, &Mat::identity(2)));
        let (g, h) = su2_transporter(e1, e2, e2, e1).unwrap();
        assert!((h.det() - ONE).norm() < 1e-12);
        let ha = rot_apply(&h, e1);
        let hb = rot_apply(&h, e2);
        assert!((ha[0] - g * e2[0]).norm() < 1e-12 && (ha[1] - g * e2[1]).norm() < 1e-12);
        assert!((hb[0] - g * e1[0]).norm() < 1e-12 && (hb[1] - g * e1[1]).norm() < 1e-12);
        assert!(matches!(su2_transporter(e1, e1, e1, e2), Err(Error::PairingMismatch(_))));
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert!(su2_transporter([c(r, 0.0), c(0.0, r)], e1, e1, [c(r, 0.0), c(0.0, -r)]).is_ok());
    }

    #[test]
    fn wpair_examples() {
        let s = GroupSpec::so(6, 3).unwrap();
        for dir in [Direction::ToImag, Direction::ToReal] {
            let r = wpair_refactor(&s, 1, WpairLead::Sphere([1.0, 0.0, 0.0]), 0.0, dir).unwrap();
            assert!(r.residual < 1e-9);
            let u = [0.36, 0.48, 0.8];
            assert!(wpair_refactor(&s, 1, WpairLead::Sphere(u), 0.7, dir).is_ok());
        }
        let s4 = GroupSpec::so(4, 3).unwrap();
        assert!(matches!(
            wpair_refactor(&s4, 1, WpairLead::Sphere([1.0, 0.0, 0.0]), 0.0, Direction::ToImag),
            Err(Error::SideConditionViolated(_))
        ));
        let su = GroupSpec::su(5, 3).unwrap();
        for dir in [Direction::ToImag, Direction::ToReal] {
            let r = wpair_refactor(&su, 1, WpairLead::Angles([0.4, 1.1]), -0.8, dir).unwrap();
            assert!(r.residual < 1e-9);
        }
    }

    #[test]
    fn braid_examples() {
        for s in [GroupSpec::so(6, 3).unwrap(), GroupSpec::su(6, 3).unwrap()] {
            let steps = match s.family {
                Family::Orthogonal => [StairStep::Angle(0.3), StairStep::Angle(-1.2), StairStep::Angle(2.0)],
                Family::Unitary => {
                    [StairStep::Euler([0.3, 0.5, -0.2]), StairStep::Euler([1.0, -0.4, 0.9]), StairStep::Euler([-2.0, 0.1, 0.3])]
                }
            };
            for order in [BraidOrder::Lower, BraidOrder::Upper] {
                let other = if order == BraidOrder::Lower { BraidOrder::Upper } else { BraidOrder::Lower };
                let out = braid_exchange(&s, 1, order, steps).unwrap();
                let lhs = braid_product(&s, 1, order, &steps).unwrap();
                let rhs = braid_product(&s, 1, other, &out).unwrap();
                assert!(Tolerance::default().approx(&lhs, &rhs));
            }
        }
    }
}
