//! Words over the generator alphabet, free cancellation, and staircase
//! normal forms for the compact rotation subgroups.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generators::{check_shape, h_rot_angle, x_elem, RootParam, RotVariant, ZERO_PARAM};
use crate::matrixcore::{Family, GroupSpec, Mat, Tolerance, C64, ONE, ZERO};
use crate::rootsystem::{parse_root, RootLabel};

#[derive(Clone, Debug, PartialEq)]
pub struct Letter {
    pub root: RootLabel,
    pub param: RootParam,
    pub exponent: i8,
}

impl Letter {
    pub fn new(root: RootLabel, param: RootParam) -> Self {
        Letter { root, param, exponent: 1 }
    }

    pub fn inverse(&self) -> Self {
        Letter { exponent: -self.exponent, ..self.clone() }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Word {
    pub letters: Vec<Letter>,
}

impl Word {
    pub fn new(letters: Vec<Letter>) -> Self {
        Word { letters }
    }

    pub fn from_factors(factors: impl IntoIterator<Item = (RootLabel, RootParam)>) -> Self {
        Word { letters: factors.into_iter().map(|(r, p)| Letter::new(r, p)).collect() }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Concatenation `self · o`.
    pub fn then(mut self, o: &Word) -> Word {
        self.letters.extend(o.letters.iter().cloned());
        self
    }

    pub fn inverse(&self) -> Word {
        Word { letters: self.letters.iter().rev().map(Letter::inverse).collect() }
    }
}

#[derive(Serialize, Deserialize)]
struct LetterJson {
    root: String,
    param: RootParam,
    exp: i8,
}

impl Serialize for Letter {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        LetterJson { root: self.root.to_string(), param: self.param.clone(), exp: self.exponent }.serialize(s)
    }
}

impl Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.letters.serialize(s)
    }
}

/// Reads the word JSON format, validating every letter against `spec`.
pub fn parse_word(text: &str, spec: &GroupSpec) -> Result<Word> {
    let raw: Vec<LetterJson> = serde_json::from_str(text).map_err(|e| Error::ParseError(e.to_string()))?;
    let letters = raw
        .into_iter()
        .map(|l| {
            if l.exp != 1 && l.exp != -1 {
                return Err(Error::ParseError(format!("exponent must be ±1, got {}", l.exp)));
            }
            let root = parse_root(&l.root, spec)?;
            check_shape(spec, &root, &l.param)?;
            Ok(Letter { root, param: l.param, exponent: l.exp })
        })
        .collect::<Result<_>>()?;
    Ok(Word { letters })
}

pub fn eval_letter(spec: &GroupSpec, l: &Letter) -> Result<Mat> {
    let m = x_elem(spec, &l.root, &l.param)?;
    Ok(if l.exponent < 0 { m.inv() } else { m })
}

/// Ordered product of the letters.
pub fn eval_word(spec: &GroupSpec, w: &Word) -> Result<Mat> {
    w.letters.iter().try_fold(Mat::identity(spec.size()), |acc, l| Ok(acc.mul_mat(&eval_letter(spec, l)?)))
}

fn params_close(a: &RootParam, b: &RootParam) -> bool {
    a.shape() == b.shape() && a.add(&b.neg()).map_or(a == b, |d| d.norm() <= ZERO_PARAM)
}

/// Drops zero letters, cancels adjacent inverse pairs and merges adjacent
/// same-root letters of equal exponent (additive shapes only).
pub fn free_reduce(w: &Word) -> Word {
    let mut out: Vec<Letter> = Vec::with_capacity(w.len());
    for l in &w.letters {
        let mut cur = Some(l.clone());
        while let Some(c) = cur.take() {
            if c.param.is_zero() {
                break;
            }
            let Some(top) = out.last().filter(|t| t.root == c.root) else {
                out.push(c);
                break;
            };
            if top.exponent != c.exponent && params_close(&top.param, &c.param) {
                out.pop();
            } else if let Some(sum) = (top.exponent == c.exponent).then(|| top.param.add(&c.param)).flatten() {
                let exponent = c.exponent;
                out.pop();
                cur = Some(Letter { root: c.root, param: sum, exponent });
            } else {
                out.push(c);
            }
        }
    }
    Word { letters: out }
}

pub fn is_relation(spec: &GroupSpec, w: &Word, tol: &Tolerance) -> Result<bool> {
    Ok(tol.approx(&eval_word(spec, w)?, &Mat::identity(spec.size())))
}

/// One adjacent-plane factor of a staircase row.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum StairStep {
    /// Real rotation of the plane by this angle.
    Angle(f64),
    /// `Y(a)·X(b)·Y(c)` with `Y` real and `X` imaginary rotations.
    Euler([f64; 3]),
}

/// Row `r` (0-based) holds the factors `H^1 … H^{k−1−r}` in product order;
/// the element is the left-to-right product of all rows.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Staircase {
    pub family: Family,
    pub k: usize,
    pub rows: Vec<Vec<StairStep>>,
}

impl Staircase {
    pub fn row_lengths(&self) -> Vec<usize> {
        self.rows.iter().map(Vec::len).collect()
    }
}

/// Planar rotation by `phi` as a 2×2 block.
pub fn rot_y(phi: f64) -> Mat {
    let (s, c) = phi.sin_cos();
    Mat::from_real_rows(&[vec![c, -s], vec![s, c]])
}

/// `cos φ − i sin φ σ_x` as a 2×2 block.
pub fn rot_x(phi: f64) -> Mat {
    let (s, c) = phi.sin_cos();
    let (c, s) = (C64::new(c, 0.0), C64::new(0.0, -s));
    Mat::from_fn(2, |r, col| if r == col { c } else { s })
}

/// Angles `(a, b, c)` with `u = Y(a)·X(b)·Y(c)` for `u ∈ SU(2)`; the
/// trailing angle is 0 at gimbal lock.
pub fn euler_yxy(u: &Mat) -> [f64; 3] {
    let (alpha, beta) = (u[(0, 0)], u[(0, 1)]);
    let (q0, q3, q2, q1) = (alpha.re, -alpha.im, -beta.re, -beta.im);
    let cb = q0.hypot(q2);
    let sb = q1.hypot(q3);
    let b = sb.atan2(cb);
    let sum = q2.atan2(q0);
    let diff = (-q3).atan2(q1);
    if sb <= 1e-12 {
        [sum, b, 0.0]
    } else if cb <= 1e-12 {
        [diff, b, 0.0]
    } else {
        [(sum + diff) / 2.0, b, (sum - diff) / 2.0]
    }
}

pub fn su2_from_euler([a, b, c]: [f64; 3]) -> Mat {
    rot_y(a).mul_mat(&rot_x(b)).mul_mat(&rot_y(c))
}

/// Embeds a 2×2 block into the identity of size `k` at rows `(p, p+1)`.
pub fn embed_plane(k: usize, p: usize, b: &Mat) -> Mat {
    Mat::identity(k).with_block(p, b)
}

fn is_special(b: &Mat, family: Family, tol: &Tolerance) -> bool {
    let k = b.size();
    let unitary = tol.approx(&b.adjoint().mul_mat(b), &Mat::identity(k));
    let det_one = (b.det() - ONE).norm() <= tol.rel * 10.0;
    let real = family == Family::Unitary || b.entries().iter().all(|z| z.im.abs() <= tol.rel);
    unitary && det_one && real
}

fn check_tail(spec: &GroupSpec, b: &Mat) -> Result<()> {
    if spec.k() < 2 {
        return Err(Error::SideConditionViolated("m−n ≥ 2".into()));
    }
    if b.size() != spec.k() {
        return Err(Error::SizeMismatch { expected: spec.k(), got: b.size() });
    }
    if !is_special(b, spec.family, &Tolerance::default()) {
        return Err(Error::NotInGroup);
    }
    Ok(())
}

/// One Givens step on `(v_p, v_{p+1})`: the 2×2 factor `g` with
/// `g⁻¹·(v_p, v_{p+1}) = (0, r)`.
fn givens_step(family: Family, vp: C64, vq: C64) -> (StairStep, Mat) {
    match family {
        Family::Orthogonal => {
            let phi = (-vp.re).atan2(vq.re);
            (StairStep::Angle(phi), rot_y(phi))
        }
        Family::Unitary => {
            let r = vp.norm().hypot(vq.norm());
            if r <= 1e-300 {
                return (StairStep::Euler([0.0; 3]), Mat::identity(2));
            }
            let ginv = Mat::from_fn(2, |row, col| match (row, col) {
                (0, 0) => vq / r,
                (0, 1) => -vp / r,
                (1, 0) => vp.conj() / r,
                _ => vq.conj() / r,
            });
            let e = euler_yxy(&ginv.adjoint());
            (StairStep::Euler(e), su2_from_euler(e))
        }
    }
}

fn staircase_with(spec: &GroupSpec, b: &Mat, family: Family) -> Staircase {
    let k = spec.k();
    let mut cur = b.clone();
    let mut rows = Vec::with_capacity(k - 1);
    for s in (2..=k).rev() {
        let mut v: Vec<C64> = (0..k).map(|r| cur[(r, s - 1)]).collect();
        let mut row = Vec::with_capacity(s - 1);
        let mut p_mat = Mat::identity(k);
        for p in 0..s - 1 {
            let (step, g) = givens_step(family, v[p], v[p + 1]);
            let ginv = g.adjoint();
            let (x, y) = (v[p], v[p + 1]);
            v[p] = ginv[(0, 0)] * x + ginv[(0, 1)] * y;
            v[p + 1] = ginv[(1, 0)] * x + ginv[(1, 1)] * y;
            p_mat = p_mat.mul_mat(&embed_plane(k, p, &g));
            row.push(step);
        }
        cur = p_mat.adjoint().mul_mat(&cur);
        rows.push(row);
    }
    Staircase { family, k, rows }
}

/// Staircase normal form of a tail element `b ∈ SO(k)` resp. `SU(k)`.
pub fn staircase_decompose(spec: &GroupSpec, b: &Mat) -> Result<Staircase> {
    check_tail(spec, b)?;
    Ok(staircase_with(spec, b, spec.family))
}

/// Same elimination restricted to real rotations; certifies the result and
/// reports `NoSolution` when `b` is out of reach of that alphabet.
pub fn staircase_decompose_real(spec: &GroupSpec, b: &Mat) -> Result<Staircase> {
    check_tail(spec, b)?;
    let s = staircase_with(spec, b, Family::Orthogonal);
    if !Tolerance::default().approx(&reconstruct_block(&s)?, b) {
        return Err(Error::NoSolution);
    }
    Ok(s)
}

fn check_staircase(spec: &GroupSpec, s: &Staircase) -> Result<()> {
    if s.k != spec.k() || s.rows.len() + 1 != s.k.max(1) {
        return Err(Error::OutOfRange(format!("staircase for k={} used with m−n={}", s.k, spec.k())));
    }
    for (r, row) in s.rows.iter().enumerate() {
        if row.len() != s.k - 1 - r {
            return Err(Error::OutOfRange(format!("row {r} has length {}", row.len())));
        }
    }
    Ok(())
}

/// Tail-block product, computed directly from 2×2 blocks.
pub fn reconstruct_block(s: &Staircase) -> Result<Mat> {
    let mut out = Mat::identity(s.k);
    for row in &s.rows {
        for (p, step) in row.iter().enumerate() {
            out = out.mul_mat(&embed_plane(s.k, p, &step_block(step)));
        }
    }
    Ok(out)
}

/// Group element of one staircase step acting on the plane of `h^j`.
pub fn step_element(spec: &GroupSpec, j: usize, step: &StairStep) -> Result<Mat> {
    match *step {
        StairStep::Angle(phi) => h_rot_angle(spec, j, phi / 2.0, RotVariant::Real),
        StairStep::Euler([a, b, c]) => {
            if spec.family != Family::Unitary {
                return Err(Error::VariantUnsupported);
            }
            Ok(h_rot_angle(spec, j, a / 2.0, RotVariant::Real)?
                .mul_mat(&h_rot_angle(spec, j, b / 2.0, RotVariant::Imag)?)
                .mul_mat(&h_rot_angle(spec, j, c / 2.0, RotVariant::Real)?))
        }
    }
}

/// 2×2 block of a staircase step.
pub fn step_block(step: &StairStep) -> Mat {
    match *step {
        StairStep::Angle(phi) => rot_y(phi),
        StairStep::Euler(e) => su2_from_euler(e),
    }
}

/// Ordered product of the rotation words `h^j` realizing the staircase.
pub fn reconstruct(spec: &GroupSpec, s: &Staircase) -> Result<Mat> {
    check_staircase(spec, s)?;
    let mut out = Mat::identity(spec.size());
    for row in &s.rows {
        for (p, step) in row.iter().enumerate() {
            out = out.mul_mat(&step_element(spec, p + 1, step)?);
        }
    }
    Ok(out)
}

/// Rotation of the `(p, p+1)` plane (3×3, 0-based `p ∈ {0, 1}`).
pub fn rot3(p: usize, phi: f64) -> Mat {
    embed_plane(3, p, &rot_y(phi))
}

/// `m = R₀₁(a)·R₁₂(b)·R₀₁(c)` for `m ∈ SO(3)`.
pub fn so3_split_outer01(m: &Mat) -> [f64; 3] {
    let g = |r: usize, c: usize| m[(r, c)].re;
    let b = g(2, 2).clamp(-1.0, 1.0).acos();
    if b.sin() <= 1e-12 {
        return [g(1, 0).atan2(g(0, 0)), b, 0.0];
    }
    [g(0, 2).atan2(-g(1, 2)), b, g(2, 0).atan2(g(2, 1))]
}

/// `m = R₁₂(a)·R₀₁(b)·R₁₂(c)` for `m ∈ SO(3)`.
pub fn so3_split_outer12(m: &Mat) -> [f64; 3] {
    let g = |r: usize, c: usize| m[(r, c)].re;
    let b = g(0, 0).clamp(-1.0, 1.0).acos();
    if b.sin() <= 1e-12 {
        let a = if b < 1.0 { g(2, 1).atan2(g(1, 1)) } else { (-g(2, 1)).atan2(-g(1, 1)) };
        return [a, b, 0.0];
    }
    [g(2, 0).atan2(g(1, 0)), b, g(0, 2).atan2(-g(0, 1))]
}

/// `u = D₁₂·E₀₁·F₁₂` for `u ∈ SU(3)`; returns the three 2×2 blocks.
pub fn su3_split_outer12(u: &Mat) -> [Mat; 3] {
    let (u01, u02) = (u[(0, 1)], u[(0, 2)]);
    let r = u01.norm().hypot(u02.norm());
    let (v1, v2) = if r <= 1e-300 { (ZERO, ONE) } else { (-u02 / r, u01 / r) };
    let finv = Mat::from_fn(2, |row, col| match (row, col) {
        (0, 0) => v2.conj(),
        (0, 1) => v1,
        (1, 0) => -v1.conj(),
        _ => v2,
    });
    let w1 = u[(1, 1)] * v1 + u[(1, 2)] * v2;
    let w2 = u[(2, 1)] * v1 + u[(2, 2)] * v2;
    let d = Mat::from_fn(2, |row, col| match (row, col) {
        (0, 0) => w2.conj(),
        (0, 1) => w1,
        (1, 0) => -w1.conj(),
        _ => w2,
    });
    let e = embed_plane(3, 1, &d).adjoint().mul_mat(u).mul_mat(&embed_plane(3, 1, &finv));
    let f = finv.adjoint();
    [d, e.block(0, 2), f]
}

/// `u = D₀₁·E₁₂·F₀₁` for `u ∈ SU(3)`, by reversing the coordinate order.
pub fn su3_split_outer01(u: &Mat) -> [Mat; 3] {
    let rev = |m: &Mat| Mat::from_fn(m.size(), |r, c| m[(m.size() - 1 - r, m.size() - 1 - c)]);
    let [d, e, f] = su3_split_outer12(&rev(u));
    [rev(&d), rev(&e), rev(&f)]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{h_elem, w_mat};
    use crate::matrixcore::I;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn so(m: usize, n: usize) -> GroupSpec {
        GroupSpec::so(m, n).unwrap()
    }

    fn su(m: usize, n: usize) -> GroupSpec {
        GroupSpec::su(m, n).unwrap()
    }

    fn letter(spec: &GroupSpec, r: &str, p: RootParam) -> Letter {
        Letter::new(parse_root(r, spec).unwrap(), p)
    }

    #[test]
    fn empty_word_is_identity() {
        assert_eq!(eval_word(&so(4, 3), &Word::default()).unwrap(), Mat::identity(7));
    }

    #[test]
    fn six_letter_h_word() {
        let s = so(4, 3);
        let t = 2.5;
        let sc = RootParam::Scalar;
        let w = Word::new(vec![
            letter(&s, "L1-L2", sc(t)),
            letter(&s, "L2-L1", sc(-1.0 / t)),
            letter(&s, "L1-L2", sc(t)),
            letter(&s, "L1-L2", sc(-1.0)),
            letter(&s, "L2-L1", sc(1.0)),
            letter(&s, "L1-L2", sc(-1.0)),
        ]);
        let r = parse_root("L1-L2", &s).unwrap();
        let h = h_elem(&s, &r, &sc(t), &sc(1.0)).unwrap();
        assert!(tol().approx(&eval_word(&s, &w).unwrap(), &h));
    }

    #[test]
    fn inverse_pair_cancels() {
        let s = su(4, 3);
        let a = letter(&s, "L3", RootParam::heis(0.2, vec![C64::new(0.3, -0.4)]));
        let w = Word::new(vec![a.clone(), a.inverse()]);
        assert!(is_relation(&s, &w, &tol()).unwrap());
        assert!(free_reduce(&w).is_empty());
        assert!(!is_relation(&s, &Word::new(vec![a]), &tol()).unwrap());
    }

    #[test]
    fn reduce_examples() {
        let s = so(4, 3);
        let a = letter(&s, "L1-L2", RootParam::Scalar(0.5));
        let b = letter(&s, "L3", RootParam::RVec(vec![0.7]));
        let w = Word::new(vec![a.clone(), b.clone(), b.inverse(), a.clone()]);
        let r = free_reduce(&w);
        assert_eq!(r.letters, vec![letter(&s, "L1-L2", RootParam::Scalar(1.0))]);
        let w = Word::new(vec![a.clone(), letter(&s, "L1-L2", RootParam::Scalar(-0.5)), b.clone()]);
        assert_eq!(free_reduce(&w).letters, vec![b]);
    }

    #[test]
    fn chain_word_against_closed_form_is_relation() {
        let s = su(5, 3);
        let r = parse_root("-L2", &s).unwrap();
        let p = RootParam::heis(0.4, vec![C64::new(0.5, 0.1), C64::new(-0.2, 0.9)]);
        let (factors, _) = crate::generators::chain_factors(&s, &r, &p).unwrap();
        let w = Word::from_factors(factors);
        let closed = crate::generators::w_closed_form(&s, &r, &p).unwrap().assemble();
        let m = eval_word(&s, &w).unwrap().mul_mat(&closed.inv());
        assert!(tol().approx(&m, &Mat::identity(8)));
        assert!(tol().approx(&w_mat(&s, &r, &p).unwrap(), &closed));
    }

    #[test]
    fn word_json_round_trip() {
        let s = su(4, 3);
        let text = r#"[{"root":"L1-L2","param":{"z":[1.0,2.0]},"exp":1},
                       {"root":"-L3","param":{"t":0.5,"a":[[1.0,0.0]]},"exp":-1},
                       {"root":"2L1","param":{"t":2.0},"exp":1}]"#;
        let w = parse_word(text, &s).unwrap();
        assert_eq!(w.len(), 3);
        assert_eq!(w.letters[1].exponent, -1);
        let back = serde_json::to_string(&w).unwrap();
        assert_eq!(parse_word(&back, &s).unwrap(), w);
        assert!(matches!(parse_word(r#"[{"root":"L1","param":{"t":1},"exp":1}]"#, &s), Err(Error::ShapeMismatch(_))));
        assert!(matches!(parse_word(r#"[{"root":"L1-L2","param":{"z":[1,0]},"exp":2}]"#, &s), Err(Error::ParseError(_))));
    }

    #[test]
    fn euler_round_trip() {
        for &(a, b, c) in &[(0.3, 1.1, -2.0), (2.9, 0.0, 0.0), (-1.0, std::f64::consts::FRAC_PI_2, 0.0), (0.5, 0.2, 0.7)] {
            let u = su2_from_euler([a, b, c]);
            let e = euler_yxy(&u);
            assert!(Tolerance::new(1e-12).approx(&su2_from_euler(e), &u));
        }
    }

    #[test]
    fn rotation_blocks_match_h_rot() {
        let s = su(5, 3);
        let th = 0.37;
        let m = h_rot_angle(&s, 1, th, RotVariant::Imag).unwrap();
        assert!(tol().approx(&m.block(6, 2), &rot_x(2.0 * th)));
        let m = h_rot_angle(&s, 1, th, RotVariant::Real).unwrap();
        assert!(tol().approx(&m.block(6, 2), &rot_y(2.0 * th)));
        assert_eq!(rot_x(std::f64::consts::FRAC_PI_2)[(0, 1)], -I);
    }

    #[test]
    fn identity_staircase_is_zero() {
        let s = so(6, 3);
        let st = staircase_decompose(&s, &Mat::identity(3)).unwrap();
        assert_eq!(st.row_lengths(), vec![2, 1]);
        assert!(st.rows.iter().flatten().all(|x| matches!(x, StairStep::Angle(a) if *a == 0.0)));
        assert!(tol().approx(&reconstruct(&s, &st).unwrap(), &Mat::identity(9)));
    }

    #[test]
    fn single_plane_rotation() {
        let s = so(5, 3);
        let theta = 1.2;
        let st = staircase_decompose(&s, &rot_y(theta)).unwrap();
        assert_eq!(st.rows, vec![vec![StairStep::Angle(theta)]]);
        let back = staircase_decompose(&s, &reconstruct(&s, &st).unwrap().block(6, 2)).unwrap();
        match back.rows[0][0] {
            StairStep::Angle(a) => assert!((a - theta).abs() < 1e-12),
            _ => panic!(),
        }
    }

    #[test]
    fn rejects_non_group_blocks() {
        let s = so(5, 3);
        assert_eq!(staircase_decompose(&s, &Mat::identity(2).scale_re(2.0)), Err(Error::NotInGroup));
        assert!(matches!(staircase_decompose(&s, &Mat::identity(3)), Err(Error::SizeMismatch { .. })));
        let refl = Mat::diag(&[-ONE, ONE]);
        assert_eq!(staircase_decompose(&s, &refl), Err(Error::NotInGroup));
        assert!(matches!(staircase_decompose(&so(4, 3), &Mat::identity(1)), Err(Error::SideConditionViolated(_))));
    }

    #[test]
    fn so3_splits() {
        let m = rot3(0, 0.4).mul_mat(&rot3(1, -1.3)).mul_mat(&rot3(0, 2.2));
        let [a, b, c] = so3_split_outer12(&m);
        assert!(tol().approx(&rot3(1, a).mul_mat(&rot3(0, b)).mul_mat(&rot3(1, c)), &m));
        let [a, b, c] = so3_split_outer01(&m);
        assert!(tol().approx(&rot3(0, a).mul_mat(&rot3(1, b)).mul_mat(&rot3(0, c)), &m));
        for m in [rot3(1, 0.8), rot3(0, 0.5).mul_mat(&rot3(1, std::f64::consts::PI)).mul_mat(&rot3(0, -0.2))] {
            let [a, b, c] = so3_split_outer01(&m);
            assert!(tol().approx(&rot3(0, a).mul_mat(&rot3(1, b)).mul_mat(&rot3(0, c)), &m));
            let [a, b, c] = so3_split_outer12(&m);
            assert!(tol().approx(&rot3(1, a).mul_mat(&rot3(0, b)).mul_mat(&rot3(1, c)), &m));
        }
    }

    #[test]
    fn su3_splits() {
        let g1 = embed_plane(3, 0, &su2_from_euler([0.3, 0.9, -0.4]));
        let g2 = embed_plane(3, 1, &su2_from_euler([1.3, 0.2, 2.4]));
        let u = g1.mul_mat(&g2).mul_mat(&g1.adjoint().mul_mat(&g2));
        let [d, e, f] = su3_split_outer12(&u);
        let prod = embed_plane(3, 1, &d).mul_mat(&embed_plane(3, 0, &e)).mul_mat(&embed_plane(3, 1, &f));
        assert!(tol().approx(&prod, &u));
        let [d, e, f] = su3_split_outer01(&u);
        let prod = embed_plane(3, 0, &d).mul_mat(&embed_plane(3, 1, &e)).mul_mat(&embed_plane(3, 0, &f));
        assert!(tol().approx(&prod, &u));
    }
}
