//! Restricted roots of `so(m,n)` / `su(m,n)` relative to the split Cartan,
//! their root spaces, and chamber/genericity questions.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrixcore::{Family, GroupSpec, Mat, Tolerance, C64, I, ONE};

/// A restricted root as an integer coefficient vector over `L_1..L_n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RootLabel {
    pub coeffs: Vec<i32>,
}

/// Structural classification of a root, 0-based indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RootKind {
    /// `si·L_i + sj·L_j` with `i < j`.
    Pair { i: usize, si: i32, j: usize, sj: i32 },
    /// `s·L_i`.
    Short { i: usize, s: i32 },
    /// `2s·L_i`.
    Long { i: usize, s: i32 },
}

impl RootLabel {
    pub fn new(coeffs: Vec<i32>) -> Self {
        RootLabel { coeffs }
    }

    /// `si·L_i + sj·L_j` with 1-based indices.
    pub fn pair(n: usize, i: usize, si: i32, j: usize, sj: i32) -> Self {
        let mut c = vec![0; n];
        c[i - 1] += si;
        c[j - 1] += sj;
        RootLabel { coeffs: c }
    }

    /// `s·L_i` with a 1-based index.
    pub fn short(n: usize, i: usize, s: i32) -> Self {
        let mut c = vec![0; n];
        c[i - 1] = s;
        RootLabel { coeffs: c }
    }

    /// `2s·L_i` with a 1-based index.
    pub fn long(n: usize, i: usize, s: i32) -> Self {
        let mut c = vec![0; n];
        c[i - 1] = 2 * s;
        RootLabel { coeffs: c }
    }

    pub fn rank(&self) -> usize {
        self.coeffs.len()
    }

    pub fn neg(&self) -> Self {
        RootLabel { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn add(&self, o: &RootLabel) -> Self {
        RootLabel { coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect() }
    }

    pub fn scaled(&self, k: i32) -> Self {
        RootLabel { coeffs: self.coeffs.iter().map(|c| c * k).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn kind(&self) -> Option<RootKind> {
        let nz: Vec<(usize, i32)> =
            self.coeffs.iter().copied().enumerate().filter(|&(_, c)| c != 0).collect();
        match nz.as_slice() {
            [(i, c)] if c.abs() == 1 => Some(RootKind::Short { i: *i, s: *c }),
            [(i, c)] if c.abs() == 2 => Some(RootKind::Long { i: *i, s: c.signum() }),
            [(i, ci), (j, cj)] if ci.abs() == 1 && cj.abs() == 1 => {
                Some(RootKind::Pair { i: *i, si: *ci, j: *j, sj: *cj })
            }
            _ => None,
        }
    }

    /// Positive with respect to the chamber containing `(n, n-1, ..., 1)`.
    pub fn is_positive(&self) -> bool {
        self.coeffs.iter().find(|&&c| c != 0).is_some_and(|&c| c > 0)
    }

    pub fn dot(&self, o: &RootLabel) -> i32 {
        self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a * b).sum()
    }
}

impl fmt::Display for RootLabel {
    /// Canonical form: positive terms first, e.g. `L2-L1`, `-L1-L2`, `2L3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<(usize, i32)> =
            self.coeffs.iter().copied().enumerate().filter(|&(_, c)| c != 0).collect();
        if terms.is_empty() {
            return write!(f, "0");
        }
        terms.sort_by_key(|&(i, c)| (c < 0, i));
        let mut out = String::new();
        for (k, (i, c)) in terms.iter().enumerate() {
            if *c < 0 {
                out.push('-');
            } else if k > 0 {
                out.push('+');
            }
            if c.abs() != 1 {
                out.push_str(&c.abs().to_string());
            }
            out.push_str(&format!("L{}", i + 1));
        }
        f.write_str(&out)
    }
}

impl Serialize for RootLabel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RootInfo {
    pub label: RootLabel,
    pub multiplicity: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CartanVector {
    pub t: Vec<f64>,
}

impl CartanVector {
    pub fn new(t: Vec<f64>) -> Self {
        CartanVector { t }
    }

    pub fn norm(&self) -> f64 {
        self.t.iter().map(|x| x * x).sum::<f64>().sqrt()
    }
}

impl From<Vec<f64>> for CartanVector {
    fn from(t: Vec<f64>) -> Self {
        CartanVector { t }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenericPlane {
    pub v1: CartanVector,
    pub v2: CartanVector,
}

/// Outcome of a genericity test; `witness` names the offending hyperplanes.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GenericityReport {
    pub generic: bool,
    pub witness: Vec<String>,
}

/// Positive roots in a fixed order: `L_i-L_j`, `L_i+L_j` (i<j), `L_i`, `2L_i`.
pub fn positive_roots(spec: &GroupSpec) -> Vec<RootInfo> {
    let n = spec.n;
    let pair_mult = if spec.is_unitary() { 2 } else { 1 };
    let short_mult = match spec.family {
        Family::Orthogonal => spec.k(),
        Family::Unitary => 2 * spec.k(),
    };
    let mut out = Vec::new();
    for sj in [-1, 1] {
        for i in 1..=n {
            for j in i + 1..=n {
                out.push(RootInfo { label: RootLabel::pair(n, i, 1, j, sj), multiplicity: pair_mult });
            }
        }
    }
    if spec.k() > 0 {
        for i in 1..=n {
            out.push(RootInfo { label: RootLabel::short(n, i, 1), multiplicity: short_mult });
        }
    }
    if spec.is_unitary() {
        for i in 1..=n {
            out.push(RootInfo { label: RootLabel::long(n, i, 1), multiplicity: 1 });
        }
    }
    out
}

/// All roots: the positive ones followed by their negatives.
pub fn roots(spec: &GroupSpec) -> Vec<RootInfo> {
    let pos = positive_roots(spec);
    let neg: Vec<RootInfo> =
        pos.iter().map(|r| RootInfo { label: r.label.neg(), multiplicity: r.multiplicity }).collect();
    pos.into_iter().chain(neg).collect()
}

pub fn is_root(spec: &GroupSpec, root: &RootLabel) -> bool {
    multiplicity(spec, root).is_some()
}

pub fn multiplicity(spec: &GroupSpec, root: &RootLabel) -> Option<usize> {
    if root.rank() != spec.n {
        return None;
    }
    let (pair, short) = match spec.family {
        Family::Orthogonal => (1, spec.k()),
        Family::Unitary => (2, 2 * spec.k()),
    };
    match root.kind()? {
        RootKind::Pair { .. } => Some(pair),
        RootKind::Short { .. } if spec.k() > 0 => Some(short),
        RootKind::Long { .. } if spec.is_unitary() => Some(1),
        _ => None,
    }
}

pub(crate) fn check_root(spec: &GroupSpec, root: &RootLabel) -> Result<RootKind> {
    if !is_root(spec, root) {
        return Err(Error::UnknownRoot(root.to_string()));
    }
    Ok(root.kind().expect("validated root"))
}

/// The two elementary pieces `(row, col)` of a pair root vector, so that
/// `f_r(z) = z·e_first − z̄·e_second` (0-based).
pub(crate) fn pair_units(n: usize, i: usize, si: i32, j: usize, sj: i32) -> ((usize, usize), (usize, usize)) {
    match (si, sj) {
        (1, -1) => ((i, j), (j + n, i + n)),
        (-1, 1) => ((j, i), (i + n, j + n)),
        (1, 1) => ((i, j + n), (j, i + n)),
        _ => ((j + n, i), (i + n, j)),
    }
}

/// Pieces of the short root vector for tail slot `l`: `f(z) = z·e_first − z̄·e_second`.
pub(crate) fn short_units(n: usize, i: usize, s: i32, l: usize) -> ((usize, usize), (usize, usize)) {
    let tail = 2 * n + l;
    if s > 0 {
        ((i, tail), (tail, i + n))
    } else {
        ((i + n, tail), (tail, i))
    }
}

/// Position of the single entry of a long root vector `i·e_{p,q}`.
pub(crate) fn long_unit(n: usize, i: usize, s: i32) -> (usize, usize) {
    if s > 0 {
        (i, i + n)
    } else {
        (i + n, i)
    }
}

pub(crate) fn two_piece(size: usize, (a, b): ((usize, usize), (usize, usize)), z: C64) -> Mat {
    let mut m = Mat::zeros(size);
    m[a] = z;
    m[b] -= z.conj();
    m
}

/// Basis of the root space, in the order used for coordinates:
/// pair roots `[z=1, z=i]` (Unitary) or `[t=1]`; short roots per tail slot
/// `[z=1, z=i]` (Unitary) or `[a_l=1]`; long roots `[i·e]`.
pub fn root_space_basis(spec: &GroupSpec, root: &RootLabel) -> Result<Vec<Mat>> {
    let kind = check_root(spec, root)?;
    let (n, s) = (spec.n, spec.size());
    let phases: &[C64] = if spec.is_unitary() { &[ONE, I] } else { &[ONE] };
    Ok(match kind {
        RootKind::Pair { i, si, j, sj } => {
            let u = pair_units(n, i, si, j, sj);
            phases.iter().map(|&z| two_piece(s, u, z)).collect()
        }
        RootKind::Short { i, s: sg } => (0..spec.k())
            .flat_map(|l| phases.iter().map(move |&z| two_piece(s, short_units(n, i, sg, l), z)))
            .collect(),
        RootKind::Long { i, s: sg } => vec![Mat::unit(s, long_unit(n, i, sg).0, long_unit(n, i, sg).1, I)],
    })
}

/// Coordinates of `x` along an orthogonal basis under `Re tr(A†B)`.
pub fn coordinates(basis: &[Mat], x: &Mat) -> Vec<f64> {
    basis
        .iter()
        .map(|b| {
            let num: f64 = b.entries().iter().zip(x.entries()).map(|(p, q)| (p.conj() * q).re).sum();
            num / b.norm().powi(2)
        })
        .collect()
}

pub fn root_value(root: &RootLabel, t: &CartanVector) -> Result<f64> {
    if root.rank() != t.t.len() {
        return Err(Error::SizeMismatch { expected: root.rank(), got: t.t.len() });
    }
    Ok(root.coeffs.iter().zip(&t.t).map(|(&c, &x)| c as f64 * x).sum())
}

/// `diag(t, −t, 0)`: the Cartan vector as an element of the Lie algebra.
pub fn embed(spec: &GroupSpec, t: &CartanVector) -> Result<Mat> {
    if t.t.len() != spec.n {
        return Err(Error::SizeMismatch { expected: spec.n, got: t.t.len() });
    }
    let mut m = Mat::zeros(spec.size());
    for (i, &x) in t.t.iter().enumerate() {
        m[(i, i)] = C64::new(x, 0.0);
        m[(i + spec.n, i + spec.n)] = C64::new(-x, 0.0);
    }
    Ok(m)
}

/// Orthogonal reflection of `t` in the wall of `root`.
pub fn reflect(root: &RootLabel, t: &CartanVector) -> Result<CartanVector> {
    let v = root_value(root, t)?;
    let nn = root.dot(root) as f64;
    Ok(CartanVector {
        t: t.t.iter().zip(&root.coeffs).map(|(&x, &c)| x - 2.0 * v / nn * c as f64).collect(),
    })
}

fn parse_terms(text: &str) -> Result<Vec<(usize, i32)>> {
    let err = || Error::ParseError(format!("bad root syntax {text:?}"));
    let s: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
    let mut pos = 0;
    let mut terms = Vec::new();
    while pos < s.len() {
        if terms.len() == 2 {
            return Err(err());
        }
        let sign = match s[pos] {
            '+' if !terms.is_empty() => {
                pos += 1;
                1
            }
            '-' => {
                pos += 1;
                -1
            }
            _ if terms.is_empty() => 1,
            _ => return Err(err()),
        };
        let mut coef = 1;
        if pos < s.len() && s[pos] == '2' && s.get(pos + 1) == Some(&'L') {
            coef = 2;
            pos += 1;
        }
        if s.get(pos) != Some(&'L') {
            return Err(err());
        }
        pos += 1;
        let start = pos;
        while pos < s.len() && s[pos].is_ascii_digit() {
            pos += 1;
        }
        let idx: usize = s[start..pos].iter().collect::<String>().parse().map_err(|_| err())?;
        if idx == 0 {
            return Err(err());
        }
        terms.push((idx - 1, sign * coef));
    }
    if terms.is_empty() {
        return Err(err());
    }
    Ok(terms)
}

/// Parses `[Sign] Term [Sign Term]` with `Term := ["2"] "L" Index`.
pub fn parse_root(text: &str, spec: &GroupSpec) -> Result<RootLabel> {
    let terms = parse_terms(text)?;
    let mut c = vec![0; spec.n];
    for &(i, v) in &terms {
        if i >= spec.n {
            return Err(Error::UnknownRoot(text.to_string()));
        }
        c[i] += v;
    }
    let r = RootLabel { coeffs: c };
    if !is_root(spec, &r) || (terms.len() == 2 && terms.iter().any(|t| t.1.abs() != 1)) {
        return Err(Error::UnknownRoot(text.to_string()));
    }
    Ok(r)
}

fn wall_tol(t: &CartanVector) -> f64 {
    Tolerance::default().rel * t.norm()
}

pub fn is_regular(spec: &GroupSpec, t: &CartanVector) -> Result<bool> {
    let tol = wall_tol(t);
    for r in positive_roots(spec) {
        if root_value(&r.label, t)?.abs() <= tol {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Sign of each positive root (order of [`positive_roots`]) at a regular `t`.
pub fn weyl_chamber(spec: &GroupSpec, t: &CartanVector) -> Result<Vec<i8>> {
    if !is_regular(spec, t)? {
        return Err(Error::NotRegular);
    }
    positive_roots(spec)
        .iter()
        .map(|r| root_value(&r.label, t).map(|v| if v > 0.0 { 1 } else { -1 }))
        .collect()
}

/// Lyapunov hyperplanes: positive roots modulo doubling (`2L_i` shares the
/// wall of `L_i`), one representative each.
pub fn hyperplanes(spec: &GroupSpec) -> Vec<RootLabel> {
    let n = spec.n;
    let mut out: Vec<RootLabel> = Vec::new();
    for sj in [-1, 1] {
        for i in 1..=n {
            for j in i + 1..=n {
                out.push(RootLabel::pair(n, i, 1, j, sj));
            }
        }
    }
    if spec.k() > 0 || spec.is_unitary() {
        for i in 1..=n {
            out.push(RootLabel::short(n, i, 1));
        }
    }
    out
}

pub fn is_generic_plane(spec: &GroupSpec, p: &GenericPlane) -> Result<GenericityReport> {
    let (v1, v2) = (&p.v1, &p.v2);
    for v in [v1, v2] {
        if v.t.len() != spec.n {
            return Err(Error::SizeMismatch { expected: spec.n, got: v.t.len() });
        }
    }
    let tol = Tolerance::default().rel;
    let (n1, n2) = (v1.norm(), v2.norm());
    let dot: f64 = v1.t.iter().zip(&v2.t).map(|(a, b)| a * b).sum();
    if (n1 * n1 * n2 * n2 - dot * dot).max(0.0).sqrt() <= tol * n1 * n2 || n1 == 0.0 || n2 == 0.0 {
        return Err(Error::DegeneratePlane);
    }
    let hs = hyperplanes(spec);
    let restricted: Vec<(f64, f64)> =
        hs.iter().map(|r| Ok((root_value(r, v1)?, root_value(r, v2)?))).collect::<Result<_>>()?;
    for (r, &(a, b)) in hs.iter().zip(&restricted) {
        if a.hypot(b) <= tol * (n1 + n2) {
            return Ok(GenericityReport { generic: false, witness: vec![r.to_string()] });
        }
    }
    for x in 0..hs.len() {
        for y in x + 1..hs.len() {
            let (a, b) = restricted[x];
            let (c, d) = restricted[y];
            if (a * d - b * c).abs() <= tol * a.hypot(b) * c.hypot(d) {
                return Ok(GenericityReport {
                    generic: false,
                    witness: vec![hs[x].to_string(), hs[y].to_string()],
                });
            }
        }
    }
    Ok(GenericityReport { generic: true, witness: Vec::new() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrixcore::bracket;

    fn so(m: usize, n: usize) -> GroupSpec {
        GroupSpec::so(m, n).unwrap()
    }

    fn su(m: usize, n: usize) -> GroupSpec {
        GroupSpec::su(m, n).unwrap()
    }

    #[test]
    fn root_counts() {
        let r = roots(&so(3, 3));
        assert_eq!(r.len(), 12);
        assert!(r.iter().all(|x| x.multiplicity == 1));
        let r = roots(&so(5, 3));
        assert_eq!(r.iter().filter(|x| x.multiplicity == 1).count(), 12);
        assert_eq!(r.iter().filter(|x| x.multiplicity == 2).count(), 6);
        let r = roots(&su(4, 3));
        assert_eq!(r.len(), 24);
        assert_eq!(r.iter().filter(|x| x.multiplicity == 1).count(), 6);
        assert_eq!(r.iter().filter(|x| x.multiplicity == 2).count(), 18);
    }

    #[test]
    fn basis_examples() {
        let b = root_space_basis(&so(4, 3), &RootLabel::pair(3, 1, 1, 2, -1)).unwrap();
        let want = Mat::unit(7, 0, 1, ONE).sub_mat(&Mat::unit(7, 4, 3, ONE));
        assert_eq!(b, vec![want]);

        let b = root_space_basis(&so(5, 3), &RootLabel::short(3, 3, 1)).unwrap();
        assert_eq!(b[0], Mat::unit(8, 2, 6, ONE).sub_mat(&Mat::unit(8, 6, 5, ONE)));
        assert_eq!(b[1], Mat::unit(8, 2, 7, ONE).sub_mat(&Mat::unit(8, 7, 5, ONE)));

        let b = root_space_basis(&su(3, 3), &RootLabel::long(3, 1, 1)).unwrap();
        assert_eq!(b, vec![Mat::unit(6, 0, 3, I)]);
    }

    #[test]
    fn parse_and_print() {
        let s = su(4, 3);
        assert_eq!(parse_root("L1-L2", &s).unwrap().coeffs, vec![1, -1, 0]);
        assert_eq!(parse_root("2L3", &s).unwrap().coeffs, vec![0, 0, 2]);
        assert_eq!(parse_root("-2L3", &s).unwrap().to_string(), "-2L3");
        assert_eq!(parse_root("-L1+L2", &s).unwrap().to_string(), "L2-L1");
        assert!(matches!(parse_root("2L3", &so(4, 3)), Err(Error::UnknownRoot(_))));
        assert!(matches!(parse_root("L3", &so(3, 3)), Err(Error::UnknownRoot(_))));
        assert!(matches!(parse_root("L1-L1", &s), Err(Error::UnknownRoot(_))));
        assert!(matches!(parse_root("L1-2L2", &s), Err(Error::UnknownRoot(_))));
        for bad in ["", "L", "L0", "1L2", "L1L2", "L1-L2-L3", "+L1", "x"] {
            assert!(matches!(parse_root(bad, &s), Err(Error::ParseError(_))), "{bad}");
        }
    }

    #[test]
    fn root_values() {
        let t = CartanVector::new(vec![3.0, 2.0, 1.0]);
        assert_eq!(root_value(&RootLabel::pair(3, 1, 1, 2, -1), &t).unwrap(), 1.0);
        assert_eq!(root_value(&RootLabel::short(3, 3, -1), &t).unwrap(), -1.0);
        assert_eq!(root_value(&RootLabel::long(3, 2, 1), &t).unwrap(), 4.0);
        assert!(root_value(&RootLabel::long(3, 2, 1), &CartanVector::new(vec![1.0])).is_err());
    }

    #[test]
    fn basis_vectors_are_eigenvectors_of_the_cartan() {
        let t = CartanVector::new(vec![0.7, -1.3, 2.9]);
        for spec in [so(4, 3), so(5, 3), su(3, 3), su(5, 3)] {
            let h = embed(&spec, &t).unwrap();
            for r in roots(&spec) {
                let v = root_value(&r.label, &t).unwrap();
                let basis = root_space_basis(&spec, &r.label).unwrap();
                assert_eq!(basis.len(), r.multiplicity);
                for f in basis {
                    let lhs = bracket(&h, &f).unwrap();
                    assert!(Tolerance::default().approx(&lhs, &f.scale_re(v)), "{}", r.label);
                }
            }
        }
    }

    #[test]
    fn regularity_and_chambers() {
        let t = CartanVector::new(vec![3.0, 2.0, 1.0]);
        assert!(is_regular(&so(4, 3), &t).unwrap());
        assert!(weyl_chamber(&so(4, 3), &t).unwrap().iter().all(|&s| s == 1));
        let wall = CartanVector::new(vec![1.0, 1.0, 0.0]);
        assert!(!is_regular(&so(4, 3), &wall).unwrap());
        assert_eq!(weyl_chamber(&so(4, 3), &wall), Err(Error::NotRegular));
        let t = CartanVector::new(vec![2.0, -1.0, -3.0]);
        let signs = weyl_chamber(&su(3, 3), &t).unwrap();
        let expect: Vec<i8> = positive_roots(&su(3, 3))
            .iter()
            .map(|r| if root_value(&r.label, &t).unwrap() > 0.0 { 1 } else { -1 })
            .collect();
        assert_eq!(signs, expect);
        assert_eq!(signs.len(), 9);
    }

    #[test]
    fn generic_plane_examples() {
        let e = |v: [f64; 3]| CartanVector::new(v.to_vec());
        let p = GenericPlane { v1: e([1.0, 0.0, 0.0]), v2: e([0.0, 1.0, 0.0]) };
        let r = is_generic_plane(&so(4, 3), &p).unwrap();
        assert!(!r.generic);
        assert_eq!(r.witness, vec!["L3"]);
        let r = is_generic_plane(&so(3, 3), &p).unwrap();
        assert!(!r.generic);
        assert_eq!(r.witness, vec!["L1-L3", "L1+L3"]);
        let p = GenericPlane { v1: e([1.0, 2.0, 6.0]), v2: e([3.0, -1.0, 2.0]) };
        let brute = {
            let hs = hyperplanes(&so(4, 3));
            let res: Vec<(f64, f64)> = hs
                .iter()
                .map(|h| (root_value(h, &p.v1).unwrap(), root_value(h, &p.v2).unwrap()))
                .collect();
            res.iter().all(|&(a, b)| a != 0.0 || b != 0.0)
                && (0..res.len()).all(|x| (x + 1..res.len()).all(|y| res[x].0 * res[y].1 != res[x].1 * res[y].0))
        };
        assert_eq!(is_generic_plane(&so(4, 3), &p).unwrap().generic, brute);
        let dep = GenericPlane { v1: e([1.0, 2.0, 3.0]), v2: e([2.0, 4.0, 6.0]) };
        assert_eq!(is_generic_plane(&so(4, 3), &dep), Err(Error::DegeneratePlane));
    }

    #[test]
    fn unitary_equal_rank_has_short_hyperplanes_from_long_roots() {
        let hs = hyperplanes(&su(3, 3));
        assert_eq!(hs.len(), 9);
        assert_eq!(hyperplanes(&so(3, 3)).len(), 6);
    }
}
