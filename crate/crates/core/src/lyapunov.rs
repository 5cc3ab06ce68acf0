//! Exponents, splittings and stable-cycle feasibility for the split Cartan action.

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::matrixcore::{bracket, in_group, Family, GroupSpec, Mat, Tolerance, C64, I, ONE};
use crate::rootsystem::{check_root, root_space_basis, root_value, roots, CartanVector, RootLabel};

/// A Lyapunov functional: a root, or the zero exponent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Functional {
    Zero,
    Root(RootLabel),
}

impl Serialize for Functional {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Functional::Zero => s.serialize_str("0"),
            Functional::Root(r) => r.serialize(s),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExponentEntry {
    pub functional: Functional,
    pub multiplicity: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExponentTable {
    pub spec: GroupSpec,
    pub entries: Vec<ExponentEntry>,
}

impl ExponentTable {
    pub fn total(&self) -> usize {
        self.entries.iter().map(|e| e.multiplicity).sum()
    }

    pub fn zero_multiplicity(&self) -> usize {
        self.entries.iter().filter(|e| e.functional == Functional::Zero).map(|e| e.multiplicity).sum()
    }
}

/// Dimension of the zero-weight space: the Cartan plus the compact part of its centralizer.
pub fn zero_multiplicity(spec: &GroupSpec) -> usize {
    let (n, k) = (spec.n, spec.k());
    match spec.family {
        Family::Orthogonal => n + k * k.saturating_sub(1) / 2,
        Family::Unitary => 2 * n + k * k - 1,
    }
}

/// Roots with their multiplicities, followed by the zero exponent.
pub fn exponent_table(spec: &GroupSpec) -> ExponentTable {
    let mut entries: Vec<ExponentEntry> = roots(spec)
        .into_iter()
        .map(|r| ExponentEntry { functional: Functional::Root(r.label), multiplicity: r.multiplicity })
        .collect();
    entries.push(ExponentEntry { functional: Functional::Zero, multiplicity: zero_multiplicity(spec) });
    ExponentTable { spec: *spec, entries }
}

/// Basis of the zero-weight space: `diag(e_i, −e_i)` for the Cartan, then the
/// compact part (imaginary diagonal pairs for Unitary, the tail block algebra).
pub fn neutral_algebra_basis(spec: &GroupSpec) -> Vec<Mat> {
    let (n, k, s) = (spec.n, spec.k(), spec.size());
    let mut out: Vec<Mat> = (0..n)
        .map(|i| {
            let mut m = Mat::zeros(s);
            m[(i, i)] = ONE;
            m[(i + n, i + n)] = -ONE;
            m
        })
        .collect();
    let tail = 2 * n;
    let mut compact = Vec::new();
    if spec.is_unitary() {
        for i in 0..n {
            let mut m = Mat::zeros(s);
            m[(i, i)] = I;
            m[(i + n, i + n)] = I;
            compact.push(m);
        }
        for a in 0..k {
            compact.push(Mat::unit(s, tail + a, tail + a, I));
        }
    }
    for a in 0..k {
        for b in a + 1..k {
            let mut m = Mat::zeros(s);
            m[(tail + a, tail + b)] = ONE;
            m[(tail + b, tail + a)] = -ONE;
            compact.push(m);
            if spec.is_unitary() {
                let mut m = Mat::zeros(s);
                m[(tail + a, tail + b)] = I;
                m[(tail + b, tail + a)] = I;
                compact.push(m);
            }
        }
    }
    if spec.is_unitary() {
        // Remove the trace against the first imaginary pair, which itself drops out.
        let reference = compact[0].clone();
        for m in compact.iter_mut().skip(1) {
            let tau = m.trace().im / 2.0;
            *m = m.sub_mat(&reference.scale_re(tau));
        }
        compact.remove(0);
    }
    out.extend(compact);
    out
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SplittingReport {
    pub t: CartanVector,
    pub stable_dim: usize,
    pub unstable_dim: usize,
    pub neutral_dim: usize,
    pub stable_roots: Vec<RootLabel>,
    pub unstable_roots: Vec<RootLabel>,
    pub wall_roots: Vec<RootLabel>,
    #[serde(skip)]
    pub stable_basis: Vec<Mat>,
    #[serde(skip)]
    pub unstable_basis: Vec<Mat>,
    #[serde(skip)]
    pub neutral_basis: Vec<Mat>,
}

/// Sorts root spaces by the sign of `r(t)`; values within `tol·(1+‖t‖)` of zero count as neutral.
pub fn splitting(spec: &GroupSpec, t: &CartanVector, tol: &Tolerance) -> Result<SplittingReport> {
    if t.t.len() != spec.n {
        return Err(Error::SizeMismatch { expected: spec.n, got: t.t.len() });
    }
    let wall = tol.rel * (1.0 + t.norm());
    let mut rep = SplittingReport {
        t: t.clone(),
        stable_dim: 0,
        unstable_dim: 0,
        neutral_dim: 0,
        stable_roots: Vec::new(),
        unstable_roots: Vec::new(),
        wall_roots: Vec::new(),
        stable_basis: Vec::new(),
        unstable_basis: Vec::new(),
        neutral_basis: neutral_algebra_basis(spec),
    };
    for r in roots(spec) {
        let v = root_value(&r.label, t)?;
        let basis = root_space_basis(spec, &r.label)?;
        if v < -wall {
            rep.stable_roots.push(r.label);
            rep.stable_basis.extend(basis);
        } else if v > wall {
            rep.unstable_roots.push(r.label);
            rep.unstable_basis.extend(basis);
        } else {
            rep.wall_roots.push(r.label);
            rep.neutral_basis.extend(basis);
        }
    }
    rep.stable_dim = rep.stable_basis.len();
    rep.unstable_dim = rep.unstable_basis.len();
    rep.neutral_dim = rep.neutral_basis.len();
    Ok(rep)
}

/// Incremental row echelon form over the reals.
struct RealSpan {
    rows: Vec<(usize, Vec<f64>)>,
    eps: f64,
}

impl RealSpan {
    fn new(eps: f64) -> Self {
        RealSpan { rows: Vec::new(), eps }
    }

    /// Adds `v` to the span; true if it raised the rank.
    fn insert(&mut self, mut v: Vec<f64>) -> bool {
        for (p, row) in &self.rows {
            let c = v[*p];
            if c != 0.0 {
                for (x, y) in v.iter_mut().zip(row) {
                    *x -= c * y;
                }
            }
        }
        let Some((p, &piv)) = v.iter().enumerate().max_by(|a, b| a.1.abs().total_cmp(&b.1.abs())) else {
            return false;
        };
        if piv.abs() <= self.eps {
            return false;
        }
        v.iter_mut().for_each(|x| *x /= piv);
        for (_, row) in self.rows.iter_mut() {
            let c = row[p];
            if c != 0.0 {
                for (x, y) in row.iter_mut().zip(&v) {
                    *x -= c * y;
                }
            }
        }
        self.rows.push((p, v));
        true
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }
}

fn real_coords(m: &Mat) -> Vec<f64> {
    m.entries().iter().flat_map(|z| [z.re, z.im]).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BracketGeneration {
    pub ok: bool,
    pub rank: usize,
    pub root_rank: usize,
    pub dim: usize,
}

/// Rank of the root vectors together with their pairwise brackets; `root_rank`
/// is the rank of the root vectors alone.
pub fn bracket_generation_check(spec: &GroupSpec) -> Result<BracketGeneration> {
    let dim = spec.lie_dim();
    let mut vectors = Vec::new();
    for r in roots(spec) {
        vectors.extend(root_space_basis(spec, &r.label)?);
    }
    let mut span = RealSpan::new(1e-9);
    for v in &vectors {
        span.insert(real_coords(v));
    }
    let root_rank = span.rank();
    'outer: for (a, x) in vectors.iter().enumerate() {
        for y in &vectors[a + 1..] {
            if span.rank() == dim {
                break 'outer;
            }
            let b = bracket(x, y)?;
            if !b.is_zero() {
                span.insert(real_coords(&b));
            }
        }
    }
    let rank = span.rank();
    Ok(BracketGeneration { ok: rank == dim, rank, root_rank, dim })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StableWitness {
    pub t: CartanVector,
    pub margin: f64,
}

/// Margin below which a cycle counts as not strictly feasible.
pub const FEASIBILITY_MARGIN: f64 = 1e-9;

/// Decides whether some `t` with `‖t‖_∞ ≤ 1` makes every root of the cycle
/// negative, by maximizing the common margin.
pub fn stable_cycle_feasible(spec: &GroupSpec, cycle: &[RootLabel]) -> Result<Option<StableWitness>> {
    if cycle.is_empty() {
        return Err(Error::ParseError("empty cycle".into()));
    }
    for r in cycle {
        check_root(spec, r)?;
    }
    let (t, margin) = max_margin(spec.n, cycle);
    Ok((margin > FEASIBILITY_MARGIN).then(|| StableWitness { t: CartanVector::new(t), margin }))
}

/// Maximizes `ε` subject to `r·t + ε ≤ 0`, `|t_i| ≤ 1`, `0 ≤ ε ≤ 1`, writing
/// `t = t⁺ − t⁻` so that the origin is a feasible starting vertex.
fn max_margin(n: usize, cycle: &[RootLabel]) -> (Vec<f64>, f64) {
    // Columns: t⁺ (n), t⁻ (n), ε, then one slack per row.
    let vars = 2 * n + 1;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut rhs = Vec::new();
    for r in cycle {
        let mut row = vec![0.0; vars];
        for (i, &c) in r.coeffs.iter().enumerate() {
            row[i] = c as f64;
            row[n + i] = -(c as f64);
        }
        row[2 * n] = 1.0;
        rows.push(row);
        rhs.push(0.0);
    }
    for v in 0..vars {
        let mut row = vec![0.0; vars];
        row[v] = 1.0;
        rows.push(row);
        rhs.push(1.0);
    }
    let mut objective = vec![0.0; vars];
    objective[2 * n] = 1.0;
    let x = simplex_max(&rows, &rhs, &objective);
    let t = (0..n).map(|i| x[i] - x[n + i]).collect();
    (t, x[2 * n])
}

/// Dense tableau simplex for `max cᵀx` subject to `Ax ≤ b`, `x ≥ 0`, `b ≥ 0`,
/// with Bland's rule. The problems here are bounded by construction.
fn simplex_max(a: &[Vec<f64>], b: &[f64], c: &[f64]) -> Vec<f64> {
    const EPS: f64 = 1e-12;
    let (rows, vars) = (a.len(), c.len());
    let width = vars + rows + 1;
    let mut tab: Vec<Vec<f64>> = a
        .iter()
        .zip(b)
        .enumerate()
        .map(|(i, (row, &bi))| {
            let mut t = row.clone();
            t.resize(width, 0.0);
            t[vars + i] = 1.0;
            t[width - 1] = bi;
            t
        })
        .collect();
    let mut basis: Vec<usize> = (vars..vars + rows).collect();
    let mut cost: Vec<f64> = c.iter().map(|x| -x).collect();
    cost.resize(width, 0.0);
    while let Some(enter) = (0..width - 1).find(|&j| cost[j] < -EPS) {
        let mut leave: Option<(usize, f64)> = None;
        for (i, row) in tab.iter().enumerate() {
            if row[enter] > EPS {
                let ratio = row[width - 1] / row[enter];
                let better = match leave {
                    None => true,
                    Some((l, best)) => ratio < best - EPS || (ratio <= best + EPS && basis[i] < basis[l]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((p, _)) = leave else { break };
        let piv = tab[p][enter];
        tab[p].iter_mut().for_each(|x| *x /= piv);
        let prow = tab[p].clone();
        for (i, row) in tab.iter_mut().enumerate() {
            if i != p && row[enter] != 0.0 {
                let f = row[enter];
                row.iter_mut().zip(&prow).for_each(|(x, y)| *x -= f * y);
            }
        }
        let f = cost[enter];
        cost.iter_mut().zip(&prow).for_each(|(x, y)| *x -= f * y);
        basis[p] = enter;
    }
    let mut x = vec![0.0; vars];
    for (i, &bv) in basis.iter().enumerate() {
        if bv < vars {
            x[bv] = tab[i][width - 1];
        }
    }
    x
}

/// Membership in the centralizer block group: diagonal on the first `2n`
/// coordinates, a compact block on the tail, and positive reals on the
/// diagonal for Orthogonal.
pub fn neutral_membership(spec: &GroupSpec, m: &Mat, tol: &Tolerance) -> bool {
    if m.size() != spec.size() || !in_group(m, spec, tol) {
        return false;
    }
    let (two_n, s) = (2 * spec.n, spec.size());
    let eps = tol.rel * (1.0 + m.norm());
    for r in 0..s {
        for c in 0..s {
            let allowed = if r < two_n || c < two_n { r == c } else { true };
            if !allowed && m[(r, c)].norm() > eps {
                return false;
            }
        }
    }
    if spec.family == Family::Orthogonal {
        return (0..two_n).all(|i| m[(i, i)].re > 0.0);
    }
    true
}

/// `exp` of a Cartan vector: `diag(e^t, e^{−t}, 1)`.
pub fn cartan_exp(spec: &GroupSpec, t: &CartanVector) -> Result<Mat> {
    if t.t.len() != spec.n {
        return Err(Error::SizeMismatch { expected: spec.n, got: t.t.len() });
    }
    let mut d = vec![ONE; spec.size()];
    for (i, &x) in t.t.iter().enumerate() {
        d[i] = C64::new(x.exp(), 0.0);
        d[i + spec.n] = C64::new((-x).exp(), 0.0);
    }
    Ok(Mat::diag(&d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{h_elem, h_rot_angle, x_elem, RootParam, RotVariant};
    use crate::matrixcore::in_algebra;
    use crate::rootsystem::parse_root;

    fn so43() -> GroupSpec {
        GroupSpec::so(4, 3).unwrap()
    }

    fn label(spec: &GroupSpec, s: &str) -> RootLabel {
        parse_root(s, spec).unwrap()
    }

    #[test]
    fn table_so43() {
        let t = exponent_table(&so43());
        assert_eq!(t.zero_multiplicity(), 3);
        assert_eq!(t.total(), 21);
        assert_eq!(t.entries.len(), 19);
        assert!(t.entries.iter().all(|e| e.multiplicity == 1 || e.functional == Functional::Zero));
    }

    #[test]
    fn table_su() {
        let t = exponent_table(&GroupSpec::su(3, 3).unwrap());
        assert_eq!((t.zero_multiplicity(), t.total()), (5, 35));
        let t = exponent_table(&GroupSpec::su(5, 3).unwrap());
        assert_eq!(t.total(), 63);
        let short = label(&t.spec, "L1");
        let e = t.entries.iter().find(|e| e.functional == Functional::Root(short.clone())).unwrap();
        assert_eq!(e.multiplicity, 4);
    }

    #[test]
    fn neutral_basis_is_in_algebra_and_independent() {
        for spec in [so43(), GroupSpec::su(3, 3).unwrap(), GroupSpec::su(5, 3).unwrap(), GroupSpec::so(6, 3).unwrap()] {
            let b = neutral_algebra_basis(&spec);
            assert_eq!(b.len(), zero_multiplicity(&spec), "{spec}");
            let mut span = RealSpan::new(1e-9);
            for m in &b {
                assert!(in_algebra(m, &spec, &Tolerance::default()), "{spec}");
                assert!(span.insert(real_coords(m)));
            }
        }
    }

    #[test]
    fn splitting_examples() {
        let tol = Tolerance::default();
        let r = splitting(&so43(), &vec![3.0, 2.0, 1.0].into(), &tol).unwrap();
        assert_eq!((r.stable_dim, r.unstable_dim, r.neutral_dim), (9, 9, 3));
        let r = splitting(&so43(), &vec![0.0; 3].into(), &tol).unwrap();
        assert_eq!(r.neutral_dim, 21);
        let su = GroupSpec::su(3, 3).unwrap();
        let r = splitting(&su, &vec![3.0, 2.0, 1.0].into(), &tol).unwrap();
        assert_eq!((r.stable_dim, r.unstable_dim, r.neutral_dim), (15, 15, 5));
        let r = splitting(&so43(), &vec![1.0, 1.0, 0.5].into(), &tol).unwrap();
        assert_eq!(r.wall_roots.len(), 2);
        assert_eq!(r.stable_dim + r.unstable_dim + r.neutral_dim, 21);
    }

    #[test]
    fn bracket_generation_small() {
        let g = bracket_generation_check(&so43()).unwrap();
        assert!(g.ok);
        assert_eq!(g.rank, 21);
        assert_eq!(g.root_rank, 21 - 3);
        let g = bracket_generation_check(&GroupSpec::su(3, 3).unwrap()).unwrap();
        assert_eq!((g.ok, g.rank, g.root_rank), (true, 35, 30));
    }

    #[test]
    fn stable_cycle_examples() {
        let s = so43();
        let c = |xs: &[&str]| xs.iter().map(|x| label(&s, x)).collect::<Vec<_>>();
        assert!(stable_cycle_feasible(&s, &c(&["L1-L2", "L2-L1"])).unwrap().is_none());
        assert!(stable_cycle_feasible(&s, &c(&["L1+L2", "-L1-L2", "L3"])).unwrap().is_none());
        let cyc = c(&["L1-L2", "L2-L3", "L1"]);
        let w = stable_cycle_feasible(&s, &cyc).unwrap().unwrap();
        assert!(w.margin > 0.0);
        for r in &cyc {
            assert!(root_value(r, &w.t).unwrap() <= -w.margin + 1e-12);
            assert!(w.t.t.iter().all(|x| x.abs() <= 1.0 + 1e-12));
        }
        let fixed = CartanVector::new(vec![-3.0, -2.0, -1.0]);
        let vals: Vec<f64> = cyc.iter().map(|r| root_value(r, &fixed).unwrap()).collect();
        assert_eq!(vals, vec![-1.0, -1.0, -3.0]);
        let bad = RootLabel::new(vec![3, 0, 0]);
        assert!(matches!(stable_cycle_feasible(&s, &[bad]), Err(Error::UnknownRoot(_))));
    }

    #[test]
    fn neutral_examples() {
        let s = so43();
        let tol = Tolerance::default();
        assert!(neutral_membership(&s, &Mat::identity(7), &tol));
        let r = label(&s, "L1-L2");
        let h = h_elem(&s, &r, &RootParam::Scalar(3.0), &RootParam::Scalar(1.0)).unwrap();
        assert!(neutral_membership(&s, &h, &tol));
        let x = x_elem(&s, &r, &RootParam::Scalar(1.0)).unwrap();
        assert!(!neutral_membership(&s, &x, &tol));
        let hr = h_rot_angle(&GroupSpec::so(6, 3).unwrap(), 1, 0.7, RotVariant::Real).unwrap();
        assert!(neutral_membership(&GroupSpec::so(6, 3).unwrap(), &hr, &tol));
        let neg = Mat::diag(&[-ONE, -ONE, ONE, -ONE, -ONE, ONE, ONE]);
        assert!(!neutral_membership(&s, &neg, &tol));
    }
}
