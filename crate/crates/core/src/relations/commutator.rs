//! Numerical extraction of the structure functions of the commutator
//! relations: `[x_r(a), x_p(b)] = ∏ x_{ir+jp}(·)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::generators::{expected_shape, x_elem, ParamShape, RootParam};
use crate::matrixcore::{log_unipotent, GroupSpec, Mat, Tolerance, C64};
use crate::rootsystem::{check_root, coordinates, is_root, root_space_basis, RootLabel};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CommutatorTable {
    pub r: RootLabel,
    pub p: RootLabel,
    pub terms: Vec<(RootLabel, RootParam)>,
    /// Certification residual of the reassembled product.
    pub residual: f64,
}

/// Roots `i·r + j·p` with `1 ≤ i, j ≤ 4`, ordered by `i+j` then `i`, each
/// listed once at its first occurrence.
pub fn combination_roots(spec: &GroupSpec, r: &RootLabel, p: &RootLabel) -> Vec<RootLabel> {
    let mut combos: Vec<(usize, usize)> = (1..=4).flat_map(|i| (1..=4).map(move |j| (i, j))).collect();
    combos.sort_by_key(|&(i, j)| (i + j, i));
    let mut out: Vec<RootLabel> = Vec::new();
    for (i, j) in combos {
        let g = r.scaled(i as i32).add(&p.scaled(j as i32));
        if is_root(spec, &g) && !out.contains(&g) {
            out.push(g);
        }
    }
    out
}

/// Parameter of `x_γ` read from the projection of a Lie algebra element
/// onto the root space of `γ`.
fn param_from_coords(spec: &GroupSpec, g: &RootLabel, c: &[f64]) -> Result<RootParam> {
    Ok(match expected_shape(spec, g)? {
        ParamShape::Scalar => RootParam::Scalar(c[0]),
        ParamShape::Cx => RootParam::Cx(C64::new(c[0], c[1])),
        ParamShape::RVec(_) => RootParam::RVec(c.to_vec()),
        ParamShape::Heis(k) => RootParam::Heis { t: 0.0, a: (0..k).map(|l| C64::new(c[2 * l], c[2 * l + 1])).collect() },
    })
}

fn is_negative_multiple(r: &RootLabel, p: &RootLabel) -> bool {
    (1..=2).any(|s| r.scaled(s).add(p).is_zero() || p.scaled(s).add(r).is_zero())
}

/// Commutator `x_r(a)·x_p(b)·x_r(a)⁻¹·x_p(b)⁻¹` peeled into root factors in
/// height order and certified against the matrix commutator.
pub fn commutator_decompose(
    spec: &GroupSpec,
    r: &RootLabel,
    a: &RootParam,
    p: &RootLabel,
    b: &RootParam,
    tol: &Tolerance,
) -> Result<CommutatorTable> {
    check_root(spec, r)?;
    check_root(spec, p)?;
    if is_negative_multiple(r, p) {
        return Err(Error::OppositeRoots(r.to_string(), p.to_string()));
    }
    let xr = x_elem(spec, r, a)?;
    let xp = x_elem(spec, p, b)?;
    let c = xr.mul_mat(&xp).mul_mat(&xr.inv()).mul_mat(&xp.inv());
    let mut rest = c.clone();
    let mut terms = Vec::new();
    let mut rebuilt = Mat::identity(spec.size());
    for g in combination_roots(spec, r, p) {
        let x = log_unipotent(&rest)?;
        let coords = coordinates(&root_space_basis(spec, &g)?, &x);
        let param = param_from_coords(spec, &g, &coords)?;
        let f = x_elem(spec, &g, &param)?;
        rest = f.inv().mul_mat(&rest);
        rebuilt = rebuilt.mul_mat(&f);
        terms.push((g, param));
    }
    let residual = Tolerance::residual(&rebuilt, &c);
    if residual > tol.rel {
        return Err(Error::DecompositionResidual(residual));
    }
    Ok(CommutatorTable { r: r.clone(), p: p.clone(), terms, residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsystem::parse_root;

    #[test]
    fn commuting_pair_gives_empty_table() {
        let s = GroupSpec::so(4, 3).unwrap();
        let r = parse_root("L1-L2", &s).unwrap();
        let p = parse_root("L3", &s).unwrap();
        assert!(combination_roots(&s, &r, &p).is_empty());
        let t = commutator_decompose(&s, &r, &RootParam::Scalar(1.3), &p, &RootParam::RVec(vec![0.7]), &Tolerance::default())
            .unwrap();
        assert!(t.terms.is_empty());
    }

    #[test]
    fn opposite_roots_rejected() {
        let s = GroupSpec::su(3, 3).unwrap();
        let r = parse_root("L1-L2", &s).unwrap();
        let z = RootParam::Cx(C64::new(1.0, 0.5));
        let e = commutator_decompose(&s, &r, &z, &r.neg(), &z, &Tolerance::default());
        assert!(matches!(e, Err(Error::OppositeRoots(_, _))));
    }

    #[test]
    fn height_order() {
        let s = GroupSpec::su(4, 3).unwrap();
        let r = parse_root("L1-L2", &s).unwrap();
        let p = parse_root("L2", &s).unwrap();
        let names: Vec<String> = combination_roots(&s, &r, &p).iter().map(|g| g.to_string()).collect();
        assert_eq!(names, ["L1", "L1+L2", "2L1"]);
    }
}
