//! Per-sample bodies of the registry suites. Each draws its inputs from the
//! sample's own generator and returns the residual of every identity.

use serde_json::{json, Value};

use super::commutator::commutator_decompose;
use super::refactor::{
    braid_exchange, braid_product, su2_transporter, trace_pairing, wpair_refactor, BraidOrder, Direction, WpairLead,
};
use super::sampling::Sampler;
use super::Check;
use crate::error::{Error, Result};
use crate::generators::{h_elem, h_rot, h_rot_angle, heis_params, w_mat, x_elem, RootParam, RotVariant};
use crate::matrixcore::{Family, GroupSpec, Mat, Tolerance, C64, I, ONE, ZERO};
use crate::rootsystem::{roots, RootKind, RootLabel};
use crate::words::{embed_plane, eval_word, rot_x, rot_y, StairStep, Word};

type Out = Result<(Value, Vec<Check>)>;

fn eq(name: &str, a: &Mat, b: &Mat, tol: &Tolerance) -> Check {
    let residual = Tolerance::residual(a, b);
    Check { name: name.to_string(), residual, ok: residual <= tol.rel }
}

fn is_id(name: &str, a: &Mat, tol: &Tolerance) -> Check {
    eq(name, a, &Mat::identity(a.size()), tol)
}

/// Passes when `a` and `b` are distinct; contributes no residual.
fn ne(name: &str, a: &Mat, b: &Mat, tol: &Tolerance) -> Check {
    let ok = !tol.approx(a, b);
    Check { name: name.to_string(), residual: if ok { 0.0 } else { 1.0 }, ok }
}

fn close(name: &str, x: f64, y: f64, tol: &Tolerance) -> Check {
    let residual = (x - y).abs() / (1.0 + x.abs().max(y.abs()));
    Check { name: name.to_string(), residual, ok: residual <= tol.rel }
}

fn close_vec(name: &str, x: &[C64], y: &[C64], tol: &Tolerance) -> Check {
    let n = |v: &[C64]| v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let d: f64 = x.iter().zip(y).map(|(p, q)| (p - q).norm_sqr()).sum::<f64>().sqrt();
    let residual = d / (1.0 + n(x).max(n(y)));
    Check { name: name.to_string(), residual, ok: residual <= tol.rel }
}

fn failed(name: &str, e: Error) -> Check {
    Check { name: format!("{name}: {e}"), residual: 1.0, ok: false }
}

/// Conjugate `g·m·g⁻¹`.
fn conj(g: &Mat, m: &Mat) -> Mat {
    g.mul_mat(m).mul_mat(&g.inv())
}

fn cxs(v: &[C64]) -> Vec<[f64; 2]> {
    v.iter().map(|z| [z.re, z.im]).collect()
}

fn norm2(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

fn scale(v: &[C64], z: C64) -> Vec<C64> {
    v.iter().map(|x| x * z).collect()
}

fn mat_vec(b: &Mat, v: &[C64]) -> Vec<C64> {
    (0..b.size()).map(|r| (0..b.size()).map(|c| b[(r, c)] * v[c]).sum()).collect()
}

struct Roots {
    mi: RootLabel,
    pl: RootLabel,
    ln: RootLabel,
    ln1: RootLabel,
    l2n: RootLabel,
    l2n1: RootLabel,
}

fn named_roots(spec: &GroupSpec) -> Roots {
    let n = spec.n;
    Roots {
        mi: RootLabel::pair(n, n - 1, 1, n, -1),
        pl: RootLabel::pair(n, n - 1, 1, n, 1),
        ln: RootLabel::short(n, n, 1),
        ln1: RootLabel::short(n, n - 1, 1),
        l2n: RootLabel::long(n, n, 1),
        l2n1: RootLabel::long(n, n - 1, 1),
    }
}

fn one(spec: &GroupSpec) -> RootParam {
    match spec.family {
        Family::Orthogonal => RootParam::Scalar(1.0),
        Family::Unitary => RootParam::Cx(ONE),
    }
}

fn pair_param(spec: &GroupSpec, z: C64) -> RootParam {
    match spec.family {
        Family::Orthogonal => RootParam::Scalar(z.re),
        Family::Unitary => RootParam::Cx(z),
    }
}

fn invertible(spec: &GroupSpec, rng: &mut Sampler) -> C64 {
    match spec.family {
        Family::Orthogonal => C64::new(rng.unit_real(), 0.0),
        Family::Unitary => rng.unit_cx(),
    }
}

fn heis0(a: Vec<C64>) -> RootParam {
    RootParam::Heis { t: 0.0, a }
}

pub(super) fn additivity(spec: &GroupSpec, rng: &mut Sampler, i: usize, tol: &Tolerance) -> Out {
    let all = roots(spec);
    let r = &all[i % all.len()].label;
    let a = rng.param(spec, r)?;
    let b = rng.param(spec, r)?;
    let prod = x_elem(spec, r, &a)?.mul_mat(&x_elem(spec, r, &b)?);
    let inputs = json!({"root": r.to_string(), "a": a, "b": b});
    let checks = match (&a, &b) {
        (RootParam::Heis { a: va, .. }, RootParam::Heis { a: vb, .. }) => {
            let (t, c) = heis_params(spec, r, &prod)?;
            let sum: Vec<C64> = va.iter().zip(vb).map(|(x, y)| x + y).collect();
            vec![
                eq("closure", &x_elem(spec, r, &RootParam::Heis { t, a: c.clone() })?, &prod, tol),
                close_vec("vector part adds", &c, &sum, tol),
            ]
        }
        _ => {
            let s = a.add(&b).ok_or_else(|| Error::ShapeMismatch(r.to_string()))?;
            vec![eq("x(a)x(b) = x(a+b)", &prod, &x_elem(spec, r, &s)?, tol)]
        }
    };
    Ok((inputs, checks))
}

/// Ordered root pairs exercised by the commutator relations: the generator
/// alphabet squared, minus pairs of negatively proportional roots.
pub fn commutator_alphabet(spec: &GroupSpec) -> Vec<(RootLabel, RootLabel)> {
    let alphabet: Vec<RootLabel> = roots(spec)
        .into_iter()
        .map(|r| r.label)
        .filter(|r| !(spec.k() > 0 && matches!(r.kind(), Some(RootKind::Long { .. }))))
        .collect();
    let mut out = Vec::new();
    for r in &alphabet {
        for p in &alphabet {
            let opposite = (1..=2).any(|s| r.scaled(s).add(p).is_zero() || p.scaled(s).add(r).is_zero());
            if !opposite {
                out.push((r.clone(), p.clone()));
            }
        }
    }
    out
}

pub(super) fn commutator(spec: &GroupSpec, rng: &mut Sampler, i: usize, tol: &Tolerance) -> Out {
    let pairs = commutator_alphabet(spec);
    let (r, p) = &pairs[i % pairs.len()];
    let a = rng.param(spec, r)?;
    let b = rng.param(spec, p)?;
    let inputs = json!({"r": r.to_string(), "p": p.to_string(), "a": a, "b": b});
    let t = commutator_decompose(spec, r, &a, p, &b, &Tolerance::new(f64::INFINITY))?;
    let ok = t.residual <= tol.rel;
    Ok((inputs, vec![Check { name: "reassembled product".into(), residual: t.residual, ok }]))
}

pub(super) fn h_mult(spec: &GroupSpec, rng: &mut Sampler, i: usize, tol: &Tolerance) -> Out {
    let pairs: Vec<RootLabel> = roots(spec)
        .into_iter()
        .map(|r| r.label)
        .filter(|r| matches!(r.kind(), Some(RootKind::Pair { .. })))
        .collect();
    let r = &pairs[i % pairs.len()];
    let (t, s) = (invertible(spec, rng), invertible(spec, rng));
    let h = |z: C64| h_elem(spec, r, &pair_param(spec, z), &one(spec));
    let word = Word::from_factors([
        (r.clone(), pair_param(spec, t)),
        (r.neg(), pair_param(spec, -t.inv())),
        (r.clone(), pair_param(spec, t)),
        (r.clone(), pair_param(spec, -ONE)),
        (r.neg(), pair_param(spec, ONE)),
        (r.clone(), pair_param(spec, -ONE)),
    ]);
    let inputs = json!({"root": r.to_string(), "t": [t.re, t.im], "s": [s.re, s.im]});
    Ok((
        inputs,
        vec![
            eq("h(t)h(s) = h(ts)", &h(t)?.mul_mat(&h(s)?), &h(t * s)?, tol),
            eq("six-letter word = h(t)", &eval_word(spec, &word)?, &h(t)?, tol),
        ],
    ))
}

pub(super) fn center_so(spec: &GroupSpec, _rng: &mut Sampler, i: usize, tol: &Tolerance) -> Out {
    let n = spec.n;
    let pairs: Vec<(usize, usize)> = (1..=n).flat_map(|a| (a + 1..=n).map(move |b| (a, b))).collect();
    let (a, b) = pairs[i % pairs.len()];
    let m1 = RootLabel::pair(n, a, 1, b, -1);
    let p1 = RootLabel::pair(n, a, 1, b, 1);
    let m = RootParam::Scalar(-1.0);
    let prod = h_elem(spec, &m1, &m, &one(spec))?.mul_mat(&h_elem(spec, &p1, &m, &one(spec))?);
    Ok((json!({"i": a, "j": b}), vec![is_id("h_{Li-Lj}(-1)h_{Li+Lj}(-1) = id", &prod, tol)]))
}

pub(super) fn center_su(spec: &GroupSpec, _rng: &mut Sampler, i: usize, tol: &Tolerance) -> Out {
    let n = spec.n;
    let idx = 1 + i % n;
    let long = RootLabel::long(n, idx, 1);
    let (root, param) = if spec.k() > 0 {
        (RootLabel::short(n, idx, 1), RootParam::Heis { t: -1.0, a: vec![ZERO; spec.k()] })
    } else {
        (long.clone(), RootParam::Scalar(-1.0))
    };
    let letters = [(root.clone(), param.clone()), (root.neg(), param.clone()), (root, param)];
    let w = Word::from_factors(letters.iter().cloned().chain(letters.iter().cloned()));
    let h = eval_word(spec, &w)?;
    let mut d = vec![ONE; spec.size()];
    d[idx - 1] = -ONE;
    d[idx - 1 + n] = -ONE;
    let checks = vec![
        eq("word = h_{2Li}(-1)", &h, &h_elem(spec, &long, &RootParam::Scalar(-1.0), &RootParam::Scalar(1.0))?, tol),
        eq("h_{2Li}(-1) is the signed diagonal", &h, &Mat::diag(&d), tol),
        ne("h_{2Li}(-1) != id", &h, &Mat::identity(spec.size()), tol),
        is_id("h_{2Li}(-1)^2 = id", &h.mul_mat(&h), tol),
    ];
    Ok((json!({"i": idx}), checks))
}

fn variants(spec: &GroupSpec) -> &'static [RotVariant] {
    match spec.family {
        Family::Orthogonal => &[RotVariant::Real],
        Family::Unitary => &[RotVariant::Real, RotVariant::Imag],
    }
}

pub(super) fn rot(spec: &GroupSpec, rng: &mut Sampler, i: usize, tol: &Tolerance) -> Out {
    let k = spec.k();
    let j = 1 + i % (k - 1);
    let (th, ph) = (rng.angle(), rng.angle());
    let mut checks = Vec::new();
    for &v in variants(spec) {
        let (a, b) = (th.cos(), th.sin());
        let (c, d) = (ph.cos(), ph.sin());
        let h = |x: f64, y: f64| h_rot(spec, j, (C64::new(x, 0.0), C64::new(y, 0.0)), v);
        let lhs = h(a, b)?.mul_mat(&h(c, d)?);
        checks.push(eq(&format!("{v:?}: product rule"), &lhs, &h(a * c - b * d, a * d + b * c)?, tol));
        let block = match v {
            RotVariant::Real => rot_y(2.0 * th),
            RotVariant::Imag => rot_x(2.0 * th),
        };
        let tail = h(a, b)?.block(2 * spec.n, k);
        checks.push(eq(&format!("{v:?}: tail block"), &tail, &embed_plane(k, j - 1, &block), tol));
    }
    Ok((json!({"j": j, "theta": th, "phi": ph}), checks))
}

pub(super) fn conj_so(spec: &GroupSpec, rng: &mut Sampler, i: usize, tol: &Tolerance) -> Out {
    let k = spec.k();
    let rt = named_roots(spec);
    let t = rng.unit_real();
    let r = rng.uniform(0.25, 2.0);
    let a: Vec<f64> = rng.sphere(k).into_iter().map(|x| r * x).collect();
    let na: f64 = a.iter().map(|x| x * x).sum();
    let sc = RootParam::Scalar;
    let vec = |v: Vec<f64>| RootParam::RVec(v);
    let w = |root: &RootLabel, p: &RootParam| w_mat(spec, root, p);
    let h = |root: &RootLabel, x: f64| h_elem(spec, root, &sc(x), &sc(1.0));
    let wa = w(&rt.ln, &vec(a.clone()))?;
    let wm = w(&rt.mi, &sc(t))?;
    let mut checks = vec![
        eq("W_Ln(a) W_mi(t) W_Ln(a)^-1 = W_pl(-|a|^2 t/2)", &conj(&wa, &wm), &w(&rt.pl, &sc(-na * t / 2.0))?, tol),
        eq(
            "W_Ln(a) W_pl(t) W_Ln(a)^-1 = W_mi(-2t/|a|^2)",
            &conj(&wa, &w(&rt.pl, &sc(t))?),
            &w(&rt.mi, &sc(-2.0 * t / na))?,
            tol,
        ),
        eq(
            "W_mi(t) W_Ln(a) W_mi(t)^-1 = W_Ln-1(at)",
            &conj(&wm, &wa),
            &w(&rt.ln1, &vec(a.iter().map(|x| x * t).collect()))?,
            tol,
        ),
        eq(
            "W_mi(t) W_Ln-1(a) W_mi(t)^-1 = W_Ln(-a/t)",
            &conj(&wm, &w(&rt.ln1, &vec(a.clone()))?),
            &w(&rt.ln, &vec(a.iter().map(|x| -x / t).collect()))?,
            tol,
        ),
        eq(
            "H_mi(t) W_Ln(a) H_mi(t)^-1 = W_Ln(a/t)",
            &conj(&h(&rt.mi, t)?, &wa),
            &w(&rt.ln, &vec(a.iter().map(|x| x / t).collect()))?,
            tol,
        ),
        eq(
            "W_Ln(a) H_mi(t) W_Ln(a)^-1 = H_pl(-|a|^2 t/2) H_pl(-|a|^2/2)^-1",
            &conj(&wa, &h(&rt.mi, t)?),
            &h(&rt.pl, -na * t / 2.0)?.mul_mat(&h(&rt.pl, -na / 2.0)?.inv()),
            tol,
        ),
    ];
    let nf = 1 + i % 3;
    let s2 = std::f64::consts::SQRT_2;
    let mut g = Mat::identity(spec.size());
    for _ in 0..nf {
        g = g.mul_mat(&w(&rt.ln, &vec(rng.sphere(k).into_iter().map(|x| s2 * x).collect()))?);
    }
    let b = g.block(2 * spec.n, k);
    let u = rng.sphere(k);
    let sg = if nf.is_multiple_of(2) { s2 } else { -s2 };
    let bu = mat_vec(&b, &u.iter().map(|&x| C64::new(x, 0.0)).collect::<Vec<_>>());
    checks.push(eq(
        "w W_Ln(sqrt2 u) w^-1 = W_Ln(±sqrt2 B u)",
        &conj(&g, &w(&rt.ln, &vec(u.iter().map(|x| s2 * x).collect()))?),
        &w(&rt.ln, &vec(bu.iter().map(|z| sg * z.re).collect()))?,
        tol,
    ));
    Ok((json!({"t": t, "a": a, "u": u, "factors": nf}), checks))
}

pub(super) fn conj_su(spec: &GroupSpec, rng: &mut Sampler, i: usize, tol: &Tolerance) -> Out {
    let k = spec.k();
    let rt = named_roots(spec);
    let z = rng.unit_cx();
    let t = rng.unit_real();
    let r = rng.uniform(0.25, 2.0);
    let a = scale(&rng.sphere_c(k), C64::new(r, 0.0));
    let na = norm2(&a);
    let cx = RootParam::Cx;
    let sc = RootParam::Scalar;
    let w = |root: &RootLabel, p: &RootParam| w_mat(spec, root, p);
    let h = |root: &RootLabel, x: C64| h_elem(spec, root, &cx(x), &cx(ONE));
    let wa = w(&rt.ln, &heis0(a.clone()))?;
    let wm = w(&rt.mi, &cx(z))?;
    let wt = w(&rt.l2n, &sc(t))?;
    let hm = h(&rt.mi, z)?;
    let mut checks = vec![
        eq("W_Ln(0,a) W_mi(z) W^-1 = W_pl(-|a|^2 z/2)", &conj(&wa, &wm), &w(&rt.pl, &cx(-z * na / 2.0))?, tol),
        eq(
            "W_Ln(0,a) W_pl(z) W^-1 = W_mi(-2z/|a|^2)",
            &conj(&wa, &w(&rt.pl, &cx(z))?),
            &w(&rt.mi, &cx(-z * 2.0 / na))?,
            tol,
        ),
        eq("W_mi(z) W_Ln(0,a) W^-1 = W_Ln-1(0,az)", &conj(&wm, &wa), &w(&rt.ln1, &heis0(scale(&a, z)))?, tol),
        eq(
            "W_mi(z) W_Ln-1(0,a) W^-1 = W_Ln(0,-a/z)",
            &conj(&wm, &w(&rt.ln1, &heis0(a.clone()))?),
            &w(&rt.ln, &heis0(scale(&a, -z.inv())))?,
            tol,
        ),
        eq("W_mi(z) W_2Ln(t) W^-1 = W_2Ln-1(t|z|^2)", &conj(&wm, &wt), &w(&rt.l2n1, &sc(t * z.norm_sqr()))?, tol),
        eq("W_2Ln(t) W_mi(z) W^-1 = W_pl(-tzi)", &conj(&wt, &wm), &w(&rt.pl, &cx(-z * t * I))?, tol),
        eq("H_mi(z) W_Ln(0,a) H^-1 = W_Ln(0,a/z)", &conj(&hm, &wa), &w(&rt.ln, &heis0(scale(&a, z.inv())))?, tol),
        eq("H_mi(z) W_2Ln(t) H^-1 = W_2Ln(t/|z|^2)", &conj(&hm, &wt), &w(&rt.l2n, &sc(t / z.norm_sqr()))?, tol),
        eq(
            "W_Ln(0,a) H_mi(z) W^-1 = H_pl(-|a|^2 z/2) H_pl(-|a|^2/2)^-1",
            &conj(&wa, &hm),
            &h(&rt.pl, -z * na / 2.0)?.mul_mat(&h(&rt.pl, C64::new(-na / 2.0, 0.0))?.inv()),
            tol,
        ),
        eq(
            "W_2Ln(t) H_mi(z) W^-1 = H_pl(-tzi) H_pl(-ti)^-1",
            &conj(&wt, &hm),
            &h(&rt.pl, -z * t * I)?.mul_mat(&h(&rt.pl, -I * t)?.inv()),
            tol,
        ),
    ];

    // Products of unit reflections.
    let nf = 1 + i % 3;
    let s2 = std::f64::consts::SQRT_2;
    let mut g = Mat::identity(spec.size());
    for _ in 0..nf {
        g = g.mul_mat(&w(&rt.ln, &heis0(scale(&rng.sphere_c(k), C64::new(s2, 0.0))))?);
    }
    let bbar = g.block(2 * spec.n, k).conj();
    let u = rng.sphere_c(k);
    let sg = if nf.is_multiple_of(2) { s2 } else { -s2 };
    checks.push(eq(
        "w W_Ln(0,sqrt2 u) w^-1 = W_Ln(0,±sqrt2 conj(B) u)",
        &conj(&g, &w(&rt.ln, &heis0(scale(&u, C64::new(s2, 0.0))))?),
        &w(&rt.ln, &heis0(scale(&mat_vec(&bbar, &u), C64::new(sg, 0.0))))?,
        tol,
    ));
    let tb = rng.real();
    let bv: Vec<C64> = (0..k).map(|_| rng.cx()).collect();
    let lhs = conj(&g, &x_elem(spec, &rt.ln, &RootParam::Heis { t: tb, a: bv.clone() })?);
    let rhs = if nf.is_multiple_of(2) {
        x_elem(spec, &rt.ln, &RootParam::Heis { t: tb, a: mat_vec(&bbar, &bv) })?
    } else {
        x_elem(spec, &rt.ln.neg(), &RootParam::Heis { t: tb, a: scale(&mat_vec(&bbar, &bv), -ONE) })?
    };
    checks.push(eq("w x_Ln(t,b) w^-1", &lhs, &rhs, tol));

    // Conjugation by a general Heisenberg chain element.
    let ta = rng.unit_real();
    let ah: Vec<C64> = (0..k).map(|_| rng.cx()).collect();
    let a0 = C64::new(-norm2(&ah) / 2.0, ta);
    let wh = w(&rt.ln, &RootParam::Heis { t: ta, a: ah.clone() })?;
    let btail = wh.block(2 * spec.n, k);
    let t1 = rng.unit_real();
    let b1: Vec<C64> = (0..k).map(|_| rng.cx()).collect();
    let rot_b = mat_vec(&btail.scale(a0.inv()).conj(), &b1);
    let wpl = w(&rt.pl, &cx(z))?;
    checks.extend([
        eq(
            "Wa W_Ln(t1,b) Wa^-1 = W_-Ln(t1/|a0|^2, conj(B/a0) b)",
            &conj(&wh, &w(&rt.ln, &RootParam::Heis { t: t1, a: b1.clone() })?),
            &w(&rt.ln.neg(), &RootParam::Heis { t: t1 / a0.norm_sqr(), a: rot_b })?,
            tol,
        ),
        eq("Wa W_mi(z) Wa^-1 = W_pl(z conj(a0))", &conj(&wh, &wm), &w(&rt.pl, &cx(z * a0.conj()))?, tol),
        eq("Wa W_pl(z) Wa^-1 = W_mi(z/a0)", &conj(&wh, &wpl), &w(&rt.mi, &cx(z / a0))?, tol),
        eq(
            "W_pl(z) Wa W_pl(z)^-1 = W_-Ln-1(t/|z|^2, a/conj(z))",
            &conj(&wpl, &wh),
            &w(&rt.ln1.neg(), &RootParam::Heis { t: ta / z.norm_sqr(), a: scale(&ah, z.conj().inv()) })?,
            tol,
        ),
        eq(
            "W_mi(z) Wa W_mi(z)^-1 = W_Ln-1(t|z|^2, za)",
            &conj(&wm, &wh),
            &w(&rt.ln1, &RootParam::Heis { t: ta * z.norm_sqr(), a: scale(&ah, z) })?,
            tol,
        ),
    ]);
    let inputs = json!({
        "z": [z.re, z.im], "t": t, "a": cxs(&a), "u": cxs(&u), "factors": nf,
        "heis_t": ta, "heis_a": cxs(&ah), "t1": t1, "b1": cxs(&b1),
    });
    Ok((inputs, checks))
}

pub(super) fn symbol_field(spec: &GroupSpec, rng: &mut Sampler, _i: usize, tol: &Tolerance) -> Out {
    let r = RootLabel::pair(spec.n, 1, 1, 2, -1);
    let h = |z: C64| h_elem(spec, &r, &pair_param(spec, z), &one(spec));
    let sym = |s: C64, t: C64| -> Result<Mat> { Ok(h(s)?.mul_mat(&h(t)?).mul_mat(&h(s * t)?.inv())) };
    let (t1, t2, t3) = (invertible(spec, rng), invertible(spec, rng), invertible(spec, rng));
    let mut t = invertible(spec, rng);
    if (ONE - t).norm() < 0.25 {
        t = -t;
    }
    let checks = vec![
        is_id("{t1,t2}{t2,t1} = 1", &sym(t1, t2)?.mul_mat(&sym(t2, t1)?), tol),
        is_id("{t1,t2t3} = 1", &sym(t1, t2 * t3)?, tol),
        is_id("{t1,t2}{t1,t3} = 1", &sym(t1, t2)?.mul_mat(&sym(t1, t3)?), tol),
        is_id("{t1t2,t3} = 1", &sym(t1 * t2, t3)?, tol),
        is_id("{t1,t3}{t2,t3} = 1", &sym(t1, t3)?.mul_mat(&sym(t2, t3)?), tol),
        is_id("{t,1-t} = 1", &sym(t, ONE - t)?, tol),
        is_id("{t,-t} = 1", &sym(t, -t)?, tol),
    ];
    let c = |z: C64| [z.re, z.im];
    Ok((json!({"t1": c(t1), "t2": c(t2), "t3": c(t3), "t": c(t)}), checks))
}

pub(super) fn symbol_s1(spec: &GroupSpec, rng: &mut Sampler, i: usize, tol: &Tolerance) -> Out {
    let k = spec.k();
    let j = 1 + i % (k - 1);
    let [th, ph, ps, ch] = [rng.angle(), rng.angle(), rng.angle(), rng.angle()];
    let mut checks = Vec::new();
    for &v in variants(spec) {
        let h = |x: f64| h_rot_angle(spec, j, x, v);
        let sym = |x: f64, y: f64| -> Result<Mat> { Ok(h(x + y)?.mul_mat(&h(x)?.inv()).mul_mat(&h(y)?.inv())) };
        let tag = |s: &str| format!("{v:?}: {s}");
        checks.push(is_id(&tag("{u,v}{v,u} = 1"), &sym(th, ph)?.mul_mat(&sym(ph, th)?), tol));
        checks.push(is_id(&tag("{u,vv1} = 1"), &sym(th, ph + ps)?, tol));
        checks.push(is_id(&tag("{u,v}{u,v1} = 1"), &sym(th, ph)?.mul_mat(&sym(th, ps)?), tol));
        checks.push(is_id(&tag("{uu1,v} = 1"), &sym(th + ch, ph)?, tol));
        checks.push(is_id(&tag("{u,v}{u1,v} = 1"), &sym(th, ph)?.mul_mat(&sym(ch, ph)?), tol));
        checks.push(is_id(&tag("{v,-v} = 1"), &sym(ph, ph + std::f64::consts::PI)?, tol));
        // Squaring `(a, b)` doubles the angle; the Imag shape squares to
        // `(a²−b², −2ab·i)`.
        let dbl = |x: f64| if v == RotVariant::Real { 2.0 * x } else { -2.0 * x };
        let (hu, hv) = (h(th)?, h(ph)?);
        let comm = hu.mul_mat(&hv).mul_mat(&hu.inv()).mul_mat(&hv.inv());
        let first = h(dbl(th) + ph)?.mul_mat(&h(dbl(th))?.inv()).mul_mat(&hv.inv());
        let second = hu.mul_mat(&h(dbl(ph))?).mul_mat(&h(th + dbl(ph))?.inv());
        checks.push(eq(&tag("commutator, first form"), &comm, &first, tol));
        checks.push(eq(&tag("commutator, second form"), &comm, &second, tol));
    }
    let s2 = std::f64::consts::SQRT_2;
    let ln = RootLabel::short(spec.n, spec.n, 1);
    let minus = h_rot(spec, 1, (-ONE, ZERO), RotVariant::Real)?;
    let (wp, wm) = match spec.family {
        Family::Orthogonal => {
            let a = rng.sphere(k);
            let p = |s: f64| RootParam::RVec(a.iter().map(|x| s * s2 * x).collect());
            (w_mat(spec, &ln, &p(1.0))?, w_mat(spec, &ln, &p(-1.0))?)
        }
        Family::Unitary => {
            let a = rng.sphere_c(k);
            let p = |s: f64| heis0(scale(&a, C64::new(s * s2, 0.0)));
            (w_mat(spec, &ln, &p(1.0))?, w_mat(spec, &ln, &p(-1.0))?)
        }
    };
    checks.push(eq("w(a) = w(-a) h(-1,0)", &wp, &wm.mul_mat(&minus), tol));
    checks.push(is_id("h(-1,0)^2 = 1", &minus.mul_mat(&minus), tol));
    checks.push(is_id("h(-1,0) = 1", &minus, tol));
    if spec.is_unitary() {
        let ph = rng.phase();
        checks.push(is_id("h(v,0) = 1", &h_rot(spec, j, (ph, ZERO), RotVariant::Real)?, tol));
        let a = scale(&rng.sphere_c(k), C64::new(s2, 0.0));
        checks.push(eq(
            "w(a) = w(va)",
            &w_mat(spec, &ln, &heis0(a.clone()))?,
            &w_mat(spec, &ln, &heis0(scale(&a, ph)))?,
            tol,
        ));
    }
    Ok((json!({"j": j, "angles": [th, ph, ps, ch]}), checks))
}

fn random_step(spec: &GroupSpec, rng: &mut Sampler) -> StairStep {
    match spec.family {
        Family::Orthogonal => StairStep::Angle(rng.angle()),
        Family::Unitary => StairStep::Euler([rng.angle(), rng.angle(), rng.angle()]),
    }
}

pub(super) fn braid(spec: &GroupSpec, rng: &mut Sampler, i: usize, tol: &Tolerance) -> Out {
    let k = spec.k();
    let j = 1 + i % (k - 2);
    let (order, other) = if rng.coin() {
        (BraidOrder::Lower, BraidOrder::Upper)
    } else {
        (BraidOrder::Upper, BraidOrder::Lower)
    };
    let steps = [random_step(spec, rng), random_step(spec, rng), random_step(spec, rng)];
    let out = braid_exchange(spec, j, order, steps)?;
    let mut checks = vec![eq(
        "braid exchange",
        &braid_product(spec, j, order, &steps)?,
        &braid_product(spec, j, other, &out)?,
        tol,
    )];
    let dir = if rng.coin() { Direction::ToImag } else { Direction::ToReal };
    let x = rng.angle();
    let lead = match spec.family {
        Family::Orthogonal => {
            let u = rng.sphere(3);
            WpairLead::Sphere([u[0], u[1], u[2]])
        }
        Family::Unitary => WpairLead::Angles([rng.angle(), rng.angle()]),
    };
    let jw = match spec.family {
        Family::Orthogonal => j,
        Family::Unitary => 1 + i % (k - 1),
    };
    checks.push(match wpair_refactor(spec, jw, lead, x, dir) {
        Ok(r) => Check { name: "pair refactor".into(), residual: r.residual, ok: r.residual <= tol.rel },
        Err(e) => failed("pair refactor", e),
    });
    let inputs = json!({"j": j, "order": format!("{order:?}"), "steps": steps, "lead": lead, "x": x, "dir": dir});
    Ok((inputs, checks))
}

pub(super) fn trace_pairing_suite(spec: &GroupSpec, rng: &mut Sampler, _i: usize, tol: &Tolerance) -> Out {
    let k = spec.k();
    let (a, b) = (rng.sphere_c(k), rng.sphere_c(k));
    let (lhs, rhs) = trace_pairing(spec, &a, &b)?;
    let mut checks = vec![close("4|<a,b>|^2 + m - n - 4 = tr C", lhs, rhs, tol)];

    let pa = rng.sphere_c(2);
    let pb = rng.sphere_c(2);
    let u = crate::words::su2_from_euler([rng.angle(), rng.angle(), rng.angle()]);
    let apply = |v: &[C64]| [u[(0, 0)] * v[0] + u[(0, 1)] * v[1], u[(1, 0)] * v[0] + u[(1, 1)] * v[1]];
    let (a2, b2) = ([pa[0], pa[1]], [pb[0], pb[1]]);
    let (c2, d2) = (apply(&pa), apply(&pb));
    match su2_transporter(a2, b2, c2, d2) {
        Ok((g, h)) => {
            let ha = mat_vec(&h, &a2);
            let hb = mat_vec(&h, &b2);
            checks.push(close_vec("h a = g c", &ha, &scale(&c2, g), tol));
            checks.push(close_vec("h b = g d", &hb, &scale(&d2, g), tol));
            checks.push(close("det h = 1", (h.det() - ONE).norm(), 0.0, tol));
            checks.push(is_id("h unitary", &h.adjoint().mul_mat(&h), tol));
        }
        Err(e) => checks.push(failed("transporter", e)),
    }
    Ok((json!({"a": cxs(&a), "b": cxs(&b), "pair_a": cxs(&pa), "pair_b": cxs(&pb)}), checks))
}
