//! Extracted commutator coefficients, frozen to a golden file.
//!
//! Regenerate with `RIGIDKIT_BLESS=1 cargo test -p rigidkit --test golden_commutators`.

use std::path::PathBuf;

use rigidkit::generators::RootParam;
use rigidkit::matrixcore::{bracket, ONE};
use rigidkit::relations::sampling::Sampler;
use rigidkit::relations::{commutator_alphabet, commutator_decompose};
use rigidkit::rootsystem::parse_root;
use rigidkit::{GroupSpec, Mat, Tolerance};
use serde_json::{json, Value};

fn golden_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden/commutators.json")
}

fn current() -> Value {
    let specs = [
        GroupSpec::so(4, 3).unwrap(),
        GroupSpec::so(5, 3).unwrap(),
        GroupSpec::su(3, 3).unwrap(),
        GroupSpec::su(4, 3).unwrap(),
    ];
    let mut out = Vec::new();
    for spec in specs {
        for (i, (r, p)) in commutator_alphabet(&spec).into_iter().enumerate() {
            let mut rng = Sampler::new(2024, i as u64);
            let (a, b) = (rng.param(&spec, &r).unwrap(), rng.param(&spec, &p).unwrap());
            let t = commutator_decompose(&spec, &r, &a, &p, &b, &Tolerance::default()).unwrap();
            if t.terms.is_empty() {
                continue;
            }
            out.push(json!({ "spec": spec.to_string(), "r": r, "p": p, "a": a, "b": b, "terms": t.terms }));
        }
    }
    Value::Array(out)
}

/// Structural equality with numbers compared to an absolute tolerance.
fn close(a: &Value, b: &Value, eps: f64) -> bool {
    match (a, b) {
        (Value::Number(x), Value::Number(y)) => (x.as_f64().unwrap() - y.as_f64().unwrap()).abs() <= eps,
        (Value::Array(x), Value::Array(y)) => x.len() == y.len() && x.iter().zip(y).all(|(p, q)| close(p, q, eps)),
        (Value::Object(x), Value::Object(y)) => {
            x.len() == y.len() && x.iter().all(|(k, v)| y.get(k).is_some_and(|w| close(v, w, eps)))
        }
        _ => a == b,
    }
}

#[test]
fn commutator_coefficients_match_golden() {
    let now = current();
    let path = golden_path();
    if std::env::var_os("RIGIDKIT_BLESS").is_some() {
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        std::fs::write(&path, serde_json::to_string_pretty(&now).unwrap() + "\n").unwrap();
        return;
    }
    let text = std::fs::read_to_string(&path).expect("golden file present; bless with RIGIDKIT_BLESS=1");
    let golden: Value = serde_json::from_str(&text).unwrap();
    let (g, c) = (golden.as_array().unwrap(), now.as_array().unwrap());
    assert_eq!(g.len(), c.len(), "number of nonempty tables changed");
    for (x, y) in g.iter().zip(c) {
        assert!(close(x, y, 1e-9), "drift:\n golden {x}\n now    {y}");
    }
}

/// `[x_{L1−L2}(t), x_{L2−L3}(s)] = x_{L1−L3}(c·t·s)` with `c` read off
/// hand-built elementary matrices.
#[test]
fn so_pair_commutator_against_elementary_matrices() {
    let spec = GroupSpec::so(4, 3).unwrap();
    let e = |r: usize, c: usize| Mat::unit(7, r, c, ONE);
    // 0-based: L_i − L_j acts by e_{i,j} − e_{j+3,i+3}.
    let x = e(0, 1).sub_mat(&e(4, 3));
    let y = e(1, 2).sub_mat(&e(5, 4));
    let z = e(0, 2).sub_mat(&e(5, 3));
    let br = bracket(&x, &y).unwrap();
    let c = if Tolerance::default().approx(&br, &z) {
        1.0
    } else {
        assert!(Tolerance::default().approx(&br, &z.scale_re(-1.0)));
        -1.0
    };
    let (r, p) = (parse_root("L1-L2", &spec).unwrap(), parse_root("L2-L3", &spec).unwrap());
    for (t, s) in [(1.0, 1.0), (0.7, -1.9), (-1.3, 0.4)] {
        let table =
            commutator_decompose(&spec, &r, &RootParam::Scalar(t), &p, &RootParam::Scalar(s), &Tolerance::default())
                .unwrap();
        assert_eq!(table.terms.len(), 1);
        assert_eq!(table.terms[0].0.to_string(), "L1-L3");
        match table.terms[0].1 {
            RootParam::Scalar(v) => assert!((v - c * t * s).abs() < 1e-12),
            ref other => panic!("unexpected parameter {other:?}"),
        }
    }
}
