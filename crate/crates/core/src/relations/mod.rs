//! Seeded randomized verification of the presentation relations.

mod commutator;
mod refactor;
pub mod sampling;
mod suites;

pub use commutator::{combination_roots, commutator_decompose, CommutatorTable};
pub use refactor::{
    braid_exchange, braid_planes, braid_product, g1, g2, inner, su2_transporter, trace_pairing, wpair_refactor, BraidOrder,
    Direction, WpairLead, WpairResult,
};
pub use suites::commutator_alphabet;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::matrixcore::{Family, GroupSpec, Tolerance};
use sampling::Sampler;

/// Every suite id, in reporting order.
pub const SUITES: &[&str] = &[
    "additivity",
    "commutator",
    "h-mult-so",
    "h-mult-su",
    "center-so",
    "center-su",
    "rot-so",
    "rot-su",
    "conj-so",
    "conj-su",
    "symbol-R",
    "symbol-C",
    "symbol-S1",
    "braid",
    "trace-pairing",
];

/// One named identity checked on one sample.
#[derive(Clone, Debug)]
pub struct Check {
    pub name: String,
    pub residual: f64,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Failure {
    pub sample: usize,
    pub check: String,
    pub inputs: Value,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub spec: GroupSpec,
    pub samples: usize,
    pub seed: u64,
    pub pass: bool,
    pub max_residual: f64,
    pub failures: Vec<Failure>,
}

/// Side conditions of `suite` on `spec`.
pub fn side_condition(spec: &GroupSpec, suite: &str) -> Result<()> {
    let k = spec.k();
    let violated = |what: &str| Err(Error::SideConditionViolated(what.to_string()));
    let family = |f: Family, what: &str| if spec.family == f { Ok(()) } else { violated(what) };
    match suite {
        "additivity" | "commutator" => Ok(()),
        "h-mult-so" | "center-so" | "symbol-R" => family(Family::Orthogonal, "family so"),
        "h-mult-su" | "center-su" | "symbol-C" => family(Family::Unitary, "family su"),
        "rot-so" => {
            family(Family::Orthogonal, "family so")?;
            if k < 2 { violated("m−n ≥ 2") } else { Ok(()) }
        }
        "rot-su" => {
            family(Family::Unitary, "family su")?;
            if k < 2 { violated("m−n ≥ 2") } else { Ok(()) }
        }
        "symbol-S1" => if k < 2 { violated("m−n ≥ 2") } else { Ok(()) },
        "conj-so" => {
            family(Family::Orthogonal, "family so")?;
            if k < 1 { violated("m−n ≥ 1") } else { Ok(()) }
        }
        "conj-su" | "trace-pairing" => {
            family(Family::Unitary, "family su")?;
            if k < 1 { violated("m−n ≥ 1") } else { Ok(()) }
        }
        "braid" => if k < 3 { violated("m−n ≥ 3") } else { Ok(()) },
        other => Err(Error::UnknownSuite(other.to_string())),
    }
}

/// Suites whose side conditions hold for `spec`.
pub fn applicable_suites(spec: &GroupSpec) -> Vec<&'static str> {
    SUITES.iter().copied().filter(|s| side_condition(spec, s).is_ok()).collect()
}

type SampleFn = fn(&GroupSpec, &mut Sampler, usize, &Tolerance) -> Result<(Value, Vec<Check>)>;

fn sample_fn(suite: &str) -> Result<SampleFn> {
    Ok(match suite {
        "additivity" => suites::additivity,
        "commutator" => suites::commutator,
        "h-mult-so" | "h-mult-su" => suites::h_mult,
        "center-so" => suites::center_so,
        "center-su" => suites::center_su,
        "rot-so" | "rot-su" => suites::rot,
        "conj-so" => suites::conj_so,
        "conj-su" => suites::conj_su,
        "symbol-R" | "symbol-C" => suites::symbol_field,
        "symbol-S1" => suites::symbol_s1,
        "braid" => suites::braid,
        "trace-pairing" => suites::trace_pairing_suite,
        other => return Err(Error::UnknownSuite(other.to_string())),
    })
}

/// Runs `samples` independent draws of `suite`; sample `i` is seeded from
/// `(seed, i)` alone, so results do not depend on scheduling.
pub fn run_suite(spec: &GroupSpec, suite: &str, samples: usize, seed: u64, tol: &Tolerance) -> Result<SuiteReport> {
    let f = sample_fn(suite)?;
    side_condition(spec, suite)?;
    let outcomes: Vec<(f64, Vec<Failure>)> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = Sampler::new(seed, i as u64);
            match f(spec, &mut rng, i, tol) {
                Ok((inputs, checks)) => {
                    let worst = checks.iter().map(|c| c.residual).fold(0.0, f64::max);
                    let fails = checks
                        .into_iter()
                        .filter(|c| !c.ok)
                        .map(|c| Failure { sample: i, check: c.name, inputs: inputs.clone(), residual: c.residual })
                        .collect();
                    (worst, fails)
                }
                Err(e) => {
                    let residual = match e {
                        Error::DecompositionResidual(r) => r,
                        _ => 1.0,
                    };
                    let f = Failure { sample: i, check: format!("error: {e}"), inputs: Value::Null, residual };
                    (residual, vec![f])
                }
            }
        })
        .collect();
    let max_residual = outcomes.iter().map(|o| o.0).fold(0.0, f64::max);
    let failures: Vec<Failure> = outcomes.into_iter().flat_map(|o| o.1).collect();
    Ok(SuiteReport {
        suite: suite.to_string(),
        spec: *spec,
        samples,
        seed,
        pass: failures.is_empty(),
        max_residual,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_suites_pass_small() {
        let specs = [
            GroupSpec::so(3, 3),
            GroupSpec::so(4, 3),
            GroupSpec::so(6, 3),
            GroupSpec::su(3, 3),
            GroupSpec::su(4, 3),
            GroupSpec::su(6, 3),
        ];
        let mut bad = Vec::new();
        for s in specs.map(Result::unwrap) {
            for id in applicable_suites(&s) {
                let r = run_suite(&s, id, 60, 3, &Tolerance::default()).unwrap();
                let mut names: Vec<&str> = r.failures.iter().map(|f| f.check.as_str()).collect();
                names.sort();
                names.dedup();
                if !r.pass {
                    bad.push(format!("{s} {id}: {} failures {names:?}", r.failures.len()));
                }
            }
        }
        assert!(bad.is_empty(), "{}", bad.join("\n"));
    }

    #[test]
    fn side_conditions() {
        let s = GroupSpec::so(3, 3).unwrap();
        assert!(matches!(run_suite(&s, "rot-so", 10, 7, &Tolerance::default()), Err(Error::SideConditionViolated(_))));
        assert!(matches!(run_suite(&s, "nope", 1, 0, &Tolerance::default()), Err(Error::UnknownSuite(_))));
    }
}
