use std::fmt::Write as _;
use std::path::Path;

use rigidkit::generators::{w_elem, RootParam};
use rigidkit::lyapunov::{bracket_generation_check, exponent_table, splitting, stable_cycle_feasible, Functional};
use rigidkit::relations::sampling::Sampler;
use rigidkit::relations::{run_suite, side_condition, trace_pairing, SuiteReport, SUITES};
use rigidkit::rootsystem::{is_generic_plane, parse_root, root_value, roots, CartanVector, GenericPlane, RootLabel};
use rigidkit::words::{free_reduce, parse_word, reconstruct_block, staircase_decompose, Word};
use rigidkit::{Error, Family, GroupSpec, Mat, Tolerance, C64};
use serde_json::{json, Value};

use crate::{Command, RunArgs, SpecArgs};

/// A rendered result: JSON, a text rendering, and the exit code.
pub struct Output {
    pub json: Value,
    pub text: String,
    pub code: u8,
}

impl Output {
    fn ok(json: Value, text: String) -> Self {
        Output { json, text, code: 0 }
    }

    fn verdict(json: Value, text: String, pass: bool) -> Self {
        Output { json, text, code: if pass { 0 } else { 1 } }
    }
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Lib(Error),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(s) => f.write_str(s),
            CliError::Lib(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

type Res<T> = std::result::Result<T, CliError>;

fn usage<T>(msg: impl Into<String>) -> Res<T> {
    Err(CliError::Usage(msg.into()))
}

/// Builds the spec from flags, filling gaps from hints: `n` from the data,
/// `family` defaults to `so`, `m` to `n + k_hint`.
fn resolve_spec(a: &SpecArgs, n_hint: Option<usize>, family_hint: Option<Family>, k_hint: usize) -> Res<GroupSpec> {
    let family = match &a.family {
        Some(f) => f.parse::<Family>()?,
        None => family_hint.unwrap_or(Family::Orthogonal),
    };
    let Some(n) = a.n.or(n_hint) else { return usage("--n is required") };
    let m = a.m.unwrap_or(n + k_hint);
    Ok(GroupSpec::new(family, m, n)?)
}

fn required_spec(a: &SpecArgs) -> Res<GroupSpec> {
    if a.family.is_none() || a.m.is_none() || a.n.is_none() {
        return usage("--family, --m and --n are required");
    }
    resolve_spec(a, None, None, 0)
}

fn tolerance(run: &RunArgs) -> Res<Tolerance> {
    match run.tol {
        Some(t) if !(t.is_finite() && t > 0.0) => usage("--tol must be positive"),
        Some(t) => Ok(Tolerance::new(t)),
        None => Ok(Tolerance::from_env()),
    }
}

fn parse_floats(s: &str) -> Res<Vec<f64>> {
    s.split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|_| CliError::Usage(format!("not a number: {x:?}"))))
        .collect()
}

/// Largest `L` index mentioned in a root string.
fn max_index(root: &str) -> usize {
    root.split('L')
        .skip(1)
        .filter_map(|t| t.chars().take_while(char::is_ascii_digit).collect::<String>().parse().ok())
        .max()
        .unwrap_or(0)
}

fn read_file(path: &Path) -> Res<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))
}

pub fn dispatch(cmd: &Command) -> Res<Output> {
    match cmd {
        Command::Roots { spec } => cmd_roots(&required_spec(spec)?),
        Command::Chain { spec, root, param, seed } => cmd_chain(&required_spec(spec)?, root, param.as_deref(), *seed),
        Command::Verify { suite, spec, run } => cmd_verify(&required_spec(spec)?, suite, run),
        Command::VerifyAll { spec, run } => cmd_verify_all(&required_spec(spec)?, run),
        Command::Lyapunov { spec, t, brackets } => cmd_lyapunov(&required_spec(spec)?, t.as_deref(), *brackets),
        Command::StableCycle { roots, spec } => cmd_stable_cycle(spec, roots),
        Command::Genplane { v1, v2, spec } => cmd_genplane(spec, v1, v2),
        Command::Normalform { family, k, matrix } => cmd_normalform(family, *k, matrix),
        Command::Reduce { word, spec } => cmd_reduce(spec, word),
        Command::TracePairing { spec, a, b, seed } => cmd_trace_pairing(&required_spec(spec)?, a.as_deref(), b.as_deref(), *seed),
    }
}

fn cmd_roots(spec: &GroupSpec) -> Res<Output> {
    let rs = roots(spec);
    let mut text = format!("{spec}: {} roots\n", rs.len());
    for r in &rs {
        let _ = writeln!(text, "  {:<8} {}", r.label.to_string(), r.multiplicity);
    }
    Ok(Output::ok(json!({ "spec": spec, "roots": rs }), text))
}

fn cmd_chain(spec: &GroupSpec, root: &str, param: Option<&str>, seed: u64) -> Res<Output> {
    let r = parse_root(root, spec)?;
    let p = match param {
        Some(s) => serde_json::from_str::<RootParam>(s).map_err(|e| CliError::Usage(format!("bad --param: {e}")))?,
        None => Sampler::new(seed, 0).nonzero_param(spec, &r)?,
    };
    let cert = w_elem(spec, &r, &p)?;
    let ok = cert.in_group && cert.reflection_checked;
    let text = format!(
        "{spec} chain for {r}: in group {}, reflection {}\n",
        cert.in_group, cert.reflection_checked
    );
    Ok(Output::verdict(serde_json::to_value(&cert).expect("serializable"), text, ok))
}

fn report_line(r: &SuiteReport) -> String {
    format!(
        "{:<14} {} samples={} max_residual={:.3e} failures={}\n",
        r.suite,
        if r.pass { "PASS" } else { "FAIL" },
        r.samples,
        r.max_residual,
        r.failures.len()
    )
}

fn cmd_verify(spec: &GroupSpec, suite: &str, run: &RunArgs) -> Res<Output> {
    let tol = tolerance(run)?;
    let rep = run_suite(spec, suite, run.samples, run.seed, &tol)?;
    let text = format!("{spec} {}", report_line(&rep));
    let pass = rep.pass;
    Ok(Output::verdict(serde_json::to_value(&rep).expect("serializable"), text, pass))
}

fn cmd_verify_all(spec: &GroupSpec, run: &RunArgs) -> Res<Output> {
    let tol = tolerance(run)?;
    let mut reports = Vec::new();
    let mut skipped = Vec::new();
    let mut text = format!("{spec} samples={} seed={}\n", run.samples, run.seed);
    for &suite in SUITES {
        match side_condition(spec, suite) {
            Ok(()) => {
                let rep = run_suite(spec, suite, run.samples, run.seed, &tol)?;
                text.push_str(&report_line(&rep));
                reports.push(rep);
            }
            Err(e) => {
                let _ = writeln!(text, "{suite:<14} SKIP {e}");
                skipped.push(json!({ "suite": suite, "reason": e.to_string() }));
            }
        }
    }
    let pass = reports.iter().all(|r| r.pass);
    let worst = reports.iter().map(|r| r.max_residual).fold(0.0, f64::max);
    let _ = writeln!(text, "{} max_residual={worst:.3e}", if pass { "PASS" } else { "FAIL" });
    let json = json!({
        "spec": spec,
        "samples": run.samples,
        "seed": run.seed,
        "pass": pass,
        "max_residual": worst,
        "suites": reports,
        "skipped": skipped,
    });
    Ok(Output::verdict(json, text, pass))
}

fn cmd_lyapunov(spec: &GroupSpec, t: Option<&str>, brackets: bool) -> Res<Output> {
    let table = exponent_table(spec);
    let mut text = format!(
        "{spec}: {} exponents, zero multiplicity {}, total {} (dim {})\n",
        table.entries.len() - 1,
        table.zero_multiplicity(),
        table.total(),
        spec.lie_dim()
    );
    for e in &table.entries {
        let name = match &e.functional {
            Functional::Zero => "0".to_string(),
            Functional::Root(r) => r.to_string(),
        };
        let _ = writeln!(text, "  {name:<8} {}", e.multiplicity);
    }
    let mut json = json!({
        "spec": spec,
        "entries": table.entries,
        "zero_multiplicity": table.zero_multiplicity(),
        "total": table.total(),
        "dim": spec.lie_dim(),
    });
    if let Some(t) = t {
        let t = CartanVector::new(parse_floats(t)?);
        let s = splitting(spec, &t, &Tolerance::from_env())?;
        let _ = writeln!(
            text,
            "splitting at {:?}: stable {} unstable {} neutral {}",
            t.t, s.stable_dim, s.unstable_dim, s.neutral_dim
        );
        json["splitting"] = serde_json::to_value(&s).expect("serializable");
    }
    let mut code = 0;
    if brackets {
        let g = bracket_generation_check(spec)?;
        let _ = writeln!(text, "bracket generation: rank {} of {} (root vectors alone {})", g.rank, g.dim, g.root_rank);
        if !g.ok {
            code = 1;
        }
        json["bracket_generation"] = serde_json::to_value(&g).expect("serializable");
    }
    Ok(Output { json, text, code })
}

fn cmd_stable_cycle(spec_args: &SpecArgs, roots_arg: &str) -> Res<Output> {
    let names: Vec<&str> = roots_arg.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    if names.is_empty() {
        return usage("--roots is empty");
    }
    let n_hint = names.iter().map(|s| max_index(s)).max().map(|n| n.max(3));
    let spec = resolve_spec(spec_args, n_hint, None, 1)?;
    let cycle: Vec<RootLabel> = names.iter().map(|s| parse_root(s, &spec)).collect::<Result<_, _>>()?;
    let w = stable_cycle_feasible(&spec, &cycle)?;
    let (text, json) = match &w {
        Some(w) => {
            let values: Vec<f64> = cycle.iter().map(|r| root_value(r, &w.t)).collect::<Result<_, _>>()?;
            (
                format!("{spec}: feasible, witness {:?}, margin {:.6}\n", w.t.t, w.margin),
                json!({ "spec": spec, "roots": cycle, "feasible": true, "witness": w.t.t, "margin": w.margin, "values": values }),
            )
        }
        None => (format!("{spec}: infeasible\n"), json!({ "spec": spec, "roots": cycle, "feasible": false })),
    };
    Ok(Output::ok(json, text))
}

fn cmd_genplane(spec_args: &SpecArgs, v1: &str, v2: &str) -> Res<Output> {
    let (v1, v2) = (parse_floats(v1)?, parse_floats(v2)?);
    let spec = resolve_spec(spec_args, Some(v1.len()), None, 1)?;
    let rep = is_generic_plane(&spec, &GenericPlane { v1: v1.into(), v2: v2.into() })?;
    let text = if rep.generic {
        format!("{spec}: generic\n")
    } else {
        format!("{spec}: not generic, witness {}\n", rep.witness.join(", "))
    };
    Ok(Output::ok(serde_json::to_value(&rep).expect("serializable"), text))
}

fn cmd_normalform(family: &str, k: usize, path: &Path) -> Res<Output> {
    let family: Family = family.parse()?;
    let b = Mat::from_json_str(&read_file(path)?)?;
    let spec = GroupSpec::new(family, 3 + k, 3)?;
    let s = staircase_decompose(&spec, &b)?;
    let residual = Tolerance::residual(&reconstruct_block(&s)?, &b);
    let text = format!("{} k={k}: rows {:?}, residual {residual:.3e}\n", family.as_str(), s.row_lengths());
    let json = json!({ "staircase": s, "row_lengths": s.row_lengths(), "residual": residual });
    Ok(Output::ok(json, text))
}

/// Hints for `reduce` when the spec flags are omitted: highest root index,
/// the family implied by complex parameters, and the tail length of vector parameters.
fn word_hints(raw: &Value) -> (Option<usize>, Option<Family>, Option<usize>) {
    let mut n = None;
    let mut family = None;
    let mut k = None;
    for l in raw.as_array().into_iter().flatten() {
        if let Some(r) = l.get("root").and_then(Value::as_str) {
            n = n.max(Some(max_index(r).max(3)));
        }
        let Some(p) = l.get("param") else { continue };
        if p.get("z").is_some() || (p.get("t").is_some() && p.get("a").is_some()) {
            family = Some(Family::Unitary);
        }
        if let Some(a) = p.get("a").and_then(Value::as_array) {
            k = Some(a.len());
        }
    }
    (n, family, k)
}

fn cmd_reduce(spec_args: &SpecArgs, path: &Path) -> Res<Output> {
    let text_in = read_file(path)?;
    let raw: Value = serde_json::from_str(&text_in).map_err(|e| CliError::Lib(Error::ParseError(e.to_string())))?;
    let (n, fam, k) = word_hints(&raw);
    let spec = resolve_spec(spec_args, n.or(Some(3)), fam, k.unwrap_or(1))?;
    let w = parse_word(&text_in, &spec)?;
    let r: Word = free_reduce(&w);
    let text = format!("{spec}: {} letters -> {}\n{}\n", w.len(), r.len(), serde_json::to_string(&r).expect("serializable"));
    Ok(Output::ok(json!({ "spec": spec, "input_length": w.len(), "word": r }), text))
}

fn parse_cvec(s: &str) -> Res<Vec<C64>> {
    let v: Vec<[f64; 2]> = serde_json::from_str(s).map_err(|e| CliError::Usage(format!("bad vector: {e}")))?;
    Ok(v.into_iter().map(|[re, im]| C64::new(re, im)).collect())
}

fn cmd_trace_pairing(spec: &GroupSpec, a: Option<&str>, b: Option<&str>, seed: u64) -> Res<Output> {
    let dim = spec.k();
    let mut rng = Sampler::new(seed, 0);
    let a = match a {
        Some(s) => parse_cvec(s)?,
        None => rng.sphere_c(dim),
    };
    let b = match b {
        Some(s) => parse_cvec(s)?,
        None => rng.sphere_c(dim),
    };
    let (lhs, rhs) = trace_pairing(spec, &a, &b)?;
    let residual = (lhs - rhs).abs() / (1.0 + lhs.abs().max(rhs.abs()));
    let pass = residual <= Tolerance::from_env().rel;
    let cv = |v: &[C64]| v.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>();
    let text = format!("{spec}: lhs {lhs:.12} rhs {rhs:.12} residual {residual:.3e}\n");
    let json = json!({ "spec": spec, "a": cv(&a), "b": cv(&b), "lhs": lhs, "rhs": rhs, "residual": residual, "pass": pass });
    Ok(Output::verdict(json, text, pass))
}
