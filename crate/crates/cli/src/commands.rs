use moments_core::analysis::SecondMoments;
use moments_core::closed_forms::{
    c_1, c_2n, c_2n_minus_1, c_2n_minus_1_sum, c_2n_sum, double_factorial, first_moment_exact, moment_bounds,
    second_moment_k1,
};
use moments_core::oracle::{self, SAME_ROW_MAX_ORDER};
use moments_core::{enumerate_valid, EdgeVector, Engine, IntPolynomial};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use crate::output::{print_csv, print_json, real};
use crate::{CliError, Format, RunConfig};

fn open_engine(config: &RunConfig) -> Result<Engine, CliError> {
    Engine::with_cache(&config.cache_dir)
        .map_err(|e| CliError::Io(format!("cannot open cache {}: {e}", config.cache_dir.display())))
}

/// Cache statistics go to stderr so stdout stays identical across runs.
fn report_work(engine: &Engine) {
    eprintln!(
        "computed {} keys, loaded {} from cache",
        engine.computed_count(),
        engine.loaded_count()
    );
}

fn coeff_strings(p: &IntPolynomial) -> Vec<String> {
    p.coeffs().iter().map(BigInt::to_string).collect()
}

fn edge_json(a: EdgeVector) -> Value {
    json!([a.a12, a.a13, a.a23])
}

enum Evaluation {
    Exact(u64, BigInt),
    Log(f64, f64),
}

fn evaluate(p: &IntPolynomial, k: &str) -> Result<Evaluation, CliError> {
    if let Ok(k) = k.parse::<u64>() {
        return Ok(Evaluation::Exact(k, p.eval_exact_u64(k)));
    }
    let k_real: f64 = k
        .parse()
        .map_err(|_| CliError::Usage(format!("k must be an integer or a positive real, got {k:?}")))?;
    Ok(Evaluation::Log(k_real, p.eval_log(k_real)?))
}

pub fn compute(config: &RunConfig, n: u32, a: EdgeVector, k: Option<&str>) -> Result<(), CliError> {
    a.validate(n)?;
    let engine = open_engine(config)?;
    let g = engine.g(n, a)?;
    report_work(&engine);
    let eval = k.map(|k| evaluate(&g, k)).transpose()?;
    let degree = g.degree().unwrap_or(0);

    match config.format.unwrap_or(Format::Json) {
        Format::Json => {
            let mut doc = json!({
                "n": n,
                "a": edge_json(a),
                "degree": degree,
                "coeffs": coeff_strings(&g),
            });
            match eval {
                Some(Evaluation::Exact(k, v)) => {
                    doc["k"] = json!(k);
                    doc["value"] = json!(v.to_string());
                }
                Some(Evaluation::Log(k, v)) => {
                    doc["k"] = json!(k);
                    doc["log_value"] = json!(v);
                }
                None => {}
            }
            print_json(&doc)
        }
        Format::Csv => {
            let mut header = vec!["n", "a12", "a13", "a23", "i", "coeff"];
            let extra = match &eval {
                Some(Evaluation::Exact(k, v)) => {
                    header.extend(["k", "value"]);
                    vec![k.to_string(), v.to_string()]
                }
                Some(Evaluation::Log(k, v)) => {
                    header.extend(["k", "log_value"]);
                    vec![real(*k), real(*v)]
                }
                None => vec![],
            };
            let rows: Vec<Vec<String>> = coeff_strings(&g)
                .into_iter()
                .enumerate()
                .map(|(i, c)| {
                    let mut row = vec![n.to_string(), a.a12.to_string(), a.a13.to_string(), a.a23.to_string()];
                    row.extend([i.to_string(), c]);
                    row.extend(extra.iter().cloned());
                    row
                })
                .collect();
            print_csv(&header, &rows)
        }
    }
}

struct Check {
    name: &'static str,
    value: BigInt,
    expected: BigInt,
}

impl Check {
    fn ok(&self) -> bool {
        self.value == self.expected
    }
}

pub fn coeffs(config: &RunConfig, n: u32) -> Result<(), CliError> {
    EdgeVector::ZERO.validate(n)?;
    let engine = open_engine(config)?;
    let g = engine.g(n, EdgeVector::ZERO)?;
    report_work(&engine);
    let two_n = 2 * n as usize;
    let checks = [
        Check { name: "c_2n", value: g.coeff(two_n), expected: c_2n(n) },
        Check { name: "c_2n_minus_1", value: g.coeff(two_n - 1), expected: c_2n_minus_1(n) },
        Check { name: "c_1", value: g.coeff(1), expected: c_1(n) },
        Check { name: "sum", value: g.eval_exact_u64(1), expected: EdgeVector::ZERO.graph_count(n)? },
    ];
    let status = |ok: bool| if ok { "ok" } else { "mismatch" };

    match config.format.unwrap_or(Format::Json) {
        Format::Json => {
            let coeffs: Vec<Value> = (1..=two_n).map(|i| json!({"i": i, "c": g.coeff(i).to_string()})).collect();
            let check_docs: Vec<Value> = checks
                .iter()
                .map(|c| {
                    json!({
                        "name": c.name,
                        "value": c.value.to_string(),
                        "expected": c.expected.to_string(),
                        "status": status(c.ok()),
                    })
                })
                .collect();
            print_json(&json!({"n": n, "coeffs": coeffs, "checks": check_docs}))?;
        }
        Format::Csv => {
            let mut rows: Vec<Vec<String>> = (1..=two_n)
                .map(|i| vec![format!("c_{i}"), g.coeff(i).to_string(), String::new(), String::new()])
                .collect();
            rows.extend(checks.iter().map(|c| {
                vec![
                    format!("check_{}", c.name),
                    c.value.to_string(),
                    c.expected.to_string(),
                    status(c.ok()).to_string(),
                ]
            }));
            print_csv(&["name", "value", "expected", "status"], &rows)?;
        }
    }
    match checks.iter().find(|c| !c.ok()) {
        Some(c) => Err(CliError::Verification(format!(
            "{} at n={n}: got {}, expected {}",
            c.name, c.value, c.expected
        ))),
        None => Ok(()),
    }
}

/// Exponents from `lo:hi:step` (both ends inclusive) or `a,b,c`.
pub fn parse_exponents(spec: &str) -> Result<Vec<f64>, CliError> {
    let bad = |what: &str| CliError::Usage(format!("bad exponent list {spec:?}: {what}"));
    let num = |t: &str| t.trim().parse::<f64>().map_err(|_| bad(&format!("{t:?} is not a number")));
    let values = if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').collect();
        let [lo, hi, step] = parts[..] else {
            return Err(bad("expected lo:hi:step"));
        };
        let (lo, hi, step) = (num(lo)?, num(hi)?, num(step)?);
        if step.is_nan() || step <= 0.0 || hi < lo {
            return Err(bad("need step > 0 and hi >= lo"));
        }
        let count = ((hi - lo) / step + 1e-9).floor() as usize + 1;
        // Rounding keeps grid points like 1.95 + 2 * 0.05 printing as 2.05.
        (0..count).map(|i| ((lo + i as f64 * step) * 1e12).round() / 1e12).collect()
    } else {
        spec.split(',').map(num).collect::<Result<Vec<_>, _>>()?
    };
    if values.iter().any(|a| !a.is_finite()) {
        return Err(bad("exponents must be finite"));
    }
    Ok(values)
}

pub fn sweep(config: &RunConfig, a_spec: &str, n_max: u32) -> Result<(), CliError> {
    let exponents = parse_exponents(a_spec)?;
    if n_max == 0 {
        return Err(CliError::Usage("n-max must be at least 1".into()));
    }
    let engine = open_engine(config)?;
    let stats = SecondMoments::from_engine(&engine, n_max)?;
    report_work(&engine);
    let records = stats.transition_sweep(&exponents, n_max)?;

    match config.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let rows: Vec<Vec<String>> = records
                .iter()
                .map(|r| {
                    vec![
                        r.n.to_string(),
                        real(r.a_exponent),
                        real(r.k),
                        real(r.log_inv),
                        r.delta.map(real).unwrap_or_default(),
                    ]
                })
                .collect();
            print_csv(&["n", "a_exponent", "k", "log_inv", "delta"], &rows)
        }
        Format::Json => {
            let docs: Vec<Value> = records
                .iter()
                .map(|r| json!({"n": r.n, "a_exponent": r.a_exponent, "k": r.k, "log_inv": r.log_inv, "delta": r.delta}))
                .collect();
            print_json(&Value::Array(docs))
        }
    }
}

/// Prints the report, then turns a failure into exit status 1.
fn finish_verification(report: Value, failure: Option<String>) -> Result<(), CliError> {
    print_json(&report)?;
    match failure {
        Some(msg) => Err(CliError::Verification(msg)),
        None => Ok(()),
    }
}

pub fn verify_oracle(config: &RunConfig, n: u32, allow_large: bool) -> Result<(), CliError> {
    let engine = open_engine(config)?;
    let mut checked = Vec::new();
    let mut failure = None;
    if n <= 2 {
        let classes = oracle::enumerate_classes(n)?;
        let valid = enumerate_valid(n);
        if classes.len() != valid.len() {
            failure = Some(format!("enumeration found {} classes, expected {}", classes.len(), valid.len()));
        }
        for (a, brute) in classes {
            let rec = engine.g(n, a)?;
            checked.push(edge_json(a));
            if *rec != brute && failure.is_none() {
                failure = Some(format!("g({n}, {a}): recursion {rec}, enumeration {brute}"));
            }
        }
    } else {
        let max = if allow_large { 4 } else { SAME_ROW_MAX_ORDER };
        let brute = oracle::enumerate_same_row_up_to(n, max)?;
        let rec = engine.g(n, EdgeVector::ZERO)?;
        checked.push(edge_json(EdgeVector::ZERO));
        if *rec != brute {
            failure = Some(format!("g({n}, (0,0,0)): recursion {rec}, enumeration {brute}"));
        }
    }
    report_work(&engine);
    let report = json!({"mode": "oracle", "n": n, "checked": checked, "pass": failure.is_none()});
    finish_verification(report, failure)
}

pub fn verify_mc(config: &RunConfig, t: u32, n: u32, k: u32, samples: u64) -> Result<(), CliError> {
    let est = oracle::mc_moment(t, n, k, samples, config.seed)?;
    let exact = if t == 2 {
        let engine = open_engine(config)?;
        let m2 = engine.second_moment_polynomial(n)?;
        report_work(&engine);
        m2.eval_exact_u64(u64::from(k))
    } else {
        first_moment_exact(u64::from(k), n)
    };
    let exact_f = exact.to_f64().unwrap_or(f64::INFINITY);
    let z = est.z_score(exact_f);
    let pass = z.abs() < 5.0;
    let report = json!({
        "mode": "mc",
        "t": t,
        "n": n,
        "k": k,
        "samples": est.samples,
        "seed": est.seed,
        "exact": exact.to_string(),
        "mean": est.mean,
        "stderr": est.stderr,
        "z": z,
        "pass": pass,
    });
    let failure = (!pass).then(|| format!("t={t} n={n} k={k}: estimate {} vs exact {exact}, z = {z:.2}", est.mean));
    finish_verification(report, failure)
}

pub fn verify_closed_forms(config: &RunConfig, n_max: u32) -> Result<(), CliError> {
    EdgeVector::ZERO.validate(n_max)?;
    let engine = open_engine(config)?;
    engine.g(n_max, EdgeVector::ZERO)?;

    let mut failure: Option<String> = None;
    let mut fail = |msg: String| {
        failure.get_or_insert(msg);
    };
    let mismatch = |what: &str, n: u32, got: &BigInt, want: &BigInt| format!("{what} at n={n}: got {got}, expected {want}");
    let mut bound_checks = 0u64;

    for n in 1..=n_max {
        let g = engine.g(n, EdgeVector::ZERO)?;
        let two_n = 2 * n as usize;
        let pairs = [
            ("c_2n", g.coeff(two_n), c_2n(n)),
            ("c_2n (sum form)", g.coeff(two_n), c_2n_sum(n)),
            ("c_2n-1", g.coeff(two_n - 1), c_2n_minus_1(n)),
            ("c_2n-1 (sum form)", g.coeff(two_n - 1), c_2n_minus_1_sum(n)),
            ("c_1", g.coeff(1), c_1(n)),
        ];
        for (what, got, want) in &pairs {
            if got != want {
                fail(mismatch(what, n, got, want));
            }
        }
        let m2 = g.scale(&double_factorial(2 * i64::from(n) - 1)?);
        let at_one = m2.eval_exact_u64(1);
        let want = second_moment_k1(n);
        if at_one != want {
            fail(mismatch("M2(1,n)", n, &at_one, &want));
        }
        for k in 1..=100u64 {
            let value = m2.eval_exact_u64(k);
            if !moment_bounds(k, n).contains(&value) {
                fail(format!("bounds at n={n}, k={k}: M2 = {value}"));
            }
            bound_checks += 1;
        }
    }

    let entries = engine.memo().entries();
    for (key, poly) in &entries {
        let count = key.a.graph_count(key.n)?;
        let at_one = poly.eval_exact_u64(1);
        if at_one != count {
            fail(format!("class size of g({}, {}): got {at_one}, expected {count}", key.n, key.a));
        }
        let mirror = engine.g(key.n, key.a.swap_outer_rows())?;
        if **poly != *mirror {
            fail(format!("g({}, {}) = {poly} but its mirror is {mirror}", key.n, key.a));
        }
    }

    report_work(&engine);
    let report = json!({
        "mode": "closed-forms",
        "n_max": n_max,
        "bound_checks": bound_checks,
        "keys_checked": entries.len(),
        "pass": failure.is_none(),
    });
    finish_verification(report, failure)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponent_ranges() {
        assert_eq!(parse_exponents("0.5:4.0:0.5").unwrap().len(), 8);
        assert_eq!(parse_exponents("1.95:2.2:0.05").unwrap(), vec![1.95, 2.0, 2.05, 2.1, 2.15, 2.2]);
        assert_eq!(parse_exponents("1.95,2.20").unwrap(), vec![1.95, 2.2]);
        assert_eq!(parse_exponents("2.0").unwrap(), vec![2.0]);
        assert!(parse_exponents("3:1:0.5").is_err());
        assert!(parse_exponents("1:2:0").is_err());
        assert!(parse_exponents("x").is_err());
    }
}
