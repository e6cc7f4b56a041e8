//! Command implementations. Each job returns its full stdout text so that
//! output assembly stays single-threaded and ordered.

use std::fmt::Write as _;

use darcais_core::analysis::{
    delta_from_table, delta_lower_bound, find_delta_counterexample, lehmer_scan,
    logconcavity_scan_no, no_corollary_check, transfer_check, ScanReport,
};
use darcais_core::arith::parse_rational;
use darcais_core::export::{poly_to_json, rational_strings, table_to_csv, table_to_json};
use darcais_core::formulas::{
    composition_sum_coeff, thm1_coeff, thm2_coeff, CompositionVariant, MainTheorem,
};
use darcais_core::partition::factorial;
use darcais_core::series::{gen_series_h_id, gen_series_h_one, nekrasov_okounkov};
use darcais_core::suites::{Suite, SuiteReport};
use darcais_core::{pn, rat, ArithmeticFunction, CoeffTable, CumulativeProduct, Poly, Rational};
use num_traits::{One, Zero};
use serde_json::json;

use crate::{Check, Format, Method};

pub enum Failure {
    /// Bad input; exit status 2.
    Usage(String),
    /// A check found a counterexample; exit status 1. Holds the full report.
    Verification(String),
}

impl From<darcais_core::Error> for Failure {
    fn from(e: darcais_core::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Job = Result<String, Failure>;

fn usage<T>(msg: impl Into<String>) -> Result<T, Failure> {
    Err(Failure::Usage(msg.into()))
}

fn parse_fn(desc: &str) -> Result<ArithmeticFunction, Failure> {
    Ok(ArithmeticFunction::parse(desc)?)
}

fn pretty(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

fn no_csv(format: Format, what: &str) -> Result<(), Failure> {
    if format == Format::Csv {
        return usage(format!("csv output is only available for export, not {what}"));
    }
    Ok(())
}

/// Which of `h = 1`, `h = id` the function matches on `1..=n`.
fn special_h(h: &ArithmeticFunction, n: usize, method: Method) -> Result<CompositionVariant, Failure> {
    if h.agrees_with_one(n) {
        Ok(CompositionVariant::HOne)
    } else if h.agrees_with_id(n) {
        Ok(CompositionVariant::HId)
    } else {
        usage(format!("method {method:?} needs h = one or h = id on 1..={n}, got {h}"))
    }
}

fn normalizer(h: &ArithmeticFunction, n: usize) -> Result<Rational, Failure> {
    Ok(CumulativeProduct::new(h, n)?.get(n).clone())
}

/// `A_{n,0}, ..., A_{n,n}` by the chosen route.
fn coefficient_row(
    g: &ArithmeticFunction,
    h: &ArithmeticFunction,
    n: usize,
    method: Method,
) -> Result<Vec<Rational>, Failure> {
    let from_poly = |p: Poly| -> Result<Vec<Rational>, Failure> {
        let hn = normalizer(h, n)?;
        Ok(p.padded(n + 1).into_iter().map(|c| c * &hn).collect())
    };
    let by_m = |f: &mut dyn FnMut(usize) -> Result<Rational, Failure>| -> Result<Vec<Rational>, Failure> {
        let mut row = vec![if n == 0 { Rational::one() } else { Rational::zero() }];
        for m in 1..=n {
            row.push(f(m)?);
        }
        Ok(row)
    };
    match method {
        Method::Recursion => from_poly(pn(g, h, n)?),
        Method::Lemma => Ok(CoeffTable::build(g, h, n)?.row(n).to_vec()),
        Method::MainTheorem => {
            let mut mt = MainTheorem::new(g, h, n)?;
            by_m(&mut |m| Ok(mt.coeff(n, m)?))
        }
        Method::Thm1 => {
            if !h.agrees_with_one(n) {
                return usage(format!("thm1 requires h = one, got {h}"));
            }
            by_m(&mut |m| Ok(thm1_coeff(g, n, m)?))
        }
        Method::Thm2 => {
            if !h.agrees_with_id(n) {
                return usage(format!("thm2 requires h = id, got {h}"));
            }
            by_m(&mut |m| Ok(thm2_coeff(g, n, m)?))
        }
        Method::Composition => {
            let variant = special_h(h, n, method)?;
            by_m(&mut |m| Ok(composition_sum_coeff(g, n, m, variant)?))
        }
        Method::Series => {
            let s = match special_h(h, n, method)? {
                CompositionVariant::HOne => gen_series_h_one(g, n)?,
                CompositionVariant::HId => gen_series_h_id(g, n)?,
            };
            from_poly(s.coeff(n).clone())
        }
        Method::Hook => {
            let sigma = ArithmeticFunction::sigma(1);
            if g.values(n)? != sigma.values(n)? || !h.agrees_with_id(n) {
                return usage(format!("hook method requires g = sigma:1 and h = id, got g = {g}, h = {h}"));
            }
            let q = nekrasov_okounkov(n).poly.taylor_shift(&rat(-1));
            let nf = Rational::from_integer(factorial(n as u64));
            Ok(q.padded(n + 1).into_iter().map(|c| c * &nf).collect())
        }
    }
}

pub fn poly(g: &str, h: &str, n: usize, method: Method, eval_at: Option<&str>, format: Format) -> Job {
    no_csv(format, "poly")?;
    let (g, h) = (parse_fn(g)?, parse_fn(h)?);
    let point = match eval_at {
        Some(s) => Some(parse_rational(s).ok_or_else(|| Failure::Usage(format!("`{s}` is not a rational")))?),
        None => None,
    };
    let row = coefficient_row(&g, &h, n, method)?;
    let hn = normalizer(&h, n)?;
    let p = Poly::new(row.into_iter().map(|c| c / &hn).collect());
    Ok(match (format, point) {
        (Format::Json, Some(x)) => pretty(&json!({ "n": n, "at": x.to_string(), "value": p.eval(&x).to_string() })),
        (Format::Json, None) => pretty(&poly_to_json(&p, n)),
        (_, Some(x)) => format!("{}\n", p.eval(&x)),
        (_, None) => format!("{p}\n"),
    })
}

pub fn coeff(g: &str, h: &str, n: usize, m: usize, method: Method, format: Format) -> Job {
    no_csv(format, "coeff")?;
    if m > n {
        return usage(format!("need m <= n, got n = {n}, m = {m}"));
    }
    let (g, h) = (parse_fn(g)?, parse_fn(h)?);
    let value = coefficient_row(&g, &h, n, method)?.swap_remove(m);
    Ok(match format {
        Format::Json => pretty(&json!({ "n": n, "m": m, "value": value.to_string() })),
        _ => format!("{value}\n"),
    })
}

fn suite_json(r: &SuiteReport) -> serde_json::Value {
    json!({
        "suite": r.suite.to_string(),
        "max_n": r.max_n,
        "checks": r.checks,
        "passed": r.passed(),
        "failure": r.failure,
    })
}

pub fn verify(suite: &str, max_n: Option<usize>, format: Format) -> Job {
    no_csv(format, "verify")?;
    let suites = if suite == "all" {
        Suite::ALL.to_vec()
    } else {
        vec![suite.parse::<Suite>()?]
    };
    let mut reports = Vec::new();
    for s in suites {
        reports.push(s.run(max_n)?);
    }
    let out = match format {
        Format::Json => pretty(&serde_json::Value::Array(reports.iter().map(suite_json).collect())),
        _ => {
            let mut out = String::new();
            for r in &reports {
                match &r.failure {
                    None => writeln!(out, "{}: PASS ({} checks, max_n = {})", r.suite, r.checks, r.max_n),
                    Some(f) => writeln!(out, "{}: FAIL after {} checks: {f}", r.suite, r.checks),
                }
                .expect("writing to a String");
            }
            out
        }
    };
    if reports.iter().all(SuiteReport::passed) {
        Ok(out)
    } else {
        Err(Failure::Verification(out))
    }
}

fn scan_report(name: &str, r: &ScanReport, format: Format) -> Job {
    let out = match format {
        Format::Json => pretty(&json!({
            "check": name,
            "max_n": r.max_n,
            "checked": r.checked,
            "failures": r.failures,
        })),
        _ => match r.failures.first() {
            None => format!("{name}: PASS ({} values of n up to {})\n", r.checked, r.max_n),
            Some((n, j)) => format!("{name}: FAIL at n = {n}, index {j}\n"),
        },
    };
    if r.passed() {
        Ok(out)
    } else {
        Err(Failure::Verification(out))
    }
}

pub fn scan(check: Check, g: &str, h: &str, max_n: usize, format: Format) -> Job {
    no_csv(format, "scan")?;
    if max_n < 1 {
        return usage("--max-n must be at least 1");
    }
    match check {
        Check::Lehmer => {
            let r = lehmer_scan(max_n)?;
            let values = r.values.iter().map(ToString::to_string).collect::<Vec<_>>();
            let mut out = match format {
                Format::Json => pretty(&json!(values)),
                _ => values
                    .iter()
                    .enumerate()
                    .map(|(i, v)| format!("{} {v}\n", i + 1))
                    .collect(),
            };
            if let Some(n) = r.zeros.first() {
                writeln!(out, "FAIL: value vanishes at n = {n}").expect("writing to a String");
            } else if let Some(n) = r.eta_mismatch {
                writeln!(out, "FAIL: product expansion differs at n = {n}").expect("writing to a String");
            }
            if r.passed() {
                Ok(out)
            } else {
                Err(Failure::Verification(out))
            }
        }
        Check::NoLogconcave => scan_report("no-logconcave", &logconcavity_scan_no(max_n)?, format),
        Check::NoCorollary => {
            if max_n < 2 {
                return usage("no-corollary needs --max-n >= 2");
            }
            scan_report("no-corollary", &no_corollary_check(max_n)?, format)
        }
        Check::Delta => delta_scan(&parse_fn(g)?, &parse_fn(h)?, max_n, format),
        Check::Transfer => {
            let g = parse_fn(g)?;
            let r = transfer_check(&g, max_n)?;
            let out = match format {
                Format::Json => pretty(&json!({
                    "g": r.g,
                    "rows": r.rows.iter().map(|t| json!({
                        "n": t.n,
                        "premise_log_concave": t.premise_log_concave,
                        "conclusion_log_concave": t.conclusion_log_concave,
                        "premise_ultra": t.premise_ultra,
                        "conclusion_ultra": t.conclusion_ultra,
                    })).collect::<Vec<_>>(),
                })),
                _ => match r.first_failure() {
                    None => format!("transfer: PASS for g = {} up to n = {max_n}\n", r.g),
                    Some(t) => format!("transfer: FAIL at n = {}: {t:?}\n", t.n),
                },
            };
            if r.holds() {
                Ok(out)
            } else {
                Err(Failure::Verification(out))
            }
        }
        Check::Counterexample => {
            let h = parse_fn(h)?;
            match find_delta_counterexample(&h, max_n, 40)? {
                Some(c) => Ok(match format {
                    Format::Json => pretty(&serde_json::to_value(&c).expect("plain struct serializes")),
                    _ => format!(
                        "g = [1, 1, {}, 1, ...] (length {}), h = {}: delta({}) = {}\n",
                        c.spike, c.table_len, c.h, c.n, c.delta
                    ),
                }),
                None => Err(Failure::Verification(format!(
                    "counterexample: none found for h = {h} with n <= {max_n}\n"
                ))),
            }
        }
    }
}

/// Fails when delta(n) drops below its lower bound.
fn delta_scan(g: &ArithmeticFunction, h: &ArithmeticFunction, max_n: usize, format: Format) -> Job {
    if max_n < 2 {
        return usage("delta needs --max-n >= 2");
    }
    let table = CoeffTable::build(g, h, max_n)?;
    let mut rows = Vec::new();
    let mut first_failure = None;
    for n in 2..=max_n {
        let d = delta_from_table(&table, n)?;
        let bound = delta_lower_bound(g, h, n)?;
        if d < bound && first_failure.is_none() {
            first_failure = Some(n);
        }
        rows.push((n, d, bound));
    }
    let mut out = match format {
        Format::Json => pretty(&json!(rows
            .iter()
            .map(|(n, d, b)| json!({ "n": n, "delta": d.to_string(), "bound": b.to_string() }))
            .collect::<Vec<_>>())),
        _ => {
            let mut s = String::new();
            for (n, d, b) in &rows {
                writeln!(s, "{n} {d} {b}").expect("writing to a String");
            }
            s
        }
    };
    match first_failure {
        None => Ok(out),
        Some(n) => {
            writeln!(out, "FAIL: delta({n}) below its lower bound").expect("writing to a String");
            Err(Failure::Verification(out))
        }
    }
}

pub fn export(g: &str, h: &str, max_n: usize, format: Format) -> Job {
    let table = CoeffTable::build(&parse_fn(g)?, &parse_fn(h)?, max_n)?;
    Ok(match format {
        Format::Json => {
            let mut s = table_to_json(&table);
            s.push('\n');
            s
        }
        Format::Csv => table_to_csv(&table),
        Format::Text => {
            let mut s = String::new();
            for (n, row) in table.rows().iter().enumerate() {
                writeln!(s, "{n}: {}", rational_strings(row).join(" ")).expect("writing to a String");
            }
            s
        }
    })
}
