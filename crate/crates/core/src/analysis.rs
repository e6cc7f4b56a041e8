//! Shape predicates for coefficient sequences and the scans built on them.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::ArithmeticFunction;
use crate::engine::{pn_values_at, CoeffTable};
use crate::error::{Error, Result};
use crate::exact::{rat, Rational};
use crate::partition::{binomial, factorial};
use crate::series::eta_power_int;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Shape {
    Unimodal,
    LogConcave,
    UltraLogConcave,
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Shape::Unimodal => "unimodal",
            Shape::LogConcave => "log-concave",
            Shape::UltraLogConcave => "ultra-log-concave",
        })
    }
}

/// Outcome of one predicate; `witness` is the first violating index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShapeReport {
    /// Degree context: the sequence has `n + 1` entries.
    pub n: usize,
    pub predicate: Shape,
    pub holds: bool,
    pub witness: Option<usize>,
}

impl ShapeReport {
    fn new(n: usize, predicate: Shape, witness: Option<usize>) -> Self {
        ShapeReport {
            n,
            predicate,
            holds: witness.is_none(),
            witness,
        }
    }
}

fn check_nonnegative(seq: &[Rational]) -> Result<()> {
    match seq.iter().position(Signed::is_negative) {
        Some(i) => Err(Error::NegativeEntry(i)),
        None => Ok(()),
    }
}

fn degree_of(seq: &[Rational]) -> usize {
    seq.len().saturating_sub(1)
}

/// `a_0 <= ... <= a_k >= ... >= a_n` for some `k`. The witness is the first
/// index that rises again after a descent.
pub fn is_unimodal(seq: &[Rational]) -> Result<ShapeReport> {
    check_nonnegative(seq)?;
    let mut descended = false;
    let mut witness = None;
    for j in 1..seq.len() {
        if seq[j] < seq[j - 1] {
            descended = true;
        } else if seq[j] > seq[j - 1] && descended {
            witness = Some(j);
            break;
        }
    }
    Ok(ShapeReport::new(degree_of(seq), Shape::Unimodal, witness))
}

fn first_log_concavity_failure(seq: &[Rational]) -> Option<usize> {
    (1..seq.len().saturating_sub(1)).find(|&j| &seq[j] * &seq[j] < &seq[j - 1] * &seq[j + 1])
}

/// `a_j^2 >= a_{j-1} a_{j+1}` for every interior `j`.
pub fn is_log_concave(seq: &[Rational]) -> Result<ShapeReport> {
    check_nonnegative(seq)?;
    Ok(ShapeReport::new(
        degree_of(seq),
        Shape::LogConcave,
        first_log_concavity_failure(seq),
    ))
}

/// Log-concavity of `a_k / C(n, k)` with `n = len - 1`.
pub fn is_ultra_log_concave(seq: &[Rational]) -> Result<ShapeReport> {
    check_nonnegative(seq)?;
    let n = degree_of(seq) as i64;
    let scaled: Vec<Rational> = seq
        .iter()
        .enumerate()
        .map(|(k, a)| a / Rational::from_integer(binomial(n, k as i64)))
        .collect();
    Ok(ShapeReport::new(
        degree_of(seq),
        Shape::UltraLogConcave,
        first_log_concavity_failure(&scaled),
    ))
}

/// All three predicates, strongest first.
pub fn classify(seq: &[Rational]) -> Result<[ShapeReport; 3]> {
    Ok([
        is_ultra_log_concave(seq)?,
        is_log_concave(seq)?,
        is_unimodal(seq)?,
    ])
}

/// Whether ultra-log-concave implies log-concave implies unimodal on `seq`.
/// Sequences with internal zeros are the known exception for the second
/// step, so only zero-free interiors are expected to satisfy it.
pub fn implication_chain_holds(seq: &[Rational]) -> Result<bool> {
    let [ulc, lc, uni] = classify(seq)?;
    Ok((!ulc.holds || lc.holds) && (!lc.holds || uni.holds))
}

/// One row of [`transfer_check`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransferRow {
    pub n: usize,
    pub premise_log_concave: bool,
    pub conclusion_log_concave: bool,
    pub premise_ultra: bool,
    pub conclusion_ultra: bool,
}

impl TransferRow {
    pub fn holds(&self) -> bool {
        (!self.premise_log_concave || self.conclusion_log_concave)
            && (!self.premise_ultra || self.conclusion_ultra)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransferReport {
    pub g: String,
    pub rows: Vec<TransferRow>,
}

impl TransferReport {
    pub fn holds(&self) -> bool {
        self.rows.iter().all(TransferRow::holds)
    }

    pub fn first_failure(&self) -> Option<&TransferRow> {
        self.rows.iter().find(|r| !r.holds())
    }
}

fn shape_flags(seq: &[Rational]) -> (bool, bool) {
    match (is_log_concave(seq), is_ultra_log_concave(seq)) {
        (Ok(lc), Ok(ulc)) => (lc.holds, ulc.holds),
        // a negative coefficient makes the predicates inapplicable
        _ => (false, false),
    }
}

/// For `n <= max_n`: whenever `P_n^{g~,1}` is (ultra-)log-concave, so is
/// `P_n^{g,id}`.
pub fn transfer_check(g: &ArithmeticFunction, max_n: usize) -> Result<TransferReport> {
    let premise = CoeffTable::build(&g.tilde(), &ArithmeticFunction::one(), max_n)?;
    let conclusion = CoeffTable::build(g, &ArithmeticFunction::id(), max_n)?;
    let rows = (1..=max_n)
        .map(|n| {
            let (plc, pulc) = shape_flags(premise.row(n));
            let (clc, culc) = shape_flags(conclusion.row(n));
            TransferRow {
                n,
                premise_log_concave: plc,
                conclusion_log_concave: clc,
                premise_ultra: pulc,
                conclusion_ultra: culc,
            }
        })
        .collect();
    Ok(TransferReport { g: g.name(), rows })
}

/// `A_{n,n-1}^2 - A_{n,n-2} A_{n,n}`, which is `H(n)^2 (a_{n,n-1}^2 - a_{n,n-2} a_{n,n})`.
pub fn delta_from_table(table: &CoeffTable, n: usize) -> Result<Rational> {
    if n < 2 {
        return Err(Error::Range(format!("delta needs n >= 2, got {n}")));
    }
    let top = table.a(n, n)?;
    let below = table.a(n, n - 1)?;
    let below2 = table.a(n, n - 2)?;
    Ok(below * below - below2 * top)
}

pub fn delta_n(g: &ArithmeticFunction, h: &ArithmeticFunction, n: usize) -> Result<Rational> {
    if n < 2 {
        return Err(Error::Range(format!("delta needs n >= 2, got {n}")));
    }
    delta_from_table(&CoeffTable::build(g, h, n)?, n)
}

/// `(g(2)^2 - g(3)) * sum_{k=2}^{n-1} h(k) h(k-1)`, a lower bound for
/// [`delta_n`] when `g` and `h` take positive values.
pub fn delta_lower_bound(g: &ArithmeticFunction, h: &ArithmeticFunction, n: usize) -> Result<Rational> {
    let g2 = g.value(2)?;
    let g3 = g.value(3)?;
    let hv = h.values(n)?;
    let sum: Rational = (2..n).map(|k| &hv[k] * &hv[k - 1]).sum();
    Ok((&g2 * &g2 - g3) * sum)
}

/// A table-defined `g` for which [`delta_n`] goes negative.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaCounterexample {
    pub h: String,
    /// `g(3)`; every other table value is 1.
    pub spike: String,
    pub table_len: usize,
    pub n: usize,
    pub delta: String,
}

impl DeltaCounterexample {
    /// The `g` table `[1, 1, spike, 1, 1, ...]` of length `table_len`.
    pub fn g(&self) -> Result<ArithmeticFunction> {
        let spike = crate::arith::parse_rational(&self.spike)
            .ok_or_else(|| Error::Table(format!("bad spike {}", self.spike)))?;
        ArithmeticFunction::from_table(spike_table(spike, self.table_len))
    }
}

fn spike_table(spike: Rational, len: usize) -> Vec<Rational> {
    let mut v = vec![Rational::one(); len.max(3)];
    v[2] = spike;
    v
}

/// Doubles `g(3)` starting from 1 in `g = [1, 1, g(3), 1, 1, ...]` until
/// `delta_n < 0` for some `2 <= n <= max_n`; gives up after `max_doublings`.
pub fn find_delta_counterexample(
    h: &ArithmeticFunction,
    max_n: usize,
    max_doublings: u32,
) -> Result<Option<DeltaCounterexample>> {
    let mut spike = Rational::one();
    for _ in 0..=max_doublings {
        let g = ArithmeticFunction::from_table(spike_table(spike.clone(), max_n))?;
        let table = CoeffTable::build(&g, h, max_n)?;
        for n in 2..=max_n {
            let delta = delta_from_table(&table, n)?;
            if delta.is_negative() {
                return Ok(Some(DeltaCounterexample {
                    h: h.name(),
                    spike: spike.to_string(),
                    table_len: max_n,
                    n,
                    delta: delta.to_string(),
                }));
            }
        }
        spike *= rat(2);
    }
    Ok(None)
}

/// `n! Q_n(x)` for `n <= max_n` as integer coefficient rows, computed as
/// `A^{sigma,id}_n(x + 1)` from the coefficient table. Row `n` divided by
/// `n!` gives `b_{n,0}, ..., b_{n,n}`.
pub fn no_rows_via_darcais(max_n: usize) -> Result<Vec<Vec<BigInt>>> {
    let table = CoeffTable::build(&ArithmeticFunction::sigma(1), &ArithmeticFunction::id(), max_n)?;
    Ok(table
        .rows()
        .par_iter()
        .map(|row| {
            let mut c: Vec<BigInt> = row.iter().map(|a| a.to_integer()).collect();
            let len = c.len();
            for i in 0..len {
                for j in (i..len - 1).rev() {
                    let t = c[j + 1].clone();
                    c[j] += t;
                }
            }
            c
        })
        .collect())
}

/// `b_{n,0}, ..., b_{n,n}` for every `n <= max_n`.
pub fn no_coefficients(max_n: usize) -> Result<Vec<Vec<Rational>>> {
    Ok(no_rows_via_darcais(max_n)?
        .into_iter()
        .enumerate()
        .map(|(n, row)| {
            let f = factorial(n as u64);
            row.into_iter().map(|c| Rational::new(c, f.clone())).collect()
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanReport {
    pub max_n: usize,
    pub checked: usize,
    /// `(n, witness index)` for each failing row.
    pub failures: Vec<(usize, usize)>,
}

impl ScanReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// `b_{n,n-1}^2 > b_{n,n-2} b_{n,n}` strictly, for `2 <= n <= max_n`.
pub fn no_corollary_check(max_n: usize) -> Result<ScanReport> {
    if max_n < 2 {
        return Err(Error::Range("corollary scan needs max_n >= 2".into()));
    }
    let rows = no_rows_via_darcais(max_n)?;
    let failures = (2..=max_n)
        .filter(|&n| {
            let r = &rows[n];
            &r[n - 1] * &r[n - 1] <= &r[n - 2] * &r[n]
        })
        .map(|n| (n, n - 1))
        .collect();
    Ok(ScanReport {
        max_n,
        checked: max_n - 1,
        failures,
    })
}

/// Log-concavity of every `Q_n`, `1 <= n <= max_n`.
pub fn logconcavity_scan_no(max_n: usize) -> Result<ScanReport> {
    if max_n < 1 {
        return Err(Error::Range("scan needs max_n >= 1".into()));
    }
    let rows = no_rows_via_darcais(max_n)?;
    let mut failures: Vec<(usize, usize)> = rows
        .par_iter()
        .enumerate()
        .skip(1)
        .filter_map(|(n, r)| {
            (1..r.len() - 1)
                .find(|&j| &r[j] * &r[j] < &r[j - 1] * &r[j + 1])
                .map(|j| (n, j))
        })
        .collect();
    failures.sort_unstable();
    Ok(ScanReport {
        max_n,
        checked: max_n,
        failures,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LehmerReport {
    /// `P_n^{sigma,id}(-24)` for `n = 1..=max_n`.
    pub values: Vec<BigInt>,
    pub zeros: Vec<usize>,
    /// First `n` where the value and the `q`-expansion of `prod (1-q^n)^24` differ.
    pub eta_mismatch: Option<usize>,
}

impl LehmerReport {
    pub fn passed(&self) -> bool {
        self.zeros.is_empty() && self.eta_mismatch.is_none()
    }
}

/// Evaluates `P_n^{sigma,id}(-24)` for `1 <= n <= max_n`, records zeros, and
/// compares against the product expansion.
pub fn lehmer_scan(max_n: usize) -> Result<LehmerReport> {
    if max_n < 1 {
        return Err(Error::Range("lehmer scan needs max_n >= 1".into()));
    }
    let vals = pn_values_at(
        &ArithmeticFunction::sigma(1),
        &ArithmeticFunction::id(),
        &rat(-24),
        max_n,
    )?;
    let eta = eta_power_int(24, max_n);
    let mut values = Vec::with_capacity(max_n);
    let mut zeros = Vec::new();
    let mut eta_mismatch = None;
    for n in 1..=max_n {
        let v = &vals[n];
        if v.is_zero() {
            zeros.push(n);
        }
        if eta_mismatch.is_none() && (!v.is_integer() || v.to_integer() != eta[n]) {
            eta_mismatch = Some(n);
        }
        values.push(v.to_integer());
    }
    Ok(LehmerReport {
        values,
        zeros,
        eta_mismatch,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ratio;
    use crate::series::nekrasov_okounkov;

    fn seq(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn shape_counterexample_polynomials() {
        // x^2 + 2x + 5
        let a = seq(&[5, 2, 1]);
        assert!(is_unimodal(&a).unwrap().holds);
        let lc = is_log_concave(&a).unwrap();
        assert!(!lc.holds);
        assert_eq!(lc.witness, Some(1));
        // x^2 + 2x + 3
        let b = seq(&[3, 2, 1]);
        assert!(is_log_concave(&b).unwrap().holds);
        let ulc = is_ultra_log_concave(&b).unwrap();
        assert!(!ulc.holds);
        assert_eq!(ulc.witness, Some(1));
        assert!(is_log_concave(&seq(&[1, 1, 1, 1, 1])).unwrap().holds);
    }

    #[test]
    fn predicates_edge_cases() {
        assert!(is_unimodal(&[]).unwrap().holds);
        assert!(is_log_concave(&seq(&[7])).unwrap().holds);
        assert!(is_ultra_log_concave(&seq(&[2, 3])).unwrap().holds);
        let r = is_unimodal(&seq(&[1, 3, 2, 4])).unwrap();
        assert_eq!(r.witness, Some(3));
        assert!(!r.holds);
        assert!(matches!(is_log_concave(&seq(&[1, -1, 1])), Err(Error::NegativeEntry(1))));
        assert!(is_ultra_log_concave(&seq(&[1, 2, 1])).unwrap().holds);
    }

    #[test]
    fn transfer_examples() {
        for g in [ArithmeticFunction::id(), ArithmeticFunction::one(), ArithmeticFunction::sigma(1)] {
            let r = transfer_check(&g, 15).unwrap();
            assert!(r.holds(), "g={g}: {:?}", r.first_failure());
            assert_eq!(r.rows.len(), 15);
        }
        // id is ultra-log-concave on both sides (Lah numbers)
        let r = transfer_check(&ArithmeticFunction::id(), 10).unwrap();
        assert!(r.rows.iter().all(|row| row.premise_ultra && row.conclusion_ultra));
    }

    #[test]
    fn delta_examples() {
        let s = ArithmeticFunction::sigma(1);
        assert_eq!(delta_n(&s, &ArithmeticFunction::id(), 2).unwrap(), rat(9));
        let one = ArithmeticFunction::one();
        assert_eq!(delta_n(&one, &one, 3).unwrap(), rat(3));
        assert!(delta_n(&s, &one, 1).is_err());
        for h in [ArithmeticFunction::one(), ArithmeticFunction::id()] {
            for n in 2..=20 {
                let d = delta_n(&s, &h, n).unwrap();
                assert!(d > rat(0));
                assert!(d >= delta_lower_bound(&s, &h, n).unwrap());
            }
        }
    }

    #[test]
    fn counterexample_search_finds_witness() {
        for h in [ArithmeticFunction::one(), ArithmeticFunction::id()] {
            let w = find_delta_counterexample(&h, 20, 20).unwrap().expect("witness");
            let g = w.g().unwrap();
            let d = delta_n(&g, &h, w.n).unwrap();
            assert!(d < rat(0));
            assert_eq!(d.to_string(), w.delta);
        }
    }

    #[test]
    fn no_rows_match_hook_sums() {
        let coeffs = no_coefficients(10).unwrap();
        for (n, row) in coeffs.iter().enumerate() {
            assert_eq!(*row, nekrasov_okounkov(n).coefficients(), "n={n}");
        }
        assert_eq!(coeffs[2], vec![rat(2), ratio(5, 2), ratio(1, 2)]);
    }

    #[test]
    fn no_scans_small() {
        let c = no_corollary_check(20).unwrap();
        assert!(c.passed());
        assert_eq!(c.checked, 19);
        let l = logconcavity_scan_no(30).unwrap();
        assert!(l.passed(), "{:?}", l.failures);
        assert!(no_corollary_check(1).is_err());
    }

    #[test]
    fn lehmer_small() {
        let r = lehmer_scan(10).unwrap();
        assert!(r.passed());
        assert_eq!(r.values[0], BigInt::from(-24));
        assert_eq!(r.values[1], BigInt::from(252));
        assert_eq!(r.values.len(), 10);
        assert!(lehmer_scan(0).is_err());
    }

    #[test]
    fn implication_chain_on_examples() {
        for s in [seq(&[5, 2, 1]), seq(&[3, 2, 1]), seq(&[1, 4, 6, 4, 1]), seq(&[0, 1, 3, 1])] {
            assert!(implication_chain_holds(&s).unwrap());
        }
    }
}
