//! Named verification suites. Each suite stops at its first counterexample.

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;

use crate::analysis::{
    delta_lower_bound, delta_n, find_delta_counterexample, logconcavity_scan_no,
    no_corollary_check, transfer_check,
};
use crate::arith::ArithmeticFunction;
use crate::engine::{pn_sequence, CoeffTable};
use crate::error::{Error, Result};
use crate::exact::{rat, Rational};
use crate::formulas::{
    conversion_check, h_weight_closed_id, h_weight_closed_one, thm1_coeff, thm2_coeff, HWeights,
    MainTheorem,
};
use crate::partition::compositions_of;
use crate::series::{
    closed_family_check, eta_power_int, eta_power_symbolic, gen_series_h_id, gen_series_h_one,
    inverse_eisenstein, nekrasov_okounkov, EisensteinWeight, Family,
};

/// The five builtin functions `one, id, sigma_1, sigma_3, sigma_5`.
pub fn builtin_functions() -> Vec<ArithmeticFunction> {
    vec![
        ArithmeticFunction::one(),
        ArithmeticFunction::id(),
        ArithmeticFunction::sigma(1),
        ArithmeticFunction::sigma(3),
        ArithmeticFunction::sigma(5),
    ]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Oracles,
    ClosedForms,
    Conversion,
    NoFormula,
    MainTheorem,
    Shapes,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Oracles,
        Suite::ClosedForms,
        Suite::Conversion,
        Suite::NoFormula,
        Suite::MainTheorem,
        Suite::Shapes,
    ];

    pub fn default_max_n(self) -> usize {
        match self {
            Suite::Oracles => 20,
            Suite::ClosedForms => 20,
            Suite::Conversion => 15,
            Suite::NoFormula => 12,
            Suite::MainTheorem => 12,
            Suite::Shapes => 50,
        }
    }

    pub fn run(self, max_n: Option<usize>) -> Result<SuiteReport> {
        let n = max_n.unwrap_or_else(|| self.default_max_n());
        if n < 2 {
            return Err(Error::Range("suites need max_n >= 2".into()));
        }
        let mut r = SuiteReport::new(self, n);
        match self {
            Suite::Oracles => oracles(n, &mut r)?,
            Suite::ClosedForms => closed_forms(n, &mut r)?,
            Suite::Conversion => conversion(n, &mut r)?,
            Suite::NoFormula => no_formula(n, &mut r)?,
            Suite::MainTheorem => main_theorem(n, &mut r)?,
            Suite::Shapes => shapes(n, &mut r)?,
        }
        Ok(r)
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Oracles => "oracles",
            Suite::ClosedForms => "closed-forms",
            Suite::Conversion => "conversion",
            Suite::NoFormula => "no-formula",
            Suite::MainTheorem => "main-theorem",
            Suite::Shapes => "shapes",
        })
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.to_string() == s)
            .ok_or_else(|| Error::Range(format!("unknown suite `{s}`")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteReport {
    pub suite: Suite,
    pub max_n: usize,
    pub checks: usize,
    pub failure: Option<String>,
}

impl SuiteReport {
    fn new(suite: Suite, max_n: usize) -> Self {
        SuiteReport {
            suite,
            max_n,
            checks: 0,
            failure: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }

    /// Counts one check; records the first failure and returns whether to go on.
    fn check(&mut self, ok: bool, detail: impl FnOnce() -> String) -> bool {
        self.checks += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(detail());
        }
        self.failure.is_none()
    }
}

macro_rules! check_or_return {
    ($report:expr, $ok:expr, $($fmt:tt)+) => {
        if !$report.check($ok, || format!($($fmt)+)) {
            return Ok(());
        }
    };
}

fn oracles(max_n: usize, r: &mut SuiteReport) -> Result<()> {
    let id = ArithmeticFunction::id();
    let one = ArithmeticFunction::one();
    for g in builtin_functions() {
        let ps_id = pn_sequence(&g, &id, max_n)?;
        let ps_one = pn_sequence(&g, &one, max_n)?;
        let s_id = gen_series_h_id(&g, max_n)?;
        let s_one = gen_series_h_one(&g, max_n)?;
        for n in 0..=max_n {
            check_or_return!(r, s_id.coeff(n) == &ps_id[n], "exp series, g={g}, n={n}");
            check_or_return!(r, s_one.coeff(n) == &ps_one[n], "geometric series, g={g}, n={n}");
        }
    }
    let sigma = ArithmeticFunction::sigma(1);
    let darcais = pn_sequence(&sigma, &id, max_n)?;
    let sym = eta_power_symbolic(max_n);
    for (n, p) in darcais.iter().enumerate() {
        check_or_return!(r, *sym.coeff(n) == p.negate_variable(), "symbolic eta power, n={n}");
    }
    for rr in [-2i64, -1, 1, 3, 24] {
        let eta = eta_power_int(rr, max_n);
        for (n, p) in darcais.iter().enumerate() {
            check_or_return!(
                r,
                Rational::from_integer(eta[n].clone()) == p.eval(&rat(-rr)),
                "p_{rr}({n}) vs P_n(-{rr})"
            );
        }
    }
    for (weight, l, x0) in [(EisensteinWeight::Four, 3, -240), (EisensteinWeight::Six, 5, 504)] {
        let a = inverse_eisenstein(weight, max_n)?;
        let ps = pn_sequence(&ArithmeticFunction::sigma(l), &one, max_n)?;
        for n in 0..=max_n {
            check_or_return!(r, a[n] == ps[n].eval(&rat(x0)), "1/E series, sigma_{l}, n={n}");
        }
    }
    Ok(())
}

fn closed_forms(max_n: usize, r: &mut SuiteReport) -> Result<()> {
    let id = ArithmeticFunction::id();
    let one = ArithmeticFunction::one();
    for g in builtin_functions() {
        let t1 = CoeffTable::build(&g, &one, max_n)?;
        let ti = CoeffTable::build(&g, &id, max_n)?;
        for n in 2..=max_n {
            for m in 1..n {
                check_or_return!(r, &thm1_coeff(&g, n, m)? == t1.a(n, m)?, "h=1 theorem, g={g}, n={n}, m={m}");
                check_or_return!(r, &thm2_coeff(&g, n, m)? == ti.a(n, m)?, "h=id theorem, g={g}, n={n}, m={m}");
            }
        }
    }
    let bound = max_n.min(14);
    let mut w_one = HWeights::new(&one, max_n)?;
    let mut w_id = HWeights::new(&id, max_n)?;
    for size in 0..bound {
        for len in 0..=(bound - size) {
            for mu in compositions_of(size, len) {
                for n in 0..=max_n {
                    check_or_return!(
                        r,
                        w_one.h_weight(&mu, n)? == h_weight_closed_one(&mu, n),
                        "H closed form h=1, mu={mu}, n={n}"
                    );
                    check_or_return!(
                        r,
                        w_id.h_weight(&mu, n)? == h_weight_closed_id(&mu, n),
                        "H closed form h=id, mu={mu}, n={n}"
                    );
                }
            }
        }
    }
    for family in Family::ALL {
        let hs = if family.uses_h() {
            vec![one.clone(), id.clone(), ArithmeticFunction::sigma(1)]
        } else {
            vec![one.clone()]
        };
        for h in hs {
            let rep = closed_family_check(family, &h, max_n)?;
            check_or_return!(r, rep.passed(), "{family} with h={h}: {:?}", rep.failure);
        }
    }
    Ok(())
}

fn conversion(max_n: usize, r: &mut SuiteReport) -> Result<()> {
    for g in [
        ArithmeticFunction::one(),
        ArithmeticFunction::id(),
        ArithmeticFunction::sigma(1),
        ArithmeticFunction::sigma(3),
    ] {
        for n in 1..=max_n {
            for m in 1..=n {
                let c = conversion_check(&g, n, m)?;
                check_or_return!(r, c.holds, "g={g}, n={n}, m={m}: {} != {}", c.lhs, c.rhs);
            }
        }
    }
    Ok(())
}

fn no_formula(max_n: usize, r: &mut SuiteReport) -> Result<()> {
    let darcais = pn_sequence(&ArithmeticFunction::sigma(1), &ArithmeticFunction::id(), max_n)?;
    let counts = eta_power_int(-1, max_n);
    for (n, p) in darcais.iter().enumerate() {
        let q = nekrasov_okounkov(n);
        check_or_return!(r, q.poly == p.taylor_shift(&rat(1)), "Q_{n}(x) vs P_{n}(x+1)");
        check_or_return!(
            r,
            q.poly.eval(&Rational::zero()) == Rational::from_integer(counts[n].clone()),
            "Q_{n}(0) vs p({n})"
        );
    }
    Ok(())
}

fn main_theorem(max_n: usize, r: &mut SuiteReport) -> Result<()> {
    let hs = [
        ArithmeticFunction::one(),
        ArithmeticFunction::id(),
        ArithmeticFunction::sigma(1),
    ];
    for g in builtin_functions() {
        for h in &hs {
            let table = CoeffTable::build(&g, h, max_n)?;
            let ps = pn_sequence(&g, h, max_n)?;
            let mut mt = MainTheorem::new(&g, h, max_n)?;
            for n in 1..=max_n {
                check_or_return!(r, table.poly(n) == ps[n], "table vs recursion, g={g}, h={h}, n={n}");
                for m in 1..=n {
                    check_or_return!(
                        r,
                        &mt.coeff(n, m)? == table.a(n, m)?,
                        "main theorem, g={g}, h={h}, n={n}, m={m}"
                    );
                }
            }
        }
    }
    Ok(())
}

fn shapes(max_n: usize, r: &mut SuiteReport) -> Result<()> {
    let lc = logconcavity_scan_no(max_n)?;
    check_or_return!(r, lc.passed(), "Q_n not log-concave: {:?}", lc.failures);
    let cor = no_corollary_check(max_n)?;
    check_or_return!(r, cor.passed(), "top-coefficient inequality fails: {:?}", cor.failures);
    let sigma = ArithmeticFunction::sigma(1);
    for h in [ArithmeticFunction::one(), ArithmeticFunction::id()] {
        for n in 2..=max_n {
            let d = delta_n(&sigma, &h, n)?;
            check_or_return!(r, d > Rational::zero(), "delta({n}) = {d} for h={h}");
            let bound = delta_lower_bound(&sigma, &h, n)?;
            check_or_return!(r, d >= bound, "delta({n}) = {d} below {bound} for h={h}");
        }
        let witness = find_delta_counterexample(&h, max_n, 40)?;
        check_or_return!(r, witness.is_some(), "no negative delta found for h={h}");
    }
    for g in [ArithmeticFunction::one(), ArithmeticFunction::id(), sigma] {
        let t = transfer_check(&g, max_n.min(30))?;
        check_or_return!(r, t.holds(), "transfer fails for g={g}: {:?}", t.first_failure());
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.to_string().parse::<Suite>().unwrap(), s);
        }
        assert!("bogus".parse::<Suite>().is_err());
    }

    #[test]
    fn small_suites_pass() {
        for s in Suite::ALL {
            let rep = s.run(Some(6)).unwrap();
            assert!(rep.passed(), "{s}: {:?}", rep.failure);
            assert!(rep.checks > 0);
        }
    }
}
