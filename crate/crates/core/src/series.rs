//! Generating-function and hook-length oracles.
//!
//! Nothing here calls into the recursion engine except
//! [`closed_family_check`], whose purpose is to compare engine output with
//! closed forms. Every other function produces its answer by independent
//! series arithmetic or by summing over partitions.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::arith::ArithmeticFunction;
use crate::engine::{pn_sequence, CoeffTable};
use crate::error::{Error, Result};
use crate::exact::{rat, ratio, Poly, Rational, Series};
use crate::partition::{binomial, factorial, hook_multiset, partitions_of, stirling_first_triangle};

/// `sum_n P_n^{g,id}(x) q^n = exp(x sum_n g(n) q^n / n)`.
pub fn gen_series_h_id(g: &ArithmeticFunction, order: usize) -> Result<Series<Poly>> {
    let gv = g.values(order)?;
    let mut inner = vec![Poly::zero()];
    for (n, v) in gv.iter().enumerate().skip(1) {
        inner.push(Poly::monomial(v / rat(n as i64), 1));
    }
    Series::new(inner, order).exp()
}

/// `sum_n P_n^{g,1}(x) q^n = 1 / (1 - x sum_n g(n) q^n)`.
pub fn gen_series_h_one(g: &ArithmeticFunction, order: usize) -> Result<Series<Poly>> {
    let gv = g.values(order)?;
    let mut denom = vec![Poly::one()];
    for v in gv.iter().skip(1) {
        denom.push(Poly::monomial(-v, 1));
    }
    Series::new(denom, order).inverse()
}

/// `prod_{n>=1} (1 - q^n)^r` for an integer `r`, truncated at `q^order`.
pub fn eta_power_int(r: i64, order: usize) -> Vec<BigInt> {
    let mut c = vec![BigInt::zero(); order + 1];
    c[0] = BigInt::one();
    for n in 1..=order {
        if r >= 0 {
            for _ in 0..r {
                // multiply by (1 - q^n)
                for i in (n..=order).rev() {
                    let t = c[i - n].clone();
                    c[i] -= t;
                }
            }
        } else {
            for _ in 0..(-r) {
                // divide by (1 - q^n)
                for i in n..=order {
                    let t = c[i - n].clone();
                    c[i] += t;
                }
            }
        }
    }
    c
}

/// `prod_{n>=1} (1 - q^n)^r` with the exponent kept as the polynomial
/// variable: coefficient `q^n` is `p_r(n)` as a polynomial in `r`.
#[derive(Clone, Debug, PartialEq)]
pub struct EtaPowerExpansion {
    series: Series<Poly>,
}

impl EtaPowerExpansion {
    pub fn order(&self) -> usize {
        self.series.order()
    }

    /// `p_r(n)` as a polynomial in `r`.
    pub fn coeff(&self, n: usize) -> &Poly {
        self.series.coeff(n)
    }

    /// Specialize the exponent.
    pub fn at(&self, r: &Rational) -> Vec<Rational> {
        self.series.eval_coeffs(r).into_coeffs()
    }

    pub fn series(&self) -> &Series<Poly> {
        &self.series
    }
}

/// Generalized binomial `C(r, j) = r (r-1) ... (r-j+1) / j!` as a polynomial in `r`.
fn binomial_poly(j: usize) -> Poly {
    let mut p = Poly::one();
    for i in 0..j {
        p = &p * &Poly::from_ints(&[-(i as i64), 1]);
    }
    p.scale(&Rational::new(BigInt::one(), factorial(j as u64)))
}

/// Expands every factor `(1 - q^n)^r = sum_j C(r, j) (-1)^j q^{nj}` and
/// multiplies them out.
pub fn eta_power_symbolic(order: usize) -> EtaPowerExpansion {
    let binoms: Vec<Poly> = (0..=order).map(binomial_poly).collect();
    let mut acc = Series::<Poly>::one(order);
    for n in 1..=order {
        let mut factor = vec![Poly::zero(); order + 1];
        for j in 0..=order / n {
            factor[n * j] = if j % 2 == 0 {
                binoms[j].clone()
            } else {
                -&binoms[j]
            };
        }
        acc = acc.mul(&Series::new(factor, order));
    }
    EtaPowerExpansion { series: acc }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EisensteinWeight {
    Four,
    Six,
}

impl EisensteinWeight {
    /// `(divisor power, leading constant)` in `E_k = 1 + c sum sigma_l(n) q^n`.
    fn shape(self) -> (u32, i64) {
        match self {
            EisensteinWeight::Four => (3, 240),
            EisensteinWeight::Six => (5, -504),
        }
    }
}

/// `q`-expansion coefficients `a_k(0..=order)` of `1/E_4` or `1/E_6`.
pub fn inverse_eisenstein(weight: EisensteinWeight, order: usize) -> Result<Vec<Rational>> {
    let (l, c) = weight.shape();
    let mut coeffs = vec![Rational::one()];
    for n in 1..=order {
        coeffs.push(Rational::from_integer(crate::arith::sigma(l, n as u64) * c));
    }
    Ok(Series::new(coeffs, order).inverse()?.into_coeffs())
}

/// `Q_n(x) = sum_{lambda |- n} prod_{h in hooks(lambda)} (1 + x/h^2)`.
#[derive(Clone, Debug, PartialEq)]
pub struct NOPolynomial {
    pub n: usize,
    pub poly: Poly,
}

impl NOPolynomial {
    /// `b_{n,m}`.
    pub fn b(&self, m: usize) -> Rational {
        self.poly.coeff(m)
    }

    /// `b_{n,0}, ..., b_{n,n}`.
    pub fn coefficients(&self) -> Vec<Rational> {
        self.poly.padded(self.n + 1)
    }
}

fn hook_product(lambda: &crate::partition::Partition) -> Poly {
    hook_multiset(lambda).iter().fold(Poly::one(), |acc, &h| {
        let inv_sq = ratio(1, (h * h) as i64);
        &acc * &Poly::new(vec![Rational::one(), inv_sq])
    })
}

/// Hook-length sum over all partitions of `n`.
pub fn nekrasov_okounkov(n: usize) -> NOPolynomial {
    let parts: Vec<_> = partitions_of(n).collect();
    let poly = parts
        .par_iter()
        .map(hook_product)
        .reduce(Poly::zero, |a, b| &a + &b);
    NOPolynomial { n, poly }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// `P_n^{1,1} = x (x+1)^{n-1}`.
    Pochhammer,
    /// `A^{1,id}_{n,m} = |s(n,m)|`.
    Stirling,
    /// `A^{id,id}_{n,m} = n!/m! C(n-1, m-1)`.
    Lah,
    /// `h(n) P_n - (2 h(n+1) + x) P_{n+1} + h(n+2) P_{n+2} = 0` for `g = id`.
    Chebyshev3Term,
    /// `H(n) P_n^{1,h} = prod_{k=0}^{n-1} (x + h(k))`.
    SymmetricProduct,
}

impl Family {
    pub const ALL: [Family; 5] = [
        Family::Pochhammer,
        Family::Stirling,
        Family::Lah,
        Family::Chebyshev3Term,
        Family::SymmetricProduct,
    ];

    /// Whether the check depends on the `h` argument.
    pub fn uses_h(self) -> bool {
        matches!(self, Family::Chebyshev3Term | Family::SymmetricProduct)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Pochhammer => "pochhammer",
            Family::Stirling => "stirling",
            Family::Lah => "lah",
            Family::Chebyshev3Term => "chebyshev3term",
            Family::SymmetricProduct => "symmetric_product",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FamilyFailure {
    pub n: usize,
    pub m: Option<usize>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FamilyReport {
    pub family: Family,
    pub h: String,
    pub max_n: usize,
    pub checked: usize,
    pub failure: Option<FamilyFailure>,
}

impl FamilyReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

/// Compares engine output with the closed form of `family` for `n <= max_n`.
/// `h` is only consulted by the families for which [`Family::uses_h`] holds.
pub fn closed_family_check(
    family: Family,
    h: &ArithmeticFunction,
    max_n: usize,
) -> Result<FamilyReport> {
    if max_n < 1 {
        return Err(Error::Range("closed family checks need max_n >= 1".into()));
    }
    let one = ArithmeticFunction::one();
    let id = ArithmeticFunction::id();
    let mut checked = 0;
    let mut failure = None;
    let mut fail = |n: usize, m: Option<usize>, detail: String| {
        if failure.is_none() {
            failure = Some(FamilyFailure { n, m, detail });
        }
    };
    match family {
        Family::Pochhammer => {
            let ps = pn_sequence(&one, &one, max_n)?;
            let x1 = Poly::from_ints(&[1, 1]);
            let mut expect = Poly::x();
            for (n, p) in ps.iter().enumerate().skip(1) {
                checked += 1;
                if *p != expect {
                    fail(n, None, format!("got {p}, expected {expect}"));
                }
                expect = &expect * &x1;
            }
        }
        Family::Stirling => {
            let t = CoeffTable::build(&one, &id, max_n)?;
            let s = stirling_first_triangle(max_n);
            for n in 1..=max_n {
                for m in 0..=n {
                    checked += 1;
                    let a = t.a(n, m)?;
                    if *a != Rational::from_integer(s[n][m].clone()) {
                        fail(n, Some(m), format!("A = {a}, |s| = {}", s[n][m]));
                    }
                }
            }
        }
        Family::Lah => {
            let t = CoeffTable::build(&id, &id, max_n)?;
            for n in 1..=max_n {
                for m in 1..=n {
                    checked += 1;
                    let lah = factorial(n as u64) / factorial(m as u64)
                        * binomial(n as i64 - 1, m as i64 - 1);
                    let a = t.a(n, m)?;
                    if *a != Rational::from_integer(lah.clone()) {
                        fail(n, Some(m), format!("A = {a}, Lah = {lah}"));
                    }
                }
            }
        }
        Family::Chebyshev3Term => {
            let ps = pn_sequence(&id, h, max_n)?;
            let hv = h.values(max_n)?;
            for n in 0..=max_n.saturating_sub(2) {
                checked += 1;
                let a = ps[n].scale(&hv[n]);
                let b = &Poly::new(vec![rat(2) * &hv[n + 1], Rational::one()]) * &ps[n + 1];
                let c = ps[n + 2].scale(&hv[n + 2]);
                let residual = &(&a - &b) + &c;
                if !residual.is_zero() {
                    fail(n, None, format!("residual {residual}"));
                }
            }
        }
        Family::SymmetricProduct => {
            let ps = pn_sequence(&one, h, max_n)?;
            let hv = h.values(max_n)?;
            let mut prod = Poly::one();
            let mut big_h = Rational::one();
            for (n, p) in ps.iter().enumerate().skip(1) {
                prod = &prod * &Poly::new(vec![hv[n - 1].clone(), Rational::one()]);
                big_h *= &hv[n];
                checked += 1;
                let lhs = p.scale(&big_h);
                if lhs != prod {
                    fail(n, None, format!("H(n) P_n = {lhs}, product = {prod}"));
                }
            }
        }
    }
    Ok(FamilyReport {
        family,
        h: h.name(),
        max_n,
        checked,
        failure,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::partition_count;

    #[test]
    fn h_id_series_examples() {
        let s = gen_series_h_id(&ArithmeticFunction::sigma(1), 4).unwrap();
        assert_eq!(s.coeff(0), &Poly::one());
        assert_eq!(s.coeff(2), &Poly::from_ints(&[0, 3, 1]).scale(&ratio(1, 2)));
        let one = gen_series_h_id(&ArithmeticFunction::one(), 8).unwrap();
        let mut rising = Poly::one();
        for n in 1..=8 {
            rising = &rising * &Poly::from_ints(&[n as i64 - 1, 1]);
            let expect = rising.scale(&Rational::new(BigInt::one(), factorial(n as u64)));
            assert_eq!(one.coeff(n), &expect);
        }
    }

    #[test]
    fn h_one_series_examples() {
        let s3 = gen_series_h_one(&ArithmeticFunction::sigma(3), 3).unwrap();
        assert_eq!(s3.coeff(1).eval(&rat(-240)), rat(-240));
        let s5 = gen_series_h_one(&ArithmeticFunction::sigma(5), 3).unwrap();
        assert_eq!(s5.coeff(1).eval(&rat(504)), rat(504));
        let one = gen_series_h_one(&ArithmeticFunction::one(), 8).unwrap();
        let x1 = Poly::from_ints(&[1, 1]);
        let mut expect = Poly::x();
        for n in 1..=8 {
            assert_eq!(one.coeff(n), &expect);
            expect = &expect * &x1;
        }
    }

    #[test]
    fn eta_examples() {
        let p1 = eta_power_int(1, 10);
        assert_eq!(&p1[..4], &[1, -1, -1, 0].map(BigInt::from));
        let pm1 = eta_power_int(-1, 30);
        for (n, v) in pm1.iter().enumerate() {
            assert_eq!(*v, partition_count(n));
        }
        let p24 = eta_power_int(24, 3);
        assert_eq!(p24[1], BigInt::from(-24));
        assert_eq!(p24[2], BigInt::from(252));
        assert_eq!(p24[3], BigInt::from(-1472));
        assert_eq!(eta_power_int(0, 5), [1, 0, 0, 0, 0, 0].map(BigInt::from));
    }

    #[test]
    fn symbolic_eta_specializes() {
        let sym = eta_power_symbolic(12);
        assert!(sym.coeff(0).is_one());
        for r in [-3i64, -1, 0, 1, 2, 5, 24] {
            let at = sym.at(&rat(r));
            let direct = eta_power_int(r, 12);
            for n in 0..=12 {
                assert_eq!(at[n], Rational::from_integer(direct[n].clone()), "r={r} n={n}");
            }
        }
        for n in 0..=12 {
            assert_eq!(sym.coeff(n).degree(), Some(n));
        }
    }

    #[test]
    fn eisenstein_examples() {
        let a4 = inverse_eisenstein(EisensteinWeight::Four, 4).unwrap();
        assert_eq!(a4[0], rat(1));
        assert_eq!(a4[1], rat(-240));
        // 240^2 - 240*9
        assert_eq!(a4[2], rat(240 * 240 - 240 * 9));
        let a6 = inverse_eisenstein(EisensteinWeight::Six, 4).unwrap();
        assert_eq!(a6[1], rat(504));
        assert_eq!(a6[2], rat(504 * (504 + 33)));
        assert_eq!(a6[2], rat(270648));
    }

    #[test]
    fn hook_sum_examples() {
        assert_eq!(nekrasov_okounkov(0).poly, Poly::one());
        assert_eq!(nekrasov_okounkov(1).poly, Poly::from_ints(&[1, 1]));
        assert_eq!(
            nekrasov_okounkov(2).poly,
            Poly::new(vec![rat(2), ratio(5, 2), ratio(1, 2)])
        );
        for n in 0..=12 {
            let q = nekrasov_okounkov(n);
            assert_eq!(q.poly.eval(&rat(0)), Rational::from_integer(partition_count(n)));
            assert_eq!(q.poly.degree(), Some(n));
            assert!(q.coefficients().iter().all(|b| *b > rat(0)));
        }
    }

    #[test]
    fn families_pass() {
        for family in Family::ALL {
            for h in [ArithmeticFunction::one(), ArithmeticFunction::id(), ArithmeticFunction::sigma(1)] {
                let r = closed_family_check(family, &h, 10).unwrap();
                assert!(r.passed(), "{family} {h}: {:?}", r.failure);
                assert!(r.checked > 0);
            }
        }
    }

    #[test]
    fn chebyshev_small_instance() {
        // g = id, h = 1: P_2 = x^2 + 2x and 0*P_0 - (x + 2) P_1 + P_2 = 0
        let ps = pn_sequence(&ArithmeticFunction::id(), &ArithmeticFunction::one(), 2).unwrap();
        assert_eq!(ps[2], Poly::from_ints(&[0, 2, 1]));
        let r = &ps[2] - &(&Poly::from_ints(&[2, 1]) * &ps[1]);
        assert!(r.is_zero());
    }

    #[test]
    fn symmetric_product_h_id_n3() {
        let p3 = crate::engine::pn(&ArithmeticFunction::one(), &ArithmeticFunction::id(), 3).unwrap();
        assert_eq!(p3.scale(&rat(6)), Poly::from_ints(&[0, 2, 3, 1]));
    }

    #[test]
    fn family_check_rejects_zero_bound() {
        assert!(closed_family_check(Family::Lah, &ArithmeticFunction::one(), 0).is_err());
    }
}
