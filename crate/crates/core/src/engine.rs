//! The polynomials `P_n^{g,h}(x)` by their defining recursion, and the
//! integer-normalized coefficient triangle `A_{n,m}` by the coefficient
//! recursion.
//!
//! `pn_sequence` and [`CoeffTable::build`] do not share code; each one checks
//! the other.

use std::ops::{AddAssign, Mul};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::{ArithmeticFunction, CumulativeProduct};
use crate::error::{Error, Result};
use crate::exact::{Poly, Rational};

fn check_inputs(g: &ArithmeticFunction, h: &ArithmeticFunction, n: usize) -> Result<()> {
    h.ensure_non_vanishing(n)?;
    if n >= 1 {
        g.value(n)?;
    }
    Ok(())
}

/// `[P_0, ..., P_n]` from `P_n = x/h(n) * sum_{k=1}^n g(k) P_{n-k}`.
pub fn pn_sequence(g: &ArithmeticFunction, h: &ArithmeticFunction, n: usize) -> Result<Vec<Poly>> {
    check_inputs(g, h, n)?;
    let gv = g.values(n)?;
    let hv = h.values(n)?;
    let mut polys = vec![Poly::one()];
    for j in 1..=n {
        let mut acc = Poly::zero();
        for k in 1..=j {
            if gv[k].is_zero() {
                continue;
            }
            acc = &acc + &polys[j - k].scale(&gv[k]);
        }
        polys.push(acc.shift_up(1).scale(&hv[j].recip()));
    }
    Ok(polys)
}

/// `P_n^{g,h}(x)`.
pub fn pn(g: &ArithmeticFunction, h: &ArithmeticFunction, n: usize) -> Result<Poly> {
    Ok(pn_sequence(g, h, n)?.pop().expect("sequence has n + 1 entries"))
}

/// `[P_0(x0), ..., P_n(x0)]` by running the recursion on scalars.
pub fn pn_values_at(
    g: &ArithmeticFunction,
    h: &ArithmeticFunction,
    x0: &Rational,
    n: usize,
) -> Result<Vec<Rational>> {
    check_inputs(g, h, n)?;
    let gv = g.values(n)?;
    let hv = h.values(n)?;
    let mut vals = vec![Rational::one()];
    for j in 1..=n {
        let mut acc = Rational::zero();
        for k in 1..=j {
            acc += &gv[k] * &vals[j - k];
        }
        vals.push(acc * x0 / &hv[j]);
    }
    Ok(vals)
}

/// Triangle `A_{n,m}^{g,h}` for `0 <= m <= n <= max_n`, with
/// `H(n) P_n(x) = sum_m A_{n,m} x^m`.
#[derive(Clone, Debug, PartialEq)]
pub struct CoeffTable {
    g_name: String,
    h_name: String,
    rows: Vec<Vec<Rational>>,
    normalizers: Vec<Rational>,
}

/// `A_{n,m} = sum_{k=1}^{n-m+1} g(k) H(n-1)/H(n-k) A_{n-k,m-1}`, with the
/// window ratio accumulated as a product so no division is needed.
fn lemma_rows<T>(gv: &[T], hv: &[T], max_n: usize) -> Vec<Vec<T>>
where
    T: Clone + Zero + One + AddAssign<T>,
    for<'a> &'a T: Mul<&'a T, Output = T>,
{
    let mut rows: Vec<Vec<T>> = vec![vec![T::one()]];
    for n in 1..=max_n {
        // weights[k] = g(k) * h(n-1) h(n-2) ... h(n-k+1)
        let mut weights: Vec<T> = Vec::with_capacity(n + 1);
        weights.push(T::zero());
        let mut window = T::one();
        for k in 1..=n {
            if k > 1 {
                window = &window * &hv[n - k + 1];
            }
            weights.push(&gv[k] * &window);
        }
        let mut row = vec![T::zero(); n + 1];
        for (m, slot) in row.iter_mut().enumerate().skip(1) {
            let mut acc = T::zero();
            for k in 1..=n - m + 1 {
                let prev = &rows[n - k][m - 1];
                if prev.is_zero() || weights[k].is_zero() {
                    continue;
                }
                acc += &weights[k] * prev;
            }
            *slot = acc;
        }
        rows.push(row);
    }
    rows
}

impl CoeffTable {
    /// Builds rows `0..=max_n`. Uses integer arithmetic throughout when both
    /// `g` and `h` are integer-valued.
    pub fn build(g: &ArithmeticFunction, h: &ArithmeticFunction, max_n: usize) -> Result<Self> {
        check_inputs(g, h, max_n)?;
        let cp = CumulativeProduct::new(h, max_n)?;
        let gv = g.values(max_n)?;
        let hv = h.values(max_n)?;
        let rows = if g.is_integer_valued() && h.is_integer_valued() {
            let gi: Vec<BigInt> = gv.iter().map(|v| v.to_integer()).collect();
            let hi: Vec<BigInt> = hv.iter().map(|v| v.to_integer()).collect();
            lemma_rows(&gi, &hi, max_n)
                .into_iter()
                .map(|row| row.into_iter().map(Rational::from_integer).collect())
                .collect()
        } else {
            lemma_rows(&gv, &hv, max_n)
        };
        Ok(CoeffTable {
            g_name: g.name(),
            h_name: h.name(),
            rows,
            normalizers: cp.as_slice().to_vec(),
        })
    }

    /// Assembles a table from raw parts, e.g. after deserialization.
    pub fn from_parts(
        g_name: String,
        h_name: String,
        rows: Vec<Vec<Rational>>,
        normalizers: Vec<Rational>,
    ) -> Result<Self> {
        if rows.len() != normalizers.len() || rows.is_empty() {
            return Err(Error::Table("row count and normalizer count differ".into()));
        }
        if let Some(n) = rows.iter().enumerate().position(|(n, r)| r.len() != n + 1) {
            return Err(Error::Table(format!("row {n} is not of length {}", n + 1)));
        }
        Ok(CoeffTable {
            g_name,
            h_name,
            rows,
            normalizers,
        })
    }

    pub fn g_name(&self) -> &str {
        &self.g_name
    }

    pub fn h_name(&self) -> &str {
        &self.h_name
    }

    pub fn max_n(&self) -> usize {
        self.rows.len() - 1
    }

    fn check(&self, n: usize, m: usize) -> Result<()> {
        if m > n || n > self.max_n() {
            return Err(Error::Range(format!(
                "need 0 <= m <= n <= {}, got n = {n}, m = {m}",
                self.max_n()
            )));
        }
        Ok(())
    }

    /// `A_{n,m}`.
    pub fn a(&self, n: usize, m: usize) -> Result<&Rational> {
        self.check(n, m)?;
        Ok(&self.rows[n][m])
    }

    /// `A_{n,0}, ..., A_{n,n}`.
    pub fn row(&self, n: usize) -> &[Rational] {
        &self.rows[n]
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    /// `H(n)`.
    pub fn normalizer(&self, n: usize) -> &Rational {
        &self.normalizers[n]
    }

    pub fn normalizers(&self) -> &[Rational] {
        &self.normalizers
    }

    /// `A_{n,m} / H(n)`, the literal coefficient of `x^m` in `P_n`.
    pub fn scaled_coeff(&self, n: usize, m: usize) -> Result<Rational> {
        self.check(n, m)?;
        Ok(&self.rows[n][m] / &self.normalizers[n])
    }

    /// `P_n` rebuilt from row `n`.
    pub fn poly(&self, n: usize) -> Poly {
        let inv = self.normalizers[n].recip();
        Poly::new(self.rows[n].iter().map(|a| a * &inv).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, ratio};
    use crate::partition::{binomial, factorial, stirling_first_unsigned};

    fn sigma() -> ArithmeticFunction {
        ArithmeticFunction::sigma(1)
    }

    #[test]
    fn pn_examples() {
        let p2 = pn(&sigma(), &ArithmeticFunction::id(), 2).unwrap();
        assert_eq!(p2, Poly::from_ints(&[0, 3, 1]).scale(&ratio(1, 2)));
        for (g, h) in [
            (sigma(), ArithmeticFunction::id()),
            (ArithmeticFunction::one(), ArithmeticFunction::sigma(3)),
            (ArithmeticFunction::sigma(1).tilde(), ArithmeticFunction::one()),
        ] {
            assert_eq!(pn(&g, &h, 1).unwrap(), Poly::x());
            assert_eq!(pn(&g, &h, 0).unwrap(), Poly::one());
        }
        let one = ArithmeticFunction::one();
        let x1 = Poly::from_ints(&[1, 1]);
        assert_eq!(pn(&one, &one, 3).unwrap(), &Poly::x() * &(&x1 * &x1));
    }

    #[test]
    fn vanishing_h_is_rejected() {
        let h = ArithmeticFunction::from_table(vec![rat(1), rat(0), rat(2)]).unwrap();
        assert!(matches!(pn(&sigma(), &h, 3), Err(Error::Vanishing { n: 2, .. })));
        assert!(matches!(CoeffTable::build(&sigma(), &h, 3), Err(Error::Vanishing { .. })));
        // only h(1..=n) matters
        assert!(pn(&sigma(), &h, 1).is_ok());
    }

    #[test]
    fn table_examples() {
        let t = CoeffTable::build(&sigma(), &ArithmeticFunction::id(), 5).unwrap();
        assert_eq!(t.a(2, 1).unwrap(), &rat(3));
        assert_eq!(t.scaled_coeff(2, 1).unwrap(), ratio(3, 2));
        for n in 0..=5 {
            assert_eq!(t.scaled_coeff(n, n).unwrap(), t.normalizer(n).recip());
        }
        assert!(t.a(6, 1).is_err());
        assert!(t.a(2, 3).is_err());
        let t1 = CoeffTable::build(&ArithmeticFunction::one(), &ArithmeticFunction::id(), 5).unwrap();
        assert_eq!(t1.a(3, 2).unwrap(), &rat(3));
        let tid = CoeffTable::build(&ArithmeticFunction::id(), &ArithmeticFunction::id(), 5).unwrap();
        assert_eq!(tid.a(3, 2).unwrap(), &rat(6));
        let t11 = CoeffTable::build(&ArithmeticFunction::one(), &ArithmeticFunction::one(), 5).unwrap();
        assert_eq!(t11.scaled_coeff(3, 2).unwrap(), rat(2));
    }

    #[test]
    fn table_matches_recursion() {
        let fns = [
            ArithmeticFunction::one(),
            ArithmeticFunction::id(),
            ArithmeticFunction::sigma(1),
            ArithmeticFunction::sigma(1).tilde(),
        ];
        for g in &fns {
            for h in &fns {
                let t = CoeffTable::build(g, h, 14).unwrap();
                let ps = pn_sequence(g, h, 14).unwrap();
                for (n, p) in ps.iter().enumerate() {
                    assert_eq!(&t.poly(n), p, "g={g} h={h} n={n}");
                    assert_eq!(p.degree(), Some(n));
                    if n >= 1 {
                        assert!(p.coeff(0).is_zero());
                    }
                    assert!(t.a(n, n).unwrap().is_one());
                }
            }
        }
    }

    #[test]
    fn rational_and_integer_paths_agree() {
        // tilde(id) is the constant one function but is not flagged integer-valued
        let slow = CoeffTable::build(&sigma(), &ArithmeticFunction::id().tilde(), 12).unwrap();
        let fast = CoeffTable::build(&sigma(), &ArithmeticFunction::one(), 12).unwrap();
        assert_eq!(slow.rows(), fast.rows());
    }

    #[test]
    fn known_closed_forms() {
        let one = ArithmeticFunction::one();
        let id = ArithmeticFunction::id();
        let t11 = CoeffTable::build(&one, &one, 12).unwrap();
        let t1i = CoeffTable::build(&one, &id, 12).unwrap();
        let tii = CoeffTable::build(&id, &id, 12).unwrap();
        for n in 1..=12usize {
            for m in 1..=n {
                let (ni, mi) = (n as i64, m as i64);
                assert_eq!(t11.a(n, m).unwrap().to_integer(), binomial(ni - 1, mi - 1));
                assert_eq!(t1i.a(n, m).unwrap().to_integer(), stirling_first_unsigned(n, m));
                let lah = factorial(n as u64) / factorial(m as u64) * binomial(ni - 1, mi - 1);
                assert_eq!(tii.a(n, m).unwrap().to_integer(), lah);
            }
        }
    }

    #[test]
    fn scalar_recursion_matches_eval() {
        let x0 = rat(-24);
        let vals = pn_values_at(&sigma(), &ArithmeticFunction::id(), &x0, 12).unwrap();
        let ps = pn_sequence(&sigma(), &ArithmeticFunction::id(), 12).unwrap();
        for (v, p) in vals.iter().zip(&ps) {
            assert_eq!(*v, p.eval(&x0));
        }
        assert_eq!(vals[1], rat(-24));
        assert_eq!(vals[2], rat(252));
    }
}
