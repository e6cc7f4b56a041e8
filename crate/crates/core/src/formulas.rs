//! Structural formulas for the coefficients `A_{n,m}^{g,h}`.
//!
//! The coefficient splits into a part depending only on `g`, the weight
//! `G(mu) = prod g(mu_k + 1)`, and a part depending only on `h`, the
//! composition weight `H(mu, n)` summed over the orbit of `mu`:
//!
//! ```text
//! A_{n,m} = sum_{mu |- n-m} G(mu) * Hcal(mu, n)
//! ```
//!
//! `H(mu, n)` is defined by peeling off the last part of `mu`:
//! `H(eps, n) = 1`, and for `|mu| + l(mu) <= n`
//! `H(mu, n) = sum_{k=|mu|+l(mu)-1}^{n-1} h_{last}(k) H(mu', k - last)`,
//! zero otherwise. For `h = 1` and `h = id` it has closed forms, which give
//! the two specialized coefficient theorems implemented below.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::{ArithmeticFunction, CumulativeProduct};
use crate::error::{Error, Result};
use crate::exact::{rat, Rational};
use crate::partition::{
    binomial, compositions_of, factorial, multinomial, orbit_of, partitions_of, Composition,
    Partition,
};

/// `G(mu) = prod_k g(mu_k + 1)`; `G(eps) = 1`.
pub fn g_weight(g: &ArithmeticFunction, mu: &Composition) -> Result<Rational> {
    mu.parts()
        .iter()
        .try_fold(Rational::one(), |acc, &p| Ok(acc * g.value(p + 1)?))
}

fn check_coeff_range(n: usize, m: usize) -> Result<()> {
    if m < 1 || m > n {
        return Err(Error::Range(format!("need 1 <= m <= n, got n = {n}, m = {m}")));
    }
    Ok(())
}

/// Mixed-radix indexing of the sub-multisets of a partition's parts.
/// Removing one copy of distinct part `i` lowers the index by `stride[i]`,
/// so ascending index order visits every sub-multiset after its children.
struct SubMultisets {
    distinct: Vec<(usize, usize)>,
    strides: Vec<usize>,
    total: usize,
}

impl SubMultisets {
    fn new(mu: &Partition) -> Self {
        let distinct = mu.distinct_parts();
        let mut strides = Vec::with_capacity(distinct.len());
        let mut total = 1;
        for &(_, mult) in &distinct {
            strides.push(total);
            total *= mult + 1;
        }
        SubMultisets {
            distinct,
            strides,
            total,
        }
    }

    fn count(&self, state: usize, i: usize) -> usize {
        (state / self.strides[i]) % (self.distinct[i].1 + 1)
    }

    /// `(|S|, l(S))`.
    fn size_len(&self, state: usize) -> (usize, usize) {
        (0..self.distinct.len()).fold((0, 0), |(s, l), i| {
            let c = self.count(state, i);
            (s + c * self.distinct[i].0, l + c)
        })
    }
}

/// The composition weight `H(mu, n)` for a fixed `h`, with memoized
/// recursion and orbit sums.
#[derive(Debug)]
pub struct HWeights {
    cp: CumulativeProduct,
    memo: HashMap<(Vec<usize>, usize), Rational>,
}

impl HWeights {
    /// Supports `n <= max_n`. Errors if `h` vanishes on `1..=max_n`.
    pub fn new(h: &ArithmeticFunction, max_n: usize) -> Result<Self> {
        Ok(HWeights {
            cp: CumulativeProduct::new(h, max_n)?,
            memo: HashMap::new(),
        })
    }

    pub fn max_n(&self) -> usize {
        self.cp.max_n()
    }

    fn check_n(&self, n: usize) -> Result<()> {
        if n > self.max_n() {
            return Err(Error::Range(format!(
                "H(mu, n) prepared for n <= {}, got {n}",
                self.max_n()
            )));
        }
        Ok(())
    }

    /// `H(mu, n)` by the defining recursion on the last part.
    pub fn h_weight(&mut self, mu: &Composition, n: usize) -> Result<Rational> {
        self.check_n(n)?;
        Ok(self.h_weight_inner(mu.parts(), n))
    }

    fn h_weight_inner(&mut self, parts: &[usize], n: usize) -> Rational {
        let Some((&last, prefix)) = parts.split_last() else {
            return Rational::one();
        };
        let start = parts.iter().sum::<usize>() + parts.len() - 1;
        if n < start + 1 {
            return Rational::zero();
        }
        let key = (parts.to_vec(), n);
        if let Some(v) = self.memo.get(&key) {
            return v.clone();
        }
        let mut acc = Rational::zero();
        for k in start..n {
            let inner = self.h_weight_inner(prefix, k - last);
            if inner.is_zero() {
                continue;
            }
            acc += self.cp.window(last, k).expect("k >= last and k <= max_n") * inner;
        }
        self.memo.insert(key, acc.clone());
        acc
    }

    /// `sum_{k=mu}^{n-1} h_mu(k)`, the single-part case written out.
    pub fn h_weight_scalar(&self, mu: usize, n: usize) -> Result<Rational> {
        self.check_n(n)?;
        if mu == 0 {
            return Err(Error::Range("part must be positive".into()));
        }
        let mut acc = Rational::zero();
        for k in mu..n {
            acc += self.cp.window(mu, k)?;
        }
        Ok(acc)
    }

    /// `Hcal(mu, n)`: the sum of `H(lambda, n)` over every distinct
    /// reordering `lambda` of `mu`, enumerated one by one.
    pub fn hcal_by_orbit(&mut self, mu: &Partition, n: usize) -> Result<Rational> {
        self.check_n(n)?;
        let mut acc = Rational::zero();
        for lambda in orbit_of(mu) {
            acc += self.h_weight_inner(lambda.parts(), n);
        }
        Ok(acc)
    }

    /// `Hcal(mu, n)` for every `0 <= n <= max_n`.
    ///
    /// Grouping the orbit by last part gives
    /// `Hcal(S, n) = sum_{k} sum_{p in S distinct} h_p(k) Hcal(S - p, k - p)`
    /// over the same `k` range as the recursion for `H`, so the orbit sum is
    /// computed over sub-multisets of `mu` instead of over all reorderings.
    pub fn hcal_row(&self, mu: &Partition) -> Vec<Rational> {
        let max_n = self.max_n();
        let sub = SubMultisets::new(mu);
        let mut table: Vec<Vec<Rational>> = Vec::with_capacity(sub.total);
        for state in 0..sub.total {
            let (size, len) = sub.size_len(state);
            if len == 0 {
                table.push(vec![Rational::one(); max_n + 1]);
                continue;
            }
            let start = size + len - 1;
            let mut row = vec![Rational::zero(); max_n + 1];
            let mut running = Rational::zero();
            for n in (start + 1)..=max_n {
                let k = n - 1;
                for (i, &(p, _)) in sub.distinct.iter().enumerate() {
                    if sub.count(state, i) == 0 {
                        continue;
                    }
                    let child = &table[state - sub.strides[i]][k - p];
                    if child.is_zero() {
                        continue;
                    }
                    running += self.cp.window(p, k).expect("k >= p") * child;
                }
                row[n] = running.clone();
            }
            table.push(row);
        }
        table.pop().expect("at least the empty state")
    }

    /// `Hcal(mu, n)`.
    pub fn hcal(&self, mu: &Partition, n: usize) -> Result<Rational> {
        self.check_n(n)?;
        Ok(self.hcal_row(mu).swap_remove(n))
    }
}

/// `H(mu, n) = C(n - |mu|, l(mu))`, the weight for `h = 1`.
pub fn h_weight_closed_one(mu: &Composition, n: usize) -> Rational {
    Rational::from_integer(binomial(n as i64 - mu.size() as i64, mu.len() as i64))
}

/// The weight for `h = id`:
/// `prod_{k=0}^{|mu|+l(mu)-1} (n - k) * prod_{k=1}^{l(mu)} (k + mu_1 + ... + mu_k)^{-1}`.
pub fn h_weight_closed_id(mu: &Composition, n: usize) -> Rational {
    let top = falling(n, mu.size() + mu.len());
    let mut prefix = 0;
    let mut denom = BigInt::one();
    for (k, &p) in mu.parts().iter().enumerate() {
        prefix += p;
        denom *= k + 1 + prefix;
    }
    Rational::new(top, denom)
}

/// `n (n-1) ... (n-len+1)`; zero once a factor hits zero.
fn falling(n: usize, len: usize) -> BigInt {
    if len > n {
        return BigInt::zero();
    }
    (0..len).fold(BigInt::one(), |acc, k| acc * (n - k))
}

/// Coefficients by the general formula `sum_{mu |- n-m} G(mu) Hcal(mu, n)`,
/// caching `Hcal(mu, .)` per partition.
#[derive(Debug)]
pub struct MainTheorem {
    g: ArithmeticFunction,
    weights: HWeights,
    rows: HashMap<Partition, Vec<Rational>>,
}

impl MainTheorem {
    pub fn new(g: &ArithmeticFunction, h: &ArithmeticFunction, max_n: usize) -> Result<Self> {
        if max_n >= 1 {
            g.value(max_n)?;
        }
        Ok(MainTheorem {
            g: g.clone(),
            weights: HWeights::new(h, max_n)?,
            rows: HashMap::new(),
        })
    }

    /// `A_{n,m}` for `1 <= m <= n <= max_n`; `m = n` is the empty-partition term.
    pub fn coeff(&mut self, n: usize, m: usize) -> Result<Rational> {
        check_coeff_range(n, m)?;
        self.weights.check_n(n)?;
        let mut acc = Rational::zero();
        for mu in partitions_of(n - m) {
            let gw = g_weight(&self.g, mu.as_composition())?;
            if gw.is_zero() {
                continue;
            }
            let weights = &self.weights;
            let row = self
                .rows
                .entry(mu.clone())
                .or_insert_with(|| weights.hcal_row(&mu));
            acc += gw * &row[n];
        }
        Ok(acc)
    }
}

/// `A_{n,m}^{g,h} = sum_{mu |- n-m} G(mu) Hcal(mu, n)`.
pub fn main_theorem_coeff(
    g: &ArithmeticFunction,
    h: &ArithmeticFunction,
    n: usize,
    m: usize,
) -> Result<Rational> {
    check_coeff_range(n, m)?;
    MainTheorem::new(g, h, n)?.coeff(n, m)
}

/// `A_{n,m}^{g,1} = sum_{mu |- n-m} G(mu) * (l(mu); m_1, m_2, ...) * C(n - |mu|, l(mu))`.
pub fn thm1_coeff(g: &ArithmeticFunction, n: usize, m: usize) -> Result<Rational> {
    check_coeff_range(n, m)?;
    let mut acc = Rational::zero();
    for mu in partitions_of(n - m) {
        let gw = g_weight(g, mu.as_composition())?;
        let mults: Vec<u64> = mu.distinct_parts().iter().map(|&(_, c)| c as u64).collect();
        let orbit = multinomial(mu.len() as u64, &mults)?;
        let b = binomial(n as i64 - mu.size() as i64, mu.len() as i64);
        acc += gw * Rational::from_integer(orbit * b);
    }
    Ok(acc)
}

/// `sum_{lambda in Orb(mu)} prod_{k=1}^{l} (k + lambda_1 + ... + lambda_k)^{-1}`,
/// accumulated over sub-multisets of `mu`: every ordering ends in the full
/// multiset, whose factor is `1 / (l(S) + |S|)`.
pub fn inverse_prefix_orbit_sum(mu: &Partition) -> Rational {
    let sub = SubMultisets::new(mu);
    let mut w: Vec<Rational> = Vec::with_capacity(sub.total);
    for state in 0..sub.total {
        let (size, len) = sub.size_len(state);
        if len == 0 {
            w.push(Rational::one());
            continue;
        }
        let mut acc = Rational::zero();
        for i in 0..sub.distinct.len() {
            if sub.count(state, i) > 0 {
                acc += &w[state - sub.strides[i]];
            }
        }
        w.push(acc / rat((size + len) as i64));
    }
    w.pop().expect("at least the empty state")
}

/// Same sum as [`inverse_prefix_orbit_sum`], by walking the orbit.
pub fn inverse_prefix_orbit_sum_by_enumeration(mu: &Partition) -> Rational {
    orbit_of(mu)
        .map(|lambda| {
            let mut prefix = 0;
            let mut denom = BigInt::one();
            for (k, &p) in lambda.parts().iter().enumerate() {
                prefix += p;
                denom *= k + 1 + prefix;
            }
            Rational::new(BigInt::one(), denom)
        })
        .sum()
}

/// `A_{n,m}^{g,id} = sum_{mu |- n-m} G(mu) prod_{k=0}^{|mu|+l(mu)-1} (n-k) * orbit sum`.
pub fn thm2_coeff(g: &ArithmeticFunction, n: usize, m: usize) -> Result<Rational> {
    check_coeff_range(n, m)?;
    let mut acc = Rational::zero();
    for mu in partitions_of(n - m) {
        let gw = g_weight(g, mu.as_composition())?;
        let top = falling(n, mu.size() + mu.len());
        if gw.is_zero() || top.is_zero() {
            continue;
        }
        acc += gw * Rational::from_integer(top) * inverse_prefix_orbit_sum(&mu);
    }
    Ok(acc)
}

/// Both sides of `A^{g,id}_{n,m} / n! = A^{g~,1}_{n,m} / m!`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConversionReport {
    pub n: usize,
    pub m: usize,
    pub lhs: Rational,
    pub rhs: Rational,
    pub holds: bool,
}

/// Left side from [`thm2_coeff`] on `g`, right side from [`thm1_coeff`] on `g~`.
pub fn conversion_check(g: &ArithmeticFunction, n: usize, m: usize) -> Result<ConversionReport> {
    let lhs = thm2_coeff(g, n, m)? / Rational::from_integer(factorial(n as u64));
    let rhs = thm1_coeff(&g.tilde(), n, m)? / Rational::from_integer(factorial(m as u64));
    Ok(ConversionReport {
        n,
        m,
        holds: lhs == rhs,
        lhs,
        rhs,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CompositionVariant {
    HOne,
    HId,
}

/// `A^{g,1}_{n,m} = sum_{k_1+...+k_m=n} prod g(k_i)` for [`CompositionVariant::HOne`];
/// for [`CompositionVariant::HId`] the normalized value
/// `A^{g,id}_{n,m} / n! = (1/m!) sum_{k_1+...+k_m=n} prod g(k_i)/k_i`.
pub fn composition_sum_normalized(
    g: &ArithmeticFunction,
    n: usize,
    m: usize,
    variant: CompositionVariant,
) -> Result<Rational> {
    check_coeff_range(n, m)?;
    let gv = g.values(n)?;
    let term = |k: usize| match variant {
        CompositionVariant::HOne => gv[k].clone(),
        CompositionVariant::HId => &gv[k] / rat(k as i64),
    };
    let mut acc = Rational::zero();
    for c in compositions_of(n, m) {
        acc += c
            .parts()
            .iter()
            .fold(Rational::one(), |p, &k| p * term(k));
    }
    Ok(match variant {
        CompositionVariant::HOne => acc,
        CompositionVariant::HId => acc / Rational::from_integer(factorial(m as u64)),
    })
}

/// `A_{n,m}` from the composition sums, for `h = 1` or `h = id`.
pub fn composition_sum_coeff(
    g: &ArithmeticFunction,
    n: usize,
    m: usize,
    variant: CompositionVariant,
) -> Result<Rational> {
    let v = composition_sum_normalized(g, n, m, variant)?;
    Ok(match variant {
        CompositionVariant::HOne => v,
        CompositionVariant::HId => v * Rational::from_integer(factorial(n as u64)),
    })
}
