//! Compositions, partitions, orbits under reordering, and the counting
//! functions that go with them (binomials, multinomials, Stirling numbers,
//! hook lengths).

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Finite sequence of positive parts. The empty composition has size and
/// length zero.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Composition(Vec<usize>);

impl Composition {
    /// Panics if any part is zero.
    pub fn new(parts: Vec<usize>) -> Self {
        assert!(parts.iter().all(|&p| p >= 1), "composition parts must be positive");
        Composition(parts)
    }

    pub fn empty() -> Self {
        Composition(Vec::new())
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn size(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn multiplicities(&self) -> MultiplicityVector {
        MultiplicityVector::of(&self.0)
    }

    pub fn is_non_increasing(&self) -> bool {
        self.0.windows(2).all(|w| w[0] >= w[1])
    }

    /// The unique partition in this composition's orbit.
    pub fn sorted(&self) -> Partition {
        let mut parts = self.0.clone();
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(Composition(parts))
    }

    /// Splits off the last part.
    pub fn split_last(&self) -> Option<(Composition, usize)> {
        let (&last, rest) = self.0.split_last()?;
        Some((Composition(rest.to_vec()), last))
    }
}

impl fmt::Debug for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "()");
        }
        let s: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "({})", s.join(","))
    }
}

impl From<Vec<usize>> for Composition {
    fn from(parts: Vec<usize>) -> Self {
        Composition::new(parts)
    }
}

/// A composition with non-increasing parts.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Partition(Composition);

impl Partition {
    /// Errors if the parts are not positive and non-increasing.
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.iter().any(|&p| p == 0) {
            return Err(Error::Range("partition parts must be positive".into()));
        }
        let c = Composition(parts);
        if !c.is_non_increasing() {
            return Err(Error::Range(format!("{c} is not non-increasing")));
        }
        Ok(Partition(c))
    }

    pub fn empty() -> Self {
        Partition(Composition::empty())
    }

    pub fn as_composition(&self) -> &Composition {
        &self.0
    }

    pub fn parts(&self) -> &[usize] {
        self.0.parts()
    }

    pub fn size(&self) -> usize {
        self.0.size()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn multiplicities(&self) -> MultiplicityVector {
        self.0.multiplicities()
    }

    /// Distinct parts with their multiplicities, largest part first.
    pub fn distinct_parts(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = Vec::new();
        for &p in self.parts() {
            match out.last_mut() {
                Some((q, m)) if *q == p => *m += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }

    /// Column lengths of the Young diagram.
    pub fn conjugate(&self) -> Partition {
        let cols = self.parts().first().copied().unwrap_or(0);
        let parts = (1..=cols)
            .map(|j| self.parts().iter().take_while(|&&p| p >= j).count())
            .collect();
        Partition(Composition(parts))
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// `m_j`, the number of parts equal to `j`, for `j = 1..=size`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MultiplicityVector(Vec<usize>);

impl MultiplicityVector {
    fn of(parts: &[usize]) -> Self {
        let size: usize = parts.iter().sum();
        let mut m = vec![0; size];
        for &p in parts {
            m[p - 1] += 1;
        }
        MultiplicityVector(m)
    }

    /// `m_j`; zero for `j` outside `1..=size`.
    pub fn get(&self, j: usize) -> usize {
        j.checked_sub(1).and_then(|i| self.0.get(i)).copied().unwrap_or(0)
    }

    /// `m_1, m_2, ..., m_size`.
    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn total_parts(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn weighted_size(&self) -> usize {
        self.0.iter().enumerate().map(|(i, m)| (i + 1) * m).sum()
    }
}

/// Partitions of `n` in reverse-lexicographic order, starting from `(n)`.
#[derive(Clone, Debug)]
pub struct Partitions {
    current: Option<Vec<usize>>,
}

pub fn partitions_of(n: usize) -> Partitions {
    Partitions {
        current: Some(if n == 0 { Vec::new() } else { vec![n] }),
    }
}

impl Iterator for Partitions {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        let cur = self.current.take()?;
        let out = Partition(Composition(cur.clone()));
        let mut parts = cur;
        let mut ones = 0;
        while parts.last() == Some(&1) {
            parts.pop();
            ones += 1;
        }
        if let Some(last) = parts.last_mut() {
            *last -= 1;
            let v = *last;
            let mut rest = ones + 1;
            while rest >= v {
                parts.push(v);
                rest -= v;
            }
            if rest > 0 {
                parts.push(rest);
            }
            self.current = Some(parts);
        }
        Some(out)
    }
}

/// Distinct reorderings of a multiset of parts, in lexicographic order.
#[derive(Clone, Debug)]
pub struct Orbit {
    current: Option<Vec<usize>>,
}

/// All distinct permutations of the parts of `mu`.
pub fn orbit_of(mu: &Partition) -> Orbit {
    let mut parts = mu.parts().to_vec();
    parts.sort_unstable();
    Orbit {
        current: Some(parts),
    }
}

fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let Some(i) = (0..v.len() - 1).rev().find(|&i| v[i] < v[i + 1]) else {
        return false;
    };
    let j = (i + 1..v.len()).rev().find(|&j| v[j] > v[i]).expect("pivot exists");
    v.swap(i, j);
    v[i + 1..].reverse();
    true
}

impl Iterator for Orbit {
    type Item = Composition;

    fn next(&mut self) -> Option<Composition> {
        let cur = self.current.take()?;
        let mut succ = cur.clone();
        if next_permutation(&mut succ) {
            self.current = Some(succ);
        }
        Some(Composition(cur))
    }
}

/// `l! / prod_j m_j!` for a partition of length `l`.
pub fn orbit_size(mu: &Partition) -> BigInt {
    let ms: Vec<u64> = mu.distinct_parts().iter().map(|&(_, m)| m as u64).collect();
    multinomial(mu.len() as u64, &ms).expect("multiplicities sum to the length")
}

/// Compositions of `n` with exactly `k` parts, lexicographic.
#[derive(Clone, Debug)]
pub struct Compositions {
    current: Option<Vec<usize>>,
}

pub fn compositions_of(n: usize, k: usize) -> Compositions {
    let current = if k == 0 {
        (n == 0).then(Vec::new)
    } else if k > n {
        None
    } else {
        let mut v = vec![1; k];
        v[k - 1] = n - k + 1;
        Some(v)
    };
    Compositions { current }
}

impl Iterator for Compositions {
    type Item = Composition;

    fn next(&mut self) -> Option<Composition> {
        let cur = self.current.take()?;
        let k = cur.len();
        let mut succ = cur.clone();
        let mut tail = succ.last().copied().unwrap_or(0);
        for i in (0..k.saturating_sub(1)).rev() {
            // room to move one unit from the tail into position i
            if tail > k - 1 - i {
                succ[i] += 1;
                let rest = tail - 1 - (k - 2 - i);
                for p in succ.iter_mut().take(k - 1).skip(i + 1) {
                    *p = 1;
                }
                succ[k - 1] = rest;
                self.current = Some(succ);
                break;
            }
            tail += succ[i];
        }
        Some(Composition(cur))
    }
}

/// `c_k(n) = C(n-1, k-1)`; `c_0(0) = 1`.
pub fn composition_count(n: usize, k: usize) -> BigInt {
    if n == 0 && k == 0 {
        return BigInt::one();
    }
    if k == 0 {
        return BigInt::zero();
    }
    binomial(n as i64 - 1, k as i64 - 1)
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// `C(n, k)`, zero when `k < 0`, `k > n` or `n < 0`.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 || n < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// `n! / prod parts_i!`.
pub fn multinomial(n: u64, parts: &[u64]) -> Result<BigInt> {
    let sum: u64 = parts.iter().sum();
    if sum != n {
        return Err(Error::PartsSum { n, sum });
    }
    Ok(parts
        .iter()
        .fold(factorial(n), |acc, &p| acc / factorial(p)))
}

/// Rows `0..=n_max` of the unsigned Stirling numbers of the first kind.
pub fn stirling_first_triangle(n_max: usize) -> Vec<Vec<BigInt>> {
    let mut rows: Vec<Vec<BigInt>> = vec![vec![BigInt::one()]];
    for n in 0..n_max {
        let prev = &rows[n];
        let mut next = vec![BigInt::zero(); n + 2];
        for m in 0..=n + 1 {
            if m <= n {
                next[m] += &prev[m] * n;
            }
            if m >= 1 {
                next[m] += &prev[m - 1];
            }
        }
        rows.push(next);
    }
    rows
}

/// `|s(n, m)|`; zero for `m > n`.
pub fn stirling_first_unsigned(n: usize, m: usize) -> BigInt {
    if m > n {
        return BigInt::zero();
    }
    stirling_first_triangle(n)[n][m].clone()
}

/// Hook lengths of every cell of the Young diagram, sorted ascending.
pub fn hook_multiset(lambda: &Partition) -> Vec<usize> {
    let conj = lambda.conjugate();
    let mut hooks = Vec::with_capacity(lambda.size());
    for (i, &row) in lambda.parts().iter().enumerate() {
        for j in 0..row {
            let arm = row - j - 1;
            let leg = conj.parts()[j] - i - 1;
            hooks.push(arm + leg + 1);
        }
    }
    hooks.sort_unstable();
    hooks
}

/// `p(n)` by the standard parts-bounded counting recurrence.
pub fn partition_count(n: usize) -> BigInt {
    let mut ways = vec![BigInt::zero(); n + 1];
    ways[0] = BigInt::one();
    for part in 1..=n {
        for total in part..=n {
            let add = ways[total - part].clone();
            ways[total] += add;
        }
    }
    ways[n].clone()
}
