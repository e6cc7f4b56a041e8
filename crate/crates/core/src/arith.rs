//! Normalized arithmetic functions and their cumulative products.
//!
//! Every function here satisfies `f(1) = 1` and is extended by `f(0) = 0`.
//! Values are memoized per instance behind a lock, so a shared reference can
//! be evaluated from several threads.

use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Pow, Zero};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::exact::{rat, Rational};

#[derive(Clone, Debug)]
enum Kind {
    One,
    Id,
    Sigma(u32),
    Tilde(Box<ArithmeticFunction>),
    Table { values: Arc<Vec<Rational>>, label: String },
}

/// A normalized arithmetic function `n -> f(n)` with exact rational values.
#[derive(Debug)]
pub struct ArithmeticFunction {
    kind: Kind,
    non_vanishing: bool,
    integer_valued: bool,
    memo: RwLock<Vec<Rational>>,
}

impl Clone for ArithmeticFunction {
    fn clone(&self) -> Self {
        ArithmeticFunction {
            kind: self.kind.clone(),
            non_vanishing: self.non_vanishing,
            integer_valued: self.integer_valued,
            memo: RwLock::new(self.memo.read().expect("memo lock").clone()),
        }
    }
}

/// `sigma_l(n)`, the sum of `d^l` over divisors `d` of `n`.
pub fn sigma(l: u32, n: u64) -> BigInt {
    let mut total = BigInt::zero();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            total += BigInt::from(d).pow(l);
            let e = n / d;
            if e != d {
                total += BigInt::from(e).pow(l);
            }
        }
        d += 1;
    }
    total
}

impl ArithmeticFunction {
    fn with_kind(kind: Kind, non_vanishing: bool, integer_valued: bool) -> Self {
        ArithmeticFunction {
            kind,
            non_vanishing,
            integer_valued,
            memo: RwLock::new(Vec::new()),
        }
    }

    /// The constant function `1`.
    pub fn one() -> Self {
        Self::with_kind(Kind::One, true, true)
    }

    /// `id(n) = n`.
    pub fn id() -> Self {
        Self::with_kind(Kind::Id, true, true)
    }

    /// Divisor power sum `sigma_l`.
    pub fn sigma(l: u32) -> Self {
        Self::with_kind(Kind::Sigma(l), true, true)
    }

    /// `n -> g(n) / n`.
    pub fn tilde(&self) -> Self {
        Self::with_kind(Kind::Tilde(Box::new(self.clone())), self.non_vanishing, false)
    }

    /// Table-backed function; `values[0]` is the value at `n = 1`.
    pub fn from_table(values: Vec<Rational>) -> Result<Self> {
        Self::from_table_labeled(values, None)
    }

    fn from_table_labeled(values: Vec<Rational>, label: Option<String>) -> Result<Self> {
        let label = label.unwrap_or_else(|| {
            let shown: Vec<String> = values.iter().take(6).map(|v| v.to_string()).collect();
            let more = if values.len() > 6 { ",..." } else { "" };
            format!("table[{}{}]", shown.join(","), more)
        });
        match values.first() {
            None => return Err(Error::Table("empty table".into())),
            Some(v) if !v.is_one() => {
                return Err(Error::NotNormalized {
                    name: label,
                    value: v.to_string(),
                })
            }
            _ => {}
        }
        let non_vanishing = values.iter().all(|v| !v.is_zero());
        let integer_valued = values.iter().all(|v| v.is_integer());
        Ok(Self::with_kind(
            Kind::Table {
                values: Arc::new(values),
                label,
            },
            non_vanishing,
            integer_valued,
        ))
    }

    /// Reads a JSON array of integers or `"p/q"` strings.
    pub fn from_table_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        let values = parse_table_json(&text)?;
        Self::from_table_labeled(values, Some(format!("table:{}", path.display())))
    }

    /// Parses `one`, `id`, `sigma:<l>`, `tilde:<desc>` or `table:<path>`.
    pub fn parse(desc: &str) -> Result<Self> {
        let desc = desc.trim();
        match desc {
            "one" => return Ok(Self::one()),
            "id" => return Ok(Self::id()),
            _ => {}
        }
        if let Some(l) = desc.strip_prefix("sigma:") {
            let l: u32 = l.parse().map_err(|_| Error::Descriptor(desc.into()))?;
            return Ok(Self::sigma(l));
        }
        if let Some(inner) = desc.strip_prefix("tilde:") {
            return Ok(Self::parse(inner)?.tilde());
        }
        if let Some(path) = desc.strip_prefix("table:") {
            return Self::from_table_file(path);
        }
        Err(Error::Descriptor(desc.into()))
    }

    /// Descriptor string, in the same grammar [`parse`](Self::parse) accepts
    /// for builtins.
    pub fn name(&self) -> String {
        match &self.kind {
            Kind::One => "one".into(),
            Kind::Id => "id".into(),
            Kind::Sigma(l) => format!("sigma:{l}"),
            Kind::Tilde(g) => format!("tilde:{}", g.name()),
            Kind::Table { label, .. } => label.clone(),
        }
    }

    /// Whether every value is nonzero (on the whole table, for tables).
    pub fn is_non_vanishing(&self) -> bool {
        self.non_vanishing
    }

    pub fn is_integer_valued(&self) -> bool {
        self.integer_valued
    }

    /// Largest admissible argument, `None` when unbounded.
    pub fn domain_limit(&self) -> Option<usize> {
        match &self.kind {
            Kind::Table { values, .. } => Some(values.len()),
            Kind::Tilde(g) => g.domain_limit(),
            _ => None,
        }
    }

    fn compute(&self, n: usize) -> Result<Rational> {
        Ok(match &self.kind {
            Kind::One => Rational::one(),
            Kind::Id => rat(n as i64),
            Kind::Sigma(l) => Rational::from_integer(sigma(*l, n as u64)),
            Kind::Tilde(g) => g.value(n)? / rat(n as i64),
            Kind::Table { values, .. } => values
                .get(n - 1)
                .cloned()
                .ok_or_else(|| Error::OutOfTable {
                    name: self.name(),
                    n,
                    len: values.len(),
                })?,
        })
    }

    /// `f(n)`, with `f(0) = 0`.
    pub fn value(&self, n: usize) -> Result<Rational> {
        if n == 0 {
            return Ok(Rational::zero());
        }
        if let Some(v) = self.memo.read().expect("memo lock").get(n - 1) {
            return Ok(v.clone());
        }
        let mut memo = self.memo.write().expect("memo lock");
        while memo.len() < n {
            let k = memo.len() + 1;
            let v = self.compute(k)?;
            memo.push(v);
        }
        Ok(memo[n - 1].clone())
    }

    /// `[f(0), f(1), ..., f(upto)]`.
    pub fn values(&self, upto: usize) -> Result<Vec<Rational>> {
        if upto > 0 {
            self.value(upto)?;
        }
        let memo = self.memo.read().expect("memo lock");
        let mut out = Vec::with_capacity(upto + 1);
        out.push(Rational::zero());
        out.extend(memo[..upto].iter().cloned());
        Ok(out)
    }

    /// Whether `f(k) == 1` for every `1 <= k <= upto`.
    pub fn agrees_with_one(&self, upto: usize) -> bool {
        self.values(upto)
            .map(|v| v[1..].iter().all(One::is_one))
            .unwrap_or(false)
    }

    /// Whether `f(k) == k` for every `1 <= k <= upto`.
    pub fn agrees_with_id(&self, upto: usize) -> bool {
        self.values(upto)
            .map(|v| v.iter().enumerate().all(|(k, x)| *x == rat(k as i64)))
            .unwrap_or(false)
    }

    /// Errors unless `f(1..=upto)` are all nonzero.
    pub fn ensure_non_vanishing(&self, upto: usize) -> Result<()> {
        let vals = self.values(upto)?;
        match vals.iter().skip(1).position(Zero::is_zero) {
            Some(i) => Err(Error::Vanishing {
                name: self.name(),
                n: i + 1,
            }),
            None => Ok(()),
        }
    }
}

impl fmt::Display for ArithmeticFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for ArithmeticFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

/// Parses a JSON array whose entries are integers or `"p/q"` strings.
pub fn parse_table_json(text: &str) -> Result<Vec<Rational>> {
    let value: Value = serde_json::from_str(text)?;
    let Value::Array(items) = value else {
        return Err(Error::Table("expected a JSON array".into()));
    };
    items
        .iter()
        .enumerate()
        .map(|(i, item)| match item {
            Value::Number(num) if num.is_i64() || num.is_u64() => {
                Rational::from_str(&num.to_string())
                    .map_err(|_| Error::Table(format!("entry {i}: {num}")))
            }
            Value::String(s) => parse_rational(s)
                .ok_or_else(|| Error::Table(format!("entry {i}: `{s}` is not p/q"))),
            other => Err(Error::Table(format!("entry {i}: unsupported value {other}"))),
        })
        .collect()
}

/// Parses `"p"` or `"p/q"` with `q != 0`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let q = BigInt::from_str(q.trim()).ok()?;
        if q.is_zero() {
            return None;
        }
        Some(Rational::new(BigInt::from_str(p.trim()).ok()?, q))
    } else {
        BigInt::from_str(s).ok().map(Rational::from_integer)
    }
}

/// `H(0) = 1`, `H(n) = h(1) h(2) ... h(n)`, precomputed up to a bound.
#[derive(Clone, Debug)]
pub struct CumulativeProduct {
    values: Vec<Rational>,
}

impl CumulativeProduct {
    /// Errors if `h` vanishes on `1..=upto`.
    pub fn new(h: &ArithmeticFunction, upto: usize) -> Result<Self> {
        h.ensure_non_vanishing(upto)?;
        let hv = h.values(upto)?;
        let mut values = Vec::with_capacity(upto + 1);
        values.push(Rational::one());
        for k in 1..=upto {
            let next = &values[k - 1] * &hv[k];
            values.push(next);
        }
        Ok(CumulativeProduct { values })
    }

    pub fn max_n(&self) -> usize {
        self.values.len() - 1
    }

    /// `H(n)`.
    pub fn get(&self, n: usize) -> &Rational {
        &self.values[n]
    }

    pub fn as_slice(&self) -> &[Rational] {
        &self.values
    }

    /// `h_m(n) = H(n) / H(n - m)`.
    pub fn window(&self, m: usize, n: usize) -> Result<Rational> {
        if m > n {
            return Err(Error::Range(format!("h_m(n) needs m <= n, got m = {m}, n = {n}")));
        }
        if n > self.max_n() {
            return Err(Error::Range(format!(
                "H precomputed up to {}, asked for {n}",
                self.max_n()
            )));
        }
        Ok(&self.values[n] / &self.values[n - m])
    }
}

/// `h_m(n) = prod_{k=0}^{m-1} h(n-k)`.
pub fn h_window(cp: &CumulativeProduct, m: usize, n: usize) -> Result<Rational> {
    cp.window(m, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ratio;
    use num_integer::Integer;
    use proptest::prelude::*;

    #[test]
    fn builtin_values() {
        assert_eq!(ArithmeticFunction::sigma(1).value(6).unwrap(), rat(12));
        assert_eq!(ArithmeticFunction::sigma(3).value(2).unwrap(), rat(9));
        assert_eq!(ArithmeticFunction::id().value(7).unwrap(), rat(7));
        assert_eq!(ArithmeticFunction::sigma(5).value(2).unwrap(), rat(33));
        assert_eq!(ArithmeticFunction::sigma(0).value(12).unwrap(), rat(6));
        for f in [
            ArithmeticFunction::one(),
            ArithmeticFunction::id(),
            ArithmeticFunction::sigma(1),
        ] {
            assert!(f.is_non_vanishing());
            assert_eq!(f.value(0).unwrap(), rat(0));
            assert_eq!(f.value(1).unwrap(), rat(1));
        }
    }

    #[test]
    fn tilde_values() {
        assert_eq!(ArithmeticFunction::sigma(1).tilde().value(2).unwrap(), ratio(3, 2));
        let t = ArithmeticFunction::id().tilde();
        assert!(t.agrees_with_one(30));
        assert_eq!(ArithmeticFunction::one().tilde().value(4).unwrap(), ratio(1, 4));
        assert_eq!(t.name(), "tilde:id");
    }

    #[test]
    fn table_values() {
        let t = ArithmeticFunction::from_table(vec![rat(1), rat(2), rat(100)]).unwrap();
        assert_eq!(t.value(3).unwrap(), rat(100));
        let short = ArithmeticFunction::from_table(vec![rat(1)]).unwrap();
        assert!(matches!(short.value(2), Err(Error::OutOfTable { n: 2, len: 1, .. })));
        let s = ArithmeticFunction::from_table(vec![rat(1), rat(3), rat(4), rat(7)]).unwrap();
        assert_eq!(s.values(4).unwrap(), ArithmeticFunction::sigma(1).values(4).unwrap());
        assert!(matches!(
            ArithmeticFunction::from_table(vec![rat(2), rat(3)]),
            Err(Error::NotNormalized { .. })
        ));
        let z = ArithmeticFunction::from_table(vec![rat(1), rat(0)]).unwrap();
        assert!(!z.is_non_vanishing());
        assert!(matches!(z.ensure_non_vanishing(2), Err(Error::Vanishing { n: 2, .. })));
    }

    #[test]
    fn descriptor_grammar() {
        assert_eq!(ArithmeticFunction::parse("sigma:3").unwrap().name(), "sigma:3");
        assert_eq!(
            ArithmeticFunction::parse("tilde:sigma:1").unwrap().value(2).unwrap(),
            ratio(3, 2)
        );
        assert!(ArithmeticFunction::parse("sigma").is_err());
        assert!(ArithmeticFunction::parse("sigma:x").is_err());
        assert!(ArithmeticFunction::parse("cos").is_err());
    }

    #[test]
    fn table_json() {
        let v = parse_table_json(r#"[1, "3/2", "-4", 7]"#).unwrap();
        assert_eq!(v, vec![rat(1), ratio(3, 2), rat(-4), rat(7)]);
        assert!(parse_table_json(r#"[1, 2.5]"#).is_err());
        assert!(parse_table_json(r#"["1/0"]"#).is_err());
        assert!(parse_table_json(r#"{"a": 1}"#).is_err());
    }

    #[test]
    fn windows() {
        let cp = CumulativeProduct::new(&ArithmeticFunction::id(), 10).unwrap();
        assert_eq!(h_window(&cp, 2, 4).unwrap(), rat(12));
        assert_eq!(h_window(&cp, 1, 7).unwrap(), rat(7));
        assert_eq!(h_window(&cp, 0, 5).unwrap(), rat(1));
        assert!(h_window(&cp, 5, 4).is_err());
        let one = CumulativeProduct::new(&ArithmeticFunction::one(), 10).unwrap();
        for n in 0..=10 {
            for m in 0..=n {
                assert_eq!(one.window(m, n).unwrap(), rat(1));
            }
        }
    }

    #[test]
    fn sigma_multiplicative_on_coprime() {
        for l in 0..4 {
            for a in 1..=100u64 {
                for b in 1..=(100 / a) {
                    if a.gcd(&b) == 1 {
                        assert_eq!(sigma(l, a * b), sigma(l, a) * sigma(l, b), "l={l} a={a} b={b}");
                    }
                }
            }
        }
    }

    #[test]
    fn concurrent_reads_agree() {
        let f = ArithmeticFunction::sigma(2);
        let results: Vec<Rational> = std::thread::scope(|s| {
            let handles: Vec<_> = (0..4)
                .map(|i| {
                    let f = &f;
                    s.spawn(move || f.value(40 + i).unwrap())
                })
                .collect();
            handles.into_iter().map(|h| h.join().unwrap()).collect()
        });
        for (i, v) in results.iter().enumerate() {
            assert_eq!(*v, Rational::from_integer(sigma(2, 40 + i as u64)));
        }
    }

    proptest! {
        #[test]
        fn window_is_direct_product(n in 0usize..=50, m_frac in 0.0f64..=1.0, which in 0usize..3) {
            let m = ((n as f64) * m_frac).floor() as usize;
            let h = [ArithmeticFunction::id(), ArithmeticFunction::sigma(1), ArithmeticFunction::sigma(1).tilde()][which].clone();
            let cp = CumulativeProduct::new(&h, 50).unwrap();
            let direct = (0..m).fold(Rational::one(), |acc, k| acc * h.value(n - k).unwrap());
            prop_assert_eq!(cp.window(m, n).unwrap(), direct);
        }
    }
}
