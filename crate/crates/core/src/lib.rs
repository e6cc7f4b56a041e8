//! Exact computation of the polynomials `P_n^{g,h}(x)` attached to a pair of
//! normalized arithmetic functions,
//!
//! ```text
//! P_0 = 1,    P_n(x) = x / h(n) * sum_{k=1}^{n} g(k) P_{n-k}(x),
//! ```
//!
//! together with several independent routes to their coefficients
//! (coefficient recursion, partition-weight formulas, generating functions,
//! hook-length sums) and the scans that compare them.
//!
//! All arithmetic is exact; nothing in this crate touches floating point.

pub mod analysis;
pub mod arith;
pub mod engine;
pub mod error;
pub mod exact;
pub mod export;
pub mod formulas;
pub mod partition;
pub mod series;
pub mod suites;

pub use arith::{ArithmeticFunction, CumulativeProduct};
pub use engine::{pn, pn_sequence, pn_values_at, CoeffTable};
pub use error::{Error, Result};
pub use exact::{rat, ratio, Poly, Rational, Series};
pub use partition::{Composition, Partition};
