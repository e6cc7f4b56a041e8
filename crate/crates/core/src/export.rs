//! Machine-readable forms of coefficient tables. Rationals are written as
//! `"p/q"` strings (plain decimal strings for integers), never as floats.

use serde::{Deserialize, Serialize};

use crate::arith::parse_rational;
use crate::engine::CoeffTable;
use crate::error::{Error, Result};
use crate::exact::{Poly, Rational};

pub fn rational_strings(values: &[Rational]) -> Vec<String> {
    values.iter().map(ToString::to_string).collect()
}

fn parse_all(values: &[String]) -> Result<Vec<Rational>> {
    values
        .iter()
        .map(|s| parse_rational(s).ok_or_else(|| Error::Table(format!("`{s}` is not p/q"))))
        .collect()
}

/// JSON layout of a [`CoeffTable`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableExport {
    pub g: String,
    pub h: String,
    pub max_n: usize,
    /// `H(0), ..., H(max_n)`.
    pub normalizers: Vec<String>,
    /// Row `n` holds `A_{n,0}, ..., A_{n,n}`.
    pub rows: Vec<Vec<String>>,
}

impl From<&CoeffTable> for TableExport {
    fn from(t: &CoeffTable) -> Self {
        TableExport {
            g: t.g_name().to_string(),
            h: t.h_name().to_string(),
            max_n: t.max_n(),
            normalizers: rational_strings(t.normalizers()),
            rows: t.rows().iter().map(|r| rational_strings(r)).collect(),
        }
    }
}

impl TableExport {
    pub fn into_table(self) -> Result<CoeffTable> {
        if self.rows.len() != self.max_n + 1 {
            return Err(Error::Table(format!(
                "max_n = {} but {} rows",
                self.max_n,
                self.rows.len()
            )));
        }
        let rows = self
            .rows
            .iter()
            .map(|r| parse_all(r))
            .collect::<Result<Vec<_>>>()?;
        CoeffTable::from_parts(self.g, self.h, rows, parse_all(&self.normalizers)?)
    }
}

pub fn table_to_json(t: &CoeffTable) -> String {
    serde_json::to_string_pretty(&TableExport::from(t)).expect("string-only structure serializes")
}

pub fn table_from_json(text: &str) -> Result<CoeffTable> {
    serde_json::from_str::<TableExport>(text)?.into_table()
}

/// Header `n,0,1,...,max_n`; one line per row, cells with `m > n` left empty.
pub fn table_to_csv(t: &CoeffTable) -> String {
    let max_n = t.max_n();
    let mut out = String::from("n");
    for m in 0..=max_n {
        out.push_str(&format!(",{m}"));
    }
    out.push('\n');
    for (n, row) in t.rows().iter().enumerate() {
        out.push_str(&n.to_string());
        for m in 0..=max_n {
            out.push(',');
            if let Some(v) = row.get(m) {
                out.push_str(&v.to_string());
            }
        }
        out.push('\n');
    }
    out
}

/// JSON object for a polynomial: coefficient strings from degree 0 upward.
pub fn poly_to_json(p: &Poly, n: usize) -> serde_json::Value {
    serde_json::json!({
        "n": n,
        "coefficients": rational_strings(&p.padded(n + 1)),
    })
}
