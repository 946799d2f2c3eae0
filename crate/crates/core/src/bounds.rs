//! Finite-`n` values of the gate-complexity bound formulas.
//!
//! The upper bounds are asymptotic (`≲`) statements; the numbers returned
//! here are the raw formula values, useful as reference scales only.

use crate::error::{Error, Result};

/// Label attached to every reported bound value.
pub const ASYMPTOTIC_NOTE: &str = "asymptotic - not a finite-n guarantee";

/// `2^n (n - 2) / (3 log2(n + q)) - n / 3`.
pub fn lower_bound(n: u32, q: u32) -> Result<f64> {
    if n < 2 || n + q < 2 {
        return Err(Error::Domain(format!(
            "lower bound needs n >= 2 and n + q >= 2, got n = {n}, q = {q}"
        )));
    }
    let n_f = f64::from(n);
    Ok(2f64.powi(n as i32) * (n_f - 2.0) / (3.0 * f64::from(n + q).log2()) - n_f / 3.0)
}

fn check_n(n: u32) -> Result<()> {
    if n < 2 {
        return Err(Error::Domain(format!("bound needs n >= 2, got {n}")));
    }
    Ok(())
}

/// `192 n 2^n / log2 n`, valid for every `q`.
pub fn upper_bound_t1(n: u32) -> Result<f64> {
    check_n(n)?;
    let n_f = f64::from(n);
    Ok(192.0 * n_f * 2f64.powi(n as i32) / n_f.log2())
}

/// `48 n 2^n / log2 n`, circuits without extra lines.
pub fn upper_bound_no_memory(n: u32) -> Result<f64> {
    check_n(n)?;
    let n_f = f64::from(n);
    Ok(48.0 * n_f * 2f64.powi(n as i32) / n_f.log2())
}

/// `96 n 2^(2n) / log2 n`, the bound through `L(2n, 0)`.
pub fn upper_bound_2n(n: u32) -> Result<f64> {
    check_n(n)?;
    let n_f = f64::from(n);
    Ok(96.0 * n_f * 2f64.powi(2 * n as i32) / n_f.log2())
}

/// All bound values for one `(n, q)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundTable {
    pub n: u32,
    pub q: u32,
    pub lower: f64,
    pub upper_t1: f64,
    pub upper_no_memory: f64,
    pub upper_2n: f64,
}

impl BoundTable {
    pub fn new(n: u32, q: u32) -> Result<Self> {
        Ok(Self {
            n,
            q,
            lower: lower_bound(n, q)?,
            upper_t1: upper_bound_t1(n)?,
            upper_no_memory: upper_bound_no_memory(n)?,
            upper_2n: upper_bound_2n(n)?,
        })
    }

    pub fn is_finite(&self) -> bool {
        [self.lower, self.upper_t1, self.upper_no_memory, self.upper_2n]
            .iter()
            .all(|v| v.is_finite())
    }
}

/// Rows for every `n` in `ns` and `q` in `qs`, `n` outer.
pub fn bound_rows(
    ns: impl IntoIterator<Item = u32>,
    qs: impl IntoIterator<Item = u32> + Clone,
) -> Result<Vec<BoundTable>> {
    let mut rows = Vec::new();
    for n in ns {
        for q in qs.clone() {
            rows.push(BoundTable::new(n, q)?);
        }
    }
    Ok(rows)
}

/// Aligned text table.
pub fn format_text(rows: &[BoundTable]) -> String {
    let mut out = format!(
        "# upper bounds: {ASYMPTOTIC_NOTE}\n{:>4} {:>4} {:>18} {:>18} {:>18} {:>18}\n",
        "n", "q", "lower", "upper_t1", "upper_no_memory", "upper_2n"
    );
    for r in rows {
        out.push_str(&format!(
            "{:>4} {:>4} {:>18.2} {:>18.2} {:>18.2} {:>18.2}\n",
            r.n, r.q, r.lower, r.upper_t1, r.upper_no_memory, r.upper_2n
        ));
    }
    out
}

pub fn format_csv(rows: &[BoundTable]) -> String {
    let mut out = String::from("n,q,lower,upper_t1,upper_no_memory,upper_2n\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.n, r.q, r.lower, r.upper_t1, r.upper_no_memory, r.upper_2n
        ));
    }
    out
}
