//! JSON form `{"n", "r", "entries": [[alpha, beta, j, k, re, im], ...]}`,
//! 0-based, unlisted entries zero.

use std::collections::BTreeMap;

use serde::Deserialize;
use serde_json::{json, Value};

use super::CurvatureTensor;
use crate::error::{Error, Result};
use crate::linalg::c;

#[derive(Deserialize)]
struct RawTensor {
    n: usize,
    r: usize,
    entries: Vec<(usize, usize, usize, usize, f64, f64)>,
}

/// Parses a tensor, rejecting duplicates, out-of-range indices, and any entry
/// whose conjugate partner `(β, α, k, j)` is missing or not its exact conjugate.
pub fn from_json_str(text: &str) -> Result<CurvatureTensor> {
    let raw: RawTensor = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let (n, r) = (raw.n, raw.r);
    if n == 0 || r == 0 {
        return Err(Error::InvalidInput("n and r must be positive".into()));
    }
    let mut seen: BTreeMap<(usize, usize, usize, usize), (f64, f64)> = BTreeMap::new();
    for &(a, b, j, k, re, im) in &raw.entries {
        if a >= r || b >= r || j >= n || k >= n {
            return Err(Error::InvalidInput(format!("entry index ({a}, {b}, {j}, {k}) out of range")));
        }
        if !re.is_finite() || !im.is_finite() {
            return Err(Error::InvalidInput(format!("entry ({a}, {b}, {j}, {k}) is not finite")));
        }
        if seen.insert((a, b, j, k), (re, im)).is_some() {
            return Err(Error::InvalidInput(format!("duplicate entry ({a}, {b}, {j}, {k})")));
        }
    }
    for (&(a, b, j, k), &(re, im)) in &seen {
        match seen.get(&(b, a, k, j)) {
            None => {
                return Err(Error::InvalidInput(format!(
                    "entry ({a}, {b}, {j}, {k}) has no conjugate partner ({b}, {a}, {k}, {j})"
                )))
            }
            Some(&(re2, im2)) => {
                if re2 != re || im2 != -im {
                    return Err(Error::InvalidInput(format!(
                        "entry ({a}, {b}, {j}, {k}) is not hermitian-symmetric with its partner"
                    )));
                }
            }
        }
    }
    let mut t = CurvatureTensor::zeros(n, r);
    for (&(a, b, j, k), &(re, im)) in &seen {
        t.set(a, b, j, k, c(re, im));
    }
    Ok(t)
}

/// Lists every nonzero entry in index order.
pub fn to_json_value(t: &CurvatureTensor) -> Value {
    let mut entries = Vec::new();
    for a in 0..t.r() {
        for b in 0..t.r() {
            for j in 0..t.n() {
                for k in 0..t.n() {
                    let z = t.get(a, b, j, k);
                    if z.re != 0.0 || z.im != 0.0 {
                        entries.push(json!([a, b, j, k, z.re, z.im]));
                    }
                }
            }
        }
    }
    json!({ "n": t.n(), "r": t.r(), "entries": entries })
}
