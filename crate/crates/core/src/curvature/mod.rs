//! Curvature tensors `R[α][β][j][k]` at a point, in normal frames.

mod io;
mod positivity;
mod samples;

pub use io::{from_json_str, to_json_value};
pub use positivity::{
    check_ks_positive, check_nakano, eval_form, eval_form_complex, reproduce_witness,
    restricted_form, Claim, HermitianForm, Hypothesis, HypothesisStatus, PositivityReport, Side,
    Verdict, Witness,
};
pub use samples::{sample_griffiths_k, sample_nakano_positive};
pub(crate) use positivity::pack;

use crate::error::{Error, Result};
use crate::linalg::{c, CMatrix, C64};

/// Indices: fiber pair `(α, β)` in `0..r`, base pair `(j, k)` in `0..n`.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureTensor {
    n: usize,
    r: usize,
    entries: Vec<C64>,
}

impl CurvatureTensor {
    pub fn zeros(n: usize, r: usize) -> Self {
        CurvatureTensor { n, r, entries: vec![C64::new(0.0, 0.0); r * r * n * n] }
    }

    pub fn from_fn(n: usize, r: usize, mut f: impl FnMut(usize, usize, usize, usize) -> C64) -> Self {
        let mut t = Self::zeros(n, r);
        for a in 0..r {
            for b in 0..r {
                for j in 0..n {
                    for k in 0..n {
                        let i = t.idx(a, b, j, k);
                        t.entries[i] = f(a, b, j, k);
                    }
                }
            }
        }
        t
    }

    /// `δ_{αβ} δ_{jk}`.
    pub fn identity_like(n: usize, r: usize) -> Self {
        Self::from_fn(n, r, |a, b, j, k| c(((a == b) && (j == k)) as u8 as f64, 0.0))
    }

    /// Diagonal line-bundle tensor with `R[0][0][j][j] = nu_j`.
    pub fn diagonal_line(nu: &[f64]) -> Self {
        let n = nu.len();
        Self::from_fn(n, 1, |_, _, j, k| c(if j == k { nu[j] } else { 0.0 }, 0.0))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    #[inline]
    fn idx(&self, a: usize, b: usize, j: usize, k: usize) -> usize {
        ((a * self.r + b) * self.n + j) * self.n + k
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize, j: usize, k: usize) -> C64 {
        self.entries[self.idx(a, b, j, k)]
    }

    pub fn set(&mut self, a: usize, b: usize, j: usize, k: usize, v: C64) {
        let i = self.idx(a, b, j, k);
        self.entries[i] = v;
    }

    /// Largest `|R[α][β][j][k] - conj(R[β][α][k][j])|`.
    pub fn hermitian_deviation(&self) -> f64 {
        let mut worst = 0.0f64;
        for a in 0..self.r {
            for b in 0..self.r {
                for j in 0..self.n {
                    for k in 0..self.n {
                        let d = self.get(a, b, j, k) - self.get(b, a, k, j).conj();
                        worst = worst.max(d.norm());
                    }
                }
            }
        }
        worst
    }

    /// `(R + R^*) / 2`, exactly hermitian-symmetric.
    pub fn symmetrized(&self) -> Self {
        Self::from_fn(self.n, self.r, |a, b, j, k| (self.get(a, b, j, k) + self.get(b, a, k, j).conj()) * 0.5)
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn scale(&self, s: f64) -> Self {
        CurvatureTensor { n: self.n, r: self.r, entries: self.entries.iter().map(|z| z * s).collect() }
    }

    pub fn add(&self, other: &CurvatureTensor) -> Result<Self> {
        if self.n != other.n || self.r != other.r {
            return Err(Error::DimensionMismatch(format!(
                "cannot add tensors of shape ({}, {}) and ({}, {})",
                self.n, self.r, other.n, other.r
            )));
        }
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect();
        Ok(CurvatureTensor { n: self.n, r: self.r, entries })
    }

    /// The `(nr) x (nr)` matrix `M` with `x^H M x = R(u, u)` for `x_{(α,j)} = u^{αj}`.
    pub fn flattened(&self) -> CMatrix {
        let (n, r) = (self.n, self.r);
        CMatrix::from_fn(n * r, n * r, |row, col| {
            let (b, k) = (row / n, row % n);
            let (a, j) = (col / n, col % n);
            self.get(a, b, j, k)
        })
    }
}

/// `R'[α][β][j][k] = -R[β][α][j][k]`, the curvature of the dual bundle.
pub fn dual_curvature(r: &CurvatureTensor) -> CurvatureTensor {
    CurvatureTensor::from_fn(r.n, r.r, |a, b, j, k| -r.get(b, a, j, k))
}

/// Curvature of `E ⊗ F`; fiber index `(a, b)` flattens to `a * r_F + b`.
pub fn tensor_curvature(re: &CurvatureTensor, rf: &CurvatureTensor) -> Result<CurvatureTensor> {
    if re.n != rf.n {
        return Err(Error::DimensionMismatch(format!(
            "base dimensions differ: {} vs {}",
            re.n, rf.n
        )));
    }
    let (ra, rb) = (re.r, rf.r);
    Ok(CurvatureTensor::from_fn(re.n, ra * rb, |x, y, j, k| {
        let (a, b) = (x / rb, x % rb);
        let (a2, b2) = (y / rb, y % rb);
        let mut v = c(0.0, 0.0);
        if b == b2 {
            v += re.get(a, a2, j, k);
        }
        if a == a2 {
            v += rf.get(b, b2, j, k);
        }
        v
    }))
}

/// Trace over the fiber: entry `(j, k)` is `sum_α R[α][α][j][k]`.
pub fn det_curvature(r: &CurvatureTensor) -> CMatrix {
    CMatrix::from_fn(r.n, r.n, |j, k| (0..r.r).map(|a| r.get(a, a, j, k)).sum())
}

/// `R + m δ_{αβ} Tr R`, the curvature of `E ⊗ (det E)^m`.
pub fn twist_det(r: &CurvatureTensor, m: i64) -> CurvatureTensor {
    let d = det_curvature(r);
    CurvatureTensor::from_fn(r.n, r.r, |a, b, j, k| {
        let mut v = r.get(a, b, j, k);
        if a == b {
            v += d[(j, k)] * m as f64;
        }
        v
    })
}

/// `s δ_{αβ} Tr R - R[β][α]`, the curvature of `E^* ⊗ (det E)^s`.
pub fn dual_twist(r: &CurvatureTensor, s: i64) -> CurvatureTensor {
    let d = det_curvature(r);
    CurvatureTensor::from_fn(r.n, r.r, |a, b, j, k| {
        let mut v = -r.get(b, a, j, k);
        if a == b {
            v += d[(j, k)] * s as f64;
        }
        v
    })
}

/// Pullback along a differential `jac` with `n` rows (target) and `m` columns (source).
pub fn pullback_curvature(r: &CurvatureTensor, jac: &CMatrix) -> Result<CurvatureTensor> {
    if jac.nrows() != r.n {
        return Err(Error::DimensionMismatch(format!(
            "jacobian has {} rows but base dimension is {}",
            jac.nrows(),
            r.n
        )));
    }
    let m = jac.ncols();
    Ok(CurvatureTensor::from_fn(m, r.r, |a, b, x, y| {
        let mut v = c(0.0, 0.0);
        for j in 0..r.n {
            for k in 0..r.n {
                v += r.get(a, b, j, k) * jac[(j, x)] * jac[(k, y)].conj();
            }
        }
        v
    }))
}

/// Tangent bundle of the Grassmannian of codimension-`d` subspaces of `C^n`.
/// Indices are pairs `(i, r)` flattened to `i * (n - d) + r`.
pub fn grassmannian_curvature(n: usize, d: usize) -> Result<CurvatureTensor> {
    if d < 1 || d + 1 > n {
        return Err(Error::InvalidInput(format!("need 1 <= d <= n - 1, got n = {n}, d = {d}")));
    }
    let w = n - d;
    let dim = d * w;
    let split = |x: usize| (x / w, x % w);
    Ok(CurvatureTensor::from_fn(dim, dim, |alpha, beta, jj, kk| {
        // Base pair (i r, j s), fiber pair (k t, l u).
        let (i, r) = split(jj);
        let (j, s) = split(kk);
        let (k, t) = split(alpha);
        let (l, u) = split(beta);
        let first = i == j && k == l && r == u && s == t;
        let second = i == l && j == k && r == s && t == u;
        c(first as u8 as f64 + second as u8 as f64, 0.0)
    }))
}

#[cfg(test)]
mod tests;
