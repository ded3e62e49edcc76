//! Seeded generators of curvature tensors with known positivity.

use rand::Rng;

use super::{check_ks_positive, CurvatureTensor};
use crate::error::{Error, Result};
use crate::linalg::{c, norm, C64};
use crate::rng::{complex_gaussian_vec, stream_rng};

const MAX_RETRIES: usize = 16;
const VERIFY_SAMPLES: usize = 64;

fn normalized(mut v: Vec<C64>) -> Vec<C64> {
    let nv = norm(&v);
    for z in &mut v {
        *z /= nv;
    }
    v
}

/// `sum_t c_t a_t a_t^H ⊗ b_t b_t^H` with every `b_t` supported on the first
/// `n - k` base coordinates, so the last `k` base directions are flat.
///
/// Uses `n - k + r + 1` terms, enough that the `b_t` still span after any
/// fiber vector kills `r - 1` of them. Each candidate is screened with
/// `check_ks_positive(k, 1)`; a failing candidate is redrawn from the next
/// stream.
pub fn sample_griffiths_k(n: usize, r: usize, k: usize, seed: u64) -> Result<CurvatureTensor> {
    if n == 0 || r == 0 || k >= n {
        return Err(Error::InvalidInput(format!("need 0 <= k < n and r >= 1, got n = {n}, r = {r}, k = {k}")));
    }
    let live = n - k;
    let terms = live + r + 1;
    for attempt in 0..MAX_RETRIES as u64 {
        let mut rng = stream_rng(seed, (1 << 40) + attempt);
        let mut t = CurvatureTensor::zeros(n, r);
        for _ in 0..terms {
            let weight: f64 = rng.random_range(0.5..1.5);
            let a = normalized(complex_gaussian_vec(&mut rng, r));
            let mut b = normalized(complex_gaussian_vec(&mut rng, live));
            b.resize(n, c(0.0, 0.0));
            for al in 0..r {
                for be in 0..r {
                    let fa = a[al] * a[be].conj() * weight;
                    for j in 0..live {
                        for kk in 0..live {
                            let v = t.get(al, be, j, kk) + fa * b[j] * b[kk].conj();
                            t.set(al, be, j, kk, v);
                        }
                    }
                }
            }
        }
        let t = t.symmetrized();
        let screen = check_ks_positive(&t, k, 1, VERIFY_SAMPLES, 1e-9, seed.wrapping_add(attempt))?;
        if !screen.refuted() {
            return Ok(t);
        }
    }
    Err(Error::GeneratorFailure(MAX_RETRIES))
}

/// `sum_t c_t U_t U_t^H` over `nr + 2` Gaussian tensors `U_t ∈ T ⊗ E`;
/// positive definite on `T ⊗ E` with probability one.
pub fn sample_nakano_positive(n: usize, r: usize, seed: u64) -> CurvatureTensor {
    let mut rng = stream_rng(seed, 1 << 41);
    let dim = n * r;
    let mut t = CurvatureTensor::zeros(n, r);
    for _ in 0..dim + 2 {
        let weight: f64 = rng.random_range(0.5..1.5);
        let u = normalized(complex_gaussian_vec(&mut rng, dim));
        for a in 0..r {
            for b in 0..r {
                for j in 0..n {
                    for k in 0..n {
                        let v = t.get(a, b, j, k) + u[a * n + j] * u[b * n + k].conj() * weight;
                        t.set(a, b, j, k, v);
                    }
                }
            }
        }
    }
    t.symmetrized()
}
