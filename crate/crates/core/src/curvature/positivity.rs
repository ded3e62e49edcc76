//! Restricted hermitian forms and the randomized `(k, s)`-positivity falsifier.

use serde::Serialize;

use super::CurvatureTensor;
use crate::error::{Error, Result};
use crate::linalg::{self, c, CMatrix, C64};
use crate::rng::{complex_gaussian_vec, stream_rng, GENERATOR};

/// Which factor the fixed tuple lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    /// Tuple in the fiber `E_x`; the form lives on `(T_x X)^{⊕s}`.
    FiberVectors,
    /// Tuple in `T_x X`; the form lives on `(E_x)^{⊕s}`.
    BaseVectors,
    /// No tuple: the full form on `T_x X ⊗ E_x`.
    Flattened,
    /// Coefficients of an `E`-valued `(p, q)`-form.
    FormCoefficients,
}

#[derive(Debug, Clone)]
pub struct HermitianForm {
    pub dim: usize,
    pub matrix: CMatrix,
}

impl HermitianForm {
    pub fn new(matrix: CMatrix) -> Self {
        HermitianForm { dim: matrix.nrows(), matrix }
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        linalg::hermitian_eigenvalues(&self.matrix)
    }

    pub fn eigen(&self) -> (Vec<f64>, CMatrix) {
        linalg::hermitian_eigen(&self.matrix)
    }

    pub fn hermitian_deviation(&self) -> f64 {
        linalg::hermitian_deviation(&self.matrix)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Refuted,
    NotRefuted,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Claim {
    SemipositiveKernelAtMostK { k: usize, s: usize },
    NakanoPositive,
    /// The commutator operator on `(p, q)`-forms is positive definite.
    OperatorPositiveDefinite { p: usize, q: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HypothesisStatus {
    Met,
    HypothesisUnmet,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Hypothesis {
    pub statement: String,
    pub status: HypothesisStatus,
    pub report: Box<PositivityReport>,
}

/// Complex numbers serialize as `[re, im]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub side: Side,
    pub source: String,
    pub tuple: Vec<Vec<[f64; 2]>>,
    pub eigenvector: Vec<[f64; 2]>,
    pub min_eigenvalue: f64,
    pub kernel_dim: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PositivityReport {
    pub claim: Claim,
    pub verdict: Verdict,
    pub samples_run: usize,
    pub worst_min_eigenvalue: f64,
    pub worst_kernel_dim: usize,
    pub witness: Option<Witness>,
    pub seed: Option<u64>,
    pub tolerance: f64,
    pub generator: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub margin: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hypothesis: Option<Hypothesis>,
}

impl PositivityReport {
    pub fn refuted(&self) -> bool {
        self.verdict == Verdict::Refuted
    }
}

pub(crate) fn pack(v: &[C64]) -> Vec<[f64; 2]> {
    v.iter().map(|z| [z.re, z.im]).collect()
}

pub(crate) fn unpack(v: &[[f64; 2]]) -> Vec<C64> {
    v.iter().map(|p| c(p[0], p[1])).collect()
}

/// `R(u, u)` with complex output, `u = sum_t ξ_t ⊗ v_t`.
pub fn eval_form_complex(r: &CurvatureTensor, terms: &[(Vec<C64>, Vec<C64>)]) -> Result<C64> {
    let (n, rk) = (r.n(), r.r());
    let mut u = vec![c(0.0, 0.0); rk * n];
    for (xi, v) in terms {
        if xi.len() != n || v.len() != rk {
            return Err(Error::DimensionMismatch(format!(
                "simple tensor has factors of length ({}, {}), expected ({n}, {rk})",
                xi.len(),
                v.len()
            )));
        }
        for a in 0..rk {
            for j in 0..n {
                u[a * n + j] += xi[j] * v[a];
            }
        }
    }
    let mut total = c(0.0, 0.0);
    for a in 0..rk {
        for b in 0..rk {
            for j in 0..n {
                let uaj = u[a * n + j];
                if uaj == c(0.0, 0.0) {
                    continue;
                }
                for k in 0..n {
                    total += r.get(a, b, j, k) * uaj * u[b * n + k].conj();
                }
            }
        }
    }
    Ok(total)
}

/// Real part of [`eval_form_complex`].
pub fn eval_form(r: &CurvatureTensor, terms: &[(Vec<C64>, Vec<C64>)]) -> Result<f64> {
    Ok(eval_form_complex(r, terms)?.re)
}

/// The form `w ↦ R(sum_t w_t ⊗ v_t, sum_t w_t ⊗ v_t)`, with `x^H Q x` equal to
/// that value when `x` stacks the `w_t`.
pub fn restricted_form(r: &CurvatureTensor, tuple: &[Vec<C64>], side: Side) -> Result<HermitianForm> {
    let (n, rk) = (r.n(), r.r());
    let (vlen, wdim) = match side {
        Side::FiberVectors => (rk, n),
        Side::BaseVectors => (n, rk),
        Side::Flattened | Side::FormCoefficients => {
            return Err(Error::InvalidInput("restricted_form needs a fiber or base side".into()))
        }
    };
    if tuple.is_empty() {
        return Err(Error::InvalidInput("tuple must contain at least one vector".into()));
    }
    if let Some(bad) = tuple.iter().find(|v| v.len() != vlen) {
        return Err(Error::DimensionMismatch(format!(
            "tuple vector has length {}, expected {vlen}",
            bad.len()
        )));
    }
    let s = tuple.len();
    if s > vlen {
        return Err(Error::DegenerateTuple(0.0));
    }
    let sv = linalg::singular_values(tuple);
    let smallest = *sv.last().unwrap();
    if smallest < 1e-10 {
        return Err(Error::DegenerateTuple(smallest));
    }
    let mut q = CMatrix::zeros(s * wdim, s * wdim);
    for t in 0..s {
        for t2 in 0..s {
            for x in 0..wdim {
                for y in 0..wdim {
                    let mut acc = c(0.0, 0.0);
                    match side {
                        Side::FiberVectors => {
                            // Row (t2, y = k), column (t, x = j).
                            for a in 0..rk {
                                for b in 0..rk {
                                    acc += r.get(a, b, x, y) * tuple[t][a] * tuple[t2][b].conj();
                                }
                            }
                        }
                        _ => {
                            // Row (t2, y = β), column (t, x = α).
                            for j in 0..n {
                                for k in 0..n {
                                    acc += r.get(x, y, j, k) * tuple[t][j] * tuple[t2][k].conj();
                                }
                            }
                        }
                    }
                    q[(t2 * wdim + y, t * wdim + x)] = acc;
                }
            }
        }
    }
    Ok(HermitianForm::new(q))
}

struct Sample {
    side: Side,
    source: String,
    tuple: Vec<Vec<C64>>,
}

/// Draws `s` vectors from stream `stream` and orthonormalizes them. The first
/// `s - 1` vectors of an `s`-tuple span the `(s-1)`-tuple of the same stream.
fn gaussian_tuple(seed: u64, stream: u64, len: usize, s: usize) -> Option<Vec<Vec<C64>>> {
    let mut rng = stream_rng(seed, stream);
    let raw: Vec<Vec<C64>> = (0..s).map(|_| complex_gaussian_vec(&mut rng, len)).collect();
    linalg::orthonormalize(&raw)
}

/// Cyclic windows of standard basis vectors `(e_a, e_{a+1}, ..., e_{a+s-1})`.
fn coordinate_tuple(len: usize, start: usize, s: usize) -> Vec<Vec<C64>> {
    (0..s)
        .map(|t| {
            let mut v = vec![c(0.0, 0.0); len];
            v[(start + t) % len] = c(1.0, 0.0);
            v
        })
        .collect()
}

/// Randomized falsifier for `(k, s)`-positivity.
///
/// Each side is swept with `samples` orthonormalized Gaussian tuples drawn
/// from stream `2i` (fiber) and `2i + 1` (base). The fiber side also gets `r`
/// deterministic coordinate windows, since kernel jumps sit on measure-zero
/// loci that Gaussian draws never hit. The base side is skipped when `s > n`.
pub fn check_ks_positive(
    r: &CurvatureTensor,
    k: usize,
    s: usize,
    samples: usize,
    tol: f64,
    seed: u64,
) -> Result<PositivityReport> {
    let (n, rk) = (r.n(), r.r());
    if s < 1 || s > rk {
        return Err(Error::InvalidInput(format!("tuple size s = {s} must satisfy 1 <= s <= r = {rk}")));
    }
    if samples < 1 {
        return Err(Error::InvalidInput("samples must be at least 1".into()));
    }
    let mut plan: Vec<Sample> = (0..rk)
        .map(|a| Sample {
            side: Side::FiberVectors,
            source: format!("coordinate_window:{a}"),
            tuple: coordinate_tuple(rk, a, s),
        })
        .collect();
    for i in 0..samples as u64 {
        if let Some(tuple) = gaussian_tuple(seed, 2 * i, rk, s) {
            plan.push(Sample { side: Side::FiberVectors, source: format!("gaussian:{i}"), tuple });
        }
        if s <= n {
            if let Some(tuple) = gaussian_tuple(seed, 2 * i + 1, n, s) {
                plan.push(Sample { side: Side::BaseVectors, source: format!("gaussian:{i}"), tuple });
            }
        }
    }

    let mut worst_min = f64::INFINITY;
    let mut worst_kernel = 0usize;
    let mut witness: Option<Witness> = None;
    let mut refuted = false;
    let mut run = 0usize;
    for sample in plan {
        let form = match restricted_form(r, &sample.tuple, sample.side) {
            Ok(f) => f,
            Err(Error::DegenerateTuple(_)) => continue,
            Err(e) => return Err(e),
        };
        run += 1;
        let (vals, vecs) = form.eigen();
        let min = vals[0];
        let kernel = vals.iter().filter(|&&x| x < tol).count();
        let violates = min < -tol || kernel > k;
        worst_kernel = worst_kernel.max(kernel);
        let better = match &witness {
            None => true,
            Some(_) if refuted => false,
            Some(_) => violates || min < worst_min,
        };
        worst_min = worst_min.min(min);
        if better {
            witness = Some(Witness {
                side: sample.side,
                source: sample.source,
                tuple: sample.tuple.iter().map(|v| pack(v)).collect(),
                eigenvector: pack(&linalg::column(&vecs, 0)),
                min_eigenvalue: min,
                kernel_dim: kernel,
            });
        }
        refuted |= violates;
    }
    Ok(PositivityReport {
        claim: Claim::SemipositiveKernelAtMostK { k, s },
        verdict: if refuted { Verdict::Refuted } else { Verdict::NotRefuted },
        samples_run: run,
        worst_min_eigenvalue: worst_min,
        worst_kernel_dim: worst_kernel,
        witness,
        seed: Some(seed),
        tolerance: tol,
        generator: GENERATOR.to_string(),
        margin: None,
        hypothesis: None,
    })
}

/// Exact Nakano check: eigenvalues of the flattened `(nr) x (nr)` form.
/// Refuted when the smallest eigenvalue is at most `tol`.
pub fn check_nakano(r: &CurvatureTensor, tol: f64) -> PositivityReport {
    let (vals, vecs) = linalg::hermitian_eigen(&r.flattened());
    let min = vals.first().copied().unwrap_or(f64::INFINITY);
    let kernel = vals.iter().filter(|&&x| x < tol).count();
    PositivityReport {
        claim: Claim::NakanoPositive,
        verdict: if min <= tol { Verdict::Refuted } else { Verdict::NotRefuted },
        samples_run: 1,
        worst_min_eigenvalue: min,
        worst_kernel_dim: kernel,
        witness: (!vals.is_empty()).then(|| Witness {
            side: Side::Flattened,
            source: "exact".into(),
            tuple: Vec::new(),
            eigenvector: pack(&linalg::column(&vecs, 0)),
            min_eigenvalue: min,
            kernel_dim: kernel,
        }),
        seed: None,
        tolerance: tol,
        generator: "exact".into(),
        margin: None,
        hypothesis: None,
    }
}

/// Re-evaluates the witness of a `(k, s)` report; true when it still violates the claim.
pub fn reproduce_witness(r: &CurvatureTensor, report: &PositivityReport) -> Result<bool> {
    let Some(w) = &report.witness else { return Ok(false) };
    let tol = report.tolerance;
    match report.claim {
        Claim::SemipositiveKernelAtMostK { k, .. } => {
            let tuple: Vec<Vec<C64>> = w.tuple.iter().map(|v| unpack(v)).collect();
            let vals = restricted_form(r, &tuple, w.side)?.eigenvalues();
            let kernel = vals.iter().filter(|&&x| x < tol).count();
            Ok(vals[0] < -tol || kernel > k)
        }
        Claim::NakanoPositive => {
            let x = unpack(&w.eigenvector);
            let m = r.flattened();
            let xv = nalgebra::DVector::from_vec(x);
            let val = (xv.adjoint() * &m * &xv)[(0, 0)].re;
            Ok(val <= tol)
        }
        Claim::OperatorPositiveDefinite { p, q } => {
            let x = nalgebra::DVector::from_vec(unpack(&w.eigenvector));
            let m = crate::bkn::bkn_matrix(r, p, q)?.matrix;
            if m.nrows() != x.len() {
                return Err(Error::DimensionMismatch("witness does not match the form basis".into()));
            }
            let val = (x.adjoint() * &m * &x)[(0, 0)].re;
            Ok(val <= tol)
        }
    }
}
