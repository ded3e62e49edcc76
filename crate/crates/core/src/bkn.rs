//! The pointwise commutator `[iΘ, Λ]` on `E`-valued `(p, q)`-form
//! coefficients in normal frames.

use itertools::Itertools;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::curvature::{
    check_ks_positive, check_nakano, Claim, CurvatureTensor, Hypothesis, HypothesisStatus,
    PositivityReport, Side, Verdict, Witness,
};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};

/// Basis `(J, K, α)` of `E`-valued `(p, q)`-forms in lexicographic order,
/// with `J`, `K` strictly increasing and 0-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FormBasis {
    pub n: usize,
    pub p: usize,
    pub q: usize,
    pub r: usize,
    #[serde(skip)]
    p_subsets: Vec<Vec<usize>>,
    #[serde(skip)]
    q_subsets: Vec<Vec<usize>>,
}

impl FormBasis {
    pub fn new(n: usize, p: usize, q: usize, r: usize) -> Result<Self> {
        if p > n || q > n {
            return Err(Error::InvalidInput(format!("form degrees ({p}, {q}) exceed n = {n}")));
        }
        Ok(FormBasis {
            n,
            p,
            q,
            r,
            p_subsets: (0..n).combinations(p).collect(),
            q_subsets: (0..n).combinations(q).collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.p_subsets.len() * self.q_subsets.len() * self.r
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn p_subsets(&self) -> &[Vec<usize>] {
        &self.p_subsets
    }

    pub fn q_subsets(&self) -> &[Vec<usize>] {
        &self.q_subsets
    }

    /// Position of `(J, K, α)` given the ranks of `J` and `K` among the subsets.
    fn position(&self, ji: usize, ki: usize, alpha: usize) -> usize {
        (ji * self.q_subsets.len() + ki) * self.r + alpha
    }

    pub fn element(&self, idx: usize) -> (&[usize], &[usize], usize) {
        let alpha = idx % self.r;
        let rest = idx / self.r;
        let nk = self.q_subsets.len();
        (&self.p_subsets[rest / nk], &self.q_subsets[rest % nk], alpha)
    }

    /// Rank of a sorted subset among the `size`-subsets of `0..n`.
    fn subset_rank(&self, set: &[usize]) -> usize {
        let list = if set.len() == self.p { &self.p_subsets } else { &self.q_subsets };
        list.binary_search_by(|x| x.as_slice().cmp(set)).expect("subset of the right size")
    }
}

#[derive(Debug, Clone)]
pub struct BknOperator {
    pub basis: FormBasis,
    pub matrix: CMatrix,
}

impl BknOperator {
    pub fn eigenvalues(&self) -> Vec<f64> {
        linalg::hermitian_eigenvalues(&self.matrix)
    }
}

/// Inserts `x` into the sorted set `rest`; returns the sorted set and the sign
/// of the permutation taking `(x, rest...)` to sorted order.
fn insert_signed(x: usize, rest: &[usize]) -> Option<(Vec<usize>, f64)> {
    if rest.contains(&x) {
        return None;
    }
    let before = rest.iter().filter(|&&y| y < x).count();
    let mut set = rest.to_vec();
    set.insert(before, x);
    Some((set, if before % 2 == 0 { 1.0 } else { -1.0 }))
}

/// The hermitian matrix `M` over [`FormBasis`] with `u^H M u` equal to
///
/// `Σ R_{αβjk} u^α_{kR,K} conj(u^β_{jR,K}) + Σ R_{αβjk} u^α_{J,jS} conj(u^β_{J,kS})
///  - Σ R_{αβjj} u^α_{J,K} conj(u^β_{J,K})`.
pub fn bkn_matrix(rt: &CurvatureTensor, p: usize, q: usize) -> Result<BknOperator> {
    let (n, r) = (rt.n(), rt.r());
    let basis = FormBasis::new(n, p, q, r)?;
    let dim = basis.len();
    let mut m = CMatrix::zeros(dim, dim);

    // Holomorphic slot: J = {k} ∪ R for the source, {j} ∪ R for the target.
    if p >= 1 {
        for rs in (0..n).combinations(p - 1) {
            let ins: Vec<_> = (0..n)
                .map(|x| insert_signed(x, &rs).map(|(set, sg)| (basis.subset_rank(&set), sg)))
                .collect();
            for ki in 0..basis.q_subsets.len() {
                for (j, tj) in ins.iter().enumerate() {
                    let Some((jr, sj)) = *tj else { continue };
                    for (k, tk) in ins.iter().enumerate() {
                        let Some((kr, sk)) = *tk else { continue };
                        let sign = sj * sk;
                        for a in 0..r {
                            for b in 0..r {
                                let x = basis.position(kr, ki, a);
                                let y = basis.position(jr, ki, b);
                                m[(y, x)] += rt.get(a, b, j, k) * sign;
                            }
                        }
                    }
                }
            }
        }
    }

    // Antiholomorphic slot: K = {j} ∪ S for the source, {k} ∪ S for the target.
    if q >= 1 {
        for ss in (0..n).combinations(q - 1) {
            let ins: Vec<_> = (0..n)
                .map(|x| {
                    insert_signed(x, &ss).map(|(set, sg)| {
                        let list = &basis.q_subsets;
                        (list.binary_search(&set).expect("q-subset"), sg)
                    })
                })
                .collect();
            for ji in 0..basis.p_subsets.len() {
                for (j, tj) in ins.iter().enumerate() {
                    let Some((jr, sj)) = *tj else { continue };
                    for (k, tk) in ins.iter().enumerate() {
                        let Some((kr, sk)) = *tk else { continue };
                        let sign = sj * sk;
                        for a in 0..r {
                            for b in 0..r {
                                let x = basis.position(ji, jr, a);
                                let y = basis.position(ji, kr, b);
                                m[(y, x)] += rt.get(a, b, j, k) * sign;
                            }
                        }
                    }
                }
            }
        }
    }

    // Trace term.
    for ji in 0..basis.p_subsets.len() {
        for ki in 0..basis.q_subsets.len() {
            for a in 0..r {
                for b in 0..r {
                    let tr: crate::linalg::C64 = (0..n).map(|j| rt.get(a, b, j, j)).sum();
                    m[(basis.position(ji, ki, b), basis.position(ji, ki, a))] -= tr;
                }
            }
        }
    }
    Ok(BknOperator { basis, matrix: m })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LineSpectrum {
    /// One eigenvalue per `(J, K)` in lexicographic order.
    pub eigenvalues: Vec<f64>,
    /// Sum of the `p` and the `q` smallest ratios minus the total.
    pub lower_bound: f64,
}

/// Eigenvalues `Σ_{J} ν/μ + Σ_{K} ν/μ - Σ ν/μ` of the commutator for a line
/// bundle with curvature eigenvalues `ν` relative to base eigenvalues `μ`.
pub fn bkn_line_eigenvalues(nu: &[f64], mu: &[f64], p: usize, q: usize) -> Result<LineSpectrum> {
    let n = nu.len();
    if mu.len() != n {
        return Err(Error::DimensionMismatch(format!("nu has {} entries, mu has {}", n, mu.len())));
    }
    if let Some(bad) = mu.iter().find(|x| x.is_nan() || **x <= 0.0) {
        return Err(Error::InvalidInput(format!("base eigenvalues must be positive, got {bad}")));
    }
    if p > n || q > n {
        return Err(Error::InvalidInput(format!("form degrees ({p}, {q}) exceed n = {n}")));
    }
    let ratio: Vec<f64> = nu.iter().zip(mu).map(|(a, b)| a / b).collect();
    let total: f64 = ratio.iter().sum();
    let mut eigenvalues = Vec::new();
    for jset in (0..n).combinations(p) {
        let sj: f64 = jset.iter().map(|&j| ratio[j]).sum();
        for kset in (0..n).combinations(q) {
            let sk: f64 = kset.iter().map(|&k| ratio[k]).sum();
            eigenvalues.push(sj + sk - total);
        }
    }
    let mut sorted = ratio.clone();
    sorted.sort_by(f64::total_cmp);
    let lower_bound = sorted[..p].iter().sum::<f64>() + sorted[..q].iter().sum::<f64>() - total;
    Ok(LineSpectrum { eigenvalues, lower_bound })
}

/// Largest deviation between the spectrum of [`bkn_matrix`] on the diagonal
/// line tensor `ν_j / μ_j` and the closed form of [`bkn_line_eigenvalues`].
pub fn crosscheck_line(nu: &[f64], mu: &[f64], p: usize, q: usize) -> Result<f64> {
    let mut closed = bkn_line_eigenvalues(nu, mu, p, q)?.eigenvalues;
    let ratio: Vec<f64> = nu.iter().zip(mu).map(|(a, b)| a / b).collect();
    let mut spectrum = bkn_matrix(&CurvatureTensor::diagonal_line(&ratio), p, q)?.eigenvalues();
    closed.sort_by(f64::total_cmp);
    spectrum.sort_by(f64::total_cmp);
    Ok(closed.iter().zip(&spectrum).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrosscheckSummary {
    pub n: usize,
    pub samples: usize,
    pub seed: u64,
    pub generator: &'static str,
    pub max_deviation: f64,
    /// `(p, q)` and sample index of the largest deviation.
    pub worst: (usize, usize, usize),
}

/// Runs [`crosscheck_line`] for every `(p, q)` on `samples` draws of `ν`
/// standard normal and `μ` uniform in `[0.5, 2)`; draw `i` uses stream `i`.
pub fn crosscheck_random(n: usize, samples: usize, seed: u64) -> Result<CrosscheckSummary> {
    if n == 0 {
        return Err(Error::InvalidInput("base dimension must be at least 1".into()));
    }
    let mut max_deviation = 0.0;
    let mut worst = (0, 0, 0);
    for i in 0..samples {
        let mut rng = crate::rng::stream_rng(seed, i as u64);
        let nu: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        let mu: Vec<f64> = (0..n).map(|_| rng.random_range(0.5..2.0)).collect();
        for p in 0..=n {
            for q in 0..=n {
                let d = crosscheck_line(&nu, &mu, p, q)?;
                if d > max_deviation {
                    max_deviation = d;
                    worst = (p, q, i);
                }
            }
        }
    }
    Ok(CrosscheckSummary { n, samples, seed, generator: crate::rng::GENERATOR, max_deviation, worst })
}

fn operator_report(rt: &CurvatureTensor, p: usize, q: usize, tol: f64, hypothesis: Hypothesis) -> Result<PositivityReport> {
    let op = bkn_matrix(rt, p, q)?;
    let (vals, vecs) = linalg::hermitian_eigen(&op.matrix);
    let min = vals.first().copied().unwrap_or(f64::INFINITY);
    let kernel = vals.iter().filter(|&&x| x < tol).count();
    let met = hypothesis.status == HypothesisStatus::Met;
    Ok(PositivityReport {
        claim: Claim::OperatorPositiveDefinite { p, q },
        verdict: if met && min <= tol { Verdict::Refuted } else { Verdict::NotRefuted },
        samples_run: 1,
        worst_min_eigenvalue: min,
        worst_kernel_dim: kernel,
        witness: (!vals.is_empty()).then(|| Witness {
            side: Side::FormCoefficients,
            source: "exact".into(),
            tuple: Vec::new(),
            eigenvector: crate::curvature::pack(&linalg::column(&vecs, 0)),
            min_eigenvalue: min,
            kernel_dim: kernel,
        }),
        seed: None,
        tolerance: tol,
        generator: "exact".into(),
        margin: Some(min),
        hypothesis: Some(hypothesis),
    })
}

/// Positivity of the commutator on `(n, q)`-forms, gated on Nakano positivity
/// of `R`. A failed gate is recorded as an unmet hypothesis, not a refutation.
pub fn check_nakano_pointwise(rt: &CurvatureTensor, q: usize, tol: f64) -> Result<PositivityReport> {
    let n = rt.n();
    if q < 1 || q > n {
        return Err(Error::InvalidInput(format!("need 1 <= q <= n = {n}, got q = {q}")));
    }
    let gate = check_nakano(rt, tol);
    let hypothesis = Hypothesis {
        statement: "curvature is Nakano positive".into(),
        status: if gate.refuted() { HypothesisStatus::HypothesisUnmet } else { HypothesisStatus::Met },
        report: Box::new(gate),
    };
    operator_report(rt, n, q, tol, hypothesis)
}

/// Positivity of the commutator on `(n, q)`-forms for `q > k`, gated on
/// `(k, min(n - q + 1, r))`-positivity of `R` checked by sampling.
pub fn check_ks_pointwise(
    rt: &CurvatureTensor,
    k: usize,
    q: usize,
    samples: usize,
    tol: f64,
    seed: u64,
) -> Result<PositivityReport> {
    let n = rt.n();
    if q <= k {
        return Err(Error::Precondition(format!("need q > k, got q = {q}, k = {k}")));
    }
    if q > n {
        return Err(Error::InvalidInput(format!("need q <= n = {n}, got q = {q}")));
    }
    let s = (n - q + 1).min(rt.r());
    let gate = check_ks_positive(rt, k, s, samples, tol, seed)?;
    let hypothesis = Hypothesis {
        statement: format!("curvature is ({k}, {s})-positive"),
        status: if gate.refuted() { HypothesisStatus::HypothesisUnmet } else { HypothesisStatus::Met },
        report: Box::new(gate),
    };
    operator_report(rt, n, q, tol, hypothesis)
}
