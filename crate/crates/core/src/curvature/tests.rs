use super::*;
use crate::linalg::{hermitian_eigenvalues, C64};
use crate::rng::{complex_gaussian_vec, stream_rng};
use proptest::prelude::*;

fn e(len: usize, i: usize) -> Vec<C64> {
    let mut v = vec![c(0.0, 0.0); len];
    v[i] = c(1.0, 0.0);
    v
}

fn unit(mut v: Vec<C64>) -> Vec<C64> {
    let nv = crate::linalg::norm(&v);
    v.iter_mut().for_each(|z| *z /= nv);
    v
}

fn kernel(vals: &[f64], tol: f64) -> usize {
    vals.iter().filter(|&&x| x < tol).count()
}

/// Closed form `|ξ v^H|^2 + |v^H ξ|^2` for `d x (n-d)` matrices stored row-major.
fn grassmannian_closed_form(xi: &[C64], v: &[C64], d: usize, w: usize) -> f64 {
    let mut total = 0.0;
    for i in 0..d {
        for j in 0..d {
            let s: C64 = (0..w).map(|r| xi[i * w + r] * v[j * w + r].conj()).sum();
            total += s.norm_sqr();
        }
    }
    for r in 0..w {
        for s in 0..w {
            let z: C64 = (0..d).map(|i| xi[i * w + r] * v[i * w + s].conj()).sum();
            total += z.norm_sqr();
        }
    }
    total
}

#[test]
fn grassmannian_small_cases() {
    let g = grassmannian_curvature(2, 1).unwrap();
    assert_eq!((g.n(), g.r()), (1, 1));
    assert_eq!(g.get(0, 0, 0, 0), c(2.0, 0.0));
    let g = grassmannian_curvature(4, 2).unwrap();
    assert_eq!(g.hermitian_deviation(), 0.0);
    let val = eval_form(&g, &[(e(4, 0), e(4, 0))]).unwrap();
    assert_eq!(val, 2.0);
    assert!(grassmannian_curvature(3, 0).is_err());
    assert!(grassmannian_curvature(3, 3).is_err());
}

#[test]
fn eval_form_of_zero_tensor_is_zero() {
    let g = grassmannian_curvature(4, 2).unwrap();
    assert_eq!(eval_form(&g, &[(vec![c(0.0, 0.0); 4], e(4, 1))]).unwrap(), 0.0);
    assert!(eval_form(&g, &[(e(3, 0), e(4, 0))]).is_err());
}

#[test]
fn restricted_form_at_matrix_unit() {
    let g = grassmannian_curvature(4, 2).unwrap();
    let form = restricted_form(&g, &[e(4, 0)], Side::FiberVectors).unwrap();
    assert_eq!(form.dim, 4);
    let (vals, vecs) = form.eigen();
    assert!(vals[0].abs() < 1e-12 && vals[1] > 0.5);
    // Kernel spanned by the (2,2) matrix unit, flattened index 3.
    assert!((vecs[(3, 0)].norm() - 1.0).abs() < 1e-12);
}

#[test]
fn restricted_form_identity_tuple() {
    let id = CurvatureTensor::identity_like(3, 2);
    let tuple = vec![e(2, 0), e(2, 1)];
    let q = restricted_form(&id, &tuple, Side::FiberVectors).unwrap();
    assert_eq!(q.matrix, crate::linalg::CMatrix::identity(6, 6));
}

#[test]
fn restricted_form_scaling_and_degeneracy() {
    let g = grassmannian_curvature(4, 2).unwrap();
    let v = unit(complex_gaussian_vec(&mut stream_rng(1, 0), 4));
    let scaled: Vec<C64> = v.iter().map(|z| z * c(0.0, 3.0)).collect();
    let a = restricted_form(&g, std::slice::from_ref(&v), Side::FiberVectors).unwrap().eigenvalues();
    let b = restricted_form(&g, &[scaled], Side::FiberVectors).unwrap().eigenvalues();
    for (x, y) in a.iter().zip(&b) {
        assert!((9.0 * x - y).abs() < 1e-10);
    }
    let twice = vec![v.clone(), v.iter().map(|z| z * 2.0).collect()];
    assert!(matches!(restricted_form(&g, &twice, Side::FiberVectors), Err(Error::DegenerateTuple(_))));
}

#[test]
fn grassmannian_positivity_examples() {
    for &(n, d) in &[(4usize, 2usize), (5, 2), (5, 3)] {
        let g = grassmannian_curvature(n, d).unwrap();
        let k = (d - 1) * (n - d - 1);
        let rep = check_ks_positive(&g, k, 1, 100, 1e-9, 0).unwrap();
        assert_eq!(rep.verdict, Verdict::NotRefuted, "({n},{d})");
        let rep = check_ks_positive(&g, k - 1, 1, 100, 1e-9, 0).unwrap();
        assert_eq!(rep.verdict, Verdict::Refuted, "({n},{d})");
        assert!(reproduce_witness(&g, &rep).unwrap());
    }
}

#[test]
fn zero_tensor_is_not_refuted_at_full_kernel() {
    let z = CurvatureTensor::zeros(3, 2);
    for s in 1..=2 {
        let rep = check_ks_positive(&z, 3 * s, s, 20, 1e-9, 5).unwrap();
        assert_eq!(rep.verdict, Verdict::NotRefuted);
    }
    assert!(check_ks_positive(&z, 0, 3, 5, 1e-9, 0).is_err());
}

#[test]
fn nakano_examples() {
    let id = CurvatureTensor::identity_like(2, 3);
    let rep = check_nakano(&id, 1e-9);
    assert_eq!(rep.verdict, Verdict::NotRefuted);
    assert!((rep.worst_min_eigenvalue - 1.0).abs() < 1e-12);

    let p = grassmannian_curvature(4, 1).unwrap();
    let rep = check_nakano(&p, 1e-9);
    assert_eq!(rep.verdict, Verdict::Refuted);
    assert!(rep.worst_min_eigenvalue.abs() < 1e-9);

    let neg = id.scale(-1.0);
    let rep = check_nakano(&neg, 1e-9);
    assert_eq!(rep.verdict, Verdict::Refuted);
    assert!((rep.worst_min_eigenvalue + 1.0).abs() < 1e-12);
    assert!(reproduce_witness(&neg, &rep).unwrap());
    assert_eq!(check_nakano(&dual_curvature(&id), 1e-9).verdict, Verdict::Refuted);
}

#[test]
fn dual_and_det_identities() {
    let t = sample_griffiths_k(3, 2, 1, 4).unwrap();
    assert_eq!(dual_curvature(&dual_curvature(&t)), t);
    let d1 = det_curvature(&dual_curvature(&t));
    let d0 = det_curvature(&t);
    assert!((d1 + d0).norm() < 1e-14);
    assert_eq!(dual_twist(&t, 0), dual_curvature(&t));
    assert_eq!(twist_det(&t, 0), t);
}

#[test]
fn det_of_projective_tangent() {
    for n in 2..6 {
        let p = grassmannian_curvature(n, 1).unwrap();
        let d = det_curvature(&p);
        for j in 0..n - 1 {
            for k in 0..n - 1 {
                let want = if j == k { n as f64 } else { 0.0 };
                assert_eq!(d[(j, k)], c(want, 0.0));
            }
        }
    }
    let id = CurvatureTensor::identity_like(3, 4);
    assert_eq!(det_curvature(&id), crate::linalg::CMatrix::identity(3, 3).scale(4.0));
}

#[test]
fn twist_and_dual_twist_on_identity() {
    let id = CurvatureTensor::identity_like(2, 3);
    let t = twist_det(&id, 1);
    assert_eq!(t, CurvatureTensor::identity_like(2, 3).scale(4.0));
    let dt = dual_twist(&id, 1);
    let vals = hermitian_eigenvalues(&dt.flattened());
    assert!(vals.iter().all(|&x| (x - 2.0).abs() < 1e-12));
}

#[test]
fn tensor_product_rules() {
    let e_ = sample_griffiths_k(3, 2, 0, 1).unwrap();
    let triv = CurvatureTensor::zeros(3, 1);
    assert_eq!(tensor_curvature(&e_, &triv).unwrap(), e_);
    let id2 = CurvatureTensor::identity_like(2, 2);
    let id3 = CurvatureTensor::identity_like(2, 3);
    let prod = tensor_curvature(&id2, &id3).unwrap();
    let min = hermitian_eigenvalues(&prod.flattened())[0];
    assert!((min - 2.0).abs() < 1e-12);
    let f = sample_griffiths_k(3, 3, 1, 2).unwrap();
    let tf = tensor_curvature(&e_, &f).unwrap();
    let lhs = det_curvature(&tf);
    let rhs = det_curvature(&e_).scale(3.0) + det_curvature(&f).scale(2.0);
    assert!((lhs - rhs).norm() < 1e-12);
    assert!(tensor_curvature(&e_, &CurvatureTensor::zeros(2, 1)).is_err());
}

#[test]
fn grassmannian_self_tensor_is_griffiths_one_positive() {
    let g = grassmannian_curvature(4, 2).unwrap();
    let gg = tensor_curvature(&g, &g).unwrap();
    let rep = check_ks_positive(&gg, 1, 1, 100, 1e-9, 0).unwrap();
    assert_eq!(rep.verdict, Verdict::NotRefuted);
}

#[test]
fn pullback_examples() {
    let t = sample_griffiths_k(3, 2, 0, 9).unwrap();
    let id = crate::linalg::CMatrix::identity(3, 3);
    assert_eq!(pullback_curvature(&t, &id).unwrap(), t);
    let zero = crate::linalg::CMatrix::zeros(3, 2);
    assert_eq!(pullback_curvature(&t, &zero).unwrap(), CurvatureTensor::zeros(2, 2));
    assert!(pullback_curvature(&t, &crate::linalg::CMatrix::zeros(2, 2)).is_err());
}

#[test]
fn pullback_adds_kernel_for_submersion() {
    let t = sample_griffiths_k(3, 2, 0, 11).unwrap();
    let jac = crate::linalg::CMatrix::from_fn(3, 4, |i, j| c((i == j) as u8 as f64, 0.0));
    let pb = pullback_curvature(&t, &jac).unwrap();
    for i in 0..20 {
        let v = unit(complex_gaussian_vec(&mut stream_rng(3, i), 2));
        let before = kernel(&restricted_form(&t, std::slice::from_ref(&v), Side::FiberVectors).unwrap().eigenvalues(), 1e-9);
        let after = kernel(&restricted_form(&pb, &[v], Side::FiberVectors).unwrap().eigenvalues(), 1e-9);
        assert_eq!(after, before + 1);
    }
}

#[test]
fn griffiths_sample_shapes() {
    let t = sample_griffiths_k(4, 2, 3, 0).unwrap();
    let v = unit(complex_gaussian_vec(&mut stream_rng(0, 99), 2));
    let vals = restricted_form(&t, &[v], Side::FiberVectors).unwrap().eigenvalues();
    assert_eq!(kernel(&vals, 1e-9), 3);
    assert_eq!(t.hermitian_deviation(), 0.0);
    assert!(sample_griffiths_k(3, 2, 3, 0).is_err());
    let rep = check_ks_positive(&sample_griffiths_k(3, 3, 0, 2).unwrap(), 0, 1, 50, 1e-9, 1).unwrap();
    assert_eq!(rep.verdict, Verdict::NotRefuted);
}

#[test]
fn json_round_trip_and_rejections() {
    let g = grassmannian_curvature(4, 2).unwrap();
    let text = to_json_value(&g).to_string();
    assert_eq!(from_json_str(&text).unwrap(), g);
    let t = sample_griffiths_k(2, 2, 0, 3).unwrap();
    assert_eq!(from_json_str(&to_json_value(&t).to_string()).unwrap(), t);

    let missing = r#"{"n":2,"r":1,"entries":[[0,0,0,1,1.0,0.5]]}"#;
    assert!(from_json_str(missing).is_err());
    let mismatch = r#"{"n":2,"r":1,"entries":[[0,0,0,1,1.0,0.5],[0,0,1,0,1.0,0.5]]}"#;
    assert!(from_json_str(mismatch).is_err());
    let ok = r#"{"n":2,"r":1,"entries":[[0,0,0,1,1.0,0.5],[0,0,1,0,1.0,-0.5]]}"#;
    assert!(from_json_str(ok).is_ok());
    let complex_diag = r#"{"n":1,"r":1,"entries":[[0,0,0,0,1.0,0.5]]}"#;
    assert!(from_json_str(complex_diag).is_err());
    assert!(from_json_str(r#"{"n":1,"r":1,"entries":[[0,0,0,1,1.0,0.0]]}"#).is_err());
}

#[test]
fn refutation_is_monotone_in_k_and_s() {
    let g = grassmannian_curvature(5, 2).unwrap();
    let t = sample_griffiths_k(3, 3, 1, 6).unwrap();
    for r in [&g, &t] {
        for s in 1..=2usize {
            for k in 0..4usize {
                let hi = check_ks_positive(r, k + 1, s, 30, 1e-9, 2).unwrap();
                let lo = check_ks_positive(r, k, s, 30, 1e-9, 2).unwrap();
                if hi.refuted() {
                    assert!(lo.refuted());
                }
                if s >= 2 {
                    let prev = check_ks_positive(r, k, s - 1, 30, 1e-9, 2).unwrap();
                    if prev.refuted() {
                        assert!(lo.refuted(), "s monotonicity failed at k = {k}, s = {s}");
                    }
                }
            }
        }
    }
}

fn arb_tensor() -> impl Strategy<Value = CurvatureTensor> {
    (1usize..4, 1usize..4, any::<u64>()).prop_map(|(n, r, seed)| {
        let mut rng = stream_rng(seed, 0);
        let raw: Vec<C64> = complex_gaussian_vec(&mut rng, r * r * n * n);
        let g = CurvatureTensor::from_fn(n, r, |a, b, j, k| raw[((a * r + b) * n + j) * n + k]);
        CurvatureTensor::from_fn(n, r, |a, b, j, k| (g.get(a, b, j, k) + g.get(b, a, k, j).conj()) * 0.5)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eval_form_is_real(t in arb_tensor(), seed in any::<u64>()) {
        let mut rng = stream_rng(seed, 1);
        let terms: Vec<(Vec<C64>, Vec<C64>)> = (0..2)
            .map(|_| (complex_gaussian_vec(&mut rng, t.n()), complex_gaussian_vec(&mut rng, t.r())))
            .collect();
        let z = eval_form_complex(&t, &terms).unwrap();
        prop_assert!(z.im.abs() <= 1e-10 * z.norm().max(1.0));
    }

    #[test]
    fn grassmannian_matches_closed_form(seed in any::<u64>(), pick in 0usize..4) {
        let (n, d) = [(3, 1), (4, 2), (5, 2), (5, 3)][pick];
        let w = n - d;
        let g = grassmannian_curvature(n, d).unwrap();
        let mut rng = stream_rng(seed, 2);
        let xi = complex_gaussian_vec(&mut rng, d * w);
        let v = complex_gaussian_vec(&mut rng, d * w);
        let got = eval_form(&g, &[(xi.clone(), v.clone())]).unwrap();
        let want = grassmannian_closed_form(&xi, &v, d, w);
        prop_assert!((got - want).abs() <= 1e-10 * want.abs().max(1.0));
    }

    #[test]
    fn spectrum_invariant_under_unitary_rotation(seed in any::<u64>(), theta in 0.0f64..std::f64::consts::TAU) {
        let t = sample_griffiths_k(3, 3, 1, seed % 1000).unwrap();
        let mut rng = stream_rng(seed, 3);
        let raw = vec![complex_gaussian_vec(&mut rng, 3), complex_gaussian_vec(&mut rng, 3)];
        let q = crate::linalg::orthonormalize(&raw).unwrap();
        let (cs, sn) = (theta.cos(), theta.sin());
        let ph = c(0.0, theta).exp();
        let rot: Vec<Vec<C64>> = vec![
            q[0].iter().zip(&q[1]).map(|(a, b)| a * cs + b * sn * ph).collect(),
            q[0].iter().zip(&q[1]).map(|(a, b)| -a * sn * ph.conj() + b * cs).collect(),
        ];
        let a = restricted_form(&t, &q, Side::FiberVectors).unwrap().eigenvalues();
        let b = restricted_form(&t, &rot, Side::FiberVectors).unwrap().eigenvalues();
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() < 1e-9);
        }
    }

    #[test]
    fn operations_preserve_symmetry_and_scale(t in arb_tensor(), scale in 0.1f64..5.0, m in -3i64..4) {
        let s = t.scale(scale);
        prop_assert!(dual_curvature(&t).hermitian_deviation() < 1e-14);
        prop_assert!(twist_det(&t, m).hermitian_deviation() < 1e-12);
        prop_assert!(dual_twist(&t, m).hermitian_deviation() < 1e-12);
        let lhs = twist_det(&s, m);
        let rhs = twist_det(&t, m).scale(scale);
        let diff = lhs.add(&rhs.scale(-1.0)).unwrap().max_abs();
        prop_assert!(diff < 1e-12 * (1.0 + rhs.max_abs()));
        let tt = tensor_curvature(&s, &s).unwrap();
        let tt2 = tensor_curvature(&t, &t).unwrap().scale(scale);
        prop_assert!(tt.add(&tt2.scale(-1.0)).unwrap().max_abs() < 1e-12 * (1.0 + tt2.max_abs()));
        prop_assert!(tt.hermitian_deviation() < 1e-12);
    }
}
