//! Property tests for the dense linear algebra layer.

use proptest::prelude::*;

use synclab::linalg::{
    expm_unitary, herm_eig, kron, null_space, operator_norm, vec_norm, C64, ComplexDense,
    StateVector, Tolerance,
};
use synclab::random::{random_unitary, rng_from_seed};

fn cmat(n: usize) -> impl Strategy<Value = ComplexDense> {
    proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n * n).prop_map(move |pairs| {
        let entries: Vec<C64> = pairs.into_iter().map(|(re, im)| C64::new(re, im)).collect();
        ComplexDense::new(n, n, entries).unwrap()
    })
}

fn hermitian(n: usize) -> impl Strategy<Value = ComplexDense> {
    cmat(n).prop_map(|a| a.add(&a.adjoint()).scale(C64::new(0.5, 0.0)))
}

fn cvec(n: usize) -> impl Strategy<Value = Vec<C64>> {
    proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n)
        .prop_map(|pairs| pairs.into_iter().map(|(re, im)| C64::new(re, im)).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kron_mixed_product(a in cmat(2), b in cmat(3), c in cmat(2), d in cmat(3)) {
        // (A (x) B)(C (x) D) = AC (x) BD
        let lhs = kron(&a, &b).mul(&kron(&c, &d));
        let rhs = kron(&a.mul(&c), &b.mul(&d));
        prop_assert!(lhs.sub(&rhs).max_abs() <= 1e-12);
    }

    #[test]
    fn kron_is_bilinear(a in cmat(2), b in cmat(2), c in cmat(3), s in -2.0f64..2.0) {
        let scale = C64::new(s, 0.0);
        let lhs = kron(&a.add(&b.scale(scale)), &c);
        let rhs = kron(&a, &c).add(&kron(&b, &c).scale(scale));
        prop_assert!(lhs.sub(&rhs).max_abs() <= 1e-12);
    }

    #[test]
    fn operator_norm_is_submultiplicative(a in cmat(3), b in cmat(3)) {
        let ab = a.mul(&b);
        prop_assert!(operator_norm(&ab) <= operator_norm(&a) * operator_norm(&b) + 1e-10);
    }

    #[test]
    fn null_space_residuals_and_rank(a in cmat(4)) {
        let tol = Tolerance::default();
        let ns = null_space(&a, &tol);
        for v in &ns.basis {
            let residual = vec_norm(&a.mul_vec(v.amplitudes()));
            prop_assert!(residual <= ns.threshold + 1e-12);
        }
        prop_assert_eq!(ns.basis.len() + ns.rank, a.cols());
        // Pairwise orthonormal.
        for (i, u) in ns.basis.iter().enumerate() {
            for (j, v) in ns.basis.iter().enumerate() {
                let inner = u.inner(v).norm();
                let expected = if i == j { 1.0 } else { 0.0 };
                prop_assert!((inner - expected).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn herm_eig_reconstructs(h in hermitian(4)) {
        let tol = Tolerance::default();
        let eig = herm_eig(&h, &tol).unwrap();
        let sigma_max = operator_norm(&h);
        let rebuilt = eig.apply_spectral(|l| C64::new(l, 0.0));
        prop_assert!(operator_norm(&rebuilt.sub(&h)) <= 1e-10 * (1.0 + sigma_max));
        let v = &eig.eigenvectors;
        let vtv = v.adjoint().mul(v);
        prop_assert!(vtv.sub(&ComplexDense::identity(4)).max_abs() <= 1e-12);
        // Ascending eigenvalues.
        for w in eig.eigenvalues.windows(2) {
            prop_assert!(w[0] <= w[1]);
        }
    }

    #[test]
    fn expm_is_a_one_parameter_group(h in hermitian(3), s in -5.0f64..5.0, t in -5.0f64..5.0) {
        let us = expm_unitary(&h, s).unwrap();
        let ut = expm_unitary(&h, t).unwrap();
        let ust = expm_unitary(&h, s + t).unwrap();
        prop_assert!(us.mul(&ut).sub(&ust).max_abs() <= 1e-11);
    }

    #[test]
    fn expm_inverse_at_negative_time(h in hermitian(3), t in -10.0f64..10.0) {
        let u = expm_unitary(&h, t).unwrap();
        let uinv = expm_unitary(&h, -t).unwrap();
        let id = ComplexDense::identity(3);
        prop_assert!(u.mul(&uinv).sub(&id).max_abs() <= 1e-12);
    }

    #[test]
    fn expm_preserves_norms(h in hermitian(4), raw in cvec(4), t in -10.0f64..10.0) {
        prop_assume!(vec_norm(&raw) > 1e-6);
        let u = expm_unitary(&h, t).unwrap();
        let before = vec_norm(&raw);
        let after = vec_norm(&u.mul_vec(&raw));
        prop_assert!((after - before).abs() <= 1e-12 * (1.0 + before));
    }
}

#[test]
fn null_space_of_conjugated_singular_diagonal() {
    // Q diag(0,0,1,3) Q' has a two-dimensional kernel for unitary Q.
    let mut rng = rng_from_seed(31);
    for _ in 0..25 {
        let q = random_unitary(4, &mut rng);
        let d = ComplexDense::diag_real(&[0.0, 0.0, 1.0, 3.0]);
        let a = q.mul(&d).mul(&q.adjoint());
        let ns = null_space(&a, &Tolerance::default());
        assert_eq!(ns.basis.len(), 2);
        for v in &ns.basis {
            let residual = vec_norm(&a.mul_vec(v.amplitudes()));
            assert!(residual <= 1e-10, "residual {residual}");
        }
    }
}

#[test]
fn herm_eig_diagonal_values_are_exact() {
    let eig = herm_eig(
        &ComplexDense::diag_real(&[4.0, -1.0, 2.5]),
        &Tolerance::default(),
    )
    .unwrap();
    assert_eq!(eig.eigenvalues, vec![-1.0, 2.5, 4.0]);
}

#[test]
fn state_vectors_from_null_space_are_unit() {
    let k = ComplexDense::diag_real(&[0.0, 2.0, -2.0, 0.0]);
    let ns = null_space(&k, &Tolerance::default());
    for v in &ns.basis {
        assert!((vec_norm(v.amplitudes()) - 1.0).abs() < 1e-14);
    }
    let _ = StateVector::basis_state(4, 0);
}
