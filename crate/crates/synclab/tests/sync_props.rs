//! Property tests for synchronization operators.

use proptest::prelude::*;

use synclab::linalg::{herm_eig, operator_norm, C64, ComplexDense, Tolerance};
use synclab::random::{
    random_compatible_sum_instance, random_observable_with_spectrum, rng_from_seed,
};
use synclab::sync::{
    build_sync_operator, epsilon_of, multipartite_sync_subspace, ClockObservable,
};

fn spectrum(n: usize) -> impl Strategy<Value = Vec<f64>> {
    proptest::collection::vec(-1.0f64..1.0, n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn k_is_hermitian_and_spectrum_is_differences(sa in spectrum(3), sb in spectrum(3)) {
        let mut rng = rng_from_seed(17);
        let t_a = random_observable_with_spectrum(&sa, &mut rng, "A").unwrap();
        let t_b = random_observable_with_spectrum(&sb, &mut rng, "B").unwrap();
        let k = build_sync_operator(&t_a, &t_b, &Tolerance::default()).unwrap();

        let dev = k.k_matrix().sub(&k.k_matrix().adjoint()).max_abs();
        prop_assert!(dev <= 1e-12);

        // Every eigenvalue of K is a difference of factor eigenvalues.
        let eig = herm_eig(k.k_matrix(), &Tolerance::default()).unwrap();
        for lambda in &eig.eigenvalues {
            let matched = sa.iter().any(|a| sb.iter().any(|b| (a - b - lambda).abs() <= 1e-9));
            prop_assert!(matched, "eigenvalue {lambda} is not a spectral difference");
        }
    }

    #[test]
    fn kernel_projector_is_idempotent_and_annihilated(sa in spectrum(3)) {
        let mut rng = rng_from_seed(23);
        let t_a = random_observable_with_spectrum(&sa, &mut rng, "A").unwrap();
        let t_b = random_observable_with_spectrum(&sa, &mut rng, "B").unwrap();
        let k = build_sync_operator(&t_a, &t_b, &Tolerance::default()).unwrap();
        let pi = k.kernel_projector();

        prop_assert!(pi.mul(pi).sub(pi).max_abs() <= 1e-11);
        prop_assert!(pi.sub(&pi.adjoint()).max_abs() <= 1e-11);
        let trace = pi.trace().re;
        prop_assert!((trace - k.kernel_dim() as f64).abs() <= 1e-9);

        let threshold = k.kernel_threshold();
        prop_assert!(operator_norm(&k.k_matrix().mul(pi)) <= threshold + 1e-11);
        prop_assert!(operator_norm(&pi.mul(k.k_matrix())) <= threshold + 1e-11);
    }
}

#[test]
fn nondegenerate_equal_clocks_kernel_dimension_is_exact() {
    let mut rng = rng_from_seed(41);
    for dim in 2..=4usize {
        for round in 0..10 {
            let spectrum: Vec<f64> = (0..dim).map(|i| i as f64 + 0.1 * round as f64).collect();
            let t_a = random_observable_with_spectrum(&spectrum, &mut rng, "A").unwrap();
            let t_b = random_observable_with_spectrum(&spectrum, &mut rng, "B").unwrap();
            let k = build_sync_operator(&t_a, &t_b, &Tolerance::default()).unwrap();
            assert_eq!(k.kernel_dim(), dim);
        }
    }
}

#[test]
fn compatible_sums_commute_with_k() {
    let mut rng = rng_from_seed(53);
    for _ in 0..25 {
        let instance = random_compatible_sum_instance(3, &mut rng).unwrap();
        assert!(instance.pair.epsilon() <= 1e-12);
    }
}

#[test]
fn multipartite_pair_matches_pairwise_projector() {
    let mut rng = rng_from_seed(67);
    for _ in 0..10 {
        let spectrum = [0.0, 0.7, -0.9];
        let t_a = random_observable_with_spectrum(&spectrum, &mut rng, "A").unwrap();
        let t_b = random_observable_with_spectrum(&spectrum, &mut rng, "B").unwrap();
        let k = build_sync_operator(&t_a, &t_b, &Tolerance::default()).unwrap();
        let (basis, _) =
            multipartite_sync_subspace(&[t_a, t_b], &Tolerance::default()).unwrap();
        let mut pi = ComplexDense::zeros(9, 9);
        for v in &basis {
            pi = pi.add(&v.projector());
        }
        let distance = pi.sub(k.kernel_projector()).frobenius_norm();
        assert!(distance <= 1e-10, "projector distance {distance}");
    }
}

#[test]
fn epsilon_of_matches_bruteforce_commutator_norm() {
    // 4 (x) 4 factors: a 16-dimensional joint space.
    let mut rng = rng_from_seed(71);
    for _ in 0..10 {
        let sa = [0.3, -0.4, 1.0, 0.9];
        let sb = [0.1, -0.7, 0.6, -0.2];
        let t_a = random_observable_with_spectrum(&sa, &mut rng, "A").unwrap();
        let t_b = random_observable_with_spectrum(&sb, &mut rng, "B").unwrap();
        let k = build_sync_operator(&t_a, &t_b, &Tolerance::default()).unwrap();
        let h = synclab::random::random_hermitian(16, &mut rng);
        let pair = epsilon_of(&h, &k).unwrap();
        // Independent recomputation straight from the definition.
        let hk = h.mul(k.k_matrix());
        let kh = k.k_matrix().mul(&h);
        let brute = operator_norm(&hk.sub(&kh));
        assert!((pair.epsilon() - brute).abs() <= 1e-12);
    }
}

#[test]
fn scalar_clock_gives_zero_k_with_infinite_gap() {
    let c = ComplexDense::identity(2).scale(C64::new(0.8, 0.0));
    let t = ClockObservable::new(c, "cI").unwrap();
    let k = build_sync_operator(&t, &t, &Tolerance::default()).unwrap();
    assert!(operator_norm(k.k_matrix()) <= 1e-14);
    assert_eq!(k.kernel_dim(), 4);
    assert_eq!(k.spectral_gap(), f64::INFINITY);
}
