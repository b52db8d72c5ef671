//! Seeded random instance generation.
//!
//! Everything here takes an explicit RNG so experiments are reproducible
//! from a recorded 64-bit seed. The epsilon-compatible generator draws a
//! Hamiltonian that commutes with `K` exactly (a sum of terms diagonal in
//! the clock eigenbases), then adds a Hermitian perturbation rescaled so
//! the commutator norm hits the requested epsilon on the nose: since
//! `|[c P, K]| = c |[P, K]|`, the scale is a single division.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::dynamics::Propagator;
use crate::error::{Error, Result};
use crate::linalg::{herm_eig, kron_vec, C64, ComplexDense, StateVector, Tolerance};
use crate::sync::{
    build_sync_operator, commutator, epsilon_of, sum_hamiltonian, ClockObservable, CompatPair,
    SyncOperator,
};

/// The RNG used throughout; ChaCha keeps streams identical across
/// platforms and releases.
pub type SeededRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn standard_normal(rng: &mut SeededRng) -> f64 {
    rng.sample(StandardNormal)
}

/// Complex matrix with i.i.d. standard normal real and imaginary parts.
pub fn random_gaussian_matrix(n: usize, rng: &mut SeededRng) -> ComplexDense {
    let entries: Vec<C64> = (0..n * n)
        .map(|_| C64::new(standard_normal(rng), standard_normal(rng)))
        .collect();
    ComplexDense::new(n, n, entries).expect("gaussian entries are finite")
}

/// Hermitian matrix `(A + A') / 2` for Gaussian `A`, rescaled to unit
/// spectral-norm order.
pub fn random_hermitian(n: usize, rng: &mut SeededRng) -> ComplexDense {
    let a = random_gaussian_matrix(n, rng);
    a.add(&a.adjoint()).scale(C64::new(0.5 / (n as f64).sqrt(), 0.0))
}

/// Haar-ish random unitary via modified Gram-Schmidt on a Gaussian matrix.
pub fn random_unitary(n: usize, rng: &mut SeededRng) -> ComplexDense {
    loop {
        let a = random_gaussian_matrix(n, rng);
        if let Some(q) = gram_schmidt(&a) {
            return q;
        }
    }
}

#[allow(clippy::needless_range_loop)] // the projection step reads one column while writing another
fn gram_schmidt(a: &ComplexDense) -> Option<ComplexDense> {
    let n = a.rows();
    let mut cols: Vec<Vec<C64>> = (0..n).map(|j| a.column(j)).collect();
    for j in 0..n {
        for _pass in 0..2 {
            for k in 0..j {
                let proj: C64 = cols[k]
                    .iter()
                    .zip(&cols[j])
                    .map(|(u, v)| u.conj() * v)
                    .sum();
                for i in 0..n {
                    let u = cols[k][i];
                    cols[j][i] -= proj * u;
                }
            }
        }
        let norm = crate::linalg::vec_norm(&cols[j]);
        if norm < 1e-8 {
            return None;
        }
        let inv = 1.0 / norm;
        for z in cols[j].iter_mut() {
            *z *= inv;
        }
    }
    let mut q = ComplexDense::zeros(n, n);
    for (j, col) in cols.iter().enumerate() {
        for (i, &z) in col.iter().enumerate() {
            q.set(i, j, z);
        }
    }
    Some(q)
}

/// Random Hermitian observable `Q diag(spectrum) Q'` with the given
/// spectrum and a random eigenbasis.
pub fn random_observable_with_spectrum(
    spectrum: &[f64],
    rng: &mut SeededRng,
    label: impl Into<String>,
) -> Result<ClockObservable> {
    let n = spectrum.len();
    let q = random_unitary(n, rng);
    let d = ComplexDense::diag_real(spectrum);
    let m = q.mul(&d).mul(&q.adjoint());
    // Symmetrize away the rounding from the two products.
    let m = m.add(&m.adjoint()).scale(C64::new(0.5, 0.0));
    ClockObservable::new(m, label)
}

/// Random Hermitian matrix commuting with `observable`: random real
/// spectrum in [-1, 1] over the observable's eigenbasis.
pub fn random_commuting_hermitian(
    observable: &ComplexDense,
    rng: &mut SeededRng,
) -> Result<ComplexDense> {
    let eig = herm_eig(observable, &Tolerance::default())?;
    let n = observable.rows();
    let spectrum: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..=1.0)).collect();
    let v = &eig.eigenvectors;
    let m = v
        .mul(&ComplexDense::diag_real(&spectrum))
        .mul(&v.adjoint());
    Ok(m.add(&m.adjoint()).scale(C64::new(0.5, 0.0)))
}

/// Random unit vector inside `ker(K)`.
pub fn random_kernel_state(k: &SyncOperator, rng: &mut SeededRng) -> Result<StateVector> {
    if k.kernel_dim() == 0 {
        return Err(Error::InvalidArgument(
            "synchronization subspace is trivial; no kernel state exists".into(),
        ));
    }
    let n = k.total_dim();
    let mut amps = vec![C64::new(0.0, 0.0); n];
    for v in k.kernel_basis() {
        let coeff = C64::new(standard_normal(rng), standard_normal(rng));
        for (a, z) in amps.iter_mut().zip(v.amplitudes()) {
            *a += coeff * z;
        }
    }
    StateVector::new(amps)
}

/// A sync operator, a Hamiltonian with measured compatibility defect, and
/// an initial state in the kernel: everything a drift experiment needs.
#[derive(Debug, Clone)]
pub struct DriftInstance {
    pub sync: SyncOperator,
    pub pair: CompatPair,
    pub initial_state: StateVector,
}

/// Hamiltonian commuting with `K` exactly: a sum of terms diagonal in the
/// eigenbases of the two clock observables.
pub fn random_compatible_hamiltonian(
    t_a: &ClockObservable,
    t_b: &ClockObservable,
    rng: &mut SeededRng,
) -> Result<ComplexDense> {
    let h_a = random_commuting_hermitian(t_a.matrix(), rng)?;
    let h_b = random_commuting_hermitian(t_b.matrix(), rng)?;
    sum_hamiltonian(&h_a, &h_b)
}

/// Compatible part plus a Gaussian Hermitian perturbation rescaled so that
/// `|[H, K]|` equals `epsilon` exactly (up to roundoff). The returned pair
/// stores the recomputed defect.
pub fn random_epsilon_compatible(
    t_a: &ClockObservable,
    t_b: &ClockObservable,
    k: &SyncOperator,
    epsilon: f64,
    rng: &mut SeededRng,
) -> Result<CompatPair> {
    if !epsilon.is_finite() || epsilon < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "epsilon must be finite and nonnegative, got {epsilon}"
        )));
    }
    let compatible = random_compatible_hamiltonian(t_a, t_b, rng)?;
    if epsilon == 0.0 {
        return epsilon_of(&compatible, k);
    }
    let n = k.total_dim();
    loop {
        let p = random_hermitian(n, rng);
        let defect = crate::linalg::operator_norm(&commutator(&p, k.k_matrix())?);
        if defect < 1e-8 {
            continue;
        }
        let scale = C64::new(epsilon / defect, 0.0);
        let h = compatible.add(&p.scale(scale));
        return epsilon_of(&h, k);
    }
}

/// Full drift instance: clocks with a shared random spectrum (so the
/// kernel is nontrivial), an epsilon-compatible Hamiltonian, and a random
/// kernel state.
pub fn random_drift_instance(
    dim: usize,
    epsilon: f64,
    rng: &mut SeededRng,
) -> Result<DriftInstance> {
    let spectrum = well_separated_spectrum(dim, rng);
    let t_a = random_observable_with_spectrum(&spectrum, rng, "T_A")?;
    let t_b = random_observable_with_spectrum(&spectrum, rng, "T_B")?;
    let sync = build_sync_operator(&t_a, &t_b, &Tolerance::default())?;
    let pair = random_epsilon_compatible(&t_a, &t_b, &sync, epsilon, rng)?;
    let initial_state = random_kernel_state(&sync, rng)?;
    Ok(DriftInstance {
        sync,
        pair,
        initial_state,
    })
}

/// Drift instance whose Hamiltonian is an exactly compatible sum.
pub fn random_compatible_sum_instance(dim: usize, rng: &mut SeededRng) -> Result<DriftInstance> {
    let spectrum = well_separated_spectrum(dim, rng);
    let t_a = random_observable_with_spectrum(&spectrum, rng, "T_A")?;
    let t_b = random_observable_with_spectrum(&spectrum, rng, "T_B")?;
    let sync = build_sync_operator(&t_a, &t_b, &Tolerance::default())?;
    let h = random_compatible_hamiltonian(&t_a, &t_b, rng)?;
    let pair = epsilon_of(&h, &sync)?;
    let initial_state = random_kernel_state(&sync, rng)?;
    Ok(DriftInstance {
        sync,
        pair,
        initial_state,
    })
}

/// Random spectrum in [-1, 1] with pairwise gaps at least 0.05 so kernel
/// dimensions are unambiguous at the default tolerances.
fn well_separated_spectrum(dim: usize, rng: &mut SeededRng) -> Vec<f64> {
    'outer: loop {
        let spectrum: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..=1.0)).collect();
        for i in 0..dim {
            for j in (i + 1)..dim {
                if (spectrum[i] - spectrum[j]).abs() < 0.05 {
                    continue 'outer;
                }
            }
        }
        return spectrum;
    }
}

/// Random product state `psi_a (x) psi_b`; handy for states that are not
/// in the kernel.
pub fn random_product_state(
    dim_a: usize,
    dim_b: usize,
    rng: &mut SeededRng,
) -> Result<StateVector> {
    let a: Vec<C64> = (0..dim_a)
        .map(|_| C64::new(standard_normal(rng), standard_normal(rng)))
        .collect();
    let b: Vec<C64> = (0..dim_b)
        .map(|_| C64::new(standard_normal(rng), standard_normal(rng)))
        .collect();
    StateVector::new(kron_vec(&a, &b))
}

/// A randomized unitary representation assembled from built-in irreps with
/// known multiplicities, conjugated by a random unitary.
#[derive(Debug, Clone)]
pub struct RandomRep {
    pub group: crate::grouprep::FiniteGroup,
    pub table: crate::grouprep::IrrepTable,
    pub rep: crate::grouprep::UnitaryRep,
    pub multiplicities: Vec<usize>,
}

/// Draws multiplicities in `0..=max_copies` per irrep (at least one copy
/// overall, total dimension at most `max_dim`), builds the direct sum of
/// that many irrep copies per group element, and conjugates everything by
/// one random unitary. The commutant of the result has dimension
/// `sum_l m_l^2` by construction.
pub fn random_rep_from_irreps(
    which: crate::grouprep::BuiltinGroup,
    max_copies: usize,
    max_dim: usize,
    rng: &mut SeededRng,
) -> Result<RandomRep> {
    use crate::grouprep::{builtin_group, builtin_irreps, UnitaryRep};

    let (group, table) = builtin_group(which)?;
    let irreps = builtin_irreps(which)?;
    let dims: Vec<usize> = irreps.iter().map(|r| r.dim()).collect();

    let multiplicities: Vec<usize> = loop {
        let draw: Vec<usize> = (0..irreps.len())
            .map(|_| rng.random_range(0..=max_copies))
            .collect();
        let total: usize = draw.iter().zip(&dims).map(|(m, d)| m * d).sum();
        if total >= 1 && total <= max_dim {
            break draw;
        }
    };
    let total: usize = multiplicities.iter().zip(&dims).map(|(m, d)| m * d).sum();
    let q = random_unitary(total, rng);

    let matrices: Vec<ComplexDense> = (0..group.order())
        .map(|g| {
            let blocks: Vec<ComplexDense> = multiplicities
                .iter()
                .zip(&irreps)
                .flat_map(|(&m, irrep)| std::iter::repeat_n(irrep.matrix(g).clone(), m))
                .collect();
            let block = ComplexDense::block_diag(&blocks).expect("at least one copy");
            q.mul(&block).mul(&q.adjoint())
        })
        .collect();
    let rep = UnitaryRep::new(group.clone(), matrices)?;
    Ok(RandomRep {
        group,
        table,
        rep,
        multiplicities,
    })
}

/// Random Hermitian element of a matrix span: a Gaussian complex
/// combination of the basis, Hermitized as `(X + X') / 2`.
pub fn random_hermitian_in_span(
    basis: &[ComplexDense],
    rng: &mut SeededRng,
) -> Result<ComplexDense> {
    let first = basis
        .first()
        .ok_or_else(|| Error::InvalidArgument("empty span".into()))?;
    let mut x = ComplexDense::zeros(first.rows(), first.cols());
    for b in basis {
        let coeff = C64::new(standard_normal(rng), standard_normal(rng));
        x = x.add(&b.scale(coeff));
    }
    Ok(x.add(&x.adjoint()).scale(C64::new(0.5, 0.0)))
}

/// Sanity helper used by tests: evolve and report the maximum drift over a
/// grid.
pub fn max_drift_over_grid(instance: &DriftInstance, times: &[f64]) -> Result<f64> {
    let propagator = Propagator::new(instance.pair.hamiltonian())?;
    let mut max_drift = 0.0f64;
    for &t in times {
        let psi_t = propagator.state_at(&instance.initial_state, t);
        max_drift = max_drift.max(instance.sync.drift_of(&psi_t)?);
    }
    Ok(max_drift)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::operator_norm;

    #[test]
    fn random_unitary_is_unitary() {
        let mut rng = rng_from_seed(11);
        for n in [2, 3, 5] {
            let q = random_unitary(n, &mut rng);
            let qtq = q.adjoint().mul(&q);
            assert!(qtq.sub(&ComplexDense::identity(n)).max_abs() < 1e-12);
        }
    }

    #[test]
    fn epsilon_compatible_hits_target() {
        let mut rng = rng_from_seed(5);
        let inst = random_drift_instance(3, 0.25, &mut rng).unwrap();
        assert!((inst.pair.epsilon() - 0.25).abs() < 1e-12);
        assert!(inst.sync.drift_of(&inst.initial_state).unwrap() <= inst.sync.kernel_threshold());
    }

    #[test]
    fn compatible_sum_instance_has_tiny_defect() {
        let mut rng = rng_from_seed(7);
        let inst = random_compatible_sum_instance(4, &mut rng).unwrap();
        assert!(inst.pair.epsilon() <= 1e-12);
        let c = commutator(inst.pair.hamiltonian(), inst.sync.k_matrix()).unwrap();
        assert!(operator_norm(&c) <= 1e-12);
    }

    #[test]
    fn seeded_generation_is_reproducible() {
        let a = random_drift_instance(3, 0.1, &mut rng_from_seed(42)).unwrap();
        let b = random_drift_instance(3, 0.1, &mut rng_from_seed(42)).unwrap();
        assert_eq!(a.pair.hamiltonian(), b.pair.hamiltonian());
        assert_eq!(a.initial_state.amplitudes(), b.initial_state.amplitudes());
    }
}
