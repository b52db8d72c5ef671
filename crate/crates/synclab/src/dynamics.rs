//! Time evolution and drift verification.
//!
//! For a Hamiltonian with compatibility defect `eps = |[H,K]|` and an
//! initial state in `ker(K)`, the drift obeys `|K psi(t)| <= eps |t|` and
//! the synchronized weight obeys
//! `|Pi_K psi(t)|^2 >= 1 - eps^2 t^2 / kappa^2`, where `kappa` is the
//! spectral gap of `K`. This module evolves states, records trajectories
//! against both bounds, integrates the Duhamel representation
//! `K psi(t) = -i int_0^t U(t-s) [K,H] psi(s) ds` as an independent cross
//! check, and provides the block instance that saturates the drift bound to
//! leading order.

use crate::error::{Error, Result};
use crate::linalg::{herm_eig, vec_norm, C64, ComplexDense, HermEig, StateVector, Tolerance, I};
use crate::sync::{
    build_sync_operator, commutator, epsilon_of, ClockObservable, CompatPair, SyncOperator,
};

/// Spectral propagator for a fixed Hermitian generator: one
/// eigendecomposition up front, then `O(n^2)` per requested time.
pub struct Propagator {
    eig: HermEig,
    dim: usize,
}

impl Propagator {
    pub fn new(h: &ComplexDense) -> Result<Self> {
        let eig = herm_eig(h, &Tolerance::default())?;
        Ok(Propagator {
            dim: h.rows(),
            eig,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `exp(-i h t) psi0` as raw amplitudes.
    pub fn amplitudes_at(&self, psi0: &[C64], t: f64) -> Vec<C64> {
        let coeffs = self.to_eigenbasis(psi0);
        let phased: Vec<C64> = coeffs
            .iter()
            .zip(&self.eig.eigenvalues)
            .map(|(c, &l)| c * (-I * l * t).exp())
            .collect();
        self.expand_from_eigenbasis(&phased)
    }

    pub fn state_at(&self, psi0: &StateVector, t: f64) -> StateVector {
        StateVector::new(self.amplitudes_at(psi0.amplitudes(), t))
            .expect("unitary evolution preserves the norm")
    }

    pub fn unitary_at(&self, t: f64) -> ComplexDense {
        self.eig.apply_spectral(|l| (-I * l * t).exp())
    }

    fn to_eigenbasis(&self, v: &[C64]) -> Vec<C64> {
        let vmat = &self.eig.eigenvectors;
        (0..self.dim)
            .map(|k| {
                (0..self.dim)
                    .map(|i| vmat.at(i, k).conj() * v[i])
                    .sum::<C64>()
            })
            .collect()
    }

    fn expand_from_eigenbasis(&self, c: &[C64]) -> Vec<C64> {
        let vmat = &self.eig.eigenvectors;
        (0..self.dim)
            .map(|i| {
                (0..self.dim)
                    .map(|k| vmat.at(i, k) * c[k])
                    .sum::<C64>()
            })
            .collect()
    }
}

/// Evolves `psi0` under the Hermitian generator `h` for time `t`.
pub fn evolve(h: &ComplexDense, psi0: &StateVector, t: f64) -> Result<StateVector> {
    if h.rows() != psi0.dim() {
        return Err(Error::DimMismatch(format!(
            "hamiltonian dim {} does not match state dim {}",
            h.rows(),
            psi0.dim()
        )));
    }
    Ok(Propagator::new(h)?.state_at(psi0, t))
}

/// A Hamiltonian, an initial state, and the strictly increasing time grid
/// on which to record the trajectory.
#[derive(Debug, Clone)]
pub struct EvolutionSpec {
    hamiltonian: ComplexDense,
    initial_state: StateVector,
    times: Vec<f64>,
}

impl EvolutionSpec {
    pub fn new(
        hamiltonian: ComplexDense,
        initial_state: StateVector,
        times: Vec<f64>,
    ) -> Result<Self> {
        if hamiltonian.rows() != initial_state.dim() {
            return Err(Error::DimMismatch(format!(
                "hamiltonian dim {} does not match state dim {}",
                hamiltonian.rows(),
                initial_state.dim()
            )));
        }
        if times.is_empty() || !times.iter().all(|t| t.is_finite()) {
            return Err(Error::InvalidArgument(
                "time grid must be nonempty and finite".into(),
            ));
        }
        if times.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument(
                "time grid must be strictly increasing".into(),
            ));
        }
        Ok(EvolutionSpec {
            hamiltonian,
            initial_state,
            times,
        })
    }

    pub fn hamiltonian(&self) -> &ComplexDense {
        &self.hamiltonian
    }

    pub fn initial_state(&self) -> &StateVector {
        &self.initial_state
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }
}

/// One grid point of a drift trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriftRow {
    pub t: f64,
    /// `|K psi(t)|`.
    pub drift: f64,
    /// `eps * |t|`.
    pub bound: f64,
    /// `|Pi_K psi(t)|^2`.
    pub fidelity_sq: f64,
    /// `1 - eps^2 t^2 / kappa^2`, stored unclamped so the inequality stays
    /// literally testable even where the floor goes negative.
    pub fidelity_floor: f64,
}

#[derive(Debug, Clone)]
pub struct DriftTrajectory {
    pub rows: Vec<DriftRow>,
}

/// Records drift, drift bound, synchronized weight and its floor on the
/// grid of `spec.times`. The initial state must lie in `ker(K)` to within
/// the operator's kernel threshold.
pub fn drift_trajectory(
    k: &SyncOperator,
    pair: &CompatPair,
    spec: &EvolutionSpec,
) -> Result<DriftTrajectory> {
    if spec.hamiltonian.rows() != k.total_dim() {
        return Err(Error::DimMismatch(format!(
            "hamiltonian dim {} does not match sync operator dim {}",
            spec.hamiltonian.rows(),
            k.total_dim()
        )));
    }
    if spec
        .hamiltonian
        .sub(pair.hamiltonian())
        .max_abs()
        > 1e-12
    {
        return Err(Error::InvalidArgument(
            "evolution hamiltonian differs from the compatibility pair's hamiltonian".into(),
        ));
    }
    let residual = k.drift_of(&spec.initial_state)?;
    if residual > k.kernel_threshold() {
        return Err(Error::NotInKernel {
            residual,
            threshold: k.kernel_threshold(),
        });
    }

    let propagator = Propagator::new(&spec.hamiltonian)?;
    let eps = pair.epsilon();
    let kappa = k.spectral_gap();
    let rows = spec
        .times
        .iter()
        .map(|&t| {
            let psi_t = propagator.state_at(&spec.initial_state, t);
            let drift = k.drift_of(&psi_t)?;
            let fidelity_sq = k.fidelity_sq(&psi_t)?;
            let ratio = eps * t / kappa;
            Ok(DriftRow {
                t,
                drift,
                bound: eps * t.abs(),
                fidelity_sq,
                fidelity_floor: 1.0 - ratio * ratio,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DriftTrajectory { rows })
}

/// Epsilon below which dynamics count as exactly compatible and the
/// guaranteed horizon is unbounded.
pub const ZERO_EPSILON_THRESHOLD: f64 = 1e-10;

/// Time horizon `delta / eps` within which drift is guaranteed to stay at
/// or below `delta`. Returns `+inf` when `eps` is below
/// [`ZERO_EPSILON_THRESHOLD`].
pub fn short_time_horizon(epsilon: f64, delta: f64) -> Result<f64> {
    if !epsilon.is_finite() || epsilon < 0.0 || !delta.is_finite() || delta <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "need epsilon >= 0 and delta > 0, got epsilon={epsilon}, delta={delta}"
        )));
    }
    if epsilon <= ZERO_EPSILON_THRESHOLD {
        return Ok(f64::INFINITY);
    }
    Ok(delta / epsilon)
}

/// Residual of the Duhamel representation
/// `K psi(t) = -i int_0^t U(t-s) [K,H] psi(s) ds`, with the integral
/// evaluated by the composite trapezoid rule on `steps` uniform
/// subintervals. Converges to zero at rate `O(steps^-2)`.
pub fn duhamel_residual(
    k: &SyncOperator,
    pair: &CompatPair,
    psi0: &StateVector,
    t: f64,
    steps: usize,
) -> Result<f64> {
    if steps < 2 {
        return Err(Error::InvalidArgument(format!(
            "trapezoid rule needs at least 2 subintervals, got {steps}"
        )));
    }
    if psi0.dim() != k.total_dim() {
        return Err(Error::DimMismatch(format!(
            "state dim {} does not match sync operator dim {}",
            psi0.dim(),
            k.total_dim()
        )));
    }
    let residual0 = k.drift_of(psi0)?;
    if residual0 > k.kernel_threshold() {
        return Err(Error::NotInKernel {
            residual: residual0,
            threshold: k.kernel_threshold(),
        });
    }

    let h = pair.hamiltonian();
    let propagator = Propagator::new(h)?;
    let c = commutator(k.k_matrix(), h)?;

    // Work in the eigenbasis of H so each grid point costs O(n^2):
    //   f(s) = E(t-s) C~ E(s) psi0~,  E(tau) = diag(exp(-i lambda tau)).
    let vmat = &propagator.eig.eigenvectors;
    let c_tilde = vmat.adjoint().mul(&c).mul(vmat);
    let psi0_tilde = propagator.to_eigenbasis(psi0.amplitudes());
    let lambdas = &propagator.eig.eigenvalues;
    let n = k.total_dim();

    let dt = t / steps as f64;
    let mut acc = vec![C64::new(0.0, 0.0); n];
    for j in 0..=steps {
        let s = dt * j as f64;
        let weight = if j == 0 || j == steps { 0.5 } else { 1.0 };
        let inner: Vec<C64> = psi0_tilde
            .iter()
            .zip(lambdas)
            .map(|(z, &l)| z * (-I * l * s).exp())
            .collect();
        let mid = c_tilde.mul_vec(&inner);
        for (i, acc_i) in acc.iter_mut().enumerate() {
            *acc_i += mid[i] * (-I * lambdas[i] * (t - s)).exp() * weight;
        }
    }
    let factor = -I * dt;
    let acc_scaled: Vec<C64> = acc.into_iter().map(|z| z * factor).collect();
    let integral = propagator.expand_from_eigenbasis(&acc_scaled);

    let psi_t = propagator.amplitudes_at(psi0.amplitudes(), t);
    let k_psi_t = k.k_matrix().mul_vec(&psi_t);
    let diff: Vec<C64> = k_psi_t
        .iter()
        .zip(&integral)
        .map(|(a, b)| a - b)
        .collect();
    Ok(vec_norm(&diff))
}

/// The explicit two-qubit instance saturating the drift bound: clocks
/// `T_A = T_B = sigma_z`, Hamiltonian `(eps/2)(|00><01| + |01><00|)`,
/// initial state `|00>`. The exact drift is `2 |sin(eps t / 2)|`, which
/// equals `eps |t|` to leading order.
pub struct SharpnessInstance {
    pub sync: SyncOperator,
    pub pair: CompatPair,
    pub initial_state: StateVector,
    epsilon: f64,
}

impl SharpnessInstance {
    /// Exact drift `2 |sin(eps t / 2)|` of the block dynamics.
    pub fn closed_form_drift(&self, t: f64) -> f64 {
        2.0 * (self.epsilon * t / 2.0).sin().abs()
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }
}

pub fn sharpness_instance(epsilon: f64) -> Result<SharpnessInstance> {
    if !epsilon.is_finite() || epsilon <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "sharpness instance needs epsilon > 0, got {epsilon}"
        )));
    }
    let t_a = ClockObservable::pauli_z("T_A");
    let t_b = ClockObservable::pauli_z("T_B");
    let sync = build_sync_operator(&t_a, &t_b, &Tolerance::default())?;
    let mut h = ComplexDense::zeros(4, 4);
    let half = C64::new(epsilon / 2.0, 0.0);
    h.set(0, 1, half);
    h.set(1, 0, half);
    let pair = epsilon_of(&h, &sync)?;
    let initial_state = StateVector::basis_state(4, 0);
    Ok(SharpnessInstance {
        sync,
        pair,
        initial_state,
        epsilon,
    })
}
