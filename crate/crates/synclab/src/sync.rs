//! Synchronization operators and their kernel data.
//!
//! The central object is `K = T_A (x) I - I (x) T_B` for a pair of clock
//! observables. Its kernel is the synchronization subspace; the kernel
//! projector and spectral gap drive the drift and fidelity bounds in
//! `dynamics`. Multipartite systems intersect the pairwise kernels.

use crate::error::{Error, Result};
use crate::linalg::{
    check_hermitian, herm_eig, kron, null_space, operator_norm, ComplexDense, StateVector,
    Tolerance,
};

/// Default cap on the total tensor dimension for multipartite intersections.
pub const DEFAULT_DIMENSION_CAP: usize = 4096;

/// A Hermitian operator whose eigenvalues are read as discrete time labels.
#[derive(Debug, Clone)]
pub struct ClockObservable {
    matrix: ComplexDense,
    label: String,
}

impl ClockObservable {
    /// Wraps a Hermitian matrix; rejects non-square or non-Hermitian input.
    pub fn new(matrix: ComplexDense, label: impl Into<String>) -> Result<Self> {
        check_hermitian(&matrix, &Tolerance::default())?;
        Ok(ClockObservable {
            matrix,
            label: label.into(),
        })
    }

    pub fn pauli_z(label: impl Into<String>) -> Self {
        ClockObservable {
            matrix: ComplexDense::pauli_z(),
            label: label.into(),
        }
    }

    pub fn matrix(&self) -> &ComplexDense {
        &self.matrix
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }
}

/// The synchronization operator `K` together with its kernel basis, kernel
/// projector and spectral gap.
#[derive(Debug, Clone)]
pub struct SyncOperator {
    k_matrix: ComplexDense,
    kernel_basis: Vec<StateVector>,
    kernel_projector: ComplexDense,
    /// Smallest nonzero |eigenvalue| of `K`; `+inf` when `K` vanishes.
    spectral_gap: f64,
    kernel_threshold: f64,
    dim_a: usize,
    dim_b: usize,
}

impl SyncOperator {
    pub fn k_matrix(&self) -> &ComplexDense {
        &self.k_matrix
    }

    pub fn kernel_basis(&self) -> &[StateVector] {
        &self.kernel_basis
    }

    pub fn kernel_dim(&self) -> usize {
        self.kernel_basis.len()
    }

    pub fn kernel_projector(&self) -> &ComplexDense {
        &self.kernel_projector
    }

    pub fn spectral_gap(&self) -> f64 {
        self.spectral_gap
    }

    /// The rank cutoff used to separate kernel from non-kernel directions.
    pub fn kernel_threshold(&self) -> f64 {
        self.kernel_threshold
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    pub fn total_dim(&self) -> usize {
        self.dim_a * self.dim_b
    }

    /// `|K psi|`, the drift of a state from the synchronization subspace.
    pub fn drift_of(&self, psi: &StateVector) -> Result<f64> {
        if psi.dim() != self.total_dim() {
            return Err(Error::DimMismatch(format!(
                "state dim {} does not match operator dim {}",
                psi.dim(),
                self.total_dim()
            )));
        }
        Ok(crate::linalg::vec_norm(
            &self.k_matrix.mul_vec(psi.amplitudes()),
        ))
    }

    /// `|Pi_K psi|^2`, the synchronized weight of a state.
    pub fn fidelity_sq(&self, psi: &StateVector) -> Result<f64> {
        if psi.dim() != self.total_dim() {
            return Err(Error::DimMismatch(format!(
                "state dim {} does not match operator dim {}",
                psi.dim(),
                self.total_dim()
            )));
        }
        let projected = self.kernel_projector.mul_vec(psi.amplitudes());
        Ok(projected.iter().map(|z| z.norm_sqr()).sum())
    }
}

/// Builds `K = T_A (x) I - I (x) T_B` with kernel basis (via SVD null
/// space), kernel projector `sum_v |v><v|`, and spectral gap, the smallest
/// |eigenvalue| above the kernel threshold.
pub fn build_sync_operator(
    t_a: &ClockObservable,
    t_b: &ClockObservable,
    tol: &Tolerance,
) -> Result<SyncOperator> {
    check_hermitian(t_a.matrix(), tol)?;
    check_hermitian(t_b.matrix(), tol)?;
    let id_a = ComplexDense::identity(t_a.dim());
    let id_b = ComplexDense::identity(t_b.dim());
    let k_matrix = kron(t_a.matrix(), &id_b).sub(&kron(&id_a, t_b.matrix()));

    let ns = null_space(&k_matrix, tol);
    let n = k_matrix.rows();
    let mut kernel_projector = ComplexDense::zeros(n, n);
    for v in &ns.basis {
        kernel_projector = kernel_projector.add(&v.projector());
    }

    let eig = herm_eig(&k_matrix, tol)?;
    let spectral_gap = eig
        .eigenvalues
        .iter()
        .map(|l| l.abs())
        .filter(|l| *l > ns.threshold)
        .fold(f64::INFINITY, f64::min);

    Ok(SyncOperator {
        k_matrix,
        kernel_basis: ns.basis,
        kernel_projector,
        spectral_gap,
        kernel_threshold: ns.threshold,
        dim_a: t_a.dim(),
        dim_b: t_b.dim(),
    })
}

/// `ab - ba`; anti-Hermitian whenever both arguments are Hermitian.
pub fn commutator(a: &ComplexDense, b: &ComplexDense) -> Result<ComplexDense> {
    if !a.is_square() || !b.is_square() || a.rows() != b.rows() {
        return Err(Error::DimMismatch(format!(
            "commutator needs square matrices of equal size, got {}x{} and {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    Ok(a.mul(b).sub(&b.mul(a)))
}

/// A Hamiltonian together with its measured compatibility defect
/// `eps = |[H, K]|`.
#[derive(Debug, Clone)]
pub struct CompatPair {
    hamiltonian: ComplexDense,
    epsilon: f64,
}

impl CompatPair {
    pub fn hamiltonian(&self) -> &ComplexDense {
        &self.hamiltonian
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }
}

/// Measures the tight compatibility defect of `h` against `k`:
/// `eps = |[h, K]|`, not an upper bound supplied by the caller.
pub fn epsilon_of(h: &ComplexDense, k: &SyncOperator) -> Result<CompatPair> {
    check_hermitian(h, &Tolerance::default())?;
    if h.rows() != k.total_dim() {
        return Err(Error::DimMismatch(format!(
            "hamiltonian dim {} does not match sync operator dim {}",
            h.rows(),
            k.total_dim()
        )));
    }
    let epsilon = operator_norm(&commutator(h, k.k_matrix())?);
    Ok(CompatPair {
        hamiltonian: h.clone(),
        epsilon,
    })
}

/// `h_a (x) I + I (x) h_b`. When `[h_a, T_A] = [h_b, T_B] = 0` this sum
/// commutes with `K` exactly and preserves the synchronization subspace.
pub fn sum_hamiltonian(h_a: &ComplexDense, h_b: &ComplexDense) -> Result<ComplexDense> {
    check_hermitian(h_a, &Tolerance::default())?;
    check_hermitian(h_b, &Tolerance::default())?;
    let id_a = ComplexDense::identity(h_a.rows());
    let id_b = ComplexDense::identity(h_b.rows());
    Ok(kron(h_a, &id_b).add(&kron(&id_a, h_b)))
}

/// Orthonormal basis of the multipartite synchronization subspace: the
/// intersection of the pairwise kernels `ker(T_i on slot i - T_j on slot j)`
/// over all pairs `i < j`, embedded in the full tensor space with slot 0
/// outermost in the Kronecker ordering.
pub fn multipartite_sync_subspace(
    observables: &[ClockObservable],
    tol: &Tolerance,
) -> Result<(Vec<StateVector>, Vec<usize>)> {
    multipartite_sync_subspace_capped(observables, tol, DEFAULT_DIMENSION_CAP)
}

/// Same as [`multipartite_sync_subspace`] with an explicit cap on the total
/// tensor dimension.
pub fn multipartite_sync_subspace_capped(
    observables: &[ClockObservable],
    tol: &Tolerance,
    cap: usize,
) -> Result<(Vec<StateVector>, Vec<usize>)> {
    if observables.len() < 2 {
        return Err(Error::InvalidArgument(format!(
            "multipartite intersection needs at least 2 observables, got {}",
            observables.len()
        )));
    }
    for obs in observables {
        check_hermitian(obs.matrix(), tol)?;
    }
    let dims: Vec<usize> = observables.iter().map(ClockObservable::dim).collect();
    let total: usize = dims.iter().product();
    if total > cap {
        return Err(Error::DimensionCap { dim: total, cap });
    }

    let mut blocks = Vec::new();
    for i in 0..observables.len() {
        for j in (i + 1)..observables.len() {
            let ki = embed_on_slot(observables[i].matrix(), i, &dims);
            let kj = embed_on_slot(observables[j].matrix(), j, &dims);
            blocks.push(ki.sub(&kj));
        }
    }
    let stacked = ComplexDense::vstack(&blocks)?;
    let ns = null_space(&stacked, tol);
    Ok((ns.basis, dims))
}

/// `I (x) ... (x) op (x) ... (x) I` with `op` in the given slot.
fn embed_on_slot(op: &ComplexDense, slot: usize, dims: &[usize]) -> ComplexDense {
    let mut out = ComplexDense::identity(1);
    for (i, &d) in dims.iter().enumerate() {
        let factor = if i == slot {
            op.clone()
        } else {
            ComplexDense::identity(d)
        };
        out = kron(&out, &factor);
    }
    out
}
