//! Finite-group machinery for classifying synchronization-preserving
//! dynamics.
//!
//! The pipeline: character projectors split a unitary representation into
//! isotypic components; clock observables built from central elements act
//! as a scalar on each component; for multiplicity-free representations the
//! projector onto the diagonal isotypic component `sum_l P_l^A (x) P_l^B`
//! coincides with the kernel projector of `K` exactly when the scalar
//! assignment separates irrep types. The algebra of equivariant
//! Hamiltonians commuting with `K` is computed as a matrix commutant via
//! one stacked null-space solve.
//!
//! A note on the two-qubit example with the sigma_z symmetry: the full
//! commutant of `{sigma_z (x) sigma_z, K}` is six-dimensional, not four —
//! besides the four diagonal matrix units it contains the couplings
//! `|00><11|` and `|11><00|`, which commute with both constraints because
//! `|00>` and `|11>` share their symmetry sector and both lie in `ker(K)`.
//! The reduced count corresponds to restricting to the diagonal matrix
//! algebra; this module reports the computed commutant dimension.

mod builtin;

pub use builtin::{
    builtin_group, builtin_irreps, regular_rep, s3_permutation_rep, z2_sigma_z_rep, BuiltinGroup,
};

use crate::error::{Error, Result};
use crate::linalg::{
    kron, null_space, operator_norm, C64, ComplexDense, StateVector, Tolerance,
};
use crate::sync::{build_sync_operator, commutator, ClockObservable, SyncOperator};

/// Commutant solves build an `n^2`-column linear system; keep the space
/// dimension bounded so the stacked matrix stays manageable.
pub const COMMUTANT_DIM_CAP: usize = 64;

/// Residual threshold for the postconditions of
/// [`sync_preserving_algebra`].
pub const SYNC_ALGEBRA_RESIDUAL_TOL: f64 = 1e-9;

/// Scalarity threshold: `|P T P - alpha P|_F` must stay below this for `T`
/// to count as acting scalarly on an isotypic component.
pub const SCALARITY_TOL: f64 = 1e-8;

/// A finite group given by its multiplication table.
#[derive(Debug, Clone)]
pub struct FiniteGroup {
    label: String,
    order: usize,
    mul_table: Vec<Vec<usize>>,
    inverse: Vec<usize>,
    identity: usize,
}

impl FiniteGroup {
    /// Validates closure, the identity law, inverses, and associativity for
    /// all triples.
    pub fn new(
        label: impl Into<String>,
        mul_table: Vec<Vec<usize>>,
        inverse: Vec<usize>,
        identity: usize,
    ) -> Result<Self> {
        let order = mul_table.len();
        if order == 0 {
            return Err(Error::InvalidGroup("empty multiplication table".into()));
        }
        if mul_table.iter().any(|row| row.len() != order) {
            return Err(Error::InvalidGroup(
                "multiplication table must be square".into(),
            ));
        }
        if mul_table
            .iter()
            .any(|row| row.iter().any(|&x| x >= order))
        {
            return Err(Error::InvalidGroup(
                "multiplication table entry out of range".into(),
            ));
        }
        if identity >= order || inverse.len() != order || inverse.iter().any(|&x| x >= order) {
            return Err(Error::InvalidGroup(
                "identity or inverse data out of range".into(),
            ));
        }
        for g in 0..order {
            if mul_table[identity][g] != g || mul_table[g][identity] != g {
                return Err(Error::InvalidGroup(format!(
                    "identity law fails at element {g}"
                )));
            }
            if mul_table[g][inverse[g]] != identity || mul_table[inverse[g]][g] != identity {
                return Err(Error::InvalidGroup(format!(
                    "inverse law fails at element {g}"
                )));
            }
        }
        for a in 0..order {
            for b in 0..order {
                for c in 0..order {
                    if mul_table[mul_table[a][b]][c] != mul_table[a][mul_table[b][c]] {
                        return Err(Error::InvalidGroup(format!(
                            "associativity fails at ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        Ok(FiniteGroup {
            label: label.into(),
            order,
            mul_table,
            inverse,
            identity,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul_table[a][b]
    }

    pub fn inverse_of(&self, g: usize) -> usize {
        self.inverse[g]
    }

    pub fn mul_table(&self) -> &[Vec<usize>] {
        &self.mul_table
    }

    pub fn inverse_table(&self) -> &[usize] {
        &self.inverse
    }

    /// Structural equality: same table and identity, labels ignored.
    pub fn same_structure(&self, other: &FiniteGroup) -> bool {
        self.order == other.order
            && self.identity == other.identity
            && self.mul_table == other.mul_table
    }
}

/// Exact character data for the irreducible representations of a group.
#[derive(Debug, Clone)]
pub struct IrrepTable {
    order: usize,
    labels: Vec<String>,
    dims: Vec<usize>,
    /// One row per label, one entry per group element.
    characters: Vec<Vec<C64>>,
}

impl IrrepTable {
    /// Validates the sum rule `sum d^2 = |G|`, `chi(e) = d`, and character
    /// row orthonormality under `(1/|G|) sum_g chi(g) chi'(g)*`.
    pub fn new(
        group: &FiniteGroup,
        labels: Vec<String>,
        dims: Vec<usize>,
        characters: Vec<Vec<C64>>,
    ) -> Result<Self> {
        let order = group.order();
        if labels.len() != dims.len() || labels.len() != characters.len() {
            return Err(Error::InvalidIrrepTable(
                "labels, dims and character rows must align".into(),
            ));
        }
        if characters.iter().any(|row| row.len() != order) {
            return Err(Error::InvalidIrrepTable(format!(
                "each character row must have {order} entries"
            )));
        }
        let dim_sq: usize = dims.iter().map(|d| d * d).sum();
        if dim_sq != order {
            return Err(Error::InvalidIrrepTable(format!(
                "sum of squared dims is {dim_sq}, expected group order {order}"
            )));
        }
        for (row, &d) in characters.iter().zip(&dims) {
            let at_identity = row[group.identity()];
            if (at_identity - C64::new(d as f64, 0.0)).norm() > 1e-10 {
                return Err(Error::InvalidIrrepTable(format!(
                    "character at the identity must equal the dimension {d}"
                )));
            }
        }
        for i in 0..labels.len() {
            for j in 0..labels.len() {
                let inner: C64 = (0..order)
                    .map(|g| characters[i][g] * characters[j][g].conj())
                    .sum::<C64>()
                    / order as f64;
                let expected = if i == j { 1.0 } else { 0.0 };
                if (inner - C64::new(expected, 0.0)).norm() > 1e-10 {
                    return Err(Error::InvalidIrrepTable(format!(
                        "character rows `{}` and `{}` are not orthonormal",
                        labels[i], labels[j]
                    )));
                }
            }
        }
        Ok(IrrepTable {
            order,
            labels,
            dims,
            characters,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn characters(&self) -> &[Vec<C64>] {
        &self.characters
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
}

/// A unitary representation: one matrix per group element.
#[derive(Debug, Clone)]
pub struct UnitaryRep {
    group: FiniteGroup,
    matrices: Vec<ComplexDense>,
    dim: usize,
}

/// Worst-case deviations found while validating a representation.
#[derive(Debug, Clone, Copy)]
pub struct RepReport {
    pub max_unitarity_violation: f64,
    pub max_homomorphism_violation: f64,
    pub identity_violation: f64,
}

impl UnitaryRep {
    /// Validates unitarity and the homomorphism property at the default
    /// tolerance before accepting the matrices.
    pub fn new(group: FiniteGroup, matrices: Vec<ComplexDense>) -> Result<Self> {
        validate_rep_parts(&group, &matrices, &Tolerance::default())?;
        let dim = matrices[0].rows();
        Ok(UnitaryRep {
            group,
            matrices,
            dim,
        })
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn matrix(&self, g: usize) -> &ComplexDense {
        &self.matrices[g]
    }

    pub fn matrices(&self) -> &[ComplexDense] {
        &self.matrices
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
}

/// Re-checks unitarity and the homomorphism property of a representation,
/// reporting the worst violations found.
pub fn validate_rep(rep: &UnitaryRep, tol: &Tolerance) -> Result<RepReport> {
    validate_rep_parts(rep.group(), rep.matrices(), tol)
}

/// Validation on raw parts, used both by [`UnitaryRep::new`] and by file
/// loaders before a rep exists.
pub fn validate_rep_parts(
    group: &FiniteGroup,
    matrices: &[ComplexDense],
    tol: &Tolerance,
) -> Result<RepReport> {
    if matrices.len() != group.order() {
        return Err(Error::InvalidRep {
            reason: format!(
                "expected {} matrices, got {}",
                group.order(),
                matrices.len()
            ),
            violation: f64::INFINITY,
        });
    }
    let dim = matrices[0].rows();
    if matrices
        .iter()
        .any(|m| m.rows() != dim || m.cols() != dim)
    {
        return Err(Error::InvalidRep {
            reason: "all representation matrices must be square of equal size".into(),
            violation: f64::INFINITY,
        });
    }
    let threshold = tol.abs.max(1e-10);
    let id = ComplexDense::identity(dim);

    let identity_violation = matrices[group.identity()].sub(&id).max_abs();
    if identity_violation > threshold {
        return Err(Error::InvalidRep {
            reason: "matrix at the identity element is not the identity".into(),
            violation: identity_violation,
        });
    }

    let mut max_unitarity = 0.0f64;
    for (g, m) in matrices.iter().enumerate() {
        let violation = operator_norm(&m.adjoint().mul(m).sub(&id));
        if violation > threshold {
            return Err(Error::InvalidRep {
                reason: format!("matrix for element {g} is not unitary"),
                violation,
            });
        }
        max_unitarity = max_unitarity.max(violation);
    }

    let mut max_homomorphism = 0.0f64;
    for g in 0..group.order() {
        for h in 0..group.order() {
            let product = matrices[g].mul(&matrices[h]);
            let violation = operator_norm(&product.sub(&matrices[group.mul(g, h)]));
            if violation > threshold {
                return Err(Error::InvalidRep {
                    reason: format!("rho({g}) rho({h}) != rho({g}{h})"),
                    violation,
                });
            }
            max_homomorphism = max_homomorphism.max(violation);
        }
    }

    Ok(RepReport {
        max_unitarity_violation: max_unitarity,
        max_homomorphism_violation: max_homomorphism,
        identity_violation,
    })
}

/// Isotypic projectors and multiplicities of a representation.
#[derive(Debug, Clone)]
pub struct IsotypicDecomposition {
    labels: Vec<String>,
    irrep_dims: Vec<usize>,
    projectors: Vec<ComplexDense>,
    multiplicities: Vec<usize>,
}

impl IsotypicDecomposition {
    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn irrep_dims(&self) -> &[usize] {
        &self.irrep_dims
    }

    pub fn projectors(&self) -> &[ComplexDense] {
        &self.projectors
    }

    pub fn multiplicities(&self) -> &[usize] {
        &self.multiplicities
    }

    pub fn is_multiplicity_free(&self) -> bool {
        self.multiplicities.iter().all(|&m| m <= 1)
    }

    /// Per-component scalars `alpha_l = tr(P_l T) / tr(P_l)` for components
    /// with nonzero multiplicity; `None` where the component is absent or
    /// where `T` fails the scalarity check `|P T P - alpha P|_F <=`
    /// [`SCALARITY_TOL`]. The flag is true when every present component
    /// passed, i.e. `T` acts as a scalar on each isotypic component.
    pub fn scalars(&self, t: &ComplexDense) -> (Vec<Option<f64>>, bool) {
        let mut all_scalar = true;
        let values = self
            .projectors
            .iter()
            .zip(&self.multiplicities)
            .map(|(p, &m)| {
                if m == 0 {
                    return None;
                }
                let tr_p = p.trace().re;
                let alpha = p.mul(t).trace().re / tr_p;
                let residual = p
                    .mul(t)
                    .mul(p)
                    .sub(&p.scale(C64::new(alpha, 0.0)))
                    .frobenius_norm();
                if residual <= SCALARITY_TOL {
                    Some(alpha)
                } else {
                    all_scalar = false;
                    None
                }
            })
            .collect();
        (values, all_scalar)
    }
}

/// Character projection `P_l = (d_l / |G|) sum_g conj(chi_l(g)) rho(g)`
/// for every irrep label, with multiplicities `tr(P_l) / d_l` rounded to
/// the nearest integer (residual at most 1e-6).
pub fn isotypic_projectors(
    rep: &UnitaryRep,
    table: &IrrepTable,
) -> Result<IsotypicDecomposition> {
    if table.order() != rep.group().order() {
        return Err(Error::GroupMismatch);
    }
    let order = rep.group().order() as f64;
    let n = rep.dim();
    let mut projectors = Vec::with_capacity(table.len());
    let mut multiplicities = Vec::with_capacity(table.len());
    let mut dim_accum = 0usize;

    for (idx, label) in table.labels().iter().enumerate() {
        let d = table.dims()[idx];
        let mut p = ComplexDense::zeros(n, n);
        for g in 0..rep.group().order() {
            let coeff = table.characters()[idx][g].conj() * (d as f64 / order);
            p = p.add(&rep.matrix(g).scale(coeff));
        }
        let trace = p.trace();
        let raw = trace.re / d as f64;
        let rounded = raw.round();
        let residual = (raw - rounded).hypot(trace.im / d as f64);
        if residual > 1e-6 || rounded < -0.5 {
            return Err(Error::NonIntegerMultiplicity {
                label: label.clone(),
                raw,
                residual,
            });
        }
        let m = rounded.max(0.0) as usize;
        dim_accum += m * d;
        multiplicities.push(m);
        projectors.push(p);
    }

    if dim_accum != n {
        return Err(Error::InvalidIrrepTable(format!(
            "multiplicities account for dimension {dim_accum}, representation has {n}"
        )));
    }

    Ok(IsotypicDecomposition {
        labels: table.labels().to_vec(),
        irrep_dims: table.dims().to_vec(),
        projectors,
        multiplicities,
    })
}

/// Element-wise Kronecker product of two representations of the same
/// group: `g -> rho_A(g) (x) rho_B(g)`.
pub fn joint_rep(rep_a: &UnitaryRep, rep_b: &UnitaryRep) -> Result<UnitaryRep> {
    if !rep_a.group().same_structure(rep_b.group()) {
        return Err(Error::GroupMismatch);
    }
    let matrices: Vec<ComplexDense> = rep_a
        .matrices()
        .iter()
        .zip(rep_b.matrices())
        .map(|(a, b)| kron(a, b))
        .collect();
    UnitaryRep::new(rep_a.group().clone(), matrices)
}

/// Central observable `T = sum_l alpha_l P_l`, Hermitian by construction
/// and commuting with the whole group action.
pub fn central_observable(
    decomp: &IsotypicDecomposition,
    alphas: &[f64],
    label: impl Into<String>,
) -> Result<ClockObservable> {
    if alphas.len() != decomp.labels().len() {
        return Err(Error::LabelMismatch(format!(
            "got {} scalars for {} irrep labels",
            alphas.len(),
            decomp.labels().len()
        )));
    }
    if alphas.iter().any(|a| !a.is_finite()) {
        return Err(Error::InvalidArgument(
            "central observable scalars must be finite".into(),
        ));
    }
    let n = decomp.projectors()[0].rows();
    let mut t = ComplexDense::zeros(n, n);
    for (p, &alpha) in decomp.projectors().iter().zip(alphas) {
        t = t.add(&p.scale(C64::new(alpha, 0.0)));
    }
    let t = t.add(&t.adjoint()).scale(C64::new(0.5, 0.0));
    ClockObservable::new(t, label)
}

/// Projector onto the diagonal isotypic component
/// `sum_l P_l^A (x) P_l^B` over irrep types present in both factors.
/// Requires both representations to be multiplicity-free; its trace is
/// `sum_l d_l^2` over the shared labels.
pub fn diagonal_isotypic(
    rep_a: &UnitaryRep,
    rep_b: &UnitaryRep,
    table: &IrrepTable,
) -> Result<ComplexDense> {
    if !rep_a.group().same_structure(rep_b.group()) {
        return Err(Error::GroupMismatch);
    }
    let decomp_a = isotypic_projectors(rep_a, table)?;
    let decomp_b = isotypic_projectors(rep_b, table)?;
    diagonal_isotypic_from(&decomp_a, &decomp_b)
}

/// Same as [`diagonal_isotypic`] when the decompositions are already in
/// hand.
pub fn diagonal_isotypic_from(
    decomp_a: &IsotypicDecomposition,
    decomp_b: &IsotypicDecomposition,
) -> Result<ComplexDense> {
    if decomp_a.labels() != decomp_b.labels() {
        return Err(Error::LabelMismatch(
            "decompositions come from different irrep tables".into(),
        ));
    }
    for decomp in [decomp_a, decomp_b] {
        for (label, &m) in decomp.labels().iter().zip(decomp.multiplicities()) {
            if m > 1 {
                return Err(Error::MultiplicityNotFree {
                    label: label.clone(),
                    multiplicity: m,
                });
            }
        }
    }
    let n_a = decomp_a.projectors()[0].rows();
    let n_b = decomp_b.projectors()[0].rows();
    let mut pi = ComplexDense::zeros(n_a * n_b, n_a * n_b);
    for idx in 0..decomp_a.labels().len() {
        if decomp_a.multiplicities()[idx] == 1 && decomp_b.multiplicities()[idx] == 1 {
            pi = pi.add(&kron(
                &decomp_a.projectors()[idx],
                &decomp_b.projectors()[idx],
            ));
        }
    }
    Ok(pi)
}

/// Scalar assignment of one observable on one isotypic component.
#[derive(Debug, Clone)]
pub struct ScalarPair {
    pub label: String,
    pub alpha: f64,
    pub beta: f64,
    pub equal: bool,
}

/// Outcome of checking the classification of `ker(K)` as the diagonal
/// isotypic component.
#[derive(Debug, Clone)]
pub struct ClassificationReport {
    /// Worst `|[rho(g), K]|` over the group: the joint action commutes
    /// with `K` whenever both observables are equivariant.
    pub max_group_commutator: f64,
    /// `|K Pi_G|` for the diagonal isotypic projector `Pi_G`.
    pub k_diagonal_residual: f64,
    /// Per-shared-label scalars of `T_A` and `T_B` with equality flags.
    pub scalar_pairs: Vec<ScalarPair>,
    /// Whether each observable acts scalarly on every present component.
    pub central_a: bool,
    pub central_b: bool,
    /// Whether the scalar assignment separates irrep types: equal on each
    /// shared label, distinct across different labels.
    pub separating: bool,
    /// Frobenius distance between the kernel projector of `K` and `Pi_G`.
    pub projector_distance: f64,
    pub kernel_dim: usize,
    pub diagonal_trace: f64,
    /// True when `ker(K)` is strictly larger than the diagonal isotypic
    /// component.
    pub strict_containment: bool,
}

/// Checks the three-part classification: (i) the joint action commutes
/// with `K`; (ii) `K` annihilates the diagonal isotypic component when the
/// per-type scalars agree; (iii) for central separating observables,
/// `ker(K)` equals the diagonal isotypic component.
pub fn verify_classification(
    t_a: &ClockObservable,
    t_b: &ClockObservable,
    rep_a: &UnitaryRep,
    rep_b: &UnitaryRep,
    table: &IrrepTable,
    tol: &Tolerance,
) -> Result<ClassificationReport> {
    check_equivariant(t_a, rep_a, tol)?;
    check_equivariant(t_b, rep_b, tol)?;

    let sync = build_sync_operator(t_a, t_b, tol)?;
    let joint = joint_rep(rep_a, rep_b)?;

    let mut max_group_commutator = 0.0f64;
    for g in 0..joint.group().order() {
        let c = commutator(joint.matrix(g), sync.k_matrix())?;
        max_group_commutator = max_group_commutator.max(operator_norm(&c));
    }

    let decomp_a = isotypic_projectors(rep_a, table)?;
    let decomp_b = isotypic_projectors(rep_b, table)?;
    let pi_g = diagonal_isotypic_from(&decomp_a, &decomp_b)?;
    let k_diagonal_residual = operator_norm(&sync.k_matrix().mul(&pi_g));

    let (alphas, central_a) = decomp_a.scalars(t_a.matrix());
    let (betas, central_b) = decomp_b.scalars(t_b.matrix());

    let mut scalar_pairs = Vec::new();
    for idx in 0..table.len() {
        if let (Some(alpha), Some(beta)) = (alphas[idx], betas[idx]) {
            scalar_pairs.push(ScalarPair {
                label: table.labels()[idx].clone(),
                alpha,
                beta,
                equal: (alpha - beta).abs() <= SCALARITY_TOL,
            });
        }
    }

    // Separation: equal scalars on shared types, distinct across types.
    let mut separating = central_a && central_b && scalar_pairs.iter().all(|p| p.equal);
    'outer: for (i, a) in alphas.iter().enumerate() {
        let Some(alpha) = a else { continue };
        for (j, b) in betas.iter().enumerate() {
            let Some(beta) = b else { continue };
            if i != j && (alpha - beta).abs() <= SCALARITY_TOL {
                separating = false;
                break 'outer;
            }
        }
    }

    let projector_distance = sync
        .kernel_projector()
        .sub(&pi_g)
        .frobenius_norm();
    let diagonal_trace = pi_g.trace().re;
    let kernel_dim = sync.kernel_dim();
    let strict_containment = (kernel_dim as f64) > diagonal_trace.round() + 0.5;

    Ok(ClassificationReport {
        max_group_commutator,
        k_diagonal_residual,
        scalar_pairs,
        central_a,
        central_b,
        separating,
        projector_distance,
        kernel_dim,
        diagonal_trace,
        strict_containment,
    })
}

fn check_equivariant(
    t: &ClockObservable,
    rep: &UnitaryRep,
    tol: &Tolerance,
) -> Result<()> {
    if t.dim() != rep.dim() {
        return Err(Error::DimMismatch(format!(
            "observable dim {} does not match representation dim {}",
            t.dim(),
            rep.dim()
        )));
    }
    let threshold = tol.hermiticity_threshold(operator_norm(t.matrix()));
    for g in 0..rep.group().order() {
        let c = commutator(t.matrix(), rep.matrix(g))?;
        let violation = operator_norm(&c);
        if violation > threshold {
            return Err(Error::NotEquivariant {
                violation,
                threshold,
            });
        }
    }
    Ok(())
}

/// Frobenius-orthonormal spanning set of a matrix commutant.
#[derive(Debug, Clone)]
pub struct CommutantBasis {
    basis: Vec<ComplexDense>,
    dimension: usize,
    constraint_set_description: String,
}

impl CommutantBasis {
    pub fn basis(&self) -> &[ComplexDense] {
        &self.basis
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn description(&self) -> &str {
        &self.constraint_set_description
    }

    /// Frobenius norm of the component of `m` orthogonal to the span.
    pub fn span_residual(&self, m: &ComplexDense) -> f64 {
        let mut remainder = m.clone();
        for b in &self.basis {
            let coeff = b.frobenius_inner(&remainder);
            remainder = remainder.sub(&b.scale(coeff));
        }
        remainder.frobenius_norm()
    }
}

/// Solves `{X : XM = MX for all constraints M}` over complex matrices by
/// stacking the linear maps `X -> XM - MX` (each an `n^2 x n^2` operator
/// on row-major vectorized matrices) and taking the null space of the
/// stack. The basis is Frobenius-orthonormal with the null-space ordering
/// and phase convention.
pub fn commutant(constraints: &[ComplexDense], tol: &Tolerance) -> Result<CommutantBasis> {
    let first = constraints.first().ok_or_else(|| {
        Error::InvalidArgument("commutant of an empty constraint set".into())
    })?;
    let n = first.rows();
    for m in constraints {
        if !m.is_square() || m.rows() != n {
            return Err(Error::DimMismatch(format!(
                "commutant constraints must all be {n}x{n}, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
    }
    if n > COMMUTANT_DIM_CAP {
        return Err(Error::DimensionCap {
            dim: n,
            cap: COMMUTANT_DIM_CAP,
        });
    }

    let id = ComplexDense::identity(n);
    let blocks: Vec<ComplexDense> = constraints
        .iter()
        .map(|m| {
            // Row-major vectorization: vec(XM) = (I (x) M^T) vec(X) and
            // vec(MX) = (M (x) I) vec(X).
            let mt = transpose(m);
            kron(&id, &mt).sub(&kron(m, &id))
        })
        .collect();
    let stacked = ComplexDense::vstack(&blocks)?;
    let ns = null_space(&stacked, tol);

    let basis: Vec<ComplexDense> = ns
        .basis
        .iter()
        .map(|v| unvec(v, n))
        .collect();
    Ok(CommutantBasis {
        dimension: basis.len(),
        basis,
        constraint_set_description: format!("{} constraint matrices on dim {n}", constraints.len()),
    })
}

fn transpose(m: &ComplexDense) -> ComplexDense {
    let mut out = ComplexDense::zeros(m.cols(), m.rows());
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            out.set(j, i, m.at(i, j));
        }
    }
    out
}

fn unvec(v: &StateVector, n: usize) -> ComplexDense {
    ComplexDense::new(n, n, v.amplitudes().to_vec()).expect("null-space vector has n^2 entries")
}

/// The synchronization-preserving algebra with its postcondition
/// residuals.
#[derive(Debug, Clone)]
pub struct SyncAlgebra {
    pub basis: CommutantBasis,
    /// `|(I - Pi_K) X Pi_K|` per basis element: how much each generator
    /// leaks out of the kernel.
    pub kernel_leak: Vec<f64>,
    /// `|[X, Pi_G]|` per basis element when a diagonal isotypic projector
    /// was supplied.
    pub isotypic_commutation: Option<Vec<f64>>,
}

/// Computes the commutant of `rho(G) union {K}` — the equivariant
/// Hamiltonians commuting with the synchronization operator — and verifies
/// that every basis element preserves `ker(K)` (and commutes with the
/// diagonal isotypic projector when one is supplied).
pub fn sync_preserving_algebra(
    rep: &UnitaryRep,
    k: &SyncOperator,
    tol: &Tolerance,
    pi_g: Option<&ComplexDense>,
) -> Result<SyncAlgebra> {
    if rep.dim() != k.total_dim() {
        return Err(Error::DimMismatch(format!(
            "representation dim {} does not match sync operator dim {}",
            rep.dim(),
            k.total_dim()
        )));
    }
    let mut constraints: Vec<ComplexDense> = rep.matrices().to_vec();
    constraints.push(k.k_matrix().clone());
    let mut basis = commutant(&constraints, tol)?;
    basis.constraint_set_description = format!(
        "rho({}) union {{K}} on dim {}",
        rep.group().label(),
        rep.dim()
    );

    let n = k.total_dim();
    let pi = k.kernel_projector();
    let complement = ComplexDense::identity(n).sub(pi);
    let mut kernel_leak = Vec::with_capacity(basis.dimension());
    for x in basis.basis() {
        let leak = operator_norm(&complement.mul(x).mul(pi));
        if leak > SYNC_ALGEBRA_RESIDUAL_TOL {
            return Err(Error::NumericalFailure {
                context: "sync algebra kernel preservation".into(),
                residual: leak,
                threshold: SYNC_ALGEBRA_RESIDUAL_TOL,
            });
        }
        kernel_leak.push(leak);
    }

    let isotypic_commutation = match pi_g {
        Some(projector) => {
            let mut residuals = Vec::with_capacity(basis.dimension());
            for x in basis.basis() {
                let r = operator_norm(&commutator(x, projector)?);
                if r > SYNC_ALGEBRA_RESIDUAL_TOL {
                    return Err(Error::NumericalFailure {
                        context: "sync algebra isotypic commutation".into(),
                        residual: r,
                        threshold: SYNC_ALGEBRA_RESIDUAL_TOL,
                    });
                }
                residuals.push(r);
            }
            Some(residuals)
        }
        None => None,
    };

    Ok(SyncAlgebra {
        basis,
        kernel_leak,
        isotypic_commutation,
    })
}

#[cfg(test)]
mod tests;
