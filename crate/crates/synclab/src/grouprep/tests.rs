use super::*;
use crate::linalg::ONE;

fn z2_table() -> (FiniteGroup, IrrepTable) {
    builtin_group(BuiltinGroup::Cyclic(2)).unwrap()
}

fn s3_table() -> (FiniteGroup, IrrepTable) {
    builtin_group(BuiltinGroup::S3).unwrap()
}

fn all_ones_over_3() -> ComplexDense {
    let third = C64::new(1.0 / 3.0, 0.0);
    ComplexDense::new(3, 3, vec![third; 9]).unwrap()
}

#[test]
fn cyclic_two_character_table() {
    let (group, table) = z2_table();
    assert_eq!(group.order(), 2);
    assert_eq!(table.dims(), &[1, 1]);
    assert_eq!(table.characters()[0], vec![ONE, ONE]);
    assert_eq!(table.characters()[1][0], ONE);
    assert!((table.characters()[1][1] - C64::new(-1.0, 0.0)).norm() < 1e-15);
}

#[test]
fn s3_character_table() {
    let (group, table) = s3_table();
    assert_eq!(group.order(), 6);
    assert_eq!(table.dims(), &[1, 1, 2]);
    let dim_sq: usize = table.dims().iter().map(|d| d * d).sum();
    assert_eq!(dim_sq, 6);
}

#[test]
fn cyclic_one_is_trivial_group() {
    let (group, table) = builtin_group(BuiltinGroup::Cyclic(1)).unwrap();
    assert_eq!(group.order(), 1);
    assert_eq!(table.len(), 1);
    assert_eq!(table.dims(), &[1]);
}

#[test]
fn group_validation_catches_bad_tables() {
    // A table where the identity law fails.
    let bad = FiniteGroup::new("bad", vec![vec![1, 0], vec![0, 1]], vec![0, 1], 0);
    assert!(matches!(bad, Err(Error::InvalidGroup(_))));
}

#[test]
fn z2_sigma_z_rep_is_valid() {
    let rep = z2_sigma_z_rep().unwrap();
    let report = validate_rep(&rep, &Tolerance::default()).unwrap();
    assert!(report.max_unitarity_violation < 1e-12);
    assert!(report.max_homomorphism_violation < 1e-12);
}

#[test]
fn s3_permutation_rep_is_valid() {
    let rep = s3_permutation_rep().unwrap();
    let report = validate_rep(&rep, &Tolerance::default()).unwrap();
    assert!(report.max_homomorphism_violation < 1e-12);
}

#[test]
fn scaled_matrix_is_rejected() {
    let (group, _) = z2_table();
    let result = UnitaryRep::new(
        group,
        vec![
            ComplexDense::identity(2),
            ComplexDense::pauli_z().scale(C64::new(1.5, 0.0)),
        ],
    );
    assert!(matches!(result, Err(Error::InvalidRep { .. })));
}

#[test]
fn z2_isotypic_projectors_are_diagonal_halves() {
    let (_, table) = z2_table();
    let rep = z2_sigma_z_rep().unwrap();
    let decomp = isotypic_projectors(&rep, &table).unwrap();
    assert_eq!(decomp.multiplicities(), &[1, 1]);
    let p_triv = &decomp.projectors()[0];
    let p_sign = &decomp.projectors()[1];
    assert!(p_triv.sub(&ComplexDense::diag_real(&[1.0, 0.0])).max_abs() < 1e-14);
    assert!(p_sign.sub(&ComplexDense::diag_real(&[0.0, 1.0])).max_abs() < 1e-14);
}

#[test]
fn s3_permutation_multiplicities_and_trivial_projector() {
    let (_, table) = s3_table();
    let rep = s3_permutation_rep().unwrap();
    let decomp = isotypic_projectors(&rep, &table).unwrap();
    assert_eq!(decomp.multiplicities(), &[1, 0, 1]);
    // The trivial projector averages the permutation matrices: J/3.
    assert!(decomp.projectors()[0].sub(&all_ones_over_3()).max_abs() < 1e-14);
    // Completeness and orthogonality.
    let sum = decomp
        .projectors()
        .iter()
        .fold(ComplexDense::zeros(3, 3), |acc, p| acc.add(p));
    assert!(sum.sub(&ComplexDense::identity(3)).max_abs() < 1e-12);
}

#[test]
fn regular_rep_of_z3_contains_every_irrep_once() {
    let (group, table) = builtin_group(BuiltinGroup::Cyclic(3)).unwrap();
    let rep = regular_rep(&group).unwrap();
    let decomp = isotypic_projectors(&rep, &table).unwrap();
    assert_eq!(decomp.multiplicities(), &[1, 1, 1]);
}

#[test]
fn mismatched_table_raises_non_integer_multiplicity() {
    // The permutation rep of S3 against the Z6 character table: same group
    // order, incompatible characters.
    let (_, z6_table) = builtin_group(BuiltinGroup::Cyclic(6)).unwrap();
    let rep = s3_permutation_rep().unwrap();
    let result = isotypic_projectors(&rep, &z6_table);
    assert!(
        matches!(
            result,
            Err(Error::NonIntegerMultiplicity { .. }) | Err(Error::InvalidIrrepTable(_))
        ),
        "got {result:?}"
    );
}

#[test]
fn joint_rep_of_z2_is_sigma_z_tensor_sigma_z() {
    let rep = z2_sigma_z_rep().unwrap();
    let joint = joint_rep(&rep, &rep).unwrap();
    let expected = kron(&ComplexDense::pauli_z(), &ComplexDense::pauli_z());
    assert!(joint.matrix(1).sub(&expected).max_abs() == 0.0);
}

#[test]
fn joint_with_trivial_factor_is_padded_rep() {
    let (group, _) = z2_table();
    let trivial = UnitaryRep::new(
        group.clone(),
        vec![ComplexDense::identity(1), ComplexDense::identity(1)],
    )
    .unwrap();
    let rep = z2_sigma_z_rep().unwrap();
    let joint = joint_rep(&trivial, &rep).unwrap();
    assert!(joint.matrix(1).sub(&ComplexDense::pauli_z()).max_abs() == 0.0);
}

#[test]
fn joint_rep_of_s3_validates() {
    let rep = s3_permutation_rep().unwrap();
    let joint = joint_rep(&rep, &rep).unwrap();
    assert_eq!(joint.dim(), 9);
    assert!(validate_rep(&joint, &Tolerance::default()).is_ok());
}

#[test]
fn joint_rep_group_mismatch() {
    let a = z2_sigma_z_rep().unwrap();
    let b = s3_permutation_rep().unwrap();
    assert!(matches!(joint_rep(&a, &b), Err(Error::GroupMismatch)));
}

#[test]
fn central_idempotent_of_s3_is_trivial_projector() {
    let (_, table) = s3_table();
    let rep = s3_permutation_rep().unwrap();
    let decomp = isotypic_projectors(&rep, &table).unwrap();
    // Scalar 1 on the trivial type, 0 on the standard type; the sign type
    // is absent so its scalar is irrelevant.
    let t = central_observable(&decomp, &[1.0, 7.0, 0.0], "T").unwrap();
    assert!(t.matrix().sub(&all_ones_over_3()).max_abs() < 1e-13);
}

#[test]
fn equal_scalars_give_identity() {
    let (_, table) = z2_table();
    let rep = z2_sigma_z_rep().unwrap();
    let decomp = isotypic_projectors(&rep, &table).unwrap();
    let t = central_observable(&decomp, &[2.5, 2.5], "T").unwrap();
    assert!(t
        .matrix()
        .sub(&ComplexDense::identity(2).scale(C64::new(2.5, 0.0)))
        .max_abs()
        < 1e-13);
}

#[test]
fn z2_alpha_pm_one_recovers_sigma_z() {
    let (_, table) = z2_table();
    let rep = z2_sigma_z_rep().unwrap();
    let decomp = isotypic_projectors(&rep, &table).unwrap();
    let t = central_observable(&decomp, &[1.0, -1.0], "T").unwrap();
    assert!(t.matrix().sub(&ComplexDense::pauli_z()).max_abs() < 1e-13);
}

#[test]
fn central_observable_label_mismatch() {
    let (_, table) = z2_table();
    let rep = z2_sigma_z_rep().unwrap();
    let decomp = isotypic_projectors(&rep, &table).unwrap();
    assert!(matches!(
        central_observable(&decomp, &[1.0], "T"),
        Err(Error::LabelMismatch(_))
    ));
}

#[test]
fn diagonal_isotypic_of_z2_hits_agreement_subspace() {
    let (_, table) = z2_table();
    let rep = z2_sigma_z_rep().unwrap();
    let pi = diagonal_isotypic(&rep, &rep, &table).unwrap();
    let expected = ComplexDense::diag_real(&[1.0, 0.0, 0.0, 1.0]);
    assert!(pi.sub(&expected).max_abs() < 1e-13);
    assert!((pi.trace().re - 2.0).abs() < 1e-12);
}

#[test]
fn diagonal_isotypic_of_s3_has_trace_five() {
    let (_, table) = s3_table();
    let rep = s3_permutation_rep().unwrap();
    let pi = diagonal_isotypic(&rep, &rep, &table).unwrap();
    assert!((pi.trace().re - 5.0).abs() < 1e-8);
    // Hermitian idempotent.
    assert!(pi.sub(&pi.adjoint()).max_abs() < 1e-12);
    assert!(pi.mul(&pi).sub(&pi).max_abs() < 1e-11);
}

#[test]
fn diagonal_isotypic_single_shared_label() {
    let (group, table) = s3_table();
    let rep_a = s3_permutation_rep().unwrap();
    // One-dimensional trivial rep: shares only the trivial label with the
    // permutation rep, so the projector is P_triv (x) 1 with trace 1.
    let trivial = UnitaryRep::new(
        group,
        (0..6).map(|_| ComplexDense::identity(1)).collect(),
    )
    .unwrap();
    let pi = diagonal_isotypic(&rep_a, &trivial, &table).unwrap();
    assert!((pi.trace().re - 1.0).abs() < 1e-10);
    assert!(pi.sub(&all_ones_over_3()).max_abs() < 1e-12);
}

#[test]
fn diagonal_isotypic_rejects_multiplicities() {
    let (group, table) = builtin_group(BuiltinGroup::Cyclic(1)).unwrap();
    // Two copies of the trivial irrep.
    let rep = UnitaryRep::new(group, vec![ComplexDense::identity(2)]).unwrap();
    assert!(matches!(
        diagonal_isotypic(&rep, &rep, &table),
        Err(Error::MultiplicityNotFree { .. })
    ));
}

#[test]
fn classification_z2_sigma_z_kernel_equals_diagonal_isotypic() {
    let (_, table) = z2_table();
    let rep = z2_sigma_z_rep().unwrap();
    let t = ClockObservable::pauli_z("T");
    let report = verify_classification(&t, &t, &rep, &rep, &table, &Tolerance::default()).unwrap();
    assert!(report.max_group_commutator <= 1e-12);
    assert!(report.k_diagonal_residual <= 1e-12);
    assert!(report.central_a && report.central_b && report.separating);
    assert!(report.projector_distance <= 1e-10);
    assert_eq!(report.kernel_dim, 2);
    assert!(!report.strict_containment);
}

#[test]
fn classification_s3_central_idempotent() {
    let (_, table) = s3_table();
    let rep = s3_permutation_rep().unwrap();
    let decomp = isotypic_projectors(&rep, &table).unwrap();
    let t = central_observable(&decomp, &[1.0, 0.0, 0.0], "T").unwrap();
    let report = verify_classification(&t, &t, &rep, &rep, &table, &Tolerance::default()).unwrap();
    assert!(report.max_group_commutator <= 1e-12);
    assert!(report.separating);
    assert!(report.projector_distance <= 1e-10);
    assert_eq!(report.kernel_dim, 5);
}

#[test]
fn classification_non_separating_scalars_give_strict_containment() {
    let (_, table) = z2_table();
    let rep = z2_sigma_z_rep().unwrap();
    let decomp = isotypic_projectors(&rep, &table).unwrap();
    // Equal scalars on both irrep types: K = 0 and the kernel is the whole
    // space, strictly larger than the diagonal isotypic component.
    let t = central_observable(&decomp, &[1.0, 1.0], "T").unwrap();
    let report = verify_classification(&t, &t, &rep, &rep, &table, &Tolerance::default()).unwrap();
    assert!(!report.separating);
    assert!(report.strict_containment);
    assert_eq!(report.kernel_dim, 4);
    assert!((report.diagonal_trace - 2.0).abs() < 1e-10);
    assert!(report.projector_distance > 1.0);
}

#[test]
fn classification_rejects_non_equivariant_observable() {
    let (_, table) = z2_table();
    let rep = z2_sigma_z_rep().unwrap();
    // sigma_x anticommutes with sigma_z: not equivariant.
    let t = ClockObservable::new(ComplexDense::pauli_x(), "X").unwrap();
    assert!(matches!(
        verify_classification(&t, &t, &rep, &rep, &table, &Tolerance::default()),
        Err(Error::NotEquivariant { .. })
    ));
}

#[test]
fn commutant_of_irreducible_rep_is_scalars() {
    // Schur: the standard 2-dim irrep of S3 has a one-dimensional
    // commutant.
    let irreps = builtin_irreps(BuiltinGroup::S3).unwrap();
    let standard = &irreps[2];
    let basis = commutant(standard.matrices(), &Tolerance::default()).unwrap();
    assert_eq!(basis.dimension(), 1);
    // The single element is proportional to the identity.
    let x = &basis.basis()[0];
    let scaled_id = ComplexDense::identity(2).scale(x.at(0, 0));
    assert!(x.sub(&scaled_id).max_abs() < 1e-10);
}

#[test]
fn commutant_of_s3_permutation_rep_has_dim_two() {
    // Multiplicities (1, 0, 1): sum of squares = 2.
    let rep = s3_permutation_rep().unwrap();
    let basis = commutant(rep.matrices(), &Tolerance::default()).unwrap();
    assert_eq!(basis.dimension(), 2);
}

#[test]
fn commutant_of_sigma_z_tensor_sigma_z() {
    // Two 2-dim eigenspaces: commutant dimension 2^2 + 2^2 = 8.
    let zz = kron(&ComplexDense::pauli_z(), &ComplexDense::pauli_z());
    let basis = commutant(&[zz], &Tolerance::default()).unwrap();
    assert_eq!(basis.dimension(), 8);
}

#[test]
fn commutant_basis_is_frobenius_orthonormal() {
    let rep = s3_permutation_rep().unwrap();
    let basis = commutant(rep.matrices(), &Tolerance::default()).unwrap();
    for (i, a) in basis.basis().iter().enumerate() {
        for (j, b) in basis.basis().iter().enumerate() {
            let inner = a.frobenius_inner(b);
            let expected = if i == j { 1.0 } else { 0.0 };
            assert!((inner - C64::new(expected, 0.0)).norm() < 1e-11);
        }
    }
}

fn z2_sync_setup() -> (UnitaryRep, SyncOperator) {
    let rep = z2_sigma_z_rep().unwrap();
    let joint = joint_rep(&rep, &rep).unwrap();
    let t = ClockObservable::pauli_z("T");
    let k = build_sync_operator(&t, &t, &Tolerance::default()).unwrap();
    (joint, k)
}

#[test]
fn z2_sync_algebra_has_dimension_six() {
    // Joint eigensectors of {sigma_z x sigma_z, K}: {|00>,|11>} at (+1, 0),
    // {|01>} at (-1, +2), {|10>} at (-1, -2) — so 4 + 1 + 1 = 6.
    let (joint, k) = z2_sync_setup();
    let algebra =
        sync_preserving_algebra(&joint, &k, &Tolerance::default(), None).unwrap();
    assert_eq!(algebra.basis.dimension(), 6);
    for leak in &algebra.kernel_leak {
        assert!(*leak <= 1e-10);
    }
}

#[test]
fn z2_sync_algebra_is_star_closed_and_unital() {
    let (joint, k) = z2_sync_setup();
    let algebra =
        sync_preserving_algebra(&joint, &k, &Tolerance::default(), None).unwrap();
    for x in algebra.basis.basis() {
        assert!(algebra.basis.span_residual(&x.adjoint()) < 1e-9);
    }
    let id = ComplexDense::identity(4);
    assert!(algebra.basis.span_residual(&id) < 1e-9);
}

#[test]
fn zero_sync_operator_reduces_to_group_commutant() {
    let rep = z2_sigma_z_rep().unwrap();
    let joint = joint_rep(&rep, &rep).unwrap();
    let t = ClockObservable::new(ComplexDense::identity(2), "I").unwrap();
    let k = build_sync_operator(&t, &t, &Tolerance::default()).unwrap();
    assert_eq!(k.spectral_gap(), f64::INFINITY);
    let algebra =
        sync_preserving_algebra(&joint, &k, &Tolerance::default(), None).unwrap();
    let group_only = commutant(joint.matrices(), &Tolerance::default()).unwrap();
    assert_eq!(algebra.basis.dimension(), group_only.dimension());
    assert_eq!(algebra.basis.dimension(), 8);
}

#[test]
fn s3_sync_algebra_dimension_by_sector_count() {
    // Joint rep of S3 on C^3 (x) C^3 decomposes as 2 triv + 1 sign + 3 std.
    // With the trivial-projector clock, K splits the three std copies into
    // distinct eigenvalues (0, +1, -1) while both triv copies sit in the
    // kernel: sectors give 2^2 + 1 + 1 + 1 + 1 = 8.
    let (_, table) = s3_table();
    let rep = s3_permutation_rep().unwrap();
    let decomp = isotypic_projectors(&rep, &table).unwrap();
    let t = central_observable(&decomp, &[1.0, 0.0, 0.0], "T").unwrap();
    let k = build_sync_operator(&t, &t, &Tolerance::default()).unwrap();
    let joint = joint_rep(&rep, &rep).unwrap();
    let pi_g = diagonal_isotypic(&rep, &rep, &table).unwrap();
    let algebra =
        sync_preserving_algebra(&joint, &k, &Tolerance::default(), Some(&pi_g)).unwrap();
    assert_eq!(algebra.basis.dimension(), 8);
    for leak in &algebra.kernel_leak {
        assert!(*leak <= 1e-10);
    }
    for r in algebra.isotypic_commutation.as_ref().unwrap() {
        assert!(*r <= 1e-9);
    }
}

#[test]
fn commutant_respects_dimension_cap() {
    let big = ComplexDense::identity(65);
    assert!(matches!(
        commutant(&[big], &Tolerance::default()),
        Err(Error::DimensionCap { .. })
    ));
}
