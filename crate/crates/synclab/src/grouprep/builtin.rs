//! Built-in groups with exact multiplication and character tables: cyclic
//! groups of any order and the symmetric group on three letters. These two
//! families cover the worked two-qubit and three-level examples and supply
//! irrep matrices for randomized commutant experiments.

use std::f64::consts::TAU;

use crate::error::Result;
use crate::linalg::{C64, ComplexDense};

use super::{FiniteGroup, IrrepTable, UnitaryRep};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BuiltinGroup {
    Cyclic(usize),
    S3,
}

impl BuiltinGroup {
    pub fn label(&self) -> String {
        match self {
            BuiltinGroup::Cyclic(n) => format!("Z{n}"),
            BuiltinGroup::S3 => "S3".into(),
        }
    }
}

/// Exact group structure plus exact character table.
pub fn builtin_group(which: BuiltinGroup) -> Result<(FiniteGroup, IrrepTable)> {
    match which {
        BuiltinGroup::Cyclic(n) => cyclic(n),
        BuiltinGroup::S3 => s3(),
    }
}

fn cyclic(n: usize) -> Result<(FiniteGroup, IrrepTable)> {
    if n == 0 {
        return Err(crate::error::Error::InvalidGroup(
            "cyclic group order must be at least 1".into(),
        ));
    }
    let mul_table: Vec<Vec<usize>> = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
    let inverse: Vec<usize> = (0..n).map(|i| (n - i) % n).collect();
    let group = FiniteGroup::new(format!("Z{n}"), mul_table, inverse, 0)?;

    let labels: Vec<String> = (0..n).map(|k| format!("chi{k}")).collect();
    let dims = vec![1usize; n];
    let characters: Vec<Vec<C64>> = (0..n)
        .map(|k| {
            (0..n)
                .map(|j| {
                    let angle = TAU * (k * j % n) as f64 / n as f64;
                    C64::new(angle.cos(), angle.sin())
                })
                .collect()
        })
        .collect();
    let table = IrrepTable::new(&group, labels, dims, characters)?;
    Ok((group, table))
}

/// Permutations of {0,1,2} in a fixed element order: identity, the three
/// transpositions, then the two 3-cycles.
pub(crate) const S3_PERMS: [[usize; 3]; 6] = [
    [0, 1, 2],
    [1, 0, 2],
    [2, 1, 0],
    [0, 2, 1],
    [1, 2, 0],
    [2, 0, 1],
];

fn s3_compose(a: usize, b: usize) -> usize {
    // (a . b)(i) = a(b(i))
    let composed = [
        S3_PERMS[a][S3_PERMS[b][0]],
        S3_PERMS[a][S3_PERMS[b][1]],
        S3_PERMS[a][S3_PERMS[b][2]],
    ];
    S3_PERMS
        .iter()
        .position(|p| *p == composed)
        .expect("composition stays in the group")
}

fn s3() -> Result<(FiniteGroup, IrrepTable)> {
    let mul_table: Vec<Vec<usize>> = (0..6)
        .map(|a| (0..6).map(|b| s3_compose(a, b)).collect())
        .collect();
    let inverse: Vec<usize> = (0..6)
        .map(|a| (0..6).find(|&b| s3_compose(a, b) == 0).unwrap())
        .collect();
    let group = FiniteGroup::new("S3", mul_table, inverse, 0)?;

    let labels = vec!["trivial".to_string(), "sign".to_string(), "standard".to_string()];
    let dims = vec![1, 1, 2];
    let sign: Vec<f64> = vec![1.0, -1.0, -1.0, -1.0, 1.0, 1.0];
    let characters = vec![
        vec![C64::new(1.0, 0.0); 6],
        sign.iter().map(|&s| C64::new(s, 0.0)).collect(),
        vec![
            C64::new(2.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(-1.0, 0.0),
            C64::new(-1.0, 0.0),
        ],
    ];
    let table = IrrepTable::new(&group, labels, dims, characters)?;
    Ok((group, table))
}

/// Irreducible representations as explicit unitary matrices, in the same
/// label order as the character table.
pub fn builtin_irreps(which: BuiltinGroup) -> Result<Vec<UnitaryRep>> {
    let (group, table) = builtin_group(which)?;
    match which {
        BuiltinGroup::Cyclic(n) => (0..n)
            .map(|k| {
                let matrices: Vec<ComplexDense> = (0..n)
                    .map(|j| ComplexDense::diag_complex(&[table.characters()[k][j]]))
                    .collect();
                UnitaryRep::new(group.clone(), matrices)
            })
            .collect(),
        BuiltinGroup::S3 => {
            let trivial: Vec<ComplexDense> =
                (0..6).map(|_| ComplexDense::identity(1)).collect();
            let sign: Vec<ComplexDense> = (0..6)
                .map(|g| ComplexDense::diag_complex(&[table.characters()[1][g]]))
                .collect();
            // Standard 2-dim irrep: restrict the permutation action to the
            // plane orthogonal to (1,1,1) in the orthonormal basis
            // u1 = (1,-1,0)/sqrt(2), u2 = (1,1,-2)/sqrt(6).
            let u = ComplexDense::from_real_rows(&[
                vec![1.0 / 2f64.sqrt(), 1.0 / 6f64.sqrt()],
                vec![-1.0 / 2f64.sqrt(), 1.0 / 6f64.sqrt()],
                vec![0.0, -2.0 / 6f64.sqrt()],
            ])?;
            let perm = s3_permutation_matrices();
            let standard: Vec<ComplexDense> = perm
                .iter()
                .map(|p| u.adjoint().mul(p).mul(&u))
                .collect();
            Ok(vec![
                UnitaryRep::new(group.clone(), trivial)?,
                UnitaryRep::new(group.clone(), sign)?,
                UnitaryRep::new(group, standard)?,
            ])
        }
    }
}

fn s3_permutation_matrices() -> Vec<ComplexDense> {
    S3_PERMS
        .iter()
        .map(|perm| {
            let mut m = ComplexDense::zeros(3, 3);
            for (src, &dst) in perm.iter().enumerate() {
                m.set(dst, src, C64::new(1.0, 0.0));
            }
            m
        })
        .collect()
}

/// S3 acting on C^3 by permutation of basis vectors.
pub fn s3_permutation_rep() -> Result<UnitaryRep> {
    let (group, _) = builtin_group(BuiltinGroup::S3)?;
    UnitaryRep::new(group, s3_permutation_matrices())
}

/// The two-level representation of Z2 sending the nontrivial element to
/// sigma_z.
pub fn z2_sigma_z_rep() -> Result<UnitaryRep> {
    let (group, _) = builtin_group(BuiltinGroup::Cyclic(2))?;
    UnitaryRep::new(group, vec![ComplexDense::identity(2), ComplexDense::pauli_z()])
}

/// Left regular representation: `rho(g)|h> = |gh>`.
pub fn regular_rep(group: &FiniteGroup) -> Result<UnitaryRep> {
    let n = group.order();
    let matrices: Vec<ComplexDense> = (0..n)
        .map(|g| {
            let mut m = ComplexDense::zeros(n, n);
            for h in 0..n {
                m.set(group.mul(g, h), h, C64::new(1.0, 0.0));
            }
            m
        })
        .collect();
    UnitaryRep::new(group.clone(), matrices)
}
