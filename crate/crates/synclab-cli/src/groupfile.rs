//! Group/representation input files.
//!
//! A single JSON document carries the multiplication table, the character
//! table, and the representation matrices for both tensor factors. All
//! element and irrep indices are 0-based; complex scalars are `[re, im]`
//! pairs.

use std::path::Path;

use serde::{Deserialize, Serialize};

use synclab::grouprep::{validate_rep_parts, FiniteGroup, IrrepTable, UnitaryRep};
use synclab::linalg::{C64, ComplexDense, Tolerance};

use crate::error::{CliError, CliResult};
use crate::scenario::{matrix_from_data, MatrixData};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IrrepEntry {
    pub label: String,
    pub dim: usize,
    /// One `[re, im]` character value per group element.
    pub characters: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RepEntry {
    /// One matrix per group element, in element order.
    pub matrices: Vec<MatrixData>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupFile {
    pub label: String,
    pub order: usize,
    pub identity: usize,
    /// Row-major: `mul_table[a][b]` is the index of `a * b`.
    pub mul_table: Vec<Vec<usize>>,
    pub inverse: Vec<usize>,
    pub irreps: Vec<IrrepEntry>,
    pub rep_a: RepEntry,
    /// Defaults to `rep_a` when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rep_b: Option<RepEntry>,
}

/// Everything a scenario's group section resolves to.
pub struct LoadedGroup {
    pub group: FiniteGroup,
    pub table: IrrepTable,
    pub rep_a: UnitaryRep,
    pub rep_b: UnitaryRep,
}

pub fn load_group_file(path: &Path) -> CliResult<LoadedGroup> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Parse(format!("cannot read group file {}: {e}", path.display())))?;
    let file: GroupFile = serde_json::from_str(&text)
        .map_err(|e| CliError::Parse(format!("malformed group file {}: {e}", path.display())))?;

    if file.mul_table.len() != file.order {
        return Err(CliError::Parse(format!(
            "group file {}: mul_table has {} rows, expected {}",
            path.display(),
            file.mul_table.len(),
            file.order
        )));
    }

    let group = FiniteGroup::new(
        file.label.clone(),
        file.mul_table.clone(),
        file.inverse.clone(),
        file.identity,
    )?;

    let labels: Vec<String> = file.irreps.iter().map(|i| i.label.clone()).collect();
    let dims: Vec<usize> = file.irreps.iter().map(|i| i.dim).collect();
    let characters: Vec<Vec<C64>> = file
        .irreps
        .iter()
        .map(|i| i.characters.iter().map(|&[re, im]| C64::new(re, im)).collect())
        .collect();
    let table = IrrepTable::new(&group, labels, dims, characters)?;

    let rep_a = build_rep(&group, &file.rep_a)?;
    let rep_b = match &file.rep_b {
        Some(entry) => build_rep(&group, entry)?,
        None => rep_a.clone(),
    };

    Ok(LoadedGroup {
        group,
        table,
        rep_a,
        rep_b,
    })
}

fn build_rep(group: &FiniteGroup, entry: &RepEntry) -> CliResult<UnitaryRep> {
    let matrices: Vec<ComplexDense> = entry
        .matrices
        .iter()
        .map(matrix_from_data)
        .collect::<CliResult<_>>()?;
    validate_rep_parts(group, &matrices, &Tolerance::default())?;
    Ok(UnitaryRep::new(group.clone(), matrices)?)
}
