//! Scenario files: one self-contained JSON document per experiment.
//!
//! Complex scalars are `[re, im]` pairs everywhere; matrices are row-major
//! arrays of such pairs. The full schema is documented in the repository
//! README.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use synclab::linalg::{C64, ComplexDense, StateVector, Tolerance};
use synclab::sync::ClockObservable;

use crate::error::{CliError, CliResult};

/// Row-major complex matrix as nested `[re, im]` pairs.
pub type MatrixData = Vec<Vec<[f64; 2]>>;

pub fn matrix_from_data(data: &MatrixData) -> CliResult<ComplexDense> {
    let rows = data.len();
    let cols = data.first().map_or(0, Vec::len);
    if rows == 0 || cols == 0 {
        return Err(CliError::Parse("matrix must be nonempty".into()));
    }
    let mut entries = Vec::with_capacity(rows * cols);
    for row in data {
        if row.len() != cols {
            return Err(CliError::Parse("matrix rows have unequal lengths".into()));
        }
        entries.extend(row.iter().map(|&[re, im]| C64::new(re, im)));
    }
    ComplexDense::new(rows, cols, entries).map_err(|e| CliError::Parse(e.to_string()))
}

pub fn matrix_to_data(m: &ComplexDense) -> MatrixData {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| [m.at(i, j).re, m.at(i, j).im]).collect())
        .collect()
}

/// An observable or Hamiltonian factor: a builtin name, a real diagonal,
/// or an inline matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum MatrixSpec {
    Builtin(String),
    Diag { diag: Vec<f64> },
    Matrix { matrix: MatrixData },
}

impl MatrixSpec {
    pub fn build(&self) -> CliResult<ComplexDense> {
        match self {
            MatrixSpec::Builtin(name) => match name.as_str() {
                "pauli_z" => Ok(ComplexDense::pauli_z()),
                "pauli_x" => Ok(ComplexDense::pauli_x()),
                other => Err(CliError::Parse(format!(
                    "unknown builtin matrix `{other}` (expected pauli_z or pauli_x)"
                ))),
            },
            MatrixSpec::Diag { diag } => {
                if diag.is_empty() {
                    return Err(CliError::Parse("diag must be nonempty".into()));
                }
                Ok(ComplexDense::diag_real(diag))
            }
            MatrixSpec::Matrix { matrix } => matrix_from_data(matrix),
        }
    }
}

/// Hamiltonian builder: inline matrix, compatible sum of local terms, the
/// bound-saturating block instance, or a seeded random epsilon-compatible
/// draw.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum HamiltonianSpec {
    Matrix { matrix: MatrixData },
    Sum { sum: SumSpec },
    Sharpness { sharpness: SharpnessSpec },
    RandomCompatible { random_compatible: RandomCompatibleSpec },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SumSpec {
    pub h_a: MatrixSpec,
    pub h_b: MatrixSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SharpnessSpec {
    pub epsilon: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RandomCompatibleSpec {
    pub epsilon: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Observables {
    pub ta: MatrixSpec,
    pub tb: MatrixSpec,
}

/// Time grid: explicit list or uniform `{start, stop, count}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum TimesSpec {
    List { list: Vec<f64> },
    Grid { start: f64, stop: f64, count: usize },
}

impl TimesSpec {
    pub fn build(&self) -> CliResult<Vec<f64>> {
        match self {
            TimesSpec::List { list } => Ok(list.clone()),
            TimesSpec::Grid { start, stop, count } => {
                if *count < 2 {
                    return Err(CliError::Parse("time grid needs count >= 2".into()));
                }
                Ok((0..*count)
                    .map(|i| start + (stop - start) * i as f64 / (*count - 1) as f64)
                    .collect())
            }
        }
    }
}

/// Initial state: a computational basis index, explicit amplitudes, or a
/// vector drawn from the kernel ("first" basis vector or seeded "random").
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum InitialStateSpec {
    BasisIndex { basis_index: usize },
    Amplitudes { amplitudes: Vec<[f64; 2]> },
    Kernel { kernel: KernelChoice },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelChoice {
    First,
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceSpec {
    pub abs: Option<f64>,
    pub rel: Option<f64>,
}

/// Group section: a path to a group/representation file (relative to the
/// scenario file) plus optional central-observable scalar assignments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSection {
    pub file: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha_a: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha_b: Option<Vec<f64>>,
}

/// Per-check threshold overrides and expected values. Absent fields fall
/// back to the defaults listed in the README; expectation checks only run
/// when their field is present.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub drift_bound_slack: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fidelity_slack: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub closed_form_drift: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_drift: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group_commutation: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagonal_annihilation: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kernel_identification: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kernel_preservation: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub star_closure: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected_commutant_dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected_kernel_dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected_multiplicities_a: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected_diagonal_trace: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommandKind {
    VerifyDrift,
    Decompose,
    Commutant,
}

impl CommandKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            CommandKind::VerifyDrift => "verify-drift",
            CommandKind::Decompose => "decompose",
            CommandKind::Commutant => "commutant",
        }
    }
}

/// One experiment: everything needed to rebuild its operators, dynamics
/// and checks from scratch.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    pub command: CommandKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub observables: Option<Observables>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hamiltonian: Option<HamiltonianSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<GroupSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub times: Option<TimesSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial_state: Option<InitialStateSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<ToleranceSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub checks: Option<CheckSpec>,
}

impl Scenario {
    pub fn load(path: &Path) -> CliResult<(Scenario, PathBuf)> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            CliError::Parse(format!("cannot read scenario {}: {e}", path.display()))
        })?;
        let scenario: Scenario = serde_json::from_str(&text).map_err(|e| {
            CliError::Parse(format!("malformed scenario {}: {e}", path.display()))
        })?;
        let base = path
            .parent()
            .map(Path::to_path_buf)
            .unwrap_or_else(|| PathBuf::from("."));
        Ok((scenario, base))
    }

    pub fn checks(&self) -> CheckSpec {
        self.checks.clone().unwrap_or_default()
    }

    /// Effective tolerance: scenario overrides on top of the defaults,
    /// CLI flags on top of both.
    pub fn tolerance(&self, tol_abs: Option<f64>, tol_rel: Option<f64>) -> CliResult<Tolerance> {
        let default = Tolerance::default();
        let abs = tol_abs
            .or(self.tolerances.and_then(|t| t.abs))
            .unwrap_or(default.abs);
        let rel = tol_rel
            .or(self.tolerances.and_then(|t| t.rel))
            .unwrap_or(default.rel);
        Tolerance::new(abs, rel).map_err(|e| CliError::Parse(e.to_string()))
    }

    pub fn build_observables(&self) -> CliResult<(ClockObservable, ClockObservable)> {
        let obs = self.observables.as_ref().ok_or_else(|| {
            CliError::Parse(format!(
                "scenario `{}` is missing the observables section",
                self.name
            ))
        })?;
        let t_a = ClockObservable::new(obs.ta.build()?, "T_A")?;
        let t_b = ClockObservable::new(obs.tb.build()?, "T_B")?;
        Ok((t_a, t_b))
    }
}

pub fn state_from_amplitudes(pairs: &[[f64; 2]]) -> CliResult<StateVector> {
    let amps: Vec<C64> = pairs.iter().map(|&[re, im]| C64::new(re, im)).collect();
    StateVector::new(amps).map_err(CliError::from)
}
