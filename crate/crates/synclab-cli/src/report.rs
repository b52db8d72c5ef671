//! Machine-readable run reports and CSV trajectory output.
//!
//! Everything written to disk is byte-stable for a fixed scenario and
//! seed: CSV values use 17 significant digits with `.` as the decimal
//! separator and LF line endings; JSON reports have a fixed field order
//! and no hash-ordered containers.

use std::path::Path;

use serde::Serialize;

use synclab::dynamics::DriftTrajectory;

use crate::error::{CliError, CliResult};
use crate::scenario::MatrixData;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckRecord {
    pub check_id: String,
    pub status: CheckStatus,
    pub measured: f64,
    pub threshold: f64,
}

impl CheckRecord {
    /// Passes when `measured <= threshold`.
    pub fn bound(check_id: impl Into<String>, measured: f64, threshold: f64) -> Self {
        CheckRecord {
            check_id: check_id.into(),
            status: if measured <= threshold {
                CheckStatus::Pass
            } else {
                CheckStatus::Fail
            },
            measured,
            threshold,
        }
    }

    /// Passes when `measured == expected` exactly (integer comparisons).
    pub fn exact(check_id: impl Into<String>, measured: f64, expected: f64) -> Self {
        CheckRecord {
            check_id: check_id.into(),
            status: if measured == expected {
                CheckStatus::Pass
            } else {
                CheckStatus::Fail
            },
            measured,
            threshold: expected,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == CheckStatus::Pass
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DriftDetails {
    pub epsilon: f64,
    /// `None` when `K` vanishes and the gap is unbounded.
    pub spectral_gap: Option<f64>,
    pub kernel_dim: usize,
    pub kernel_threshold: f64,
    pub rows: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct IrrepSummary {
    pub label: String,
    pub dim: usize,
    pub multiplicity_a: usize,
    pub multiplicity_b: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScalarSummary {
    pub label: String,
    pub alpha: f64,
    pub beta: f64,
    pub equal: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct DecompositionDetails {
    pub group: String,
    pub irreps: Vec<IrrepSummary>,
    pub diagonal_trace: f64,
    pub kernel_dim: usize,
    pub group_commutator_residual: f64,
    pub k_diagonal_residual: f64,
    pub scalars: Vec<ScalarSummary>,
    pub central_a: bool,
    pub central_b: bool,
    pub separating: bool,
    pub projector_distance: f64,
    pub strict_containment: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CommutantDetails {
    pub constraints: String,
    pub dimension: usize,
    pub kernel_preservation_residuals: Vec<f64>,
    pub star_closure_residual: f64,
    pub identity_span_residual: f64,
    /// Frobenius-orthonormal basis, row-major `[re, im]` entries.
    pub basis: Vec<MatrixData>,
}

/// Outcome of one scenario run.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub scenario: String,
    pub command: String,
    pub seed: Option<u64>,
    pub passed: bool,
    pub checks: Vec<CheckRecord>,
    pub outputs: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub drift: Option<DriftDetails>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decomposition: Option<DecompositionDetails>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub commutant: Option<CommutantDetails>,
}

impl RunReport {
    pub fn new(scenario: &str, command: &str, seed: Option<u64>) -> Self {
        RunReport {
            scenario: scenario.to_string(),
            command: command.to_string(),
            seed,
            passed: true,
            checks: Vec::new(),
            outputs: Vec::new(),
            drift: None,
            decomposition: None,
            commutant: None,
        }
    }

    pub fn push(&mut self, check: CheckRecord) {
        self.passed &= check.passed();
        self.checks.push(check);
    }

    pub fn write_json(&self, path: &Path) -> CliResult<()> {
        let mut text = serde_json::to_string_pretty(self)
            .map_err(|e| CliError::Internal(format!("report serialization failed: {e}")))?;
        text.push('\n');
        std::fs::write(path, text)
            .map_err(|e| CliError::Internal(format!("cannot write {}: {e}", path.display())))
    }
}

/// 17 significant digits, locale-independent.
fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// CSV schema: `t,drift,bound,fidelity_sq,fidelity_floor`, LF endings.
pub fn write_trajectory_csv(path: &Path, trajectory: &DriftTrajectory) -> CliResult<()> {
    let mut out = String::from("t,drift,bound,fidelity_sq,fidelity_floor\n");
    for row in &trajectory.rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            fmt_f64(row.t),
            fmt_f64(row.drift),
            fmt_f64(row.bound),
            fmt_f64(row.fidelity_sq),
            fmt_f64(row.fidelity_floor),
        ));
    }
    std::fs::write(path, out)
        .map_err(|e| CliError::Internal(format!("cannot write {}: {e}", path.display())))
}
