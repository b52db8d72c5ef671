//! The four subcommands: drift verification, isotypic decomposition,
//! commutant computation, and suite aggregation.

use std::path::{Path, PathBuf};

use serde::Serialize;

use synclab::dynamics::{drift_trajectory, sharpness_instance, EvolutionSpec};
use synclab::grouprep::{
    central_observable, diagonal_isotypic_from, isotypic_projectors, joint_rep,
    sync_preserving_algebra, verify_classification, IsotypicDecomposition,
};
use synclab::linalg::{ComplexDense, StateVector, Tolerance};
use synclab::random::{random_epsilon_compatible, random_kernel_state, rng_from_seed, SeededRng};
use synclab::sync::{
    build_sync_operator, epsilon_of, sum_hamiltonian, ClockObservable, CompatPair, SyncOperator,
};
use synclab::Error;

use crate::error::{CliError, CliResult};
use crate::groupfile::{load_group_file, LoadedGroup};
use crate::report::{
    write_trajectory_csv, CheckRecord, CommutantDetails, DecompositionDetails, DriftDetails,
    IrrepSummary, RunReport, ScalarSummary,
};
use crate::scenario::{
    matrix_to_data, state_from_amplitudes, CommandKind, HamiltonianSpec, InitialStateSpec,
    KernelChoice, Scenario,
};

/// Flag overrides shared by every subcommand.
#[derive(Debug, Clone, Copy, Default)]
pub struct Overrides {
    pub tol_abs: Option<f64>,
    pub tol_rel: Option<f64>,
    pub quiet: bool,
}

const DEFAULT_BOUND_SLACK: f64 = 1e-9;
const DEFAULT_RESIDUAL_TOL: f64 = 1e-9;

fn expect_command(scenario: &Scenario, expected: CommandKind) -> CliResult<()> {
    if scenario.command != expected {
        return Err(CliError::Parse(format!(
            "scenario `{}` declares command `{}` but was invoked as `{}`",
            scenario.name,
            scenario.command.as_str(),
            expected.as_str()
        )));
    }
    Ok(())
}

fn print_report(report: &RunReport, quiet: bool) {
    if !quiet {
        for check in &report.checks {
            println!(
                "check {}: {} (measured {:.3e}, threshold {:.3e})",
                check.check_id,
                if check.passed() { "PASS" } else { "FAIL" },
                check.measured,
                check.threshold
            );
        }
    }
    let passed = report.checks.iter().filter(|c| c.passed()).count();
    println!(
        "scenario {}: {} ({passed}/{} checks)",
        report.scenario,
        if report.passed { "PASS" } else { "FAIL" },
        report.checks.len()
    );
}

/// Runs a drift trajectory against the linear bound and the fidelity
/// floor, writing the CSV and a JSON report next to it.
pub fn cmd_verify_drift(
    scenario_path: &Path,
    out_csv: &Path,
    overrides: &Overrides,
) -> CliResult<RunReport> {
    let (scenario, _base) = Scenario::load(scenario_path)?;
    expect_command(&scenario, CommandKind::VerifyDrift)?;
    let tol = scenario.tolerance(overrides.tol_abs, overrides.tol_rel)?;
    let checks = scenario.checks();

    let resolved = resolve_drift_setup(&scenario, &tol)?;
    let times = scenario
        .times
        .as_ref()
        .ok_or_else(|| CliError::Parse(format!("scenario `{}` has no times", scenario.name)))?
        .build()?;

    let spec = EvolutionSpec::new(
        resolved.pair.hamiltonian().clone(),
        resolved.initial_state.clone(),
        times,
    )?;
    let trajectory = drift_trajectory(&resolved.sync, &resolved.pair, &spec)?;

    write_trajectory_csv(out_csv, &trajectory)?;

    let mut report = RunReport::new(&scenario.name, CommandKind::VerifyDrift.as_str(), scenario.seed);
    report.outputs.push(out_csv.display().to_string());

    let initial_residual = resolved.sync.drift_of(&resolved.initial_state)?;
    report.push(CheckRecord::bound(
        "initial_state_in_kernel",
        initial_residual,
        resolved.sync.kernel_threshold(),
    ));

    let worst_drift_slack = trajectory
        .rows
        .iter()
        .map(|r| r.drift - r.bound)
        .fold(f64::NEG_INFINITY, f64::max);
    report.push(CheckRecord::bound(
        "drift_within_bound",
        worst_drift_slack,
        checks.drift_bound_slack.unwrap_or(DEFAULT_BOUND_SLACK),
    ));

    let worst_fidelity_slack = trajectory
        .rows
        .iter()
        .map(|r| r.fidelity_floor - r.fidelity_sq)
        .fold(f64::NEG_INFINITY, f64::max);
    report.push(CheckRecord::bound(
        "fidelity_above_floor",
        worst_fidelity_slack,
        checks.fidelity_slack.unwrap_or(DEFAULT_BOUND_SLACK),
    ));

    if let Some(threshold) = checks.closed_form_drift {
        let eps = resolved.closed_form_epsilon.ok_or_else(|| {
            CliError::Parse(
                "closed_form_drift check applies only to sharpness hamiltonians".into(),
            )
        })?;
        let worst = trajectory
            .rows
            .iter()
            .map(|r| (r.drift - 2.0 * (eps * r.t / 2.0).sin().abs()).abs())
            .fold(0.0f64, f64::max);
        report.push(CheckRecord::bound("drift_matches_closed_form", worst, threshold));
    }

    if let Some(cap) = checks.max_drift {
        let max_drift = trajectory.rows.iter().map(|r| r.drift).fold(0.0f64, f64::max);
        report.push(CheckRecord::bound("max_drift_below_cap", max_drift, cap));
    }

    let gap = resolved.sync.spectral_gap();
    report.drift = Some(DriftDetails {
        epsilon: resolved.pair.epsilon(),
        spectral_gap: gap.is_finite().then_some(gap),
        kernel_dim: resolved.sync.kernel_dim(),
        kernel_threshold: resolved.sync.kernel_threshold(),
        rows: trajectory.rows.len(),
    });

    report.write_json(&report_path_for(out_csv))?;
    print_report(&report, overrides.quiet);
    Ok(report)
}

/// `foo.csv -> foo.report.json`; other names get `.report.json` appended
/// so the report never clobbers the trajectory file.
pub fn report_path_for(out: &Path) -> PathBuf {
    let name = out
        .file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let stem = name.strip_suffix(".csv").unwrap_or(&name);
    out.with_file_name(format!("{stem}.report.json"))
}

struct DriftSetup {
    sync: SyncOperator,
    pair: CompatPair,
    initial_state: StateVector,
    closed_form_epsilon: Option<f64>,
}

fn resolve_drift_setup(scenario: &Scenario, tol: &Tolerance) -> CliResult<DriftSetup> {
    let hamiltonian = scenario.hamiltonian.as_ref().ok_or_else(|| {
        CliError::Parse(format!("scenario `{}` has no hamiltonian", scenario.name))
    })?;

    // The sharpness instance fixes its own clocks and initial state.
    if let HamiltonianSpec::Sharpness { sharpness } = hamiltonian {
        let instance = sharpness_instance(sharpness.epsilon)?;
        let initial_state = resolve_initial_state(
            scenario,
            &instance.sync,
            Some(StateVector::basis_state(4, 0)),
            None,
        )?;
        return Ok(DriftSetup {
            sync: instance.sync,
            pair: instance.pair,
            initial_state,
            closed_form_epsilon: Some(sharpness.epsilon),
        });
    }

    let (t_a, t_b) = scenario.build_observables()?;
    let sync = build_sync_operator(&t_a, &t_b, tol)?;
    let (pair, mut rng) = match hamiltonian {
        HamiltonianSpec::Matrix { matrix } => {
            let h = crate::scenario::matrix_from_data(matrix)?;
            (epsilon_of(&h, &sync)?, None)
        }
        HamiltonianSpec::Sum { sum } => {
            let h = sum_hamiltonian(&sum.h_a.build()?, &sum.h_b.build()?)?;
            (epsilon_of(&h, &sync)?, None)
        }
        HamiltonianSpec::RandomCompatible { random_compatible } => {
            let mut rng = rng_from_seed(random_compatible.seed);
            let pair = random_epsilon_compatible(
                &t_a,
                &t_b,
                &sync,
                random_compatible.epsilon,
                &mut rng,
            )?;
            (pair, Some(rng))
        }
        HamiltonianSpec::Sharpness { .. } => unreachable!("handled above"),
    };

    let default = match rng.as_mut() {
        Some(r) => Some(random_kernel_state(&sync, r)?),
        None => None,
    };
    let initial_state = resolve_initial_state(scenario, &sync, default, rng.as_mut())?;
    Ok(DriftSetup {
        sync,
        pair,
        initial_state,
        closed_form_epsilon: None,
    })
}

fn resolve_initial_state(
    scenario: &Scenario,
    sync: &SyncOperator,
    default: Option<StateVector>,
    rng: Option<&mut SeededRng>,
) -> CliResult<StateVector> {
    let dim = sync.total_dim();
    match &scenario.initial_state {
        Some(InitialStateSpec::BasisIndex { basis_index }) => {
            if *basis_index >= dim {
                return Err(CliError::Precondition(format!(
                    "basis index {basis_index} out of range for dimension {dim}"
                )));
            }
            Ok(StateVector::basis_state(dim, *basis_index))
        }
        Some(InitialStateSpec::Amplitudes { amplitudes }) => {
            let state = state_from_amplitudes(amplitudes)?;
            if state.dim() != dim {
                return Err(CliError::Precondition(format!(
                    "initial state has dimension {}, expected {dim}",
                    state.dim()
                )));
            }
            Ok(state)
        }
        Some(InitialStateSpec::Kernel { kernel }) => match kernel {
            KernelChoice::First => first_kernel_state(sync),
            KernelChoice::Random => {
                let mut own;
                let r = match rng {
                    Some(r) => r,
                    None => {
                        let seed = scenario.seed.ok_or_else(|| {
                            CliError::Parse(
                                "a random kernel initial state needs a scenario seed".into(),
                            )
                        })?;
                        own = rng_from_seed(seed);
                        &mut own
                    }
                };
                Ok(random_kernel_state(sync, r)?)
            }
        },
        None => match default {
            Some(state) => Ok(state),
            None => first_kernel_state(sync),
        },
    }
}

fn first_kernel_state(sync: &SyncOperator) -> CliResult<StateVector> {
    sync.kernel_basis().first().cloned().ok_or_else(|| {
        CliError::Precondition(
            "the synchronization subspace is trivial; no kernel state exists".into(),
        )
    })
}

struct GroupSetup {
    loaded: LoadedGroup,
    decomp_a: IsotypicDecomposition,
    decomp_b: IsotypicDecomposition,
    t_a: ClockObservable,
    t_b: ClockObservable,
}

fn resolve_group_setup(scenario: &Scenario, base: &Path) -> CliResult<GroupSetup> {
    let section = scenario.group.as_ref().ok_or_else(|| {
        CliError::Parse(format!("scenario `{}` has no group section", scenario.name))
    })?;
    let loaded = load_group_file(&base.join(&section.file))?;
    let decomp_a = isotypic_projectors(&loaded.rep_a, &loaded.table)?;
    let decomp_b = isotypic_projectors(&loaded.rep_b, &loaded.table)?;

    let t_a = match &section.alpha_a {
        Some(alphas) => central_observable(&decomp_a, alphas, "T_A")?,
        None => match &scenario.observables {
            Some(obs) => ClockObservable::new(obs.ta.build()?, "T_A")?,
            None => {
                return Err(CliError::Parse(
                    "group scenario needs alpha_a or an observables section".into(),
                ))
            }
        },
    };
    let t_b = match &section.alpha_b {
        Some(alphas) => central_observable(&decomp_b, alphas, "T_B")?,
        None => match &scenario.observables {
            Some(obs) => ClockObservable::new(obs.tb.build()?, "T_B")?,
            // Convenience: a single alpha list drives both sides.
            None => match &section.alpha_a {
                Some(alphas) => central_observable(&decomp_b, alphas, "T_B")?,
                None => {
                    return Err(CliError::Parse(
                        "group scenario needs alpha_b or an observables section".into(),
                    ))
                }
            },
        },
    };
    Ok(GroupSetup {
        loaded,
        decomp_a,
        decomp_b,
        t_a,
        t_b,
    })
}

/// Isotypic decomposition report: multiplicities, the diagonal isotypic
/// projector versus the kernel of `K`, and the classification residuals.
pub fn cmd_decompose(
    scenario_path: &Path,
    out_report: &Path,
    overrides: &Overrides,
) -> CliResult<RunReport> {
    let (scenario, base) = Scenario::load(scenario_path)?;
    expect_command(&scenario, CommandKind::Decompose)?;
    let tol = scenario.tolerance(overrides.tol_abs, overrides.tol_rel)?;
    let checks = scenario.checks();

    let setup = resolve_group_setup(&scenario, &base)?;
    let thm = verify_classification(
        &setup.t_a,
        &setup.t_b,
        &setup.loaded.rep_a,
        &setup.loaded.rep_b,
        &setup.loaded.table,
        &tol,
    )?;

    let mut report = RunReport::new(&scenario.name, CommandKind::Decompose.as_str(), scenario.seed);
    report.outputs.push(out_report.display().to_string());

    report.push(CheckRecord::bound(
        "group_action_commutes_with_k",
        thm.max_group_commutator,
        checks.group_commutation.unwrap_or(DEFAULT_RESIDUAL_TOL),
    ));
    report.push(CheckRecord::bound(
        "k_annihilates_diagonal_isotypic",
        thm.k_diagonal_residual,
        checks.diagonal_annihilation.unwrap_or(DEFAULT_RESIDUAL_TOL),
    ));
    if thm.central_a && thm.central_b {
        report.push(CheckRecord::bound(
            "kernel_matches_diagonal_isotypic",
            thm.projector_distance,
            checks.kernel_identification.unwrap_or(DEFAULT_RESIDUAL_TOL),
        ));
    }
    if let Some(expected) = &checks.expected_multiplicities_a {
        let mismatches = setup
            .decomp_a
            .multiplicities()
            .iter()
            .zip(expected)
            .filter(|(a, b)| a != b)
            .count()
            + setup.decomp_a.multiplicities().len().abs_diff(expected.len());
        report.push(CheckRecord::bound(
            "expected_multiplicities_a",
            mismatches as f64,
            0.0,
        ));
    }
    if let Some(expected) = checks.expected_kernel_dim {
        report.push(CheckRecord::exact(
            "expected_kernel_dim",
            thm.kernel_dim as f64,
            expected as f64,
        ));
    }
    if let Some(expected) = checks.expected_diagonal_trace {
        report.push(CheckRecord::bound(
            "expected_diagonal_trace",
            (thm.diagonal_trace - expected).abs(),
            1e-8,
        ));
    }

    let irreps = setup
        .loaded
        .table
        .labels()
        .iter()
        .enumerate()
        .map(|(i, label)| IrrepSummary {
            label: label.clone(),
            dim: setup.loaded.table.dims()[i],
            multiplicity_a: setup.decomp_a.multiplicities()[i],
            multiplicity_b: setup.decomp_b.multiplicities()[i],
        })
        .collect();
    report.decomposition = Some(DecompositionDetails {
        group: setup.loaded.group.label().to_string(),
        irreps,
        diagonal_trace: thm.diagonal_trace,
        kernel_dim: thm.kernel_dim,
        group_commutator_residual: thm.max_group_commutator,
        k_diagonal_residual: thm.k_diagonal_residual,
        scalars: thm
            .scalar_pairs
            .iter()
            .map(|p| ScalarSummary {
                label: p.label.clone(),
                alpha: p.alpha,
                beta: p.beta,
                equal: p.equal,
            })
            .collect(),
        central_a: thm.central_a,
        central_b: thm.central_b,
        separating: thm.separating,
        projector_distance: thm.projector_distance,
        strict_containment: thm.strict_containment,
    });

    report.write_json(out_report)?;
    print_report(&report, overrides.quiet);
    Ok(report)
}

/// Synchronization-preserving algebra: dimension, Frobenius-orthonormal
/// basis, and the kernel-preservation residual per basis element.
pub fn cmd_commutant(
    scenario_path: &Path,
    out_report: &Path,
    overrides: &Overrides,
) -> CliResult<RunReport> {
    let (scenario, base) = Scenario::load(scenario_path)?;
    expect_command(&scenario, CommandKind::Commutant)?;
    let tol = scenario.tolerance(overrides.tol_abs, overrides.tol_rel)?;
    let checks = scenario.checks();

    let setup = resolve_group_setup(&scenario, &base)?;
    let sync = build_sync_operator(&setup.t_a, &setup.t_b, &tol)?;
    let joint = joint_rep(&setup.loaded.rep_a, &setup.loaded.rep_b)?;

    // The diagonal isotypic projector only exists in the
    // multiplicity-free case; skip the extra postcondition otherwise.
    let pi_g = match diagonal_isotypic_from(&setup.decomp_a, &setup.decomp_b) {
        Ok(pi) => Some(pi),
        Err(Error::MultiplicityNotFree { .. }) => None,
        Err(e) => return Err(e.into()),
    };

    let algebra = sync_preserving_algebra(&joint, &sync, &tol, pi_g.as_ref())?;

    let star_residual = algebra
        .basis
        .basis()
        .iter()
        .map(|x| algebra.basis.span_residual(&x.adjoint()))
        .fold(0.0f64, f64::max);
    let identity_residual = algebra
        .basis
        .span_residual(&ComplexDense::identity(joint.dim()));
    let max_leak = algebra.kernel_leak.iter().copied().fold(0.0f64, f64::max);

    let mut report = RunReport::new(&scenario.name, CommandKind::Commutant.as_str(), scenario.seed);
    report.outputs.push(out_report.display().to_string());

    report.push(CheckRecord::bound(
        "kernel_preservation",
        max_leak,
        checks.kernel_preservation.unwrap_or(DEFAULT_RESIDUAL_TOL),
    ));
    report.push(CheckRecord::bound(
        "star_closure",
        star_residual,
        checks.star_closure.unwrap_or(DEFAULT_RESIDUAL_TOL),
    ));
    report.push(CheckRecord::bound(
        "identity_in_span",
        identity_residual,
        checks.star_closure.unwrap_or(DEFAULT_RESIDUAL_TOL),
    ));
    if let Some(expected) = checks.expected_commutant_dim {
        report.push(CheckRecord::exact(
            "expected_dimension",
            algebra.basis.dimension() as f64,
            expected as f64,
        ));
    }

    report.commutant = Some(CommutantDetails {
        constraints: algebra.basis.description().to_string(),
        dimension: algebra.basis.dimension(),
        kernel_preservation_residuals: algebra.kernel_leak.clone(),
        star_closure_residual: star_residual,
        identity_span_residual: identity_residual,
        basis: algebra.basis.basis().iter().map(matrix_to_data).collect(),
    });

    report.write_json(out_report)?;
    print_report(&report, overrides.quiet);
    Ok(report)
}

/// Per-scenario outcome inside a suite run.
#[derive(Debug, Clone, Serialize)]
pub struct SuiteEntry {
    pub file: String,
    pub scenario: Option<String>,
    pub command: Option<String>,
    /// "pass", "fail", or "error".
    pub status: String,
    pub exit_code: u8,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub scenarios: Vec<SuiteEntry>,
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub errored: usize,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.passed == self.total
    }

    /// 0 when everything passed; otherwise the first hard error's code in
    /// file order, or 1 for plain check failures.
    pub fn exit_code(&self) -> u8 {
        if self.all_passed() {
            return 0;
        }
        self.scenarios
            .iter()
            .find(|s| s.exit_code >= 2)
            .map(|s| s.exit_code)
            .unwrap_or(1)
    }
}

/// Runs every `*.json` scenario in `dir` (sorted by file name) with its
/// declared command, writing outputs and `summary.json` into `out_dir`.
/// A scenario that fails to parse aborts only itself.
pub fn cmd_suite(dir: &Path, out_dir: &Path, overrides: &Overrides) -> CliResult<SuiteReport> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| CliError::Parse(format!("cannot read suite dir {}: {e}", dir.display())))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| {
            p.extension().is_some_and(|e| e == "json")
                && p.file_name().is_some_and(|n| n != "summary.json")
                && !p.to_string_lossy().ends_with(".report.json")
        })
        .collect();
    files.sort();

    std::fs::create_dir_all(out_dir)
        .map_err(|e| CliError::Internal(format!("cannot create {}: {e}", out_dir.display())))?;

    let mut entries = Vec::new();
    for path in &files {
        let stem = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| path.display().to_string());
        let entry = match Scenario::load(path) {
            Err(err) => SuiteEntry {
                file: stem,
                scenario: None,
                command: None,
                status: "error".into(),
                exit_code: err.exit_code(),
                detail: Some(err.to_string()),
            },
            Ok((scenario, _)) => {
                let out = match scenario.command {
                    CommandKind::VerifyDrift => out_dir.join(format!("{stem}.csv")),
                    _ => out_dir.join(format!("{stem}.report.json")),
                };
                let result = match scenario.command {
                    CommandKind::VerifyDrift => cmd_verify_drift(path, &out, overrides),
                    CommandKind::Decompose => cmd_decompose(path, &out, overrides),
                    CommandKind::Commutant => cmd_commutant(path, &out, overrides),
                };
                match result {
                    Ok(report) => SuiteEntry {
                        file: stem,
                        scenario: Some(report.scenario.clone()),
                        command: Some(report.command.clone()),
                        status: if report.passed { "pass" } else { "fail" }.into(),
                        exit_code: u8::from(!report.passed),
                        detail: None,
                    },
                    Err(err) => SuiteEntry {
                        file: stem,
                        scenario: Some(scenario.name.clone()),
                        command: Some(scenario.command.as_str().into()),
                        status: "error".into(),
                        exit_code: err.exit_code(),
                        detail: Some(err.to_string()),
                    },
                }
            }
        };
        entries.push(entry);
    }

    let passed = entries.iter().filter(|e| e.status == "pass").count();
    let failed = entries.iter().filter(|e| e.status == "fail").count();
    let errored = entries.iter().filter(|e| e.status == "error").count();
    let suite = SuiteReport {
        total: entries.len(),
        passed,
        failed,
        errored,
        scenarios: entries,
    };

    let mut text = serde_json::to_string_pretty(&suite)
        .map_err(|e| CliError::Internal(format!("summary serialization failed: {e}")))?;
    text.push('\n');
    let summary_path = out_dir.join("summary.json");
    std::fs::write(&summary_path, text)
        .map_err(|e| CliError::Internal(format!("cannot write {}: {e}", summary_path.display())))?;

    if !overrides.quiet {
        for entry in &suite.scenarios {
            println!("suite {}: {}", entry.file, entry.status);
        }
    }
    println!(
        "suite total: {} pass, {} fail, {} error (of {})",
        suite.passed, suite.failed, suite.errored, suite.total
    );
    Ok(suite)
}
