//! The `simulate`, `sweep` and `verify` subcommands.

use std::path::Path;

use log::info;
use ringcurrent_core::analysis::{self, SweepResult};
use ringcurrent_core::fock::Electronic;
use ringcurrent_core::observables::TimeSeries;
use ringcurrent_core::operators::{
    build_electronic_angmom, build_hamiltonian, build_nuclear_angmom_with, build_total_angmom_with, ModelConfig,
    SignConvention, SparseHermitianOperator,
};
use ringcurrent_core::propagate::{
    dense_oracle_propagate, propagate, vacuum_state, CrankNicolson, PropagationSettings, StateVector,
    DENSE_ORACLE_MAX_DIM,
};
use ringcurrent_core::simulation::{simulate_with, Space};
use ringcurrent_core::units::{cm1_to_energy_au, fs_to_time_au, time_au_to_fs};
use ringcurrent_core::Error;

use crate::args::{RunArgs, SimulateArgs, SpaceArg, SweepArgs, VerifyArgs};
use crate::output::{
    manifest_path, sweep_header, timeseries_header, write_manifest, write_sweep, write_timeseries, Manifest,
    ModelEntry, NoteEntry, PropagationEntry, SweepEntryManifest, Units, NUMBER_FORMAT,
};
use crate::{modes, CliError, CliResult};

fn core_error(e: Error) -> CliError {
    match e {
        Error::Domain(msg) => CliError::Usage(msg),
        other => CliError::Runtime(other.to_string()),
    }
}

fn space_of(arg: SpaceArg) -> Space {
    match arg {
        SpaceArg::Full => Space::Full,
        SpaceArg::Sector => Space::Sector(Electronic::Plus.angular_momentum()),
    }
}

fn space_label(space: Space) -> String {
    match space {
        Space::Full => "full".into(),
        Space::Sector(l) => format!("sector L_total={l:+}"),
    }
}

/// Model and settings described by the shared flags, validated.
fn model_and_settings(run: &RunArgs, gamma: f64) -> CliResult<(ModelConfig, PropagationSettings)> {
    let mut config = ModelConfig::default().with_gamma(gamma).with_cutoff(run.cutoff);
    if let Some(path) = &run.modes {
        config.modes = modes::read_modes(path)?;
    }
    config.basis().map_err(core_error)?;
    let settings = PropagationSettings::default()
        .with_dt_au(run.dt_au)
        .with_t_max_fs(run.tmax_fs)
        .with_record_stride(run.stride);
    settings.validate().map_err(core_error)?;
    Ok((config, settings))
}

fn sector_dimension(config: &ModelConfig, space: Space) -> CliResult<usize> {
    let basis = config.basis().map_err(core_error)?;
    Ok(match space {
        Space::Full => basis.dim(),
        Space::Sector(l) => basis.sector_indices(l).len(),
    })
}

fn csv_name(path: &Path) -> String {
    path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default()
}

fn progress(settings: &PropagationSettings) -> impl FnMut(&TimeSeries) {
    let records = settings.total_steps() / settings.record_stride + 1;
    let every = (records / 10).max(1);
    move |s: &TimeSeries| {
        let k = s.len() - 1;
        if k > 0 && k.is_multiple_of(every) {
            info!("t = {:.1} fs, L_e = {:.6}", s.times[k], s.le[k]);
        }
    }
}

pub fn cmd_simulate(args: &SimulateArgs) -> CliResult<()> {
    let (config, settings) = model_and_settings(&args.run, args.gamma)?;
    let space = space_of(args.run.space);
    let dimension = sector_dimension(&config, space)?;
    info!(
        "simulate: gamma {}, cutoff {}, {} space of dimension {dimension}, {} steps",
        config.gamma,
        config.cutoff,
        space_label(space),
        settings.total_steps()
    );
    let series = simulate_with(&config, &settings, space, progress(&settings)).map_err(core_error)?;
    write_timeseries(&args.out, &series)?;
    let manifest = Manifest {
        program: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        command: "simulate",
        csv: csv_name(&args.out),
        columns: timeseries_header(config.modes.len()),
        number_format: NUMBER_FORMAT,
        units: Units::default(),
        model: ModelEntry::new(&config, true),
        propagation: PropagationEntry::new(&settings, space_label(space), dimension),
        sweep: None,
    };
    write_manifest(&manifest_path(&args.out), &manifest)?;
    info!("wrote {} records to {}", series.len(), args.out.display());
    Ok(())
}

pub fn sweep_grid(args: &SweepArgs) -> CliResult<Vec<f64>> {
    let grid = match &args.gammas {
        Some(list) => list.clone(),
        None => analysis::gamma_grid(args.gamma_min, args.gamma_max, args.gamma_step).map_err(core_error)?,
    };
    analysis::validate_grid(&grid).map_err(core_error)?;
    Ok(grid)
}

pub fn cmd_sweep(args: &SweepArgs) -> CliResult<()> {
    let grid = sweep_grid(args)?;
    let (base, settings) = model_and_settings(&args.run, grid[0])?;
    let space = space_of(args.run.space);
    let dimension = sector_dimension(&base, space)?;
    info!("sweep: {} gamma values, {} space of dimension {dimension}", grid.len(), space_label(space));
    let result: SweepResult = analysis::sweep_gamma_with(&base, &grid, &settings, space, |k, entry| {
        info!("[{}/{}] {}", k + 1, grid.len(), entry.summary());
    })
    .map_err(core_error)?;
    write_sweep(&args.out, &result)?;
    let notes = result
        .notes
        .iter()
        .map(|(k, note)| NoteEntry { gamma: result.gammas[*k], note: note.clone() })
        .collect();
    let manifest = Manifest {
        program: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        command: "sweep",
        csv: csv_name(&args.out),
        columns: sweep_header(base.modes.len()),
        number_format: NUMBER_FORMAT,
        units: Units::default(),
        model: ModelEntry::new(&base, false),
        propagation: PropagationEntry::new(&settings, space_label(space), dimension),
        sweep: Some(SweepEntryManifest { gammas: grid, average_window: "blackman", notes }),
    };
    write_manifest(&manifest_path(&args.out), &manifest)?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

#[derive(Debug, Clone)]
pub struct CheckRow {
    pub name: String,
    pub measured: f64,
    pub threshold: f64,
    pub status: Status,
    pub detail: String,
}

impl CheckRow {
    fn below(name: impl Into<String>, measured: f64, threshold: f64, detail: impl Into<String>) -> Self {
        let status = if measured < threshold { Status::Pass } else { Status::Fail };
        CheckRow { name: name.into(), measured, threshold, status, detail: detail.into() }
    }
}

/// Time span and step of the oracle comparison inside `verify`. The step is
/// small enough that the scheme's own O(dt²) error sits below the threshold.
const VERIFY_ORACLE_T_FS: f64 = 50.0;
const VERIFY_ORACLE_DT_AU: f64 = 0.1;
const VERIFY_DRIFT_T_FS: f64 = 50.0;

/// Runs every check at the given cutoff (γ = 1 except in the commutator scan).
pub fn verify_checks(cutoff: u32, convention: SignConvention) -> CliResult<Vec<CheckRow>> {
    let config = ModelConfig::default().with_cutoff(cutoff);
    let basis = config.basis().map_err(core_error)?;
    let l_total = build_total_angmom_with(&basis, convention);
    let mut rows = Vec::new();

    for gamma in [0.5, 1.0, 2.0] {
        let h = build_hamiltonian(&config.clone().with_gamma(gamma), &basis).map_err(core_error)?;
        let c = SparseHermitianOperator::commutator_max_abs(&h, &l_total).map_err(core_error)?;
        rows.push(CheckRow::below(format!("commutator gamma={gamma}"), c, 1e-13, "max |[H, L_total]_ij|"));
    }

    let h = build_hamiltonian(&config, &basis).map_err(core_error)?;
    let psi0 = vacuum_state(&basis, Electronic::Plus);
    if basis.dim() <= DENSE_ORACLE_MAX_DIM {
        let steps = (fs_to_time_au(VERIFY_ORACLE_T_FS).map_err(core_error)? / VERIFY_ORACLE_DT_AU).round() as usize;
        let t_fs = time_au_to_fs(steps as f64 * VERIFY_ORACLE_DT_AU);
        let mut psi = psi0.clone().into_amplitudes();
        let mut stepper = CrankNicolson::new(&h, VERIFY_ORACLE_DT_AU, 1e-12, 100).map_err(core_error)?;
        for _ in 0..steps {
            stepper.step(&mut psi).map_err(core_error)?;
        }
        let exact = dense_oracle_propagate(&h.to_dense(), &psi0, &[t_fs]).map_err(core_error)?;
        let dev = StateVector::new(psi).max_abs_diff(&exact[0]);
        rows.push(CheckRow::below(
            "dense oracle",
            dev,
            1e-6,
            format!("max |psi_CN - psi_exact| at {t_fs:.3} fs, dt {VERIFY_ORACLE_DT_AU} au"),
        ));
    } else {
        rows.push(CheckRow {
            name: "dense oracle".into(),
            measured: f64::NAN,
            threshold: 1e-6,
            status: Status::Skip,
            detail: format!("dimension {} exceeds {DENSE_ORACLE_MAX_DIM}", basis.dim()),
        });
    }

    let mut observables = vec![build_electronic_angmom(&basis)];
    for n in 0..config.modes.len() {
        observables.push(build_nuclear_angmom_with(&basis, n, convention).map_err(core_error)?);
    }
    let settings = PropagationSettings::default().with_t_max_fs(VERIFY_DRIFT_T_FS);
    let s = propagate(&h, &psi0, &settings, &observables).map_err(core_error)?;
    let max_over = |f: &dyn Fn(usize) -> f64| (0..s.len()).map(f).fold(0.0, f64::max);
    let total = max_over(&|k| (s.total_angular_momentum(k) - 1.0).abs());
    let norm = max_over(&|k| (s.norm[k] - 1.0).abs());
    let omega_max = config
        .modes
        .iter()
        .map(|m| cm1_to_energy_au(m.omega_cm1))
        .collect::<Result<Vec<f64>, _>>()
        .map_err(core_error)?
        .into_iter()
        .fold(0.0, f64::max);
    let scale = s.energy[0].abs().max(omega_max);
    let energy = max_over(&|k| (s.energy[k] - s.energy[0]).abs()) / scale;
    let span = format!("over {VERIFY_DRIFT_T_FS} fs");
    rows.push(CheckRow::below("angular momentum drift", total, 1e-8, format!("max |L_e + sum L_n - 1| {span}")));
    rows.push(CheckRow::below("norm drift", norm, 1e-9, format!("max ||psi| - 1| {span}")));
    rows.push(CheckRow::below("energy drift", energy, 1e-8, format!("max |dE| / max(|E0|, w_max) {span}")));
    Ok(rows)
}

pub fn render_table(rows: &[CheckRow]) -> String {
    let mut out = format!("{:<26} {:>12} {:>10}  {:<6} {}\n", "check", "measured", "threshold", "result", "detail");
    for r in rows {
        let status = match r.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skip => "SKIP",
        };
        out += &format!(
            "{:<26} {:>12.3e} {:>10.0e}  {:<6} {}\n",
            r.name, r.measured, r.threshold, status, r.detail
        );
    }
    out
}

pub fn cmd_verify(args: &VerifyArgs) -> CliResult<()> {
    let convention = if args.corrupt_ln_sign { SignConvention::Flipped } else { SignConvention::Conserving };
    let rows = verify_checks(args.cutoff, convention)?;
    print!("{}", render_table(&rows));
    let failed: Vec<String> = rows
        .iter()
        .filter(|r| r.status == Status::Fail)
        .map(|r| format!("{} = {:.3e} (threshold {:.0e})", r.name, r.measured, r.threshold))
        .collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Runtime(format!("failed checks: {}", failed.join("; "))))
    }
}
