//! CSV tables and JSON manifests.

use std::fs::File;
use std::io::Write;
use std::path::{Path, PathBuf};

use ringcurrent_core::analysis::SweepResult;
use ringcurrent_core::observables::TimeSeries;
use ringcurrent_core::operators::{ModeParams, ModelConfig};
use ringcurrent_core::propagate::PropagationSettings;
use serde::Serialize;

use crate::format::sig12;
use crate::CliResult;

/// `run.csv` → `run.manifest.json`.
pub fn manifest_path(csv: &Path) -> PathBuf {
    csv.with_extension("manifest.json")
}

pub fn timeseries_header(modes: usize) -> Vec<String> {
    let mut h = vec!["t_fs".to_string(), "L_e".to_string()];
    h.extend((1..=modes).map(|n| format!("L_{n}")));
    h.push("norm".into());
    h.push("energy_au".into());
    h
}

pub fn sweep_header(modes: usize) -> Vec<String> {
    let mut h = vec!["gamma".to_string(), "t_first_min_fs".to_string(), "L_e_avg".to_string()];
    h.extend((1..=modes).map(|n| format!("L_{n}_avg")));
    h.push("revival_peak".into());
    h
}

pub fn write_timeseries(path: &Path, series: &TimeSeries) -> CliResult<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(timeseries_header(series.modes()))?;
    for k in 0..series.len() {
        let mut row = vec![sig12(series.times[k]), sig12(series.le[k])];
        row.extend(series.ln.iter().map(|ch| sig12(ch[k])));
        row.push(sig12(series.norm[k]));
        row.push(sig12(series.energy[k]));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_sweep(path: &Path, result: &SweepResult) -> CliResult<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(sweep_header(result.ln_avg.len()))?;
    for k in 0..result.len() {
        let mut row = vec![
            sig12(result.gammas[k]),
            sig12(result.t_first_min_fs[k]),
            sig12(result.le_avg[k]),
        ];
        row.extend(result.ln_avg.iter().map(|ch| sig12(ch[k])));
        row.push(sig12(result.revival_peak[k]));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Serialize)]
pub struct ModeEntry {
    pub omega_cm1: f64,
    pub d: f64,
}

impl From<&ModeParams> for ModeEntry {
    fn from(m: &ModeParams) -> Self {
        ModeEntry { omega_cm1: m.omega_cm1, d: m.d }
    }
}

#[derive(Debug, Serialize)]
pub struct ModelEntry {
    /// Absent for sweeps, where the grid is listed instead.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    pub cutoff: u32,
    pub modes: Vec<ModeEntry>,
    pub initial_state: &'static str,
}

impl ModelEntry {
    pub fn new(config: &ModelConfig, with_gamma: bool) -> Self {
        ModelEntry {
            gamma: with_gamma.then_some(config.gamma),
            cutoff: config.cutoff,
            modes: config.modes.iter().map(ModeEntry::from).collect(),
            initial_state: "electronic +, vibrational vacuum",
        }
    }
}

#[derive(Debug, Serialize)]
pub struct PropagationEntry {
    pub scheme: &'static str,
    pub dt_au: f64,
    pub t_max_fs: f64,
    pub total_steps: usize,
    pub record_stride: usize,
    pub solver_tolerance: f64,
    pub max_iterations: usize,
    pub space: String,
    pub dimension: usize,
}

impl PropagationEntry {
    pub fn new(settings: &PropagationSettings, space: String, dimension: usize) -> Self {
        PropagationEntry {
            scheme: "crank-nicolson",
            dt_au: settings.dt_au,
            t_max_fs: settings.t_max_fs,
            total_steps: settings.total_steps(),
            record_stride: settings.record_stride,
            solver_tolerance: settings.solver_tolerance,
            max_iterations: settings.max_iterations,
            space,
            dimension,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct NoteEntry {
    pub gamma: f64,
    pub note: String,
}

#[derive(Debug, Serialize)]
pub struct SweepEntryManifest {
    pub gammas: Vec<f64>,
    pub average_window: &'static str,
    pub notes: Vec<NoteEntry>,
}

#[derive(Debug, Serialize)]
pub struct Manifest {
    pub program: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub csv: String,
    pub columns: Vec<String>,
    pub number_format: &'static str,
    pub units: Units,
    pub model: ModelEntry,
    pub propagation: PropagationEntry,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepEntryManifest>,
}

#[derive(Debug, Serialize)]
pub struct Units {
    pub time: &'static str,
    pub energy: &'static str,
    pub angular_momentum: &'static str,
}

impl Default for Units {
    fn default() -> Self {
        Units { time: "fs", energy: "hartree", angular_momentum: "hbar" }
    }
}

pub const NUMBER_FORMAT: &str = "%.12g";

pub fn write_manifest(path: &Path, manifest: &Manifest) -> CliResult<()> {
    let mut f = File::create(path)?;
    serde_json::to_writer_pretty(&mut f, manifest)?;
    writeln!(f)?;
    Ok(())
}
