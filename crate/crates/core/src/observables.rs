//! Standard observable set and the recorded time series.

use alloc::vec::Vec;

use crate::error::Result;
use crate::fock::FockBasis;
use crate::operators::{build_electronic_angmom, build_nuclear_angmom, ModelConfig, SparseHermitianOperator};

/// Expectation values recorded along a trajectory.
///
/// Angular momenta are in units of ħ, energies in Hartree, times in fs.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TimeSeries {
    pub times: Vec<f64>,
    /// `⟨L_e⟩`
    pub le: Vec<f64>,
    /// `ln[n]` holds `⟨L_n⟩` of mode `n`.
    pub ln: Vec<Vec<f64>>,
    pub norm: Vec<f64>,
    pub energy: Vec<f64>,
}

impl TimeSeries {
    pub fn with_channels(modes: usize) -> Self {
        TimeSeries {
            ln: (0..modes).map(|_| Vec::new()).collect(),
            ..Default::default()
        }
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn modes(&self) -> usize {
        self.ln.len()
    }

    /// Appends one record; `values` is `[⟨L_e⟩, ⟨L_1⟩, …]`.
    pub fn push(&mut self, t_fs: f64, values: &[f64], norm: f64, energy: f64) {
        assert_eq!(values.len(), self.ln.len() + 1, "record width mismatch");
        self.times.push(t_fs);
        self.le.push(values[0]);
        for (channel, &v) in self.ln.iter_mut().zip(&values[1..]) {
            channel.push(v);
        }
        self.norm.push(norm);
        self.energy.push(energy);
    }

    /// `⟨L_e⟩ + Σ_n ⟨L_n⟩` at record `k`.
    pub fn total_angular_momentum(&self, k: usize) -> f64 {
        self.le[k] + self.ln.iter().map(|c| c[k]).sum::<f64>()
    }

    /// Records with `t ≤ t_fs`.
    pub fn truncated(&self, t_fs: f64) -> TimeSeries {
        let n = self.times.partition_point(|&t| t <= t_fs);
        TimeSeries {
            times: self.times[..n].to_vec(),
            le: self.le[..n].to_vec(),
            ln: self.ln.iter().map(|c| c[..n].to_vec()).collect(),
            norm: self.norm[..n].to_vec(),
            energy: self.energy[..n].to_vec(),
        }
    }
}

/// `[L_e, L_1, …, L_M]` over `basis`.
pub fn standard_observables(config: &ModelConfig, basis: &FockBasis) -> Result<Vec<SparseHermitianOperator>> {
    config.validate()?;
    let mut ops = Vec::with_capacity(basis.modes() + 1);
    ops.push(build_electronic_angmom(basis));
    for n in 0..basis.modes() {
        ops.push(build_nuclear_angmom(basis, n)?);
    }
    Ok(ops)
}
