//! End-to-end runs: basis, operators, initial state and propagation.

use alloc::vec::Vec;

use crate::error::Result;
use crate::fock::{Electronic, FockBasis};
use crate::observables::{standard_observables, TimeSeries};
use crate::operators::{build_hamiltonian, ModelConfig, SparseHermitianOperator};
use crate::propagate::{propagate_with, vacuum_state, PropagationSettings, StateVector};

/// Space in which the state is propagated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Space {
    /// The whole truncated product basis.
    #[default]
    Full,
    /// Only basis states with the given total angular momentum. Exact for
    /// initial states inside that sector, since `H` conserves it.
    Sector(i64),
}

/// Operators and initial state ready for propagation.
#[derive(Debug, Clone)]
pub struct PreparedRun {
    pub basis: FockBasis,
    /// Basis indices kept, `None` for the full space.
    pub indices: Option<Vec<usize>>,
    pub hamiltonian: SparseHermitianOperator,
    pub observables: Vec<SparseHermitianOperator>,
    pub initial: StateVector,
}

impl PreparedRun {
    pub fn dim(&self) -> usize {
        self.hamiltonian.dim()
    }
}

/// Builds everything for a run starting from `|electronic, vacuum⟩`.
pub fn prepare(config: &ModelConfig, space: Space, electronic: Electronic) -> Result<PreparedRun> {
    let basis = config.basis()?;
    let hamiltonian = build_hamiltonian(config, &basis)?;
    let observables = standard_observables(config, &basis)?;
    let initial = vacuum_state(&basis, electronic);
    match space {
        Space::Full => Ok(PreparedRun {
            basis,
            indices: None,
            hamiltonian,
            observables,
            initial,
        }),
        Space::Sector(l_total) => {
            let indices = basis.sector_indices(l_total);
            let hamiltonian = hamiltonian.restrict(&indices)?;
            let observables = observables
                .iter()
                .map(|o| o.restrict(&indices))
                .collect::<Result<Vec<_>>>()?;
            let initial = initial.restrict(&indices);
            Ok(PreparedRun {
                basis,
                indices: Some(indices),
                hamiltonian,
                observables,
                initial,
            })
        }
    }
}

/// Propagates `|Ψ+, vacuum⟩` under `config` and records the standard observables.
pub fn simulate(config: &ModelConfig, settings: &PropagationSettings, space: Space) -> Result<TimeSeries> {
    simulate_with(config, settings, space, |_| {})
}

pub fn simulate_with<F>(
    config: &ModelConfig,
    settings: &PropagationSettings,
    space: Space,
    on_record: F,
) -> Result<TimeSeries>
where
    F: FnMut(&TimeSeries),
{
    settings.validate()?;
    let run = prepare(config, space, Electronic::Plus)?;
    propagate_with(&run.hamiltonian, &run.initial, settings, &run.observables, on_record)
}
