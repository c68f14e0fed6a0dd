//! Ring-current dynamics of a doubly degenerate electronic state coupled
//! to chiral phonons by the linear E⊗e Jahn-Teller interaction.
//!
//! The default model is the benzene cation: the `E₁g` pair `Ψ± = Ψ₁ ± iΨ₂`
//! coupled to three `e₂g` modes. Starting from `Ψ+` with no phonons, the
//! electronic angular momentum `⟨L_e⟩` (proportional to the ring current)
//! leaks into the pseudorotational angular momentum of the modes while the
//! total `L_e + Σ L_n` is conserved.
//!
//! ```
//! use ringcurrent_core::analysis::{first_minimum, windowed_average, Channel};
//! use ringcurrent_core::operators::ModelConfig;
//! use ringcurrent_core::propagate::PropagationSettings;
//! use ringcurrent_core::simulation::{simulate, Space};
//!
//! let config = ModelConfig::default().with_cutoff(2);
//! let settings = PropagationSettings::default().with_t_max_fs(20.0);
//! let series = simulate(&config, &settings, Space::Sector(1)).unwrap();
//! assert!(first_minimum(&series).unwrap() < 10.0);
//! assert!(windowed_average(&series, Channel::Electronic).unwrap() < 1.0);
//! ```
//!
//! The crate is `no_std` and needs only `alloc`. File formats and the
//! command-line driver live in the `ringcurrent` crate.

#![no_std]
// `!(x > 0.0)` is used deliberately so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod analysis;
pub mod dense;
pub mod error;
pub mod fock;
pub mod observables;
pub mod operators;
pub mod propagate;
pub mod simulation;
pub mod sparse;
pub mod units;

pub use error::{Error, Result};
