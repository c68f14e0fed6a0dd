//! Vibronic Hamiltonian and angular-momentum operators.
//!
//! The model couples the two degenerate diabatic states `Ψ±` to `M` doubly
//! degenerate modes, each written as a pair of chiral oscillators
//! `a_{n,+}`, `a_{n,−}`:
//!
//! ```text
//!        M   ⎡ N_n              γ d_n (a_{n,−} + a†_{n,+}) ⎤
//!   H =  Σ ω_n ⎢                                           ⎥
//!       n=1  ⎣ γ d_n (a_{n,+} + a†_{n,−})   N_n           ⎦
//! ```
//!
//! with `N_n = a†_{n,+}a_{n,+} + a†_{n,−}a_{n,−}` (normal ordered, no
//! zero-point energy). Ladder matrix elements that would leave the truncated
//! space are dropped.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{domain, Result};
use crate::fock::{Chirality, Electronic, FockBasis};
use crate::units::cm1_to_energy_au;

pub use crate::sparse::SparseHermitianOperator;

/// One doubly degenerate Jahn-Teller active mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeParams {
    /// Harmonic wavenumber, cm⁻¹.
    pub omega_cm1: f64,
    /// Dimensionless linear coupling constant.
    pub d: f64,
}

impl ModeParams {
    pub fn new(omega_cm1: f64, d: f64) -> Result<Self> {
        let mode = ModeParams { omega_cm1, d };
        mode.validate()?;
        Ok(mode)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega_cm1 > 0.0) || !self.omega_cm1.is_finite() {
            return Err(domain(format!("mode frequency must be positive, got {}", self.omega_cm1)));
        }
        if !(self.d >= 0.0) || !self.d.is_finite() {
            return Err(domain(format!("coupling constant must be non-negative, got {}", self.d)));
        }
        Ok(())
    }
}

/// The three e₂g modes of the benzene cation.
pub const BENZENE_MODES: [ModeParams; 3] = [
    ModeParams { omega_cm1: 1571.0, d: 0.68 },
    ModeParams { omega_cm1: 1152.0, d: 0.49 },
    ModeParams { omega_cm1: 573.0, d: 0.92 },
];

/// Physical and truncation parameters of the vibronic model.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelConfig {
    pub modes: Vec<ModeParams>,
    /// Global scale applied to every `d_n`; 1 is the physical value.
    pub gamma: f64,
    /// Maximum phonons per chiral oscillator.
    pub cutoff: u32,
}

impl Default for ModelConfig {
    fn default() -> Self {
        ModelConfig {
            modes: BENZENE_MODES.to_vec(),
            gamma: 1.0,
            cutoff: 7,
        }
    }
}

impl ModelConfig {
    pub fn with_gamma(mut self, gamma: f64) -> Self {
        self.gamma = gamma;
        self
    }

    pub fn with_cutoff(mut self, cutoff: u32) -> Self {
        self.cutoff = cutoff;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.modes.is_empty() {
            return Err(domain("model needs at least one mode"));
        }
        for mode in &self.modes {
            mode.validate()?;
        }
        if !(self.gamma >= 0.0) || !self.gamma.is_finite() {
            return Err(domain(format!("gamma must be non-negative, got {}", self.gamma)));
        }
        Ok(())
    }

    pub fn basis(&self) -> Result<FockBasis> {
        self.validate()?;
        FockBasis::new(self.modes.len(), self.cutoff)
    }
}

/// Which phonon chirality counts as positive nuclear angular momentum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SignConvention {
    /// `−` phonons carry `+2`; the total angular momentum commutes with `H`.
    #[default]
    Conserving,
    /// The opposite assignment. Does not commute with `H`; kept as a
    /// negative control for the conservation checks.
    Flipped,
}

fn check_basis(config: &ModelConfig, basis: &FockBasis) -> Result<()> {
    config.validate()?;
    if basis.modes() != config.modes.len() || basis.cutoff() != config.cutoff {
        return Err(domain(format!(
            "basis ({} modes, cutoff {}) does not match config ({} modes, cutoff {})",
            basis.modes(),
            basis.cutoff(),
            config.modes.len(),
            config.cutoff
        )));
    }
    Ok(())
}

/// Hamiltonian in Hartree over `basis`.
pub fn build_hamiltonian(config: &ModelConfig, basis: &FockBasis) -> Result<SparseHermitianOperator> {
    check_basis(config, basis)?;
    let modes = basis.modes();
    let cutoff = basis.cutoff();
    let omegas = config
        .modes
        .iter()
        .map(|m| cm1_to_energy_au(m.omega_cm1))
        .collect::<Result<Vec<f64>>>()?;
    let couplings: Vec<f64> = config
        .modes
        .iter()
        .zip(&omegas)
        .map(|(m, w)| config.gamma * m.d * w)
        .collect();
    let sqrt: Vec<f64> = (0..=cutoff + 1).map(|k| libm::sqrt(k as f64)).collect();
    let block = basis.block_size();
    let mut occ = vec![0u32; 2 * modes];

    SparseHermitianOperator::from_row_fn(basis.dim(), |i, out| {
        let electronic = basis.decode_into(i, &mut occ);
        let mut diag = 0.0;
        for (n, w) in omegas.iter().enumerate() {
            diag += w * (occ[2 * n] + occ[2 * n + 1]) as f64;
        }
        out.push((i, Complex64::new(diag, 0.0)));

        // ⟨plus|H|minus⟩ = g (a_− + a†_+),  ⟨minus|H|plus⟩ = g (a_+ + a†_−).
        // `lowered` is the chirality annihilated in the column state's frame,
        // `raised` the one created.
        let (partner, lowered, raised) = match electronic {
            Electronic::Plus => (i + block, Chirality::Minus, Chirality::Plus),
            Electronic::Minus => (i - block, Chirality::Plus, Chirality::Minus),
        };
        for (n, &g) in couplings.iter().enumerate() {
            if g == 0.0 {
                continue;
            }
            // a_lowered |…, k+1, …⟩ = √(k+1) |…, k, …⟩
            let k = basis.occupation_of(i, n, lowered);
            if k < cutoff {
                let col = partner + basis.stride(n, lowered);
                out.push((col, Complex64::new(g * sqrt[k as usize + 1], 0.0)));
            }
            // a†_raised |…, k−1, …⟩ = √k |…, k, …⟩
            let k = basis.occupation_of(i, n, raised);
            if k > 0 {
                let col = partner - basis.stride(n, raised);
                out.push((col, Complex64::new(g * sqrt[k as usize], 0.0)));
            }
        }
    })
}

/// Electronic angular momentum: `+1` on the `Ψ+` block, `−1` on `Ψ−`.
pub fn build_electronic_angmom(basis: &FockBasis) -> SparseHermitianOperator {
    let diag: Vec<f64> = (0..basis.dim())
        .map(|i| basis.electronic_of(i).angular_momentum() as f64)
        .collect();
    SparseHermitianOperator::from_diagonal(&diag)
}

/// Nuclear angular momentum of mode `mode`, `2(N_{n,−} − N_{n,+})` on both
/// electronic blocks.
pub fn build_nuclear_angmom(basis: &FockBasis, mode: usize) -> Result<SparseHermitianOperator> {
    build_nuclear_angmom_with(basis, mode, SignConvention::Conserving)
}

pub fn build_nuclear_angmom_with(
    basis: &FockBasis,
    mode: usize,
    convention: SignConvention,
) -> Result<SparseHermitianOperator> {
    if mode >= basis.modes() {
        return Err(domain(format!(
            "mode index {mode} out of range for {} modes",
            basis.modes()
        )));
    }
    let sign = match convention {
        SignConvention::Conserving => 1,
        SignConvention::Flipped => -1,
    };
    let diag: Vec<f64> = (0..basis.dim())
        .map(|i| {
            let plus = basis.occupation_of(i, mode, Chirality::Plus) as i64;
            let minus = basis.occupation_of(i, mode, Chirality::Minus) as i64;
            (sign
                * (plus * Chirality::Plus.angular_momentum()
                    + minus * Chirality::Minus.angular_momentum())) as f64
        })
        .collect();
    Ok(SparseHermitianOperator::from_diagonal(&diag))
}

/// `L_e + Σ_n L_n`.
pub fn build_total_angmom(basis: &FockBasis) -> SparseHermitianOperator {
    build_total_angmom_with(basis, SignConvention::Conserving)
}

pub fn build_total_angmom_with(basis: &FockBasis, convention: SignConvention) -> SparseHermitianOperator {
    let le = build_electronic_angmom(basis);
    let ln: Vec<_> = (0..basis.modes())
        .map(|n| build_nuclear_angmom_with(basis, n, convention).expect("mode in range"))
        .collect();
    let diag: Vec<f64> = (0..basis.dim())
        .map(|i| le.get(i, i).re + ln.iter().map(|op| op.get(i, i).re).sum::<f64>())
        .collect();
    SparseHermitianOperator::from_diagonal(&diag)
}
