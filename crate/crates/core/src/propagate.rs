//! Crank-Nicolson propagation and a dense eigendecomposition oracle.
//!
//! One Crank-Nicolson step with `A = H·dt/2` is the Cayley map
//!
//! ```text
//! ψ' = (I + iA)⁻¹ (I − iA) ψ = 2 (I + iA)⁻¹ ψ − ψ
//! ```
//!
//! so each step needs a single shifted solve `(I + iA) z = ψ`. It is done by
//! Lanczos on `H` started from `ψ`: with Lanczos basis `V` and tridiagonal
//! `T`, `z ≈ ‖ψ‖ V (I + iT dt/2)⁻¹ e₁`, whose residual norm is available
//! from the last component of the small solve without extra products. The
//! resulting `ψ'` is `‖ψ‖ V r(T) e₁` with `r` the Cayley map of `T`, so the
//! norm is preserved to the orthogonality of the Lanczos vectors.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::dense::{hermitian_eigen, DenseMatrix};
use crate::error::{domain, Error, Result};
use crate::fock::{BasisLabel, Electronic, FockBasis};
use crate::observables::TimeSeries;
use crate::sparse::SparseHermitianOperator;
use crate::units::{fs_to_time_au, time_au_to_fs};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Largest dimension accepted by [`dense_oracle_propagate`].
pub const DENSE_ORACLE_MAX_DIM: usize = 5000;

/// Lanczos breakdown threshold: the Krylov space is invariant and the solve exact.
const BREAKDOWN: f64 = 1e-300;

/// Time steps above this many a.u. trigger an accuracy warning.
pub const LARGE_DT_AU: f64 = 5.0;

/// Complex amplitudes over a basis.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    pub fn new(amplitudes: Vec<Complex64>) -> Self {
        StateVector { amplitudes }
    }

    /// Unit vector on basis element `index`.
    pub fn basis_state(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(domain(format!("index {index} out of range for dimension {dim}")));
        }
        let mut amplitudes = vec![ZERO; dim];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(StateVector { amplitudes })
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        norm(&self.amplitudes)
    }

    /// `max_i |ψ_i − φ_i|`.
    pub fn max_abs_diff(&self, other: &StateVector) -> f64 {
        assert_eq!(self.dim(), other.dim(), "state length mismatch");
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Amplitudes on a subset of basis indices.
    pub fn restrict(&self, indices: &[usize]) -> StateVector {
        StateVector::new(indices.iter().map(|&i| self.amplitudes[i]).collect())
    }
}

/// Electronic state `Ψ+` with every oscillator in its ground state.
pub fn initial_state(basis: &FockBasis) -> StateVector {
    vacuum_state(basis, Electronic::Plus)
}

pub fn vacuum_state(basis: &FockBasis, electronic: Electronic) -> StateVector {
    let index = basis
        .index_of(&BasisLabel::vacuum(electronic, basis.modes()))
        .expect("vacuum is always a valid label");
    StateVector::basis_state(basis.dim(), index).expect("index within basis")
}

/// Time grid and solver controls.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropagationSettings {
    /// Time step, a.u.
    pub dt_au: f64,
    /// Propagation length, fs.
    pub t_max_fs: f64,
    /// Steps between recorded samples.
    pub record_stride: usize,
    /// Relative residual required of every implicit solve.
    pub solver_tolerance: f64,
    /// Lanczos iteration budget per step.
    pub max_iterations: usize,
}

impl Default for PropagationSettings {
    fn default() -> Self {
        PropagationSettings {
            dt_au: 1.0,
            t_max_fs: 500.0,
            record_stride: 20,
            solver_tolerance: 1e-12,
            max_iterations: 100,
        }
    }
}

impl PropagationSettings {
    pub fn with_t_max_fs(mut self, t_max_fs: f64) -> Self {
        self.t_max_fs = t_max_fs;
        self
    }

    pub fn with_dt_au(mut self, dt_au: f64) -> Self {
        self.dt_au = dt_au;
        self
    }

    pub fn with_record_stride(mut self, stride: usize) -> Self {
        self.record_stride = stride;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt_au > 0.0) || !self.dt_au.is_finite() {
            return Err(domain(format!("dt must be positive, got {}", self.dt_au)));
        }
        if !(self.t_max_fs > 0.0) || !self.t_max_fs.is_finite() {
            return Err(domain(format!("t_max must be positive, got {}", self.t_max_fs)));
        }
        if self.record_stride == 0 {
            return Err(domain("record stride must be at least 1"));
        }
        if !(self.solver_tolerance > 0.0 && self.solver_tolerance <= 1e-6) {
            return Err(domain(format!(
                "solver tolerance must lie in (0, 1e-6], got {}",
                self.solver_tolerance
            )));
        }
        if self.max_iterations == 0 {
            return Err(domain("iteration budget must be at least 1"));
        }
        Ok(())
    }

    /// Number of steps taken: enough to reach `t_max_fs`, rounded up to a
    /// whole number of record strides.
    pub fn total_steps(&self) -> usize {
        let t_au = self.t_max_fs / crate::units::FS_PER_AU_TIME;
        let steps = libm::ceil(t_au / self.dt_au - 1e-9).max(1.0) as usize;
        steps.div_ceil(self.record_stride) * self.record_stride
    }
}

/// Diagnostics of one implicit solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepInfo {
    pub iterations: usize,
    /// Bound on `‖(I + iA)ψ' − (I − iA)ψ‖ / ‖(I − iA)ψ‖`.
    pub residual: f64,
}

/// Reusable Crank-Nicolson stepper for a fixed Hamiltonian and time step.
pub struct CrankNicolson<'a> {
    h: &'a SparseHermitianOperator,
    half_dt: f64,
    tolerance: f64,
    max_iterations: usize,
    lanczos: Vec<Vec<Complex64>>,
    alpha: Vec<f64>,
    beta: Vec<f64>,
    steps: usize,
}

impl<'a> CrankNicolson<'a> {
    pub fn new(
        h: &'a SparseHermitianOperator,
        dt_au: f64,
        tolerance: f64,
        max_iterations: usize,
    ) -> Result<Self> {
        if !(dt_au > 0.0) || !dt_au.is_finite() {
            return Err(domain(format!("dt must be positive, got {dt_au}")));
        }
        if !(tolerance > 0.0) || max_iterations == 0 {
            return Err(domain("solver tolerance and iteration budget must be positive"));
        }
        if dt_au > LARGE_DT_AU {
            log::warn!("time step {dt_au} a.u. exceeds {LARGE_DT_AU} a.u.; Crank-Nicolson stays stable but loses accuracy");
        }
        Ok(CrankNicolson {
            h,
            half_dt: 0.5 * dt_au,
            tolerance,
            max_iterations,
            lanczos: Vec::new(),
            alpha: Vec::new(),
            beta: Vec::new(),
            steps: 0,
        })
    }

    /// Advances `psi` in place by one time step.
    pub fn step(&mut self, psi: &mut [Complex64]) -> Result<StepInfo> {
        let dim = self.h.dim();
        assert_eq!(psi.len(), dim, "state length mismatch");
        let step_index = self.steps;
        self.steps += 1;

        let beta0 = norm(psi);
        if beta0 == 0.0 {
            return Ok(StepInfo { iterations: 0, residual: 0.0 });
        }
        self.alpha.clear();
        self.beta.clear();
        self.ensure_vectors(1, dim);
        self.lanczos[0].copy_from_slice(psi);

        // Lanczos vectors are stored unnormalized: v_j = u_j · scale[j].
        let mut scale = vec![1.0 / beta0];
        let mut y = Vec::new();
        let mut residual = f64::INFINITY;
        let mut used = 0;
        let mut exhausted = false;
        for j in 0..self.max_iterations {
            self.ensure_vectors(j + 2, dim);
            let (done, rest) = self.lanczos.split_at_mut(j + 1);
            let w = &mut rest[0];
            let uj = &done[j];
            let sj = scale[j];
            let alpha = self.h.matvec_dot(uj, w).re * sj * sj;
            // u_{j+1} = s_j H u_j − α s_j u_j − β_{j−1} s_{j−1} u_{j−1}
            let a = alpha * sj;
            let mut norm2 = 0.0;
            if j > 0 {
                let b = self.beta[j - 1] * scale[j - 1];
                for ((wi, &uc), &up) in w.iter_mut().zip(uj.iter()).zip(done[j - 1].iter()) {
                    *wi = *wi * sj - uc * a - up * b;
                    norm2 += wi.norm_sqr();
                }
            } else {
                for (wi, &uc) in w.iter_mut().zip(uj.iter()) {
                    *wi = *wi * sj - uc * a;
                    norm2 += wi.norm_sqr();
                }
            }
            let beta = libm::sqrt(norm2);
            self.alpha.push(alpha);
            self.beta.push(beta);
            used = j + 1;

            y = solve_shifted_tridiagonal(&self.alpha, &self.beta[..j], self.half_dt);
            // (I + iA) V y − e₁ = i (dt/2) β_j y_j v_{j+1}; the step residual is twice that.
            residual = 2.0 * self.half_dt * beta * y[j].norm();
            if residual <= self.tolerance || beta <= BREAKDOWN {
                break;
            }
            scale.push(1.0 / beta);
            exhausted = j + 1 == self.max_iterations;
        }
        if exhausted {
            return Err(Error::Propagation {
                step: step_index,
                residual,
                iterations: used,
            });
        }

        // ψ' = β₀ V (2y − e₁)
        let coeffs: Vec<Complex64> = y
            .iter()
            .zip(&scale)
            .enumerate()
            .map(|(k, (&yk, &sk))| (yk * 2.0 - if k == 0 { 1.0 } else { 0.0 }) * (beta0 * sk))
            .collect();
        const CHUNK: usize = 2048;
        for (n, block) in psi.chunks_mut(CHUNK).enumerate() {
            let range = n * CHUNK..n * CHUNK + block.len();
            block.iter_mut().for_each(|p| *p = ZERO);
            for (&c, u) in coeffs.iter().zip(&self.lanczos[..used]) {
                for (p, &ui) in block.iter_mut().zip(&u[range.clone()]) {
                    *p += c * ui;
                }
            }
        }
        Ok(StepInfo { iterations: used, residual })
    }

    fn ensure_vectors(&mut self, count: usize, dim: usize) {
        while self.lanczos.len() < count {
            self.lanczos.push(vec![ZERO; dim]);
        }
    }
}

/// Solves `(I + i·s·T) y = e₁` for the symmetric tridiagonal `T` with
/// diagonal `diag` and off-diagonal `off` (`off.len() + 1 == diag.len()`).
fn solve_shifted_tridiagonal(diag: &[f64], off: &[f64], s: f64) -> Vec<Complex64> {
    let n = diag.len();
    let i = Complex64::new(0.0, 1.0);
    // Thomas elimination; the Hermitian part of I + isT is I, so no pivoting is needed.
    let mut c_prime = vec![ZERO; n];
    let mut d_prime = vec![ZERO; n];
    let mut denom = Complex64::new(1.0, 0.0) + i * (s * diag[0]);
    d_prime[0] = Complex64::new(1.0, 0.0) / denom;
    if n > 1 {
        c_prime[0] = i * (s * off[0]) / denom;
    }
    for k in 1..n {
        let sub = i * (s * off[k - 1]);
        denom = Complex64::new(1.0, 0.0) + i * (s * diag[k]) - sub * c_prime[k - 1];
        if k + 1 < n {
            c_prime[k] = i * (s * off[k]) / denom;
        }
        d_prime[k] = (-sub * d_prime[k - 1]) / denom;
    }
    let mut y = d_prime;
    for k in (0..n.saturating_sub(1)).rev() {
        let next = y[k + 1];
        y[k] -= c_prime[k] * next;
    }
    y
}

fn norm(a: &[Complex64]) -> f64 {
    libm::sqrt(a.iter().map(|x| x.norm_sqr()).sum::<f64>())
}

/// One Crank-Nicolson step of length `dt_au`.
pub fn cn_step(
    h: &SparseHermitianOperator,
    psi: &StateVector,
    dt_au: f64,
    tolerance: f64,
) -> Result<StateVector> {
    if psi.dim() != h.dim() {
        return Err(domain("state and Hamiltonian dimensions differ"));
    }
    let mut stepper = CrankNicolson::new(h, dt_au, tolerance, PropagationSettings::default().max_iterations)?;
    let mut out = psi.clone();
    stepper.step(out.amplitudes_mut())?;
    Ok(out)
}

/// Propagates `psi0` and records expectation values every
/// `settings.record_stride` steps.
///
/// `observables[0]` fills [`TimeSeries::le`], the remaining operators fill
/// [`TimeSeries::ln`] in order.
pub fn propagate(
    h: &SparseHermitianOperator,
    psi0: &StateVector,
    settings: &PropagationSettings,
    observables: &[SparseHermitianOperator],
) -> Result<TimeSeries> {
    propagate_with(h, psi0, settings, observables, |_| {})
}

/// [`propagate`] with a callback invoked after every record.
pub fn propagate_with<F>(
    h: &SparseHermitianOperator,
    psi0: &StateVector,
    settings: &PropagationSettings,
    observables: &[SparseHermitianOperator],
    mut on_record: F,
) -> Result<TimeSeries>
where
    F: FnMut(&TimeSeries),
{
    settings.validate()?;
    if psi0.dim() != h.dim() || observables.iter().any(|o| o.dim() != h.dim()) {
        return Err(domain("state, Hamiltonian and observable dimensions differ"));
    }
    if observables.is_empty() {
        return Err(domain("at least one observable is required"));
    }
    let mut stepper = CrankNicolson::new(h, settings.dt_au, settings.solver_tolerance, settings.max_iterations)?;
    let mut psi = psi0.clone();
    let mut series = TimeSeries::with_channels(observables.len() - 1);
    let record = |series: &mut TimeSeries, psi: &StateVector, step: usize| -> Result<()> {
        let t_fs = time_au_to_fs(step as f64 * settings.dt_au);
        let norm = psi.norm();
        let n2 = norm * norm;
        let values = observables
            .iter()
            .map(|o| o.expectation(psi.amplitudes()).map(|v| v / n2))
            .collect::<Result<Vec<f64>>>()?;
        let energy = h.expectation(psi.amplitudes())? / n2;
        series.push(t_fs, &values, norm, energy);
        Ok(())
    };
    record(&mut series, &psi, 0)?;
    on_record(&series);
    let total = settings.total_steps();
    for step in 1..=total {
        stepper.step(psi.amplitudes_mut())?;
        if step % settings.record_stride == 0 {
            record(&mut series, &psi, step)?;
            on_record(&series);
        }
    }
    Ok(series)
}

/// Exact propagation `ψ(t) = V e^{−iΛt} V† ψ₀` by full eigendecomposition,
/// evaluated at each time in `times_fs`.
pub fn dense_oracle_propagate(
    h: &DenseMatrix,
    psi0: &StateVector,
    times_fs: &[f64],
) -> Result<Vec<StateVector>> {
    let dim = h.dim();
    if dim > DENSE_ORACLE_MAX_DIM {
        return Err(domain(format!(
            "dense oracle limited to dimension {DENSE_ORACLE_MAX_DIM}, got {dim}"
        )));
    }
    if psi0.dim() != dim {
        return Err(domain("state and Hamiltonian dimensions differ"));
    }
    let eig = hermitian_eigen(h)?;
    times_fs
        .iter()
        .map(|&t| {
            let t_au = fs_to_time_au(t)?;
            let out = eig.apply_fn(psi0.amplitudes(), |e| Complex64::from_polar(1.0, -e * t_au));
            Ok(StateVector::new(out))
        })
        .collect()
}
