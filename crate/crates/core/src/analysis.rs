//! Derived quantities of a recorded trajectory and coupling-strength sweeps.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{domain, Error, Result};
use crate::observables::TimeSeries;
use crate::operators::ModelConfig;
use crate::propagate::PropagationSettings;
use crate::simulation::{simulate, Space};

/// Blackman window `0.42 − 0.5 cos 2πx + 0.08 cos 4πx` on `[0, 1]`.
pub fn blackman_window(x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(domain(format!("window argument must lie in [0, 1], got {x}")));
    }
    Ok(0.42 - 0.5 * libm::cos(2.0 * PI * x) + 0.08 * libm::cos(4.0 * PI * x))
}

/// Recorded quantity selected for analysis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Channel {
    Electronic,
    /// Nuclear angular momentum of mode `n` (zero based).
    Mode(usize),
}

impl Channel {
    fn values<'a>(&self, series: &'a TimeSeries) -> Result<&'a [f64]> {
        match *self {
            Channel::Electronic => Ok(&series.le),
            Channel::Mode(n) => series
                .ln
                .get(n)
                .map(Vec::as_slice)
                .ok_or_else(|| domain(format!("series has no mode {n}"))),
        }
    }
}

/// Index of the first strict local minimum of `⟨L_e⟩`. A flat-bottomed
/// minimum reports the first index of its flat segment.
pub fn first_minimum_index(series: &TimeSeries) -> Result<usize> {
    let le = &series.le;
    if le.len() < 3 {
        return Err(Error::SeriesTooShort { len: le.len(), needed: 3 });
    }
    let n = le.len();
    let mut k = 1;
    while k + 1 < n {
        if le[k] < le[k - 1] {
            let mut end = k;
            while end + 1 < n && le[end + 1] == le[k] {
                end += 1;
            }
            if end + 1 < n && le[end + 1] > le[k] {
                return Ok(k);
            }
            k = end + 1;
        } else {
            k += 1;
        }
    }
    Err(Error::MonotoneSeries)
}

/// Time (fs) of the first local minimum of `⟨L_e⟩`.
pub fn first_minimum(series: &TimeSeries) -> Result<f64> {
    first_minimum_index(series).map(|k| series.times[k])
}

/// Blackman-weighted average `Σ w_k v_k / Σ w_k`, `w_k = W((t_k − t_0)/(T − t_0))`.
pub fn windowed_average(series: &TimeSeries, channel: Channel) -> Result<f64> {
    let values = channel.values(series)?;
    let times = &series.times;
    if times.is_empty() {
        return Err(Error::EmptySeries);
    }
    let (t0, t1) = (times[0], times[times.len() - 1]);
    if times.len() < 3 || !(t1 > t0) {
        return Err(Error::SeriesTooShort { len: times.len(), needed: 3 });
    }
    let mut weighted = 0.0;
    let mut mass = 0.0;
    for (&t, &v) in times.iter().zip(values) {
        let w = blackman_window(((t - t0) / (t1 - t0)).clamp(0.0, 1.0))?;
        weighted += w * v;
        mass += w;
    }
    Ok(weighted / mass)
}

/// Largest `⟨L_e⟩` recorded after the first minimum.
pub fn revival_peak(series: &TimeSeries) -> Result<f64> {
    let k = first_minimum_index(series)?;
    series.le[k + 1..]
        .iter()
        .copied()
        .reduce(f64::max)
        .ok_or(Error::NoRecurrence)
}

/// Times (fs) of the strict local maxima of `⟨L_e⟩`.
pub fn local_maxima(series: &TimeSeries) -> Vec<f64> {
    series
        .le
        .windows(3)
        .enumerate()
        .filter(|(_, w)| w[1] > w[0] && w[1] > w[2])
        .map(|(k, _)| series.times[k + 1])
        .collect()
}

/// Dominant spacing (fs) between revivals of `⟨L_e⟩`.
///
/// Computed as the lag of the highest peak of the normalized
/// autocorrelation of `⟨L_e⟩ − mean`, searched beyond its first zero
/// crossing and up to half the series length. Fast oscillations of the
/// high-frequency modes put extra small maxima between revivals; the
/// autocorrelation picks out the spacing at which the large maxima recur.
/// Requires a uniform time grid.
pub fn revival_spacing(series: &TimeSeries) -> Result<f64> {
    let le = &series.le;
    let n = le.len();
    if n < 8 {
        return Err(Error::SeriesTooShort { len: n, needed: 8 });
    }
    let step = series.times[1] - series.times[0];
    let uniform = series
        .times
        .windows(2)
        .all(|w| ((w[1] - w[0]) - step).abs() <= 1e-9 * step.abs().max(1.0));
    if !(step > 0.0) || !uniform {
        return Err(domain("revival spacing needs a uniform time grid"));
    }
    let mean = le.iter().sum::<f64>() / n as f64;
    let x: Vec<f64> = le.iter().map(|v| v - mean).collect();
    let var: f64 = x.iter().map(|v| v * v).sum();
    if var == 0.0 {
        return Err(Error::NoRecurrence);
    }
    let corr = |lag: usize| x[..n - lag].iter().zip(&x[lag..]).map(|(a, b)| a * b).sum::<f64>() / var;
    let max_lag = n / 2;
    let first_negative = (1..=max_lag).find(|&lag| corr(lag) < 0.0).ok_or(Error::NoRecurrence)?;
    let mut best: Option<(usize, f64)> = None;
    for lag in first_negative + 1..max_lag {
        let (prev, here, next) = (corr(lag - 1), corr(lag), corr(lag + 1));
        if here > prev && here >= next && here > 0.0 && best.is_none_or(|(_, b)| here > b) {
            best = Some((lag, here));
        }
    }
    best.map(|(lag, _)| lag as f64 * step).ok_or(Error::NoRecurrence)
}

/// Summary of one coupling strength.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepEntry {
    pub gamma: f64,
    pub t_first_min_fs: f64,
    pub le_avg: f64,
    pub ln_avg: Vec<f64>,
    pub revival_peak: f64,
    /// Messages of the errors that left values undefined (`NaN`).
    pub notes: Vec<String>,
}

impl SweepEntry {
    /// Analyses a finished trajectory.
    pub fn from_series(gamma: f64, series: &TimeSeries) -> Self {
        let mut notes = Vec::new();
        let mut keep = |r: Result<f64>, what: &str| match r {
            Ok(v) => v,
            Err(e) => {
                notes.push(format!("{what}: {e}"));
                f64::NAN
            }
        };
        let t_first_min_fs = keep(first_minimum(series), "first minimum");
        let revival_peak = if t_first_min_fs.is_nan() {
            f64::NAN
        } else {
            keep(revival_peak(series), "revival peak")
        };
        let le_avg = keep(windowed_average(series, Channel::Electronic), "L_e average");
        let ln_avg = (0..series.modes())
            .map(|n| keep(windowed_average(series, Channel::Mode(n)), "L_n average"))
            .collect();
        SweepEntry {
            gamma,
            t_first_min_fs,
            le_avg,
            ln_avg,
            revival_peak,
            notes,
        }
    }

    fn failed(gamma: f64, modes: usize, err: &Error) -> Self {
        SweepEntry {
            gamma,
            t_first_min_fs: f64::NAN,
            le_avg: f64::NAN,
            ln_avg: alloc::vec![f64::NAN; modes],
            revival_peak: f64::NAN,
            notes: alloc::vec![format!("propagation: {err}")],
        }
    }
}

/// Per-γ summaries, ordered as the grid.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SweepResult {
    pub gammas: Vec<f64>,
    pub t_first_min_fs: Vec<f64>,
    pub le_avg: Vec<f64>,
    /// `ln_avg[n][k]`: mode `n` at grid point `k`.
    pub ln_avg: Vec<Vec<f64>>,
    pub revival_peak: Vec<f64>,
    /// `(grid index, message)` for every value left undefined.
    pub notes: Vec<(usize, String)>,
}

impl SweepResult {
    fn new(modes: usize) -> Self {
        SweepResult {
            ln_avg: (0..modes).map(|_| Vec::new()).collect(),
            ..Default::default()
        }
    }

    pub fn len(&self) -> usize {
        self.gammas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gammas.is_empty()
    }

    fn push(&mut self, entry: SweepEntry) {
        let k = self.gammas.len();
        self.gammas.push(entry.gamma);
        self.t_first_min_fs.push(entry.t_first_min_fs);
        self.le_avg.push(entry.le_avg);
        for (column, v) in self.ln_avg.iter_mut().zip(entry.ln_avg) {
            column.push(v);
        }
        self.revival_peak.push(entry.revival_peak);
        self.notes.extend(entry.notes.into_iter().map(|m| (k, m)));
    }
}

/// Checks that a γ grid is non-empty, non-negative and strictly increasing.
pub fn validate_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(domain("gamma grid is empty"));
    }
    if grid.iter().any(|g| !(*g >= 0.0) || !g.is_finite()) {
        return Err(domain("gamma values must be finite and non-negative"));
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(domain("gamma grid must be strictly increasing"));
    }
    Ok(())
}

/// `start, start + step, …` up to `stop` (inclusive within rounding).
pub fn gamma_grid(start: f64, stop: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) || !start.is_finite() || !stop.is_finite() || stop < start {
        return Err(domain(format!("empty gamma grid {start}..{stop} step {step}")));
    }
    let count = libm::floor((stop - start) / step + 1e-9) as usize + 1;
    Ok((0..count).map(|k| start + k as f64 * step).collect())
}

/// Default grid `0.25, 0.5, …, 2.5`.
pub fn default_gamma_grid() -> Vec<f64> {
    (1..=10).map(|k| 0.25 * k as f64).collect()
}

/// Runs one propagation per γ and summarizes each.
pub fn sweep_gamma(
    base: &ModelConfig,
    grid: &[f64],
    settings: &PropagationSettings,
    space: Space,
) -> Result<SweepResult> {
    sweep_gamma_with(base, grid, settings, space, |_, _| {})
}

/// [`sweep_gamma`] with a callback after each grid point.
pub fn sweep_gamma_with<F>(
    base: &ModelConfig,
    grid: &[f64],
    settings: &PropagationSettings,
    space: Space,
    mut on_entry: F,
) -> Result<SweepResult>
where
    F: FnMut(usize, &SweepEntry),
{
    validate_grid(grid)?;
    base.validate()?;
    settings.validate()?;
    let modes = base.modes.len();
    let mut result = SweepResult::new(modes);
    for (k, &gamma) in grid.iter().enumerate() {
        let config = base.clone().with_gamma(gamma);
        let entry = match simulate(&config, settings, space) {
            Ok(series) => SweepEntry::from_series(gamma, &series),
            Err(e) => SweepEntry::failed(gamma, modes, &e),
        };
        on_entry(k, &entry);
        result.push(entry);
    }
    Ok(result)
}

impl core::fmt::Display for Channel {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Channel::Electronic => f.write_str("L_e"),
            Channel::Mode(n) => write!(f, "L_{}", n + 1),
        }
    }
}

impl SweepEntry {
    pub fn summary(&self) -> String {
        if self.notes.is_empty() {
            format!(
                "gamma {}: first minimum {:.3} fs, L_e average {:.4}, revival peak {:.4}",
                self.gamma, self.t_first_min_fs, self.le_avg, self.revival_peak
            )
        } else {
            format!("gamma {}: {}", self.gamma, self.notes.join("; "))
        }
    }
}
