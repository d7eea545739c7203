//! Depth-one angle-grid sweeps and the analyses derived from them.

use std::f64::consts::{FRAC_PI_4, PI};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fit::{fit_beta, objective, FitConfig};
use crate::ising::{enumerate_energies, EnergyTable, IsingModel};
use crate::simulator::{expectation_energy, simulate, MixerKind, QaoaParams};
use crate::thermal::{shannon_entropy_normalized, InverseTemperature};

/// A rectangular grid of `(γ, β)` angles with inclusive endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub gamma_range: [f64; 2],
    pub beta_range: [f64; 2],
    /// `[n_gamma, n_beta]`.
    pub resolution: [usize; 2],
}

impl GridSpec {
    /// `γ ∈ [0, π/4]`; `β ∈ [0, π]` for the X mixer and `[0, 2π]` for Grover.
    pub fn default_for(mixer: MixerKind, n_gamma: usize, n_beta: usize) -> Self {
        Self {
            gamma_range: [0.0, FRAC_PI_4],
            beta_range: Self::default_beta_range(mixer),
            resolution: [n_gamma, n_beta],
        }
    }

    pub fn default_beta_range(mixer: MixerKind) -> [f64; 2] {
        match mixer {
            MixerKind::TransverseX => [0.0, PI],
            MixerKind::Grover => [0.0, 2.0 * PI],
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, r) in [("gamma_range", self.gamma_range), ("beta_range", self.beta_range)] {
            if !(r[0].is_finite() && r[1].is_finite()) || r[0] > r[1] {
                return Err(Error::invalid(name, format!("[{}, {}] is not a valid range", r[0], r[1])));
            }
        }
        if self.resolution.iter().any(|&k| k < 2) {
            return Err(Error::invalid("resolution", "need at least 2 points per axis"));
        }
        Ok(())
    }

    pub fn gammas(&self) -> Vec<f64> {
        linspace(self.gamma_range, self.resolution[0])
    }

    pub fn betas(&self) -> Vec<f64> {
        linspace(self.beta_range, self.resolution[1])
    }

    pub fn cells(&self) -> usize {
        self.resolution[0] * self.resolution[1]
    }
}

/// `count` points from `lo` to `hi`, both included exactly.
pub fn linspace([lo, hi]: [f64; 2], count: usize) -> Vec<f64> {
    (0..count)
        .map(|i| {
            if i + 1 == count {
                hi
            } else {
                lo + (hi - lo) * i as f64 / (count - 1) as f64
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRecord {
    pub gamma: f64,
    pub beta_angle: f64,
    pub energy: f64,
    pub entropy: f64,
    /// Present when fitting was enabled.
    pub beta_eff: Option<f64>,
    pub tvd_min: Option<f64>,
}

/// Enumerates the model and sweeps it. See [`sweep_table`].
pub fn sweep(
    model: &IsingModel,
    grid: &GridSpec,
    mixer: MixerKind,
    fit: &FitConfig,
    fit_enabled: bool,
) -> Result<Vec<SweepRecord>> {
    let table = enumerate_energies(model)?;
    sweep_table(&table, grid, mixer, fit, fit_enabled)
}

/// One record per cell, `γ` outer and `β` inner.
///
/// Cells run on the current rayon pool; each is a pure function of its
/// angles, and results are collected in index order, so the output does not
/// depend on the number of workers. The first failing cell aborts the sweep.
pub fn sweep_table(
    table: &EnergyTable,
    grid: &GridSpec,
    mixer: MixerKind,
    fit: &FitConfig,
    fit_enabled: bool,
) -> Result<Vec<SweepRecord>> {
    grid.validate()?;
    if fit_enabled {
        fit.validate()?;
    }
    let gammas = grid.gammas();
    let betas = grid.betas();
    let n_beta = betas.len();
    (0..grid.cells())
        .into_par_iter()
        .map(|idx| {
            let (gamma, beta_angle) = (gammas[idx / n_beta], betas[idx % n_beta]);
            sweep_cell(table, gamma, beta_angle, mixer, fit, fit_enabled).map_err(|e| {
                Error::Compute(format!("cell (gamma={gamma}, beta_angle={beta_angle}): {e}"))
            })
        })
        .collect()
}

fn sweep_cell(
    table: &EnergyTable,
    gamma: f64,
    beta_angle: f64,
    mixer: MixerKind,
    fit: &FitConfig,
    fit_enabled: bool,
) -> Result<SweepRecord> {
    let dist = simulate(table, &QaoaParams::depth_one(gamma, beta_angle, mixer)?)?;
    let energy = expectation_energy(&dist, table)?;
    let entropy = shannon_entropy_normalized(&dist);
    let (beta_eff, tvd_min) = if fit_enabled {
        let r = fit_beta(&dist, table, fit)?;
        (Some(r.beta_eff.value()), Some(r.tvd_min))
    } else {
        (None, None)
    };
    let finite = [Some(energy), Some(entropy), beta_eff, tvd_min]
        .into_iter()
        .flatten()
        .all(f64::is_finite);
    if !finite {
        return Err(Error::Compute("non-finite result".into()));
    }
    Ok(SweepRecord {
        gamma,
        beta_angle,
        energy,
        entropy,
        beta_eff,
        tvd_min,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdPoint {
    pub threshold: f64,
    /// The qualifying record with the largest `β_eff`, first in sweep order on ties.
    pub best: Option<SweepRecord>,
}

impl ThresholdPoint {
    pub fn best_beta_eff(&self) -> Option<f64> {
        self.best.and_then(|r| r.beta_eff)
    }
}

/// For each threshold `t`, the record maximizing `β_eff` subject to `tvd_min ≤ t`.
/// Records without fit data never qualify.
pub fn threshold_analysis(records: &[SweepRecord], thresholds: &[f64]) -> Vec<ThresholdPoint> {
    thresholds
        .iter()
        .map(|&t| {
            let mut best: Option<SweepRecord> = None;
            for r in records {
                let (Some(b), Some(d)) = (r.beta_eff, r.tvd_min) else {
                    continue;
                };
                if d <= t && best.is_none_or(|cur| b > cur.beta_eff.unwrap_or(f64::NEG_INFINITY)) {
                    best = Some(*r);
                }
            }
            ThresholdPoint { threshold: t, best }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TradeoffPoint {
    pub t_eff: f64,
    pub tvd_min: f64,
    pub gamma: f64,
    pub beta_angle: f64,
}

/// `(1/β_eff, tvd_min)` for fitted records with `0 < 1/β_eff ≤ t_eff_max`.
pub fn tradeoff_extract(records: &[SweepRecord], t_eff_max: f64) -> Vec<TradeoffPoint> {
    records
        .iter()
        .filter_map(|r| {
            let (b, d) = (r.beta_eff?, r.tvd_min?);
            if b <= 0.0 {
                return None;
            }
            let t_eff = 1.0 / b;
            (t_eff <= t_eff_max).then_some(TradeoffPoint {
                t_eff,
                tvd_min: d,
                gamma: r.gamma,
                beta_angle: r.beta_angle,
            })
        })
        .collect()
}

pub fn mean_entropy(records: &[SweepRecord]) -> f64 {
    records.iter().map(|r| r.entropy).sum::<f64>() / records.len() as f64
}

/// Checks a fitted record against a fresh objective evaluation.
pub fn verify_fit(
    table: &EnergyTable,
    record: &SweepRecord,
    mixer: MixerKind,
    tolerance: f64,
) -> Result<bool> {
    let (Some(b), Some(d)) = (record.beta_eff, record.tvd_min) else {
        return Ok(false);
    };
    let dist = simulate(
        table,
        &QaoaParams::depth_one(record.gamma, record.beta_angle, mixer)?,
    )?;
    let direct = objective(&dist, table, InverseTemperature::new(b)?)?;
    Ok((direct - d).abs() <= tolerance)
}
