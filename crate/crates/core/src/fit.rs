//! Effective inverse temperature of a distribution: the `β` whose Boltzmann
//! distribution is closest in total variation distance.
//!
//! [`fit_beta`] combines three searches and keeps the overall best candidate:
//!
//! 1. a multi-start derivative-free minimizer (plus the `β = 0` candidate),
//! 2. a logarithmic grid of tiny `β` values,
//! 3. a linear grid `start, start + step, …` up to `beta_max`.
//!
//! Every candidate `β` is rounded to `rounding_decimals` places, re-evaluated,
//! and its TVD rounded the same way. Ties prefer the larger `β`.

use log::debug;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ising::EnergyTable;
use crate::minimize::{minimize_scalar, MinimizerOptions};
use crate::thermal::{boltzmann, tvd, InverseTemperature, ProbabilityDistribution};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LogGrid {
    pub count: usize,
    pub hi: f64,
    pub lo: f64,
}

impl LogGrid {
    /// `count` values equispaced in `log10`, from `hi` down to `lo`.
    pub fn values(&self) -> Vec<f64> {
        log_spaced(self.hi, self.lo, self.count)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinearGrid {
    pub start: f64,
    pub step: f64,
    pub beta_max: f64,
}

impl LinearGrid {
    pub fn len(&self) -> usize {
        if self.beta_max < self.start {
            return 0;
        }
        ((self.beta_max - self.start) / self.step + 1e-9).floor() as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn value(&self, k: usize) -> f64 {
        self.start + k as f64 * self.step
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FitConfig {
    pub initial_guesses: Vec<f64>,
    pub log_grid: LogGrid,
    pub linear_grid: LinearGrid,
    pub rounding_decimals: u32,
    pub minimizer_max_iters: usize,
    pub minimizer_tolerance: f64,
}

impl Default for FitConfig {
    fn default() -> Self {
        Self {
            initial_guesses: log_spaced(1e5, 1e-8, 28),
            log_grid: LogGrid {
                count: 100,
                hi: 1e-3,
                lo: 1e-15,
            },
            linear_grid: LinearGrid {
                start: 1e-4,
                step: 1e-4,
                beta_max: 1e2,
            },
            rounding_decimals: 15,
            minimizer_max_iters: 500,
            minimizer_tolerance: 1e-12,
        }
    }
}

impl FitConfig {
    pub fn validate(&self) -> Result<()> {
        if self.initial_guesses.iter().any(|g| !(g.is_finite() && *g > 0.0)) {
            return Err(Error::invalid("initial_guesses", "guesses must be positive"));
        }
        let lg = &self.log_grid;
        if !(lg.hi.is_finite() && lg.lo.is_finite() && lg.hi > 0.0 && lg.lo > 0.0) {
            return Err(Error::invalid("log_grid", "bounds must be positive"));
        }
        let ln = &self.linear_grid;
        if !(ln.start > 0.0 && ln.step > 0.0 && ln.beta_max > 0.0)
            || !(ln.start.is_finite() && ln.step.is_finite() && ln.beta_max.is_finite())
        {
            return Err(Error::invalid("linear_grid", "start, step and beta_max must be positive"));
        }
        if self.rounding_decimals < 1 {
            return Err(Error::invalid("rounding_decimals", "must be at least 1"));
        }
        if !(self.minimizer_tolerance.is_finite() && self.minimizer_tolerance > 0.0) {
            return Err(Error::invalid("minimizer_tolerance", "must be positive"));
        }
        Ok(())
    }

    fn minimizer_options(&self) -> MinimizerOptions {
        MinimizerOptions {
            max_iters: self.minimizer_max_iters,
            tolerance: self.minimizer_tolerance,
        }
    }
}

/// `count` values equispaced in `log10` between `from` and `to`, both included.
fn log_spaced(from: f64, to: f64, count: usize) -> Vec<f64> {
    let (a, b) = (from.log10(), to.log10());
    match count {
        0 => Vec::new(),
        1 => vec![from],
        _ => (0..count)
            .map(|k| 10f64.powf(a + (b - a) * k as f64 / (count - 1) as f64))
            .collect(),
    }
}

fn round_to(x: f64, decimals: u32) -> f64 {
    let scale = 10f64.powi(decimals as i32);
    let r = (x * scale).round() / scale;
    if r.is_finite() {
        r
    } else {
        x
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FitSource {
    Minimizer,
    LogGrid,
    LinearGrid,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StageBest {
    pub source: FitSource,
    pub beta: f64,
    pub tvd: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub beta_eff: InverseTemperature,
    pub tvd_min: f64,
    /// Objective evaluations across all stages.
    pub evaluations: usize,
    pub source: FitSource,
    /// Minimizer starts that hit the iteration cap.
    pub unconverged_starts: usize,
    pub stages: Vec<StageBest>,
}

impl FitResult {
    pub fn effective_temperature(&self) -> f64 {
        self.beta_eff.temperature()
    }
}

/// `tvd(P, boltzmann(E, β))`, evaluated directly.
pub fn objective(
    p: &ProbabilityDistribution,
    energies: &EnergyTable,
    beta: InverseTemperature,
) -> Result<f64> {
    tvd(p, &boltzmann(energies, beta))
}

/// TVD against the Boltzmann family, evaluated per energy level.
///
/// Boltzmann weights are constant within a level, so with the level's
/// probabilities sorted and prefix-summed, `Σ_x |P(x) - c|` over the level is
/// one binary search. An evaluation costs `O(L log D)` for `L` levels of
/// largest degeneracy `D` instead of `O(2^n)` exponentials.
#[derive(Debug, Clone)]
pub struct TvdProfile {
    levels: Vec<LevelMass>,
    /// Bound on `|d TVD / dβ|`.
    lipschitz: f64,
}

#[derive(Debug, Clone)]
struct LevelMass {
    excitation: f64,
    sorted: Vec<f64>,
    prefix: Vec<f64>,
}

impl TvdProfile {
    pub fn new(p: &ProbabilityDistribution, energies: &EnergyTable) -> Result<Self> {
        if p.len() != energies.len() {
            return Err(Error::LengthMismatch {
                expected: energies.len(),
                actual: p.len(),
            });
        }
        let mut grouped: Vec<Vec<f64>> = energies
            .levels()
            .iter()
            .map(|l| Vec::with_capacity(l.degeneracy))
            .collect();
        for (&px, &e) in p.probs().iter().zip(energies.energies()) {
            let k = energies
                .level_index(e)
                .ok_or_else(|| Error::Compute(format!("energy {e} missing from level table")))?;
            grouped[k].push(px);
        }
        let e_min = energies.e_min();
        let levels = grouped
            .into_iter()
            .zip(energies.levels())
            .map(|(mut sorted, level)| {
                sorted.sort_by(f64::total_cmp);
                let mut prefix = Vec::with_capacity(sorted.len() + 1);
                let mut acc = 0.0;
                prefix.push(acc);
                for &v in &sorted {
                    acc += v;
                    prefix.push(acc);
                }
                LevelMass {
                    excitation: level.energy - e_min,
                    sorted,
                    prefix,
                }
            })
            .collect();
        // dq_x/dβ = -q_x (E_x - ⟨E⟩); the mean absolute deviation of a
        // distribution on [e_min, e_max] is at most half the width.
        let lipschitz = 0.25 * (energies.e_max() - e_min);
        Ok(Self { levels, lipschitz })
    }

    pub fn lipschitz(&self) -> f64 {
        self.lipschitz
    }

    pub fn eval(&self, beta: f64) -> f64 {
        let mut z = 0.0;
        for l in &self.levels {
            z += l.sorted.len() as f64 * (-beta * l.excitation).exp();
        }
        let mut total = 0.0;
        for l in &self.levels {
            let c = (-beta * l.excitation).exp() / z;
            let below = l.sorted.partition_point(|&v| v < c);
            let d = l.sorted.len();
            let s_below = l.prefix[below];
            let s_all = l.prefix[d];
            total += (c * below as f64 - s_below) + (s_all - s_below - c * (d - below) as f64);
        }
        (0.5 * total).clamp(0.0, 1.0)
    }
}

/// Running global best under "smaller TVD, then larger β".
#[derive(Debug, Clone, Copy)]
struct Best {
    beta: f64,
    tvd: f64,
    source: FitSource,
}

impl Best {
    fn improves_on(&self, other: &Best) -> bool {
        self.tvd < other.tvd || (self.tvd == other.tvd && self.beta > other.beta)
    }
}

struct Candidates<'a> {
    profile: &'a TvdProfile,
    decimals: u32,
    best: Option<Best>,
    evaluations: usize,
}

impl<'a> Candidates<'a> {
    fn offer(&mut self, beta: f64, source: FitSource) -> Best {
        let beta = round_to(beta, self.decimals).max(0.0);
        let tvd = round_to(self.profile.eval(beta), self.decimals);
        self.evaluations += 1;
        let cand = Best { beta, tvd, source };
        match &self.best {
            Some(b) if !cand.improves_on(b) => {}
            _ => self.best = Some(cand),
        }
        cand
    }
}

fn stage_best(stage: &mut Option<Best>, cand: Best) {
    match stage {
        Some(b) if !cand.improves_on(b) => {}
        _ => *stage = Some(cand),
    }
}

/// Scans the linear grid, skipping points that provably cannot beat the
/// running best. `|d TVD/dβ| ≤ L` means a point at distance `δ` from a probe
/// with value `t` has TVD at least `t - Lδ`; whenever that exceeds the best
/// by more than the rounding granularity the point is skipped.
fn scan_linear_grid(cands: &mut Candidates<'_>, grid: &LinearGrid, pruned: bool) -> Option<Best> {
    let count = grid.len();
    let mut stage = None;
    let lipschitz = cands.profile.lipschitz();
    let margin = 2.0 * 10f64.powi(-(cands.decimals as i32)) + 1e-13;
    let mut k = 0usize;
    while k < count {
        let cand = cands.offer(grid.value(k), FitSource::LinearGrid);
        stage_best(&mut stage, cand);
        k += 1;
        if !pruned {
            continue;
        }
        let best = cands.best.expect("a candidate was just offered").tvd;
        let gap = cand.tvd - best - margin;
        if gap <= 0.0 {
            continue;
        }
        if lipschitz == 0.0 {
            // flat objective: only the largest β can still win a tie
            k = k.max(count - 1);
            continue;
        }
        let skip = (gap / (lipschitz * grid.step * (1.0 + 1e-9))).floor();
        if skip >= 1.0 {
            k = k.saturating_add(skip.min(count as f64) as usize);
        }
    }
    stage
}

/// Finds the inverse temperature minimizing TVD to `p`.
pub fn fit_beta(
    p: &ProbabilityDistribution,
    energies: &EnergyTable,
    config: &FitConfig,
) -> Result<FitResult> {
    config.validate()?;
    let profile = TvdProfile::new(p, energies)?;
    fit_with_profile(&profile, config, true)
}

fn fit_with_profile(profile: &TvdProfile, config: &FitConfig, pruned: bool) -> Result<FitResult> {
    let mut cands = Candidates {
        profile,
        decimals: config.rounding_decimals,
        best: None,
        evaluations: 0,
    };
    let mut stages = Vec::with_capacity(3);
    let mut unconverged_starts = 0;

    let before = cands.evaluations;
    let mut stage = Some(cands.offer(0.0, FitSource::Minimizer));
    let opts = config.minimizer_options();
    for &x0 in &config.initial_guesses {
        let m = minimize_scalar(|b| profile.eval(b), x0, &opts);
        cands.evaluations += m.evaluations;
        if !m.converged {
            unconverged_starts += 1;
        }
        let cand = cands.offer(m.x, FitSource::Minimizer);
        stage_best(&mut stage, cand);
    }
    push_stage(&mut stages, stage, cands.evaluations - before);

    let before = cands.evaluations;
    let mut stage = None;
    for beta in config.log_grid.values() {
        let cand = cands.offer(beta, FitSource::LogGrid);
        stage_best(&mut stage, cand);
    }
    push_stage(&mut stages, stage, cands.evaluations - before);

    let before = cands.evaluations;
    let stage = scan_linear_grid(&mut cands, &config.linear_grid, pruned);
    push_stage(&mut stages, stage, cands.evaluations - before);

    let best = cands.best.expect("the beta = 0 candidate is always offered");
    for s in &stages {
        debug!(
            "stage {:?}: beta={} tvd={} after {} evaluations",
            s.source, s.beta, s.tvd, s.evaluations
        );
    }
    Ok(FitResult {
        beta_eff: InverseTemperature::new(best.beta)?,
        tvd_min: best.tvd,
        evaluations: cands.evaluations,
        source: best.source,
        unconverged_starts,
        stages,
    })
}

fn push_stage(stages: &mut Vec<StageBest>, stage: Option<Best>, evaluations: usize) {
    if let Some(b) = stage {
        stages.push(StageBest {
            source: b.source,
            beta: b.beta,
            tvd: b.tvd,
            evaluations,
        });
    }
}
