//! Boltzmann distributions and the measures used to compare distributions.

use crate::error::{Error, Result};
use crate::ising::EnergyTable;

/// Tolerance on the total mass accepted by [`ProbabilityDistribution::new`].
pub const MASS_TOLERANCE: f64 = 1e-9;

/// Nonnegative weights over basis states summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityDistribution {
    probs: Vec<f64>,
}

impl ProbabilityDistribution {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::invalid("probs", "distribution is empty"));
        }
        if let Some(k) = probs.iter().position(|p| !(p.is_finite() && *p >= 0.0)) {
            return Err(Error::invalid(
                "probs",
                format!("entry {k} = {} is not a nonnegative number", probs[k]),
            ));
        }
        let mass: f64 = probs.iter().sum();
        if (mass - 1.0).abs() > MASS_TOLERANCE {
            return Err(Error::invalid("probs", format!("total mass {mass} is not 1")));
        }
        Ok(Self { probs })
    }

    pub(crate) fn from_raw(probs: Vec<f64>) -> Self {
        debug_assert!(!probs.is_empty());
        Self { probs }
    }

    pub fn uniform(len: usize) -> Self {
        Self::from_raw(vec![1.0 / len as f64; len])
    }

    /// All mass on one index.
    pub fn point_mass(len: usize, at: usize) -> Self {
        let mut probs = vec![0.0; len];
        probs[at] = 1.0;
        Self::from_raw(probs)
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.probs
    }
}

/// Inverse temperature `1 / (k_B T)` with `k_B = 1`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct InverseTemperature(f64);

impl InverseTemperature {
    pub const ZERO: Self = Self(0.0);

    pub fn new(beta: f64) -> Result<Self> {
        if !beta.is_finite() || beta < 0.0 {
            return Err(Error::invalid(
                "beta",
                format!("inverse temperature must be finite and nonnegative, got {beta}"),
            ));
        }
        Ok(Self(beta))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// `1 / beta`; infinite at `beta = 0`.
    pub fn temperature(self) -> f64 {
        1.0 / self.0
    }
}

/// Boltzmann distribution `p(x) ∝ exp(-β E(x))`.
///
/// Exponents are shifted by the ground-state energy so every weight lies in
/// `(0, 1]` and the ground state always contributes `1` to the partition sum.
pub fn boltzmann(energies: &EnergyTable, beta: InverseTemperature) -> ProbabilityDistribution {
    let b = beta.value();
    let e_min = energies.e_min();
    let mut probs: Vec<f64> = energies
        .energies()
        .iter()
        .map(|&e| (-b * (e - e_min)).exp())
        .collect();
    let z: f64 = probs.iter().sum();
    for p in &mut probs {
        *p /= z;
    }
    ProbabilityDistribution::from_raw(probs)
}

/// Total variation distance `½ Σ |P(x) - Q(x)|`, in `[0, 1]`.
pub fn tvd(p: &ProbabilityDistribution, q: &ProbabilityDistribution) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::LengthMismatch {
            expected: p.len(),
            actual: q.len(),
        });
    }
    let l1: f64 = p
        .probs()
        .iter()
        .zip(q.probs())
        .map(|(a, b)| (a - b).abs())
        .sum();
    Ok((0.5 * l1).min(1.0))
}

/// Shannon entropy with logarithm base equal to the support size, so the
/// uniform distribution scores 1 and a point mass scores 0.
///
/// Uses `0 · log 0 = 0`. For `2^n` states the base is `2^n`.
pub fn shannon_entropy_normalized(p: &ProbabilityDistribution) -> f64 {
    if p.len() < 2 {
        return 0.0;
    }
    let h: f64 = p
        .probs()
        .iter()
        .filter(|&&x| x > 0.0)
        .map(|&x| -x * x.ln())
        .sum();
    (h / (p.len() as f64).ln()).clamp(0.0, 1.0)
}
