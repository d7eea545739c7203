//! Classical Ising Hamiltonians `H(σ) = Σ_{i<j} J_ij σ_i σ_j + Σ_i h_i σ_i`.
//!
//! Configurations are integers whose bit `i` encodes spin `i`: a clear bit is
//! `σ_i = +1`, a set bit is `σ_i = -1`. Every table in the crate is indexed by
//! that integer.

use std::fs;
use std::path::Path;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest spin count a [`SpinConfiguration`] can address.
pub const MAX_SPINS: usize = 63;

/// Default cap on the spin count for exhaustive enumeration (2^24 energies).
pub const DEFAULT_ENUMERATION_CAP: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Coupling {
    pub i: usize,
    pub j: usize,
    pub value: f64,
}

/// An Ising model on `n` spins with pairwise couplings and local fields.
///
/// Couplings are kept sorted by `(i, j)` with `i < j` and no duplicates.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IsingModel {
    n: usize,
    h: Vec<f64>,
    couplings: Vec<Coupling>,
}

/// On-disk shape of a model file, before validation.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModel {
    n: usize,
    h: Vec<f64>,
    couplings: Vec<Coupling>,
}

impl IsingModel {
    /// Builds a model, validating indices and rejecting duplicate pairs.
    pub fn new(n: usize, h: Vec<f64>, couplings: Vec<Coupling>) -> Result<Self> {
        Self::validated(n, h, couplings)
            .map_err(|(field, reason)| Error::InvalidArgument {
                name: "model",
                reason: format!("{field}: {reason}"),
            })
    }

    fn validated(
        n: usize,
        h: Vec<f64>,
        mut couplings: Vec<Coupling>,
    ) -> std::result::Result<Self, (String, String)> {
        if n == 0 {
            return Err(("n".into(), "must be at least 1".into()));
        }
        if n > MAX_SPINS {
            return Err(("n".into(), format!("must be at most {MAX_SPINS}")));
        }
        if h.len() != n {
            return Err((
                "h".into(),
                format!("expected {n} entries, found {}", h.len()),
            ));
        }
        if let Some(k) = h.iter().position(|v| !v.is_finite()) {
            return Err((format!("h[{k}]"), "not a finite number".into()));
        }
        for (k, c) in couplings.iter().enumerate() {
            if c.i >= c.j {
                return Err((
                    format!("couplings[{k}]"),
                    format!("pair ({}, {}) must satisfy i < j", c.i, c.j),
                ));
            }
            if c.j >= n {
                return Err((
                    format!("couplings[{k}].j"),
                    format!("index {} out of range for n = {n}", c.j),
                ));
            }
            if !c.value.is_finite() {
                return Err((format!("couplings[{k}].value"), "not a finite number".into()));
            }
        }
        couplings.sort_by_key(|c| (c.i, c.j));
        if let Some(w) = couplings.windows(2).find(|w| (w[0].i, w[0].j) == (w[1].i, w[1].j)) {
            return Err((
                "couplings".into(),
                format!("duplicate pair ({}, {})", w[0].i, w[0].j),
            ));
        }
        Ok(Self { n, h, couplings })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn fields(&self) -> &[f64] {
        &self.h
    }

    pub fn couplings(&self) -> &[Coupling] {
        &self.couplings
    }

    /// Energy of one configuration.
    pub fn energy(&self, config: SpinConfiguration) -> Result<f64> {
        if self.n < 64 && config.bits() >> self.n != 0 {
            return Err(Error::invalid(
                "config",
                format!("{} is out of range for {} spins", config.bits(), self.n),
            ));
        }
        Ok(self.energy_of_bits(config.bits()))
    }

    fn energy_of_bits(&self, x: u64) -> f64 {
        let mut e = 0.0;
        for c in &self.couplings {
            let anti = ((x >> c.i) ^ (x >> c.j)) & 1;
            e += if anti == 0 { c.value } else { -c.value };
        }
        for (i, &hi) in self.h.iter().enumerate() {
            e += if (x >> i) & 1 == 0 { hi } else { -hi };
        }
        e
    }
}

/// Draws a fully connected Sherrington-Kirkpatrick instance with every
/// coupling and field independently `±1`.
///
/// The generator is ChaCha8 seeded from `seed`; couplings are drawn in
/// lexicographic `(i, j)` order followed by the fields, one word per value.
pub fn generate_sk(n: usize, seed: u64) -> Result<IsingModel> {
    if n == 0 {
        return Err(Error::invalid("n", "spin count must be at least 1"));
    }
    if n > MAX_SPINS {
        return Err(Error::invalid("n", format!("spin count must be at most {MAX_SPINS}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = || if rng.next_u32() & 1 == 0 { 1.0 } else { -1.0 };
    let mut couplings = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            couplings.push(Coupling { i, j, value: draw() });
        }
    }
    let h = (0..n).map(|_| draw()).collect();
    IsingModel::new(n, h, couplings)
}

/// A basis-state index. Bit `i` clear means `σ_i = +1`, set means `σ_i = -1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SpinConfiguration(u64);

impl SpinConfiguration {
    pub fn new(bits: u64) -> Self {
        Self(bits)
    }

    pub fn from_spins(spins: &[i8]) -> Result<Self> {
        if spins.len() > MAX_SPINS {
            return Err(Error::invalid("spins", "too many spins"));
        }
        let mut bits = 0u64;
        for (i, &s) in spins.iter().enumerate() {
            match s {
                1 => {}
                -1 => bits |= 1 << i,
                _ => return Err(Error::invalid("spins", format!("spin {i} is {s}, not ±1"))),
            }
        }
        Ok(Self(bits))
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn spin(self, i: usize) -> i8 {
        if (self.0 >> i) & 1 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn spins(self, n: usize) -> Vec<i8> {
        (0..n).map(|i| self.spin(i)).collect()
    }

    /// Flips every one of the `n` spins.
    pub fn flipped(self, n: usize) -> Self {
        let mask = if n >= 64 { u64::MAX } else { (1u64 << n) - 1 };
        Self(self.0 ^ mask)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyLevel {
    pub energy: f64,
    pub degeneracy: usize,
}

/// Energies of all `2^n` configurations, with extrema and level structure.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyTable {
    n: usize,
    energies: Vec<f64>,
    e_min: f64,
    e_max: f64,
    levels: Vec<EnergyLevel>,
}

impl EnergyTable {
    /// Wraps a precomputed spectrum. `energies.len()` must be `2^n`.
    pub fn from_energies(n: usize, energies: Vec<f64>) -> Result<Self> {
        if n == 0 || n > MAX_SPINS {
            return Err(Error::invalid("n", format!("spin count {n} unsupported")));
        }
        if energies.len() as u128 != 1u128 << n {
            return Err(Error::LengthMismatch {
                expected: 1usize.checked_shl(n as u32).unwrap_or(usize::MAX),
                actual: energies.len(),
            });
        }
        if let Some(k) = energies.iter().position(|e| !e.is_finite()) {
            return Err(Error::invalid("energies", format!("entry {k} is not finite")));
        }
        let mut sorted = energies.clone();
        sorted.sort_by(f64::total_cmp);
        let mut levels: Vec<EnergyLevel> = Vec::new();
        for e in sorted {
            match levels.last_mut() {
                Some(l) if l.energy == e => l.degeneracy += 1,
                _ => levels.push(EnergyLevel {
                    energy: e,
                    degeneracy: 1,
                }),
            }
        }
        let e_min = levels[0].energy;
        let e_max = levels[levels.len() - 1].energy;
        Ok(Self {
            n,
            energies,
            e_min,
            e_max,
            levels,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.energies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.energies.is_empty()
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn e_min(&self) -> f64 {
        self.e_min
    }

    pub fn e_max(&self) -> f64 {
        self.e_max
    }

    /// Distinct energies in ascending order with their degeneracies.
    pub fn levels(&self) -> &[EnergyLevel] {
        &self.levels
    }

    /// Mean energy over all configurations.
    pub fn mean(&self) -> f64 {
        self.energies.iter().sum::<f64>() / self.energies.len() as f64
    }

    /// Position of `energy` in [`levels`](Self::levels), if it is one of them.
    pub fn level_index(&self, energy: f64) -> Option<usize> {
        self.levels
            .binary_search_by(|l| l.energy.total_cmp(&energy))
            .ok()
    }
}

/// Evaluates every configuration, refusing models above [`DEFAULT_ENUMERATION_CAP`] spins.
pub fn enumerate_energies(model: &IsingModel) -> Result<EnergyTable> {
    enumerate_energies_capped(model, DEFAULT_ENUMERATION_CAP)
}

pub fn enumerate_energies_capped(model: &IsingModel, cap: usize) -> Result<EnergyTable> {
    if model.n() > cap {
        return Err(Error::ResourceLimit(format!(
            "enumerating {} spins exceeds the cap of {cap}",
            model.n()
        )));
    }
    let size = 1u64 << model.n();
    let energies = (0..size)
        .into_par_iter()
        .map(|x| model.energy_of_bits(x))
        .collect();
    EnergyTable::from_energies(model.n(), energies)
}

pub fn save_model(model: &IsingModel, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut text = serde_json::to_string_pretty(model)?;
    text.push('\n');
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn load_model(path: impl AsRef<Path>) -> Result<IsingModel> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_model(&text)
}

/// Parses the JSON model format: `{"n": .., "h": [..], "couplings": [{"i", "j", "value"}]}`.
pub fn parse_model(text: &str) -> Result<IsingModel> {
    let raw: RawModel = serde_json::from_str(text).map_err(|e| {
        Error::parse(
            "model",
            format!("{e} (line {}, column {})", e.line(), e.column()),
        )
    })?;
    IsingModel::validated(raw.n, raw.h, raw.couplings)
        .map_err(|(field, reason)| Error::Parse { field, reason })
}
