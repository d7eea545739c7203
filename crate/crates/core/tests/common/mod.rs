//! Dense-matrix reference simulation shared by the integration tests.
//!
//! Builds `H_P`, `Σ X_i` and `|+⟩⟨+|` as explicit `2^n × 2^n` matrices and
//! evolves with full matrix exponentials. Nothing here calls into the
//! simulator under test.

#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use qaoa_thermal::{EnergyTable, MixerKind};

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// `Σ_i X_i` on `n` qubits, with qubit `i` acting on bit `i` of the index.
pub fn sum_x(n: usize) -> CMat {
    let dim = 1usize << n;
    let mut m = CMat::zeros(dim, dim);
    for x in 0..dim {
        for i in 0..n {
            m[(x ^ (1 << i), x)] += c(1.0);
        }
    }
    m
}

pub fn plus_projector(n: usize) -> CMat {
    let dim = 1usize << n;
    CMat::from_element(dim, dim, c(1.0 / dim as f64))
}

pub fn diag(energies: &[f64]) -> CMat {
    CMat::from_diagonal(&CVec::from_iterator(energies.len(), energies.iter().map(|&e| c(e))))
}

/// `exp(-i θ H)`.
pub fn propagator(h: &CMat, theta: f64) -> CMat {
    (h * Complex64::new(0.0, -theta)).exp()
}

pub fn mixer_hamiltonian(n: usize, mixer: MixerKind) -> CMat {
    match mixer {
        MixerKind::TransverseX => sum_x(n),
        MixerKind::Grover => plus_projector(n),
    }
}

pub fn dense_evolve(table: &EnergyTable, gammas: &[f64], betas: &[f64], mixer: MixerKind) -> CVec {
    let n = table.n();
    let dim = 1usize << n;
    let hp = diag(table.energies());
    let hm = mixer_hamiltonian(n, mixer);
    let mut psi = CVec::from_element(dim, c(1.0 / (dim as f64).sqrt()));
    for (&g, &b) in gammas.iter().zip(betas) {
        psi = propagator(&hp, g) * psi;
        psi = propagator(&hm, b) * psi;
    }
    psi
}

pub fn dense_probabilities(table: &EnergyTable, gammas: &[f64], betas: &[f64], mixer: MixerKind) -> Vec<f64> {
    dense_evolve(table, gammas, betas, mixer)
        .iter()
        .map(|a| a.norm_sqr())
        .collect()
}

/// Small deterministic generator for test inputs.
pub struct Lcg(u64);

impl Lcg {
    pub fn new(seed: u64) -> Self {
        Self(seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407))
    }

    pub fn next_f64(&mut self) -> f64 {
        self.0 = self
            .0
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        (self.0 >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    pub fn below(&mut self, n: u64) -> u64 {
        (self.next_f64() * n as f64) as u64 % n
    }

    pub fn state(&mut self, n: usize) -> Vec<Complex64> {
        let mut v: Vec<Complex64> = (0..1 << n)
            .map(|_| Complex64::new(self.uniform(-1.0, 1.0), self.uniform(-1.0, 1.0)))
            .collect();
        let norm = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        v.iter_mut().for_each(|a| *a /= norm);
        v
    }
}
