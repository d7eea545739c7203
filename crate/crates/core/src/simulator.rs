//! Exact statevector simulation of alternating-operator circuits
//! `|γ, β⟩ = U_M(β_p) U_P(γ_p) ⋯ U_M(β_1) U_P(γ_1) |+^n⟩`.
//!
//! `U_P(γ) = exp(-iγ H_P)` is diagonal in the computational basis and uses a
//! precomputed [`EnergyTable`]. Two mixers are provided:
//!
//! * transverse field, `exp(-iβ Σ_i X_i)`, which factorizes exactly into one
//!   `[[cos β, -i sin β], [-i sin β, cos β]]` rotation per qubit;
//! * Grover, `exp(-iβ |+^n⟩⟨+^n|) = I - (1 - e^{-iβ}) |+^n⟩⟨+^n|`, applied as a
//!   rank-one update.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ising::{EnergyTable, MAX_SPINS};
use crate::thermal::ProbabilityDistribution;

/// Largest register simulated; matches the default enumeration cap.
pub const MAX_QUBITS: usize = crate::ising::DEFAULT_ENUMERATION_CAP;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum MixerKind {
    #[serde(alias = "x")]
    #[value(name = "x", alias = "transverse-x")]
    TransverseX,
    #[value(name = "grover")]
    Grover,
}

impl MixerKind {
    pub fn name(self) -> &'static str {
        match self {
            MixerKind::TransverseX => "x",
            MixerKind::Grover => "grover",
        }
    }
}

impl std::fmt::Display for MixerKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Angles for a depth-`p` circuit. Layer `k` applies `gammas[k]` then `betas[k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct QaoaParams {
    gammas: Vec<f64>,
    betas: Vec<f64>,
    mixer: MixerKind,
}

impl QaoaParams {
    pub fn new(gammas: Vec<f64>, betas: Vec<f64>, mixer: MixerKind) -> Result<Self> {
        if gammas.is_empty() {
            return Err(Error::invalid("gammas", "depth must be at least 1"));
        }
        if gammas.len() != betas.len() {
            return Err(Error::LengthMismatch {
                expected: gammas.len(),
                actual: betas.len(),
            });
        }
        if gammas.iter().chain(&betas).any(|a| !a.is_finite()) {
            return Err(Error::invalid("angles", "angles must be finite"));
        }
        Ok(Self {
            gammas,
            betas,
            mixer,
        })
    }

    pub fn depth_one(gamma: f64, beta: f64, mixer: MixerKind) -> Result<Self> {
        Self::new(vec![gamma], vec![beta], mixer)
    }

    pub fn depth(&self) -> usize {
        self.gammas.len()
    }

    pub fn gammas(&self) -> &[f64] {
        &self.gammas
    }

    pub fn betas(&self) -> &[f64] {
        &self.betas
    }

    pub fn mixer(&self) -> MixerKind {
        self.mixer
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// Wraps `2^n` amplitudes; they must already be normalized.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let len = amps.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::invalid(
                "amplitudes",
                format!("length {len} is not 2^n for n >= 1"),
            ));
        }
        let n = len.trailing_zeros() as usize;
        let state = Self { n, amps };
        let norm = state.norm_sqr();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::invalid("amplitudes", format!("squared norm is {norm}")));
        }
        Ok(state)
    }

    /// The uniform superposition `|+^n⟩`.
    pub fn plus(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("n", "need at least one qubit"));
        }
        if n > MAX_QUBITS.min(MAX_SPINS) {
            return Err(Error::ResourceLimit(format!(
                "{n} qubits exceeds the simulator cap of {MAX_QUBITS}"
            )));
        }
        let len = 1usize << n;
        // 2^{-n/2}, exact up to one rounding of 1/√2
        let mut a = 0.5f64.powi((n / 2) as i32);
        if n % 2 == 1 {
            a *= std::f64::consts::FRAC_1_SQRT_2;
        }
        let a = Complex64::new(a, 0.0);
        Ok(Self {
            n,
            amps: vec![a; len],
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn probabilities(&self) -> ProbabilityDistribution {
        ProbabilityDistribution::from_raw(self.amps.iter().map(|c| c.norm_sqr()).collect())
    }

    /// `c_x ← exp(-iγ E(x)) c_x`.
    pub fn apply_phase_separator(&mut self, energies: &EnergyTable, gamma: f64) -> Result<()> {
        if energies.len() != self.amps.len() {
            return Err(Error::LengthMismatch {
                expected: self.amps.len(),
                actual: energies.len(),
            });
        }
        for (c, &e) in self.amps.iter_mut().zip(energies.energies()) {
            let (s, co) = (gamma * e).sin_cos();
            *c *= Complex64::new(co, -s);
        }
        Ok(())
    }

    /// `exp(-iβ Σ_i X_i)`, one 2×2 rotation per qubit.
    pub fn apply_x_mixer(&mut self, beta: f64) {
        let (s, co) = beta.sin_cos();
        let mis = Complex64::new(0.0, -s);
        for q in 0..self.n {
            let stride = 1usize << q;
            for block in self.amps.chunks_exact_mut(stride << 1) {
                let (lo, hi) = block.split_at_mut(stride);
                for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                    let (x0, x1) = (*a, *b);
                    *a = x0 * co + x1 * mis;
                    *b = x0 * mis + x1 * co;
                }
            }
        }
    }

    /// `exp(-iβ |+^n⟩⟨+^n|)`: subtracts `(1 - e^{-iβ}) ⟨+|c⟩ / √2^n` from every amplitude.
    pub fn apply_grover_mixer(&mut self, beta: f64) {
        let sum: Complex64 = self.amps.iter().sum();
        let (s, co) = beta.sin_cos();
        let one_minus_phase = Complex64::new(1.0 - co, s);
        let shift = one_minus_phase * sum / self.amps.len() as f64;
        for c in &mut self.amps {
            *c -= shift;
        }
    }

    pub fn apply_mixer(&mut self, mixer: MixerKind, beta: f64) {
        match mixer {
            MixerKind::TransverseX => self.apply_x_mixer(beta),
            MixerKind::Grover => self.apply_grover_mixer(beta),
        }
    }
}

/// Runs the full circuit from `|+^n⟩` and returns the final state.
pub fn evolve(energies: &EnergyTable, params: &QaoaParams) -> Result<StateVector> {
    let mut state = StateVector::plus(energies.n())?;
    for (&gamma, &beta) in params.gammas().iter().zip(params.betas()) {
        state.apply_phase_separator(energies, gamma)?;
        state.apply_mixer(params.mixer(), beta);
    }
    Ok(state)
}

/// Computational-basis measurement distribution of the circuit output.
pub fn simulate(energies: &EnergyTable, params: &QaoaParams) -> Result<ProbabilityDistribution> {
    Ok(evolve(energies, params)?.probabilities())
}

/// `Σ_x P(x) E(x)`, clamped to the spectrum range.
pub fn expectation_energy(dist: &ProbabilityDistribution, energies: &EnergyTable) -> Result<f64> {
    if dist.len() != energies.len() {
        return Err(Error::LengthMismatch {
            expected: energies.len(),
            actual: dist.len(),
        });
    }
    let e: f64 = dist
        .probs()
        .iter()
        .zip(energies.energies())
        .map(|(p, e)| p * e)
        .sum();
    Ok(e.clamp(energies.e_min(), energies.e_max()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ising::{enumerate_energies, generate_sk};
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn random_state(n: usize, seed: u64) -> StateVector {
        // xorshift keeps this test free of extra dependencies
        let mut s = seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) | 1;
        let mut next = || {
            s ^= s << 13;
            s ^= s >> 7;
            s ^= s << 17;
            (s >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        let mut amps: Vec<Complex64> = (0..1 << n).map(|_| Complex64::new(next(), next())).collect();
        let norm = amps.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        amps.iter_mut().for_each(|c| *c /= norm);
        StateVector::from_amplitudes(amps).unwrap()
    }

    #[test]
    fn plus_state() {
        let s = StateVector::plus(1).unwrap();
        assert_eq!(s.amplitudes(), &[Complex64::new(FRAC_1_SQRT_2, 0.0); 2]);
        let s = StateVector::plus(2).unwrap();
        assert_eq!(s.amplitudes(), &[Complex64::new(0.5, 0.0); 4]);
        for n in 1..=12 {
            assert!((StateVector::plus(n).unwrap().norm_sqr() - 1.0).abs() < 1e-14);
        }
        assert!(StateVector::plus(0).is_err());
        assert!(matches!(StateVector::plus(25), Err(Error::ResourceLimit(_))));
    }

    #[test]
    fn phase_separator_identity_and_sign_flip() {
        let t = EnergyTable::from_energies(1, vec![1.0, -1.0]).unwrap();
        let mut s = random_state(1, 3);
        let before = s.clone();
        s.apply_phase_separator(&t, 0.0).unwrap();
        assert_eq!(s, before);
        s.apply_phase_separator(&t, PI).unwrap();
        for (a, b) in s.amplitudes().iter().zip(before.amplitudes()) {
            assert!((a + b).norm() < 1e-15);
        }
    }

    #[test]
    fn phase_separator_preserves_moduli() {
        let t = enumerate_energies(&generate_sk(5, 1).unwrap()).unwrap();
        let mut s = random_state(5, 8);
        let before = s.clone();
        s.apply_phase_separator(&t, 0.77).unwrap();
        for (a, b) in s.amplitudes().iter().zip(before.amplitudes()) {
            assert!((a.norm() - b.norm()).abs() < 1e-15);
        }
    }

    #[test]
    fn phase_separator_length_mismatch() {
        let t = EnergyTable::from_energies(1, vec![1.0, -1.0]).unwrap();
        let mut s = StateVector::plus(2).unwrap();
        assert!(matches!(
            s.apply_phase_separator(&t, 0.1),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn mixers_at_zero_are_identity() {
        let s0 = random_state(4, 21);
        let mut s = s0.clone();
        s.apply_x_mixer(0.0);
        assert_eq!(s, s0);
        s.apply_grover_mixer(0.0);
        assert_eq!(s, s0);
    }

    #[test]
    fn x_mixer_on_plus_keeps_uniform_probabilities() {
        let mut s = StateVector::plus(5).unwrap();
        s.apply_x_mixer(1.234);
        for p in s.probabilities().probs() {
            assert!((p - 1.0 / 32.0).abs() < 1e-15);
        }
    }

    #[test]
    fn grover_mixer_on_plus_is_global_phase() {
        let beta = 2.1;
        let mut s = StateVector::plus(4).unwrap();
        s.apply_grover_mixer(beta);
        let expect = Complex64::new(0.0, -beta).exp() * 0.25;
        for a in s.amplitudes() {
            assert!((a - expect).norm() < 1e-15);
        }
    }

    #[test]
    fn single_qubit_x_rotation() {
        // |0> -> cos β |0> - i sin β |1>
        let mut s = StateVector::from_amplitudes(vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)])
            .unwrap();
        s.apply_x_mixer(0.4);
        assert!((s.amplitudes()[0] - Complex64::new(0.4f64.cos(), 0.0)).norm() < 1e-15);
        assert!((s.amplitudes()[1] - Complex64::new(0.0, -(0.4f64.sin()))).norm() < 1e-15);
    }

    #[test]
    fn norm_preserved() {
        let t = enumerate_energies(&generate_sk(7, 4).unwrap()).unwrap();
        let mut s = random_state(7, 9);
        for k in 0..10 {
            let a = 0.37 * k as f64 - 1.0;
            s.apply_phase_separator(&t, a).unwrap();
            assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
            s.apply_x_mixer(a * 1.3);
            assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
            s.apply_grover_mixer(a * 0.7);
            assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_angle_layers_give_uniform_output() {
        let t = enumerate_energies(&generate_sk(6, 2).unwrap()).unwrap();
        for mixer in [MixerKind::TransverseX, MixerKind::Grover] {
            for (g, b) in [(0.0, 0.9), (0.6, 0.0)] {
                let p = simulate(&t, &QaoaParams::depth_one(g, b, mixer).unwrap()).unwrap();
                for x in p.probs() {
                    assert!((x - 1.0 / 64.0).abs() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn params_validation() {
        assert!(QaoaParams::new(vec![], vec![], MixerKind::Grover).is_err());
        assert!(QaoaParams::new(vec![0.1], vec![0.1, 0.2], MixerKind::Grover).is_err());
        assert!(QaoaParams::new(vec![f64::NAN], vec![0.1], MixerKind::Grover).is_err());
        assert_eq!(
            QaoaParams::new(vec![0.1, 0.2], vec![0.3, 0.4], MixerKind::TransverseX)
                .unwrap()
                .depth(),
            2
        );
    }

    #[test]
    fn expectation_values() {
        let t = enumerate_energies(&generate_sk(8, 17).unwrap()).unwrap();
        let u = ProbabilityDistribution::uniform(t.len());
        assert!(expectation_energy(&u, &t).unwrap().abs() < 1e-12);
        let argmin = t
            .energies()
            .iter()
            .position(|&e| e == t.e_min())
            .unwrap();
        let pm = ProbabilityDistribution::point_mass(t.len(), argmin);
        assert_eq!(expectation_energy(&pm, &t).unwrap(), t.e_min());
        assert!(expectation_energy(&ProbabilityDistribution::uniform(4), &t).is_err());
    }

    #[test]
    fn mixer_names() {
        assert_eq!(serde_json::to_string(&MixerKind::TransverseX).unwrap(), "\"transverse_x\"");
        let m: MixerKind = serde_json::from_str("\"x\"").unwrap();
        assert_eq!(m, MixerKind::TransverseX);
    }
}
