//! Simulator and spectrum checks against independent brute-force references.

mod common;

use common::{dense_probabilities, mixer_hamiltonian, propagator, CVec, Lcg};
use num_complex::Complex64;
use proptest::prelude::*;

use qaoa_thermal::ising::Coupling;
use qaoa_thermal::{
    enumerate_energies, expectation_energy, generate_sk, simulate, EnergyTable, IsingModel, MixerKind,
    QaoaParams, SpinConfiguration, StateVector,
};

fn sk_table(n: usize, seed: u64) -> EnergyTable {
    enumerate_energies(&generate_sk(n, seed).unwrap()).unwrap()
}

/// Energy straight from the spin vector, without the bit tricks used by the model.
fn spin_energy(model: &IsingModel, x: u64) -> f64 {
    let s: Vec<f64> = (0..model.n())
        .map(|i| if (x >> i) & 1 == 1 { -1.0 } else { 1.0 })
        .collect();
    let pairs: f64 = model.couplings().iter().map(|c| c.value * s[c.i] * s[c.j]).sum();
    let fields: f64 = model.fields().iter().zip(&s).map(|(h, si)| h * si).sum();
    pairs + fields
}

#[test]
fn enumeration_matches_per_config_energy_n10() {
    let model = generate_sk(10, 77).unwrap();
    let table = enumerate_energies(&model).unwrap();
    for x in 0..1u64 << 10 {
        let e = model.energy(SpinConfiguration::new(x)).unwrap();
        assert_eq!(table.energies()[x as usize], e);
        assert_eq!(e, spin_energy(&model, x));
    }
    let total: usize = table.levels().iter().map(|l| l.degeneracy).sum();
    assert_eq!(total, 1024);
}

#[test]
fn x_mixer_matches_dense_exponential() {
    let mut rng = Lcg::new(5);
    let amps = rng.state(2);
    let mut s = StateVector::from_amplitudes(amps.clone()).unwrap();
    s.apply_x_mixer(0.3);
    let dense = propagator(&mixer_hamiltonian(2, MixerKind::TransverseX), 0.3) * CVec::from_vec(amps);
    for (a, b) in s.amplitudes().iter().zip(dense.iter()) {
        assert!((a - b).norm() < 1e-14, "{a} vs {b}");
    }
}

#[test]
fn grover_mixer_matches_dense_operator() {
    let mut rng = Lcg::new(6);
    let amps = rng.state(2);
    let beta = 0.7;
    let mut s = StateVector::from_amplitudes(amps.clone()).unwrap();
    s.apply_grover_mixer(beta);
    // I - (1 - e^{-iβ}) |+⟩⟨+|, written out explicitly
    let k = Complex64::new(1.0, 0.0) - Complex64::new(0.0, -beta).exp();
    let proj = common::plus_projector(2);
    let op = common::CMat::identity(4, 4) - proj * k;
    let dense = op * CVec::from_vec(amps.clone());
    for (a, b) in s.amplitudes().iter().zip(dense.iter()) {
        assert!((a - b).norm() < 1e-14, "{a} vs {b}");
    }
    // and the same operator as a matrix exponential
    let dense = propagator(&common::plus_projector(2), beta) * CVec::from_vec(amps);
    for (a, b) in s.amplitudes().iter().zip(dense.iter()) {
        assert!((a - b).norm() < 1e-13);
    }
}

#[test]
fn depth_two_x_mixer_n3_matches_dense() {
    let table = sk_table(3, 41);
    let mut rng = Lcg::new(8);
    let g: Vec<f64> = (0..2).map(|_| rng.uniform(-3.0, 3.0)).collect();
    let b: Vec<f64> = (0..2).map(|_| rng.uniform(-3.0, 3.0)).collect();
    let p = simulate(&table, &QaoaParams::new(g.clone(), b.clone(), MixerKind::TransverseX).unwrap()).unwrap();
    let q = dense_probabilities(&table, &g, &b, MixerKind::TransverseX);
    for (x, y) in p.probs().iter().zip(&q) {
        assert!((x - y).abs() <= 1e-10);
    }
}

#[test]
fn oracle_equivalence_small_registers() {
    let mut rng = Lcg::new(2024);
    for n in 1..=4 {
        for depth in 1..=3 {
            for mixer in [MixerKind::TransverseX, MixerKind::Grover] {
                let table = sk_table(n, rng.below(1 << 30));
                let g: Vec<f64> = (0..depth).map(|_| rng.uniform(-4.0, 4.0)).collect();
                let b: Vec<f64> = (0..depth).map(|_| rng.uniform(-4.0, 4.0)).collect();
                let state = qaoa_thermal::simulator::evolve(
                    &table,
                    &QaoaParams::new(g.clone(), b.clone(), mixer).unwrap(),
                )
                .unwrap();
                let dense = common::dense_evolve(&table, &g, &b, mixer);
                for (a, d) in state.amplitudes().iter().zip(dense.iter()) {
                    assert!((a.norm() - d.norm()).abs() <= 1e-10, "n={n} p={depth} {mixer}");
                }
            }
        }
    }
}

#[test]
fn oracle_with_real_valued_couplings() {
    let model = IsingModel::new(
        3,
        vec![0.3, -1.7, 0.25],
        vec![
            Coupling { i: 0, j: 1, value: 0.9 },
            Coupling { i: 0, j: 2, value: -0.4 },
            Coupling { i: 1, j: 2, value: 2.2 },
        ],
    )
    .unwrap();
    let table = enumerate_energies(&model).unwrap();
    for mixer in [MixerKind::TransverseX, MixerKind::Grover] {
        let (g, b) = (vec![0.8, -0.35], vec![1.9, 0.6]);
        let p = simulate(&table, &QaoaParams::new(g.clone(), b.clone(), mixer).unwrap()).unwrap();
        let q = dense_probabilities(&table, &g, &b, mixer);
        for (x, y) in p.probs().iter().zip(&q) {
            assert!((x - y).abs() <= 1e-10);
        }
    }
}

#[test]
fn expectation_matches_dot_product_n10() {
    let table = sk_table(10, 4);
    let mut rng = Lcg::new(10);
    for mixer in [MixerKind::TransverseX, MixerKind::Grover] {
        let (g, b) = (rng.uniform(0.0, 0.8), rng.uniform(0.0, 3.0));
        let p = simulate(&table, &QaoaParams::depth_one(g, b, mixer).unwrap()).unwrap();
        let mut direct = 0.0;
        for x in 0..p.len() {
            direct += p.probs()[x] * table.energies()[x];
        }
        let e = expectation_energy(&p, &table).unwrap();
        assert!((e - direct).abs() < 1e-12);
        assert!(e >= table.e_min() && e <= table.e_max());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn enumeration_exhaustive_agreement(n in 1usize..=12, seed in any::<u64>()) {
        let model = generate_sk(n, seed).unwrap();
        let table = enumerate_energies(&model).unwrap();
        for x in 0..1u64 << n {
            prop_assert_eq!(table.energies()[x as usize], model.energy(SpinConfiguration::new(x)).unwrap());
        }
        prop_assert!(table.energies().iter().all(|&e| e >= table.e_min() && e <= table.e_max()));
    }
}
