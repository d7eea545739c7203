//! Exact depth-p QAOA simulation with transverse-field and Grover mixers, and
//! tools for measuring how closely its output approximates Boltzmann
//! distributions of classical Ising spin glasses.

pub mod cli;
pub mod error;
pub mod fit;
pub mod io;
pub mod ising;
pub mod minimize;
pub mod simulator;
pub mod sweep;
pub mod thermal;

pub use error::{Error, Result};
pub use fit::{fit_beta, objective, FitConfig, FitResult, FitSource};
pub use ising::{enumerate_energies, generate_sk, load_model, save_model, EnergyTable, IsingModel, SpinConfiguration};
pub use simulator::{expectation_energy, simulate, MixerKind, QaoaParams, StateVector};
pub use sweep::{sweep, threshold_analysis, tradeoff_extract, GridSpec, SweepRecord};
pub use thermal::{boltzmann, shannon_entropy_normalized, tvd, InverseTemperature, ProbabilityDistribution};
