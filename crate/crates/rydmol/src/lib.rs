//! Ultra-long-range Rb(5S)-Rb(nS) Rydberg dimers: mean-field Born-Oppenheimer
//! potentials from quantum-defect Rydberg wavefunctions, vibrational bound
//! states of the outermost wells, and the spectroscopic fits (scattering
//! length, Stark polarisability, lifetimes) that connect the model to
//! measured spectra.
//!
//! Everything internal is in Hartree atomic units; conversions live in
//! [`constants`] and happen only at the I/O boundary.

pub mod analysis;
pub mod constants;
pub mod defect;
pub mod eigen;
mod error;
pub mod fitting;
pub mod grid;
pub mod numerov;
pub mod pipeline;
pub mod potential;
pub mod scattering;
pub mod shooting;
pub mod solver;
pub mod spectra;
pub mod textfmt;
pub mod wavefunction;

pub use constants::PhysicalConstants;
pub use defect::{QuantumDefectModel, RydbergState};
pub use error::{Error, Result};
pub use potential::{build_potential, PotentialCurve, PotentialOptions};
pub use scattering::{local_momentum, validity_check, MomentumConvention, ScatteringModel};
pub use solver::{solve_bound_states, SolverOptions, VibrationalLevel};
pub use wavefunction::{compute_wavefunction, RadialWavefunction, WavefunctionConfig};
