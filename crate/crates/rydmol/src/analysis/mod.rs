//! Experiment-side analysis: line centers, Zeeman-corrected binding
//! energies, and the scattering-length, Stark and lifetime fits.

pub mod binding;
pub mod lifetime;
pub mod linefit;
pub mod scattering_fit;
pub mod stark;

pub use binding::{binding_energy, zeeman_correction, Assignment, BindingEnergyDatum, BindingResult};
pub use lifetime::{fit_lifetime, DecayPoint, LifetimeFit};
pub use linefit::{fit_line, LineFit, LineShape};
pub use scattering_fit::{fit_scattering_length, ResidualRow, ScatteringLengthFit};
pub use stark::{fit_stark, PolarizabilityFit, StarkPoint};
