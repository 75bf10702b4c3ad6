//! Zeeman correction and binding energies from fitted line centers.

use serde::{Deserialize, Serialize};

use crate::analysis::linefit::LineFit;
use crate::constants::PhysicalConstants;
use crate::error::{Error, Result};

/// Vibrational assignment of a measured line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Assignment {
    V0,
    V1,
    /// Kept in the record but excluded from every fit.
    Unassigned,
}

impl Assignment {
    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "0" => Ok(Assignment::V0),
            "1" => Ok(Assignment::V1),
            "unassigned" | "-" => Ok(Assignment::Unassigned),
            other => Err(Error::InvalidInput(format!(
                "assignment must be 0, 1 or unassigned, got `{other}`"
            ))),
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Assignment::V0 => "0",
            Assignment::V1 => "1",
            Assignment::Unassigned => "unassigned",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BindingEnergyDatum {
    pub n: u32,
    pub v: Assignment,
    /// Binding energy in MHz, negative for bound lines.
    pub e_b_mhz: f64,
    pub sigma_mhz: f64,
}

impl BindingEnergyDatum {
    pub fn validate(&self) -> Result<()> {
        if !(self.e_b_mhz.is_finite() && self.e_b_mhz < 0.0) {
            return Err(Error::InvalidInput(format!(
                "binding energy must be negative, got {} MHz (n={})",
                self.e_b_mhz, self.n
            )));
        }
        if !(self.sigma_mhz.is_finite() && self.sigma_mhz > 0.0) {
            return Err(Error::InvalidInput(format!(
                "sigma must be positive, got {} MHz (n={})",
                self.sigma_mhz, self.n
            )));
        }
        Ok(())
    }
}

/// Zeeman shift Delta_B = g_eff mu_B B0 in MHz.
pub fn zeeman_correction(b0_gauss: f64, g_eff: f64, constants: &PhysicalConstants) -> Result<f64> {
    if !(b0_gauss.is_finite() && b0_gauss >= 0.0) {
        return Err(Error::InvalidInput(format!(
            "offset field must be non-negative, got {b0_gauss} G"
        )));
    }
    Ok(g_eff * constants.bohr_magneton_mhz_per_gauss * b0_gauss)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BindingResult {
    pub e_b_mhz: f64,
    pub sigma_mhz: f64,
    /// False flags a non-molecular assignment (e_b came out >= 0); the value
    /// is still reported so the caller can inspect it.
    pub is_molecular: bool,
}

/// E_B = molecular center - atomic center + Delta_B, with uncertainties
/// summed in quadrature. The Zeeman term enters with a positive sign: the
/// raw separation overstates the binding by the field shift of the triplet
/// line, so the correction moves e_b toward zero.
pub fn binding_energy(atomic: &LineFit, molecular: &LineFit, delta_b_mhz: f64) -> BindingResult {
    let e_b = molecular.center - atomic.center + delta_b_mhz;
    let sigma = (molecular.center_sigma.powi(2) + atomic.center_sigma.powi(2)).sqrt();
    BindingResult {
        e_b_mhz: e_b,
        sigma_mhz: sigma,
        is_molecular: e_b < 0.0,
    }
}
