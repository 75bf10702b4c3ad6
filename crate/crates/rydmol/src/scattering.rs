//! Low-energy electron-atom scattering input to the mean-field potential.
//!
//! The momentum-dependent s-wave scattering length is the linear expansion
//! a(k) = a_atom + (pi/3) alpha k, with the local electron momentum taken
//! from the semiclassical relation k^2/2 = 1/R - 1/(2 n^2).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which quantum number enters the semiclassical momentum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum MomentumConvention {
    /// Quantum-defect-corrected n*.
    #[default]
    Effective,
    /// Bare principal quantum number.
    Bare,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScatteringModel {
    /// Zero-energy s-wave triplet scattering length, bohr.
    pub a_atom: f64,
    /// Ground-state polarisability, a.u.
    pub alpha: f64,
}

impl ScatteringModel {
    pub fn new(a_atom: f64, alpha: f64) -> Result<Self> {
        let m = Self { a_atom, alpha };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha.is_finite() && self.alpha > 0.0) {
            return Err(Error::BadField {
                field: "alpha".to_string(),
                message: format!("polarisability must be positive, got {}", self.alpha),
            });
        }
        if !self.a_atom.is_finite() || self.a_atom.abs() > 100.0 {
            return Err(Error::BadField {
                field: "a_atom".to_string(),
                message: format!("{} outside sanity window [-100, 100] bohr", self.a_atom),
            });
        }
        Ok(())
    }

    /// a(k) in bohr for k >= 0 in a.u.
    pub fn scattering_length(&self, k: f64) -> Result<f64> {
        if !(k.is_finite() && k >= 0.0) {
            return Err(Error::InvalidInput(format!(
                "momentum must be non-negative, got {k}"
            )));
        }
        Ok(self.a_atom + std::f64::consts::FRAC_PI_3 * self.alpha * k)
    }

    /// Momentum at which a(k) crosses zero, if any for k > 0.
    pub fn zero_crossing_k(&self) -> Option<f64> {
        if self.a_atom < 0.0 {
            Some(-3.0 * self.a_atom / (std::f64::consts::PI * self.alpha))
        } else {
            None
        }
    }
}

/// Semiclassical electron momentum k(R) = sqrt(2/R - 1/n*^2), zero beyond the
/// classical turning point 2 n*^2 where the relation has no real root.
pub fn local_momentum(n_star: f64, r: f64) -> Result<f64> {
    if !(r.is_finite() && r > 0.0) {
        return Err(Error::InvalidInput(format!(
            "radius must be positive, got {r}"
        )));
    }
    if !(n_star.is_finite() && n_star > 0.0) {
        return Err(Error::InvalidInput(format!(
            "n* must be positive, got {n_star}"
        )));
    }
    Ok((2.0 / r - 1.0 / (n_star * n_star)).max(0.0).sqrt())
}

/// Radius of the a(k(R)) sign change for a_atom < 0, from the analytic root.
pub fn zero_crossing_radius(model: &ScatteringModel, n_star: f64) -> Option<f64> {
    let k0 = model.zero_crossing_k()?;
    let inv = k0 * k0 + 1.0 / (n_star * n_star);
    let r = 2.0 / inv;
    (r < 2.0 * n_star * n_star).then_some(r)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ValidityReport {
    /// (3/2 n*^2) / sqrt(alpha): electron wavefunction size over the
    /// polarisation interaction range.
    pub ratio: f64,
    pub threshold: f64,
    pub ok: bool,
}

/// Checks that the Fermi contact treatment applies: the electron cloud must
/// dwarf the electron-atom interaction range sqrt(alpha).
pub fn validity_check(n_star: f64, alpha: f64, threshold: f64) -> Result<ValidityReport> {
    if !(n_star > 0.0 && alpha > 0.0) {
        return Err(Error::InvalidInput(
            "validity check needs positive n* and alpha".to_string(),
        ));
    }
    let ratio = 1.5 * n_star * n_star / alpha.sqrt();
    Ok(ValidityReport {
        ratio,
        threshold,
        ok: ratio >= threshold,
    })
}
