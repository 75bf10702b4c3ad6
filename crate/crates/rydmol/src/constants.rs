//! Physical constants and unit conversions.
//!
//! The numeric core works exclusively in Hartree atomic units (hartree, bohr,
//! electron mass). MHz, gauss, V/cm and microseconds exist only at the I/O
//! boundary, and every conversion goes through a [`PhysicalConstants`] value
//! so a run can pin an exact constants vintage.
//!
//! Defaults: CODATA 2018 (Tiesinga et al., Rev. Mod. Phys. 93, 025010 (2021))
//! plus the AME2020 mass of 87Rb.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// E_h/h in MHz (CODATA 2018: 6.579 683 920 502 e15 Hz).
pub const HARTREE_TO_MHZ: f64 = 6.579_683_920_502e9;

/// Bohr magneton over h, in MHz per gauss (CODATA 2018: 13.996 244 9361 GHz/T).
pub const BOHR_MAGNETON_MHZ_PER_GAUSS: f64 = 1.399_624_493_61;

/// Unified atomic mass unit in electron masses (CODATA 2018).
pub const AMU_TO_ME: f64 = 1_822.888_486_209;

/// Mass of 87Rb in u (AME2020).
pub const MASS_RB87_AMU: f64 = 86.909_180_531;

/// Atomic unit of electric field in V/cm (CODATA 2018: 5.142 206 747 63 e11 V/m).
pub const FIELD_AU_TO_V_PER_CM: f64 = 5.142_206_747_63e9;

pub const DEFAULT_VINTAGE: &str = "CODATA 2018 / AME2020";

/// Conversion table used by every unit-crossing operation.
///
/// Immutable after construction; values are compiled-in defaults that can be
/// overridden from a run config to reproduce analyses pinned to a different
/// constants vintage.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhysicalConstants {
    /// MHz per hartree.
    pub hartree_to_mhz: f64,
    /// MHz per gauss for one Bohr magneton.
    pub bohr_magneton_mhz_per_gauss: f64,
    /// Electron masses per unified mass unit.
    pub amu_to_me: f64,
    /// Mass of 87Rb in u.
    pub mass_rb87_amu: f64,
    /// V/cm per atomic unit of electric field.
    pub field_au_to_v_per_cm: f64,
    /// Human-readable source tag, echoed into every report.
    pub vintage: String,
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self {
            hartree_to_mhz: HARTREE_TO_MHZ,
            bohr_magneton_mhz_per_gauss: BOHR_MAGNETON_MHZ_PER_GAUSS,
            amu_to_me: AMU_TO_ME,
            mass_rb87_amu: MASS_RB87_AMU,
            field_au_to_v_per_cm: FIELD_AU_TO_V_PER_CM,
            vintage: DEFAULT_VINTAGE.to_string(),
        }
    }
}

impl PhysicalConstants {
    pub fn validate(&self) -> Result<()> {
        let all = [
            ("hartree_to_mhz", self.hartree_to_mhz),
            (
                "bohr_magneton_mhz_per_gauss",
                self.bohr_magneton_mhz_per_gauss,
            ),
            ("amu_to_me", self.amu_to_me),
            ("mass_rb87_amu", self.mass_rb87_amu),
            ("field_au_to_v_per_cm", self.field_au_to_v_per_cm),
        ];
        for (name, v) in all {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::BadField {
                    field: name.to_string(),
                    message: format!("must be finite and positive, got {v}"),
                });
            }
        }
        if !(6.5e9..=6.7e9).contains(&self.hartree_to_mhz) {
            return Err(Error::BadField {
                field: "hartree_to_mhz".to_string(),
                message: format!("{} outside sanity window [6.5e9, 6.7e9]", self.hartree_to_mhz),
            });
        }
        Ok(())
    }

    /// Energy in hartree to frequency in MHz. Exact linear map.
    pub fn energy_au_to_mhz(&self, e_au: f64) -> f64 {
        e_au * self.hartree_to_mhz
    }

    /// Frequency in MHz to energy in hartree.
    pub fn energy_mhz_to_au(&self, f_mhz: f64) -> f64 {
        f_mhz / self.hartree_to_mhz
    }

    /// Reduced mass of the 87Rb dimer, m(87Rb)/2, in electron masses.
    pub fn reduced_mass_rb2(&self) -> f64 {
        self.mass_rb87_amu * self.amu_to_me / 2.0
    }

    /// Electric field in V/cm to atomic units.
    pub fn field_v_per_cm_to_au(&self, f: f64) -> f64 {
        f / self.field_au_to_v_per_cm
    }

    /// Quadratic Stark coefficient from MHz/(V/cm)^2 to a.u. of polarisability.
    ///
    /// A quadratic shift `delta_nu = -(alpha/2) F^2` written in mixed units
    /// picks up one factor of `hartree_to_mhz` and two of the field conversion.
    pub fn stark_slope_mhz_to_alpha_au(&self, slope: f64) -> f64 {
        -2.0 * slope * self.field_au_to_v_per_cm.powi(2) / self.hartree_to_mhz
    }
}
