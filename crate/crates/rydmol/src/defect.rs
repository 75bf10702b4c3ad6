//! Rydberg-Ritz quantum defects and quantum-defect-corrected energies.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Lowest n accepted by the asymptotic Rydberg-Ritz series.
pub const N_FLOOR: u32 = 10;

/// Rydberg-Ritz coefficients for one (l, j) series:
/// delta(n) = delta0 + delta2/(n - delta0)^2 + delta4/(n - delta0)^4.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantumDefectModel {
    pub delta0: f64,
    pub delta2: f64,
    pub delta4: f64,
    /// Where the coefficients came from; copied into output metadata.
    pub source: String,
}

impl Default for QuantumDefectModel {
    /// Rb nS1/2 series coefficients from millimeter-wave spectroscopy
    /// (Li, Mourachko, Noel, Gallagher, Phys. Rev. A 67, 052502 (2003)).
    fn default() -> Self {
        Self {
            delta0: 3.131_180_4,
            delta2: 0.178_4,
            delta4: 0.0,
            source: "Rb nS1/2 Rydberg-Ritz defaults, PRA 67, 052502 (2003)".to_string(),
        }
    }
}

impl QuantumDefectModel {
    /// Hydrogenic limit: all defects zero.
    pub fn hydrogen() -> Self {
        Self {
            delta0: 0.0,
            delta2: 0.0,
            delta4: 0.0,
            source: "hydrogenic (zero defects)".to_string(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=5.0).contains(&self.delta0) {
            return Err(Error::BadField {
                field: "delta0".to_string(),
                message: format!("{} outside sanity window [0, 5]", self.delta0),
            });
        }
        for (name, v) in [("delta2", self.delta2), ("delta4", self.delta4)] {
            if !v.is_finite() {
                return Err(Error::BadField {
                    field: name.to_string(),
                    message: "must be finite".to_string(),
                });
            }
        }
        Ok(())
    }

    /// Rydberg-Ritz defect for principal quantum number n.
    pub fn defect(&self, n: u32) -> Result<f64> {
        if n < N_FLOOR {
            return Err(Error::InvalidInput(format!(
                "quantum defect series needs n >= {N_FLOOR}, got {n}"
            )));
        }
        let d = n as f64 - self.delta0;
        Ok(self.delta0 + self.delta2 / (d * d) + self.delta4 / (d * d * d * d))
    }

    /// Effective quantum number n* = n - delta(n).
    pub fn n_star(&self, n: u32) -> Result<f64> {
        Ok(n as f64 - self.defect(n)?)
    }

    pub fn is_hydrogenic(&self) -> bool {
        self.delta0 == 0.0 && self.delta2 == 0.0 && self.delta4 == 0.0
    }
}

/// Bound-state energy -1/(2 n*^2) in hartree.
pub fn rydberg_energy(n_star: f64) -> Result<f64> {
    if !(n_star.is_finite() && n_star > 0.0) {
        return Err(Error::InvalidInput(format!(
            "effective quantum number must be positive, got {n_star}"
        )));
    }
    Ok(-0.5 / (n_star * n_star))
}

/// One Rydberg level of the nS series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RydbergState {
    pub n: u32,
    pub l: u32,
    pub n_star: f64,
    /// Energy in hartree, -1/(2 n*^2) by construction.
    pub energy: f64,
}

impl RydbergState {
    pub fn new(n: u32, l: u32, model: &QuantumDefectModel) -> Result<Self> {
        if l != 0 {
            return Err(Error::InvalidInput(format!(
                "only l = 0 states are supported, got l = {l}"
            )));
        }
        let n_star = model.n_star(n)?;
        Ok(Self {
            n,
            l,
            n_star,
            energy: rydberg_energy(n_star)?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn constant_series_returns_delta0() {
        let m = QuantumDefectModel {
            delta0: 3.0,
            delta2: 0.0,
            delta4: 0.0,
            source: String::new(),
        };
        for n in [10, 35, 60] {
            assert_relative_eq!(m.defect(n).unwrap(), 3.0);
        }
    }

    #[test]
    fn rb_ns_defect_at_35() {
        // 3.1311804 + 0.1784/(35 - 3.1311804)^2
        let m = QuantumDefectModel::default();
        let d = m.defect(35).unwrap();
        assert!((d - 3.131356).abs() < 2e-6, "delta(35) = {d}");
        let ns = m.n_star(35).unwrap();
        assert!((ns - 31.868644).abs() < 2e-6, "n*(35) = {ns}");
    }

    #[test]
    fn series_decreases_toward_delta0() {
        let m = QuantumDefectModel::default();
        assert!(m.defect(40).unwrap() < m.defect(35).unwrap());
        // successive differences shrink for n >= 20
        let mut last = f64::INFINITY;
        for n in 20..50 {
            let step = (m.defect(n + 1).unwrap() - m.defect(n).unwrap()).abs();
            assert!(step < last);
            last = step;
        }
    }

    #[test]
    fn rejects_n_below_floor() {
        let m = QuantumDefectModel::default();
        assert!(m.defect(9).is_err());
        assert!(m.defect(10).is_ok());
    }

    #[test]
    fn hydrogen_energies() {
        assert_relative_eq!(rydberg_energy(1.0).unwrap(), -0.5);
        assert_relative_eq!(rydberg_energy(35.0).unwrap(), -1.0 / 2450.0);
    }

    #[test]
    fn rb_35s_energy() {
        let s = RydbergState::new(35, 0, &QuantumDefectModel::default()).unwrap();
        assert!((s.energy - (-4.92315e-4)).abs() < 1e-8, "E = {}", s.energy);
        assert!(s.n_star < s.n as f64);
        assert_relative_eq!(s.energy, -0.5 / (s.n_star * s.n_star));
    }

    #[test]
    fn rejects_nonpositive_n_star() {
        assert!(rydberg_energy(0.0).is_err());
        assert!(rydberg_energy(-2.0).is_err());
    }
}
