//! Quadratic Stark fit: weighted linear least squares of line center against
//! field squared, center(F) = c0 - (alpha/2) F^2.

use serde::{Deserialize, Serialize};

use crate::constants::PhysicalConstants;
use crate::error::{Error, Result};
use crate::fitting::invert_dense;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StarkPoint {
    pub field_v_per_cm: f64,
    pub center_mhz: f64,
    /// Per-point 1-sigma on the center; None means unit weights with the
    /// covariance rescaled by the reduced chi^2.
    pub sigma_mhz: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolarizabilityFit {
    /// Polarisability in a.u.
    pub alpha_au: f64,
    pub alpha_sigma_au: f64,
    /// Extrapolated zero-field line center, MHz.
    pub zero_field_center_mhz: f64,
    pub zero_field_center_sigma_mhz: f64,
    pub chi2: f64,
    pub n_data: usize,
}

/// Fits a quadratic Stark shift. Needs at least 4 points and more than one
/// distinct field value.
pub fn fit_stark(series: &[StarkPoint], constants: &PhysicalConstants) -> Result<PolarizabilityFit> {
    if series.len() < 4 {
        return Err(Error::InvalidInput(format!(
            "Stark fit needs >= 4 points, got {}",
            series.len()
        )));
    }
    let first = series[0].field_v_per_cm;
    if series.iter().all(|p| p.field_v_per_cm == first) {
        return Err(Error::InvalidInput(
            "all field values identical; cannot fit a quadratic shift".to_string(),
        ));
    }
    for p in series {
        if !(p.field_v_per_cm.is_finite() && p.center_mhz.is_finite()) {
            return Err(Error::InvalidInput("non-finite Stark point".to_string()));
        }
        if let Some(s) = p.sigma_mhz {
            if !(s.is_finite() && s > 0.0) {
                return Err(Error::InvalidInput(format!("bad sigma {s} MHz")));
            }
        }
    }
    let weighted = series.iter().any(|p| p.sigma_mhz.is_some());

    // y = c0 + s * F^2 via 2x2 normal equations
    let mut s00 = 0.0;
    let mut s01 = 0.0;
    let mut s11 = 0.0;
    let mut b0 = 0.0;
    let mut b1 = 0.0;
    for p in series {
        let w = p.sigma_mhz.map_or(1.0, |s| 1.0 / (s * s));
        let f2 = p.field_v_per_cm * p.field_v_per_cm;
        s00 += w;
        s01 += w * f2;
        s11 += w * f2 * f2;
        b0 += w * p.center_mhz;
        b1 += w * f2 * p.center_mhz;
    }
    let det = s00 * s11 - s01 * s01;
    if det.abs() < 1e-300 {
        return Err(Error::InvalidInput(
            "degenerate field design matrix".to_string(),
        ));
    }
    let c0 = (s11 * b0 - s01 * b1) / det;
    let slope = (s00 * b1 - s01 * b0) / det;

    let chi2: f64 = series
        .iter()
        .map(|p| {
            let w = p.sigma_mhz.map_or(1.0, |s| 1.0 / (s * s));
            let f2 = p.field_v_per_cm * p.field_v_per_cm;
            w * (p.center_mhz - c0 - slope * f2).powi(2)
        })
        .sum();

    let mut cov = invert_dense(vec![vec![s00, s01], vec![s01, s11]])
        .ok_or_else(|| Error::InvalidInput("singular normal matrix".to_string()))?;
    if !weighted {
        let s2 = chi2 / (series.len() - 2) as f64;
        for row in cov.iter_mut() {
            for v in row.iter_mut() {
                *v *= s2;
            }
        }
    }

    let alpha_au = constants.stark_slope_mhz_to_alpha_au(slope);
    let alpha_sigma_au = constants
        .stark_slope_mhz_to_alpha_au(cov[1][1].sqrt())
        .abs();
    Ok(PolarizabilityFit {
        alpha_au,
        alpha_sigma_au,
        zero_field_center_mhz: c0,
        zero_field_center_sigma_mhz: cov[0][0].sqrt(),
        chi2,
        n_data: series.len(),
    })
}
