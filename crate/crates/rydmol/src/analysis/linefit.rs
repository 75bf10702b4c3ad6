//! Spectral line fitting: Gaussian or Lorentzian plus a constant baseline.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fitting::{levenberg_marquardt, LmOptions};
use crate::spectra::Spectrum;

const FWHM_PER_SIGMA: f64 = 2.354_820_045_030_949_3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum LineShape {
    #[default]
    Gaussian,
    Lorentzian,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LineFit {
    pub shape: LineShape,
    pub center: f64,
    pub center_sigma: f64,
    pub fwhm: f64,
    pub fwhm_sigma: f64,
    pub amplitude: f64,
    pub amplitude_sigma: f64,
    pub baseline: f64,
    pub baseline_sigma: f64,
    pub chi2: f64,
    pub iterations: usize,
}

/// Fits one line inside `window`. The window must hold at least 8 samples
/// and an interior maximum.
pub fn fit_line(spectrum: &Spectrum, window: (f64, f64), shape: LineShape) -> Result<LineFit> {
    spectrum.validate()?;
    let (lo, hi) = window;
    if lo >= hi {
        return Err(Error::InvalidInput(format!(
            "degenerate fit window [{lo}, {hi}]"
        )));
    }
    let mut x = Vec::new();
    let mut y = Vec::new();
    for (d, s) in spectrum.detuning_mhz.iter().zip(&spectrum.signal) {
        if (lo..=hi).contains(d) {
            x.push(*d);
            y.push(*s);
        }
    }
    if x.len() < 8 {
        return Err(Error::InvalidInput(format!(
            "window [{lo}, {hi}] holds {} points; need >= 8",
            x.len()
        )));
    }
    let (mut i_max, mut y_max, mut y_min) = (0usize, f64::NEG_INFINITY, f64::INFINITY);
    for (i, &v) in y.iter().enumerate() {
        if v > y_max {
            y_max = v;
            i_max = i;
        }
        y_min = y_min.min(v);
    }
    let amp0 = y_max - y_min;
    if amp0 <= 0.0 || i_max == 0 || i_max == y.len() - 1 {
        return Err(Error::NoPeak { lo, hi });
    }

    // width from the half-maximum crossings around the peak
    let half = y_min + amp0 / 2.0;
    let mut w_lo = x[0];
    for i in (0..i_max).rev() {
        if y[i] <= half {
            w_lo = x[i];
            break;
        }
    }
    let mut w_hi = *x.last().unwrap();
    for i in i_max..y.len() {
        if y[i] <= half {
            w_hi = x[i];
            break;
        }
    }
    let fwhm0 = (w_hi - w_lo).max((hi - lo) / 20.0);

    let theta0 = match shape {
        LineShape::Gaussian => vec![amp0, x[i_max], fwhm0 / FWHM_PER_SIGMA, y_min],
        LineShape::Lorentzian => vec![amp0, x[i_max], fwhm0 / 2.0, y_min],
    };
    type Model = Box<dyn Fn(f64, &[f64]) -> (f64, Vec<f64>)>;
    let model: Model = match shape {
        LineShape::Gaussian => Box::new(|t: f64, th: &[f64]| {
            let (a, c, s, b) = (th[0], th[1], th[2], th[3]);
            let z = (t - c) / s;
            let e = (-0.5 * z * z).exp();
            (
                a * e + b,
                vec![e, a * e * z / s, a * e * z * z / s, 1.0],
            )
        }),
        LineShape::Lorentzian => Box::new(|t: f64, th: &[f64]| {
            let (a, c, g, b) = (th[0], th[1], th[2], th[3]);
            let d = (t - c) * (t - c) + g * g;
            let f = a * g * g / d;
            (
                f + b,
                vec![
                    g * g / d,
                    2.0 * a * g * g * (t - c) / (d * d),
                    2.0 * a * g * (t - c) * (t - c) / (d * d),
                    1.0,
                ],
            )
        }),
    };

    let out = levenberg_marquardt(&model, &x, &y, None, theta0, &LmOptions::default())?;
    let (amp, center, width_param, baseline) = (
        out.params[0],
        out.params[1],
        out.params[2].abs(),
        out.params[3],
    );
    if !(lo..=hi).contains(&center) {
        return Err(Error::NonConvergence {
            iterations: out.iterations,
            trace: format!("fitted center {center:.3} escaped the window [{lo}, {hi}]"),
        });
    }
    let (fwhm, fwhm_sigma) = match shape {
        LineShape::Gaussian => (
            FWHM_PER_SIGMA * width_param,
            FWHM_PER_SIGMA * out.covariance[2][2].sqrt(),
        ),
        LineShape::Lorentzian => (2.0 * width_param, 2.0 * out.covariance[2][2].sqrt()),
    };
    Ok(LineFit {
        shape,
        center,
        center_sigma: out.covariance[1][1].sqrt(),
        fwhm,
        fwhm_sigma,
        amplitude: amp,
        amplitude_sigma: out.covariance[0][0].sqrt(),
        baseline,
        baseline_sigma: out.covariance[3][3].sqrt(),
        chi2: out.chi2,
        iterations: out.iterations,
    })
}
