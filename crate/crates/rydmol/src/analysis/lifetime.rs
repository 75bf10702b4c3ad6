//! Poisson-weighted exponential decay fits for lifetime measurements.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fitting::{levenberg_marquardt, LmOptions};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayPoint {
    pub delay_us: f64,
    pub counts: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LifetimeFit {
    pub tau_us: f64,
    pub tau_sigma_us: f64,
    pub amplitude: f64,
    pub amplitude_sigma: f64,
    pub baseline: f64,
    pub baseline_sigma: f64,
    pub chi2: f64,
}

/// Fits A exp(-t/tau) + b with sigma_i = sqrt(max(counts_i, 1)).
pub fn fit_lifetime(points: &[DecayPoint]) -> Result<LifetimeFit> {
    if points.len() < 5 {
        return Err(Error::InvalidInput(format!(
            "lifetime fit needs >= 5 delay points, got {}",
            points.len()
        )));
    }
    for p in points {
        if !(p.delay_us.is_finite() && p.counts.is_finite() && p.counts >= 0.0) {
            return Err(Error::InvalidInput(format!(
                "bad decay point (t = {}, counts = {})",
                p.delay_us, p.counts
            )));
        }
    }
    let mut sorted = points.to_vec();
    sorted.sort_by(|a, b| a.delay_us.partial_cmp(&b.delay_us).unwrap());
    let t: Vec<f64> = sorted.iter().map(|p| p.delay_us).collect();
    let y: Vec<f64> = sorted.iter().map(|p| p.counts).collect();
    let sigma: Vec<f64> = y.iter().map(|&c| c.max(1.0).sqrt()).collect();
    let span = t.last().unwrap() - t[0];
    if span <= 0.0 {
        return Err(Error::InvalidInput(
            "all delays identical; nothing to fit".to_string(),
        ));
    }

    // crude slope screen before any nonlinear work
    let n = t.len() as f64;
    let tbar = t.iter().sum::<f64>() / n;
    let ybar = y.iter().sum::<f64>() / n;
    let slope_num: f64 = t.iter().zip(&y).map(|(ti, yi)| (ti - tbar) * (yi - ybar)).sum();
    if slope_num >= 0.0 {
        return Err(Error::NonDecaying(format!(
            "counts do not decrease with delay (slope covariance {slope_num:.3e})"
        )));
    }

    let baseline0 = y.iter().cloned().fold(f64::INFINITY, f64::min);
    let amp0 = (y[0] - baseline0).max(1.0);
    let tau0 = {
        let yl = (y[0] - baseline0 + 1.0).max(1.0);
        let yr = (y[y.len() - 1] - baseline0 + 1.0).max(1.0);
        let ratio = (yl / yr).ln();
        if ratio > 0.1 {
            span / ratio
        } else {
            span / 2.0
        }
    };

    let model = |ti: f64, th: &[f64]| {
        let (a, tau, b) = (th[0], th[1], th[2]);
        let e = (-ti / tau).exp();
        (a * e + b, vec![e, a * e * ti / (tau * tau), 1.0])
    };
    let out = levenberg_marquardt(
        &model,
        &t,
        &y,
        Some(&sigma),
        vec![amp0, tau0, baseline0],
        &LmOptions::default(),
    )?;
    let (amplitude, tau, baseline) = (out.params[0], out.params[1], out.params[2]);
    if !(tau.is_finite() && tau > 0.0) || amplitude <= 0.0 {
        return Err(Error::NonDecaying(format!(
            "fit ran to a non-decaying solution (tau = {tau:.3}, A = {amplitude:.3})"
        )));
    }
    if tau > 50.0 * span {
        return Err(Error::NonDecaying(format!(
            "tau = {tau:.1} us pinned at the bound (delay span {span:.1} us)"
        )));
    }
    Ok(LifetimeFit {
        tau_us: tau,
        tau_sigma_us: out.covariance[1][1].sqrt(),
        amplitude,
        amplitude_sigma: out.covariance[0][0].sqrt(),
        baseline,
        baseline_sigma: out.covariance[2][2].sqrt(),
        chi2: out.chi2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_distr::{Distribution, Poisson};

    fn decay(tau: f64, amp: f64, baseline: f64, n: usize, dt: f64) -> Vec<DecayPoint> {
        (0..n)
            .map(|i| {
                let t = i as f64 * dt;
                DecayPoint {
                    delay_us: t,
                    counts: amp * (-t / tau).exp() + baseline,
                }
            })
            .collect()
    }

    #[test]
    fn noiseless_tau_recovered() {
        let fit = fit_lifetime(&decay(65.0, 400.0, 3.0, 25, 10.0)).unwrap();
        assert!((fit.tau_us - 65.0).abs() < 1e-6, "tau = {}", fit.tau_us);
        assert!((fit.amplitude - 400.0).abs() < 1e-4);
        assert!((fit.baseline - 3.0).abs() < 1e-5);
    }

    #[test]
    fn poisson_noise_within_stated_uncertainty() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let mut hits = 0;
        let trials = 60;
        for _ in 0..trials {
            let pts: Vec<DecayPoint> = decay(15.0, 900.0, 2.0, 20, 3.0)
                .into_iter()
                .map(|p| {
                    let lam = p.counts.max(0.05);
                    let draw: f64 = Poisson::new(lam).unwrap().sample(&mut rng);
                    DecayPoint {
                        delay_us: p.delay_us,
                        counts: draw,
                    }
                })
                .collect();
            let fit = fit_lifetime(&pts).unwrap();
            if (fit.tau_us - 15.0).abs() <= 2.0 * fit.tau_sigma_us {
                hits += 1;
            }
        }
        // 2-sigma coverage should hold for ~95%; demand a loose 80%
        assert!(hits >= trials * 8 / 10, "coverage {hits}/{trials}");
    }

    #[test]
    fn non_decaying_rejected() {
        let rising: Vec<DecayPoint> = (0..10)
            .map(|i| DecayPoint {
                delay_us: i as f64,
                counts: 10.0 + 3.0 * i as f64,
            })
            .collect();
        assert!(matches!(
            fit_lifetime(&rising),
            Err(Error::NonDecaying(_))
        ));
    }

    #[test]
    fn too_few_points_rejected() {
        assert!(fit_lifetime(&decay(15.0, 100.0, 0.0, 4, 5.0)).is_err());
    }
}
