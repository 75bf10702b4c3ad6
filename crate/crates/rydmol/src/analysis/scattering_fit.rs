//! One-parameter chi^2 fit of the zero-energy scattering length to measured
//! binding energies: dense pre-scan, golden-section refinement, and a
//! Delta-chi^2 = 1 confidence interval.

use rayon::prelude::*;
use serde::Serialize;

use crate::analysis::binding::{Assignment, BindingEnergyDatum};
use crate::error::{Error, Result};
use crate::pipeline::ModelContext;

const GOLDEN: f64 = 0.618_033_988_749_894_9;

#[derive(Debug, Clone, Serialize)]
pub struct ResidualRow {
    pub n: u32,
    pub v: &'static str,
    pub e_obs_mhz: f64,
    pub sigma_mhz: f64,
    pub e_model_mhz: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScatteringLengthFit {
    pub a_best: f64,
    /// Delta-chi^2 = 1 interval around the minimum.
    pub a_interval: (f64, f64),
    pub chi2: f64,
    pub n_data: usize,
    pub n_excluded_unassigned: usize,
    pub residuals: Vec<ResidualRow>,
    pub unimodal: bool,
    pub warnings: Vec<String>,
    pub scan_points: usize,
}

/// Model binding energy for one datum at scattering length `a`. A state the
/// model no longer binds contributes its threshold value of zero, keeping
/// chi^2 continuous as levels peel off into the continuum.
fn model_value(ctx: &ModelContext, n: u32, v: Assignment, a: f64) -> Result<f64> {
    let outer = ctx.outer_levels(n, a)?;
    Ok(match v {
        Assignment::V0 => outer.e0_mhz.unwrap_or(0.0),
        Assignment::V1 => outer
            .e1_mhz
            .or(outer.e1_fallback_mhz)
            .unwrap_or(0.0),
        Assignment::Unassigned => 0.0,
    })
}

fn chi2_at(ctx: &ModelContext, data: &[BindingEnergyDatum], a: f64) -> Result<f64> {
    let mut total = 0.0;
    for d in data {
        let m = model_value(ctx, d.n, d.v, a)?;
        let r = (m - d.e_b_mhz) / d.sigma_mhz;
        total += r * r;
    }
    Ok(total)
}

/// Fits the scattering length over `a_range`. Data rows marked unassigned are
/// kept in the record but excluded from chi^2. The input order never matters:
/// rows are canonically sorted before any arithmetic.
pub fn fit_scattering_length(
    ctx: &ModelContext,
    data: &[BindingEnergyDatum],
    a_range: (f64, f64),
    scan_step: f64,
    golden_tol: f64,
) -> Result<ScatteringLengthFit> {
    let (lo, hi) = a_range;
    if !(lo < hi && scan_step > 0.0 && golden_tol > 0.0) {
        return Err(Error::InvalidInput(format!(
            "bad scan setup: range [{lo}, {hi}], step {scan_step}, tol {golden_tol}"
        )));
    }
    let mut assigned: Vec<BindingEnergyDatum> = Vec::new();
    let mut n_excluded = 0;
    for d in data {
        d.validate()?;
        if d.v == Assignment::Unassigned {
            n_excluded += 1;
        } else {
            assigned.push(*d);
        }
    }
    if assigned.is_empty() {
        return Err(Error::InvalidInput(
            "no assigned binding-energy data to fit".to_string(),
        ));
    }
    // canonical order makes the chi^2 sums bitwise reproducible
    assigned.sort_by(|x, y| {
        (x.n, x.v.as_str(), x.e_b_mhz.to_bits(), x.sigma_mhz.to_bits()).cmp(&(
            y.n,
            y.v.as_str(),
            y.e_b_mhz.to_bits(),
            y.sigma_mhz.to_bits(),
        ))
    });

    // dense pre-scan, parallel over grid points
    let m = ((hi - lo) / scan_step).round().max(1.0) as usize;
    let step = (hi - lo) / m as f64;
    let grid: Vec<f64> = (0..=m).map(|j| lo + step * j as f64).collect();
    let chi2s: Vec<Result<f64>> = grid
        .par_iter()
        .map(|&a| chi2_at(ctx, &assigned, a))
        .collect();
    let mut scan = Vec::with_capacity(grid.len());
    for (a, c) in grid.iter().zip(chi2s) {
        scan.push((*a, c?));
    }

    // unimodality audit over the scan
    let mut warnings = Vec::new();
    let mut minima = Vec::new();
    for j in 1..scan.len() - 1 {
        if scan[j].1 < scan[j - 1].1 && scan[j].1 <= scan[j + 1].1 {
            minima.push(scan[j].0);
        }
    }
    let unimodal = minima.len() <= 1;
    if !unimodal {
        warnings.push(format!(
            "chi^2 not unimodal over the scan: local minima near a = {}",
            minima
                .iter()
                .map(|a| format!("{a:.2}"))
                .collect::<Vec<_>>()
                .join(", ")
        ));
    }

    let j_best = scan
        .iter()
        .enumerate()
        .min_by(|a, b| a.1 .1.partial_cmp(&b.1 .1).unwrap())
        .map(|(j, _)| j)
        .unwrap();
    if j_best == 0 || j_best == scan.len() - 1 {
        return Err(Error::EdgeMinimum { lo, hi });
    }

    // golden-section refinement inside the bracketing pair
    let mut a_lo = scan[j_best - 1].0;
    let mut a_hi = scan[j_best + 1].0;
    let mut x1 = a_hi - GOLDEN * (a_hi - a_lo);
    let mut x2 = a_lo + GOLDEN * (a_hi - a_lo);
    let mut f1 = chi2_at(ctx, &assigned, x1)?;
    let mut f2 = chi2_at(ctx, &assigned, x2)?;
    while a_hi - a_lo > golden_tol {
        if f1 <= f2 {
            a_hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = a_hi - GOLDEN * (a_hi - a_lo);
            f1 = chi2_at(ctx, &assigned, x1)?;
        } else {
            a_lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = a_lo + GOLDEN * (a_hi - a_lo);
            f2 = chi2_at(ctx, &assigned, x2)?;
        }
    }
    let a_best = if f1 <= f2 { x1 } else { x2 };
    let chi2_min = f1.min(f2);

    // Delta-chi^2 = 1 interval by bisection on each flank
    let target = chi2_min + 1.0;
    let solve_flank = |mut inner: f64, mut outer: f64| -> Result<f64> {
        let f_outer = chi2_at(ctx, &assigned, outer)?;
        if f_outer < target {
            return Ok(outer);
        }
        for _ in 0..60 {
            let mid = 0.5 * (inner + outer);
            if chi2_at(ctx, &assigned, mid)? < target {
                inner = mid;
            } else {
                outer = mid;
            }
        }
        Ok(0.5 * (inner + outer))
    };
    let int_lo = solve_flank(a_best, lo)?;
    let int_hi = solve_flank(a_best, hi)?;
    if int_lo <= lo || int_hi >= hi {
        warnings.push("Delta-chi^2 = 1 interval clipped by the scan range".to_string());
    }

    let mut residuals = Vec::with_capacity(assigned.len());
    for d in &assigned {
        let m = model_value(ctx, d.n, d.v, a_best)?;
        residuals.push(ResidualRow {
            n: d.n,
            v: d.v.as_str(),
            e_obs_mhz: d.e_b_mhz,
            sigma_mhz: d.sigma_mhz,
            e_model_mhz: m,
            residual: (m - d.e_b_mhz) / d.sigma_mhz,
        });
        if m == 0.0 {
            warnings.push(format!(
                "model binds no v={} level at n={} for a = {a_best:.3}",
                d.v.as_str(),
                d.n
            ));
        }
    }

    Ok(ScatteringLengthFit {
        a_best,
        a_interval: (int_lo.min(a_best), int_hi.max(a_best)),
        chi2: chi2_min,
        n_data: assigned.len(),
        n_excluded_unassigned: n_excluded,
        residuals,
        unimodal,
        warnings,
        scan_points: scan.len(),
    })
}
