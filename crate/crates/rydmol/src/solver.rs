//! Vibrational bound states of a tabulated potential curve.
//!
//! The nuclear radial equation -(1/2 mu) chi'' + V chi = E chi is solved on
//! the same sqrt mesh the potential lives on. With x = sqrt(r) and
//! chi = sqrt(x) phi the equation becomes
//!
//! ```text
//! phi''(x) = [ 8 mu x^2 (V - E) + 3/4 x^-2 ] phi(x)
//! ```
//!
//! whose three-point finite-difference form is the generalized eigenproblem
//! A phi = E B phi with B = diag(8 mu x^2). Scaling by B^{-1/2} turns it into
//! a standard symmetric tridiagonal problem, handled by bisection plus
//! inverse iteration restricted to the requested energy window. A Numerov
//! shooting solver ([`crate::shooting`]) provides the independent
//! cross-check.

use serde::{Deserialize, Serialize};

use crate::constants::PhysicalConstants;
use crate::eigen::SymTridiag;
use crate::error::{Error, Result};
use crate::grid::RadialGrid;
use crate::potential::{PotentialCurve, Well};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    /// Energy window in hartree; None spans [just below min V, -0.02 MHz].
    pub e_window_au: Option<(f64, f64)>,
    pub max_levels: usize,
    /// Bisection tolerance on eigenvalues, hartree.
    pub eig_tol_au: f64,
    /// Lobes shallower than this fraction of the global depth are ignored.
    pub well_depth_fraction: f64,
    /// Probability fraction inside a well required to assign a level to it.
    pub localization: f64,
    /// Lobes counted from the outside in when testing v = 1 localization.
    /// The first excited state of the outer-well complex tunnels across the
    /// near-degenerate neighboring lobes, so a single-lobe test would reject
    /// it even though it belongs to the outermost wells.
    pub outer_region_lobes: usize,
    /// Re-solve on the half-density grid and fail if levels drift.
    pub check_grid: bool,
    pub grid_tol_mhz: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            e_window_au: None,
            max_levels: 64,
            // about 1e-4 MHz
            eig_tol_au: 1.5e-14,
            well_depth_fraction: 0.005,
            localization: 0.9,
            outer_region_lobes: 3,
            check_grid: false,
            grid_tol_mhz: 0.05,
        }
    }
}

/// One bound level. Energies are measured from the dissociation threshold
/// V(infinity) = 0, so bound means negative.
#[derive(Debug, Clone, Serialize)]
pub struct VibrationalLevel {
    /// Label within the selected well (index in the full solve before
    /// [`select_outer_well_levels`] relabels).
    pub v: usize,
    pub energy_au: f64,
    pub energy_mhz: f64,
    /// Nuclear wavefunction on the potential grid, normalized to
    /// integral chi^2 dr = 1.
    #[serde(skip)]
    pub chi: Vec<f64>,
    /// <R> in bohr.
    pub r_expect: f64,
    /// Central interval holding 90% of |chi|^2.
    pub well_span: (f64, f64),
    pub b_rot_mhz: f64,
    /// Nodes of chi inside well_span.
    pub n_nodes: usize,
}

/// Rotational constant 1/(2 mu <R>^2) expressed in MHz.
pub fn rotational_constant(r_expect: f64, mu: f64, constants: &PhysicalConstants) -> Result<f64> {
    if !(r_expect.is_finite() && r_expect > 0.0) {
        return Err(Error::InvalidInput(format!(
            "<R> must be positive, got {r_expect}"
        )));
    }
    Ok(constants.energy_au_to_mhz(1.0 / (2.0 * mu * r_expect * r_expect)))
}

/// All bound levels of `potential` inside the energy window, ascending.
/// A potential with no negative region yields an empty list.
pub fn solve_bound_states(
    potential: &PotentialCurve,
    mu: f64,
    opts: &SolverOptions,
    constants: &PhysicalConstants,
) -> Result<Vec<VibrationalLevel>> {
    if !(mu.is_finite() && mu > 0.0) {
        return Err(Error::InvalidInput(format!(
            "reduced mass must be positive, got {mu}"
        )));
    }
    let levels = solve_once(potential, mu, opts, constants)?;
    if opts.check_grid {
        let coarse = solve_once(&potential.decimated(), mu, opts, constants)?;
        let mut drift: f64 = 0.0;
        for lv in &levels {
            if let Some(near) = coarse
                .iter()
                .map(|c| (c.energy_mhz - lv.energy_mhz).abs())
                .min_by(|a, b| a.partial_cmp(b).unwrap())
            {
                drift = drift.max(near);
            }
        }
        if drift > opts.grid_tol_mhz {
            return Err(Error::GridTooCoarse {
                drift_mhz: drift,
                tol_mhz: opts.grid_tol_mhz,
            });
        }
    }
    Ok(levels)
}

fn solve_once(
    potential: &PotentialCurve,
    mu: f64,
    opts: &SolverOptions,
    constants: &PhysicalConstants,
) -> Result<Vec<VibrationalLevel>> {
    let grid = potential.grid();
    let v = potential.values();
    let n = grid.len();
    if n < 16 {
        return Err(Error::InvalidInput(
            "potential grid too short for a bound-state solve".to_string(),
        ));
    }
    let (_, vmin) = potential.global_min();
    if vmin >= 0.0 {
        return Ok(Vec::new());
    }
    let (e_lo, e_hi) = match opts.e_window_au {
        Some((lo, hi)) => {
            if !(lo < hi && hi < 0.0) {
                return Err(Error::InvalidInput(format!(
                    "energy window [{lo}, {hi}] must satisfy lo < hi < 0"
                )));
            }
            (lo, hi)
        }
        None => (vmin * 1.0001, constants.energy_mhz_to_au(-0.02)),
    };

    let h = grid.step();
    // Interior points carry Dirichlet zeros at both ends.
    let m = n - 2;
    let mut diag = Vec::with_capacity(m);
    #[allow(clippy::needless_range_loop)]
    for i in 1..n - 1 {
        let x = grid.x(i);
        let b = 8.0 * mu * x * x;
        diag.push(v[i] + (2.0 / (h * h) + 0.75 / (x * x)) / b);
    }
    let mut off = Vec::with_capacity(m - 1);
    for i in 1..n - 2 {
        let (xi, xj) = (grid.x(i), grid.x(i + 1));
        off.push(-1.0 / (h * h * 8.0 * mu * xi * xj));
    }
    let tri = SymTridiag::new(diag, off);

    let eigenvalues = tri.eigenvalues_in(e_lo, e_hi, opts.eig_tol_au, opts.max_levels);
    let cluster_tol = 50.0 * opts.eig_tol_au;

    let mut levels: Vec<VibrationalLevel> = Vec::with_capacity(eigenvalues.len());
    let mut vectors: Vec<Vec<f64>> = Vec::with_capacity(eigenvalues.len());
    for (idx, &lambda) in eigenvalues.iter().enumerate() {
        let cluster: Vec<Vec<f64>> = eigenvalues[..idx]
            .iter()
            .zip(&vectors)
            .filter(|(l2, _)| (lambda - **l2).abs() < cluster_tol)
            .map(|(_, w)| w.clone())
            .collect();
        let (psi, rayleigh) = tri.eigenvector(lambda, &cluster);
        vectors.push(psi.clone());

        // chi_i = psi_i / sqrt(8 mu x_i), then renormalized over dr.
        let mut chi = vec![0.0; n];
        for (j, &p) in psi.iter().enumerate() {
            let x = grid.x(j + 1);
            chi[j + 1] = p / (8.0 * mu * x).sqrt();
        }
        let chi2: Vec<f64> = chi.iter().map(|c| c * c).collect();
        let norm2 = grid.integrate_dr(&chi2);
        let scale = 1.0 / norm2.sqrt();
        for c in chi.iter_mut() {
            *c *= scale;
        }
        // deterministic sign: positive at the largest amplitude
        let i_max = chi
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.abs().partial_cmp(&b.1.abs()).unwrap())
            .map(|(i, _)| i)
            .unwrap();
        if chi[i_max] < 0.0 {
            for c in chi.iter_mut() {
                *c = -*c;
            }
        }

        let chi2: Vec<f64> = chi.iter().map(|c| c * c).collect();
        let r_expect = {
            let f: Vec<f64> = (0..n).map(|i| chi2[i] * grid.r(i)).collect();
            grid.integrate_dr(&f)
        };
        let well_span = central_interval(grid, &chi2, 0.90);
        let n_nodes = nodes_in_span(grid, &chi, well_span);

        levels.push(VibrationalLevel {
            v: idx,
            energy_au: rayleigh,
            energy_mhz: constants.energy_au_to_mhz(rayleigh),
            chi,
            r_expect,
            well_span,
            b_rot_mhz: rotational_constant(r_expect, mu, constants)?,
            n_nodes,
        });
    }
    Ok(levels)
}

/// Central probability interval: [cdf = (1-frac)/2, cdf = (1+frac)/2].
fn central_interval(grid: &RadialGrid, chi2: &[f64], frac: f64) -> (f64, f64) {
    let n = grid.len();
    let mut cdf = vec![0.0; n];
    for i in 1..n {
        // trapezoid in r
        let dr = grid.r(i) - grid.r(i - 1);
        cdf[i] = cdf[i - 1] + 0.5 * (chi2[i] + chi2[i - 1]) * dr;
    }
    let total = cdf[n - 1];
    let lo_target = total * (1.0 - frac) / 2.0;
    let hi_target = total * (1.0 + frac) / 2.0;
    let locate = |target: f64| -> f64 {
        match cdf.binary_search_by(|c| c.partial_cmp(&target).unwrap()) {
            Ok(i) => grid.r(i),
            Err(i) => {
                if i == 0 {
                    grid.r(0)
                } else if i >= n {
                    grid.r(n - 1)
                } else {
                    let t = (target - cdf[i - 1]) / (cdf[i] - cdf[i - 1]).max(1e-300);
                    grid.r(i - 1) + t * (grid.r(i) - grid.r(i - 1))
                }
            }
        }
    };
    (locate(lo_target), locate(hi_target))
}

fn nodes_in_span(grid: &RadialGrid, chi: &[f64], span: (f64, f64)) -> usize {
    let floor = 1e-8
        * chi
            .iter()
            .fold(0.0f64, |m, c| m.max(c.abs()));
    let mut nodes = 0;
    let mut prev = 0.0f64;
    for (i, &c) in chi.iter().enumerate() {
        let r = grid.r(i);
        if r < span.0 || r > span.1 || c.abs() < floor {
            continue;
        }
        if prev != 0.0 && prev * c < 0.0 {
            nodes += 1;
        }
        prev = c;
    }
    nodes
}

/// Probability fraction of a level inside [r_lo, r_hi].
pub fn fraction_in_range(level: &VibrationalLevel, grid: &RadialGrid, r_lo: f64, r_hi: f64) -> f64 {
    let n = grid.len();
    let mut inside = 0.0;
    let mut total = 0.0;
    for i in 1..n {
        let dr = grid.r(i) - grid.r(i - 1);
        let seg = 0.5 * (level.chi[i] * level.chi[i] + level.chi[i - 1] * level.chi[i - 1]) * dr;
        total += seg;
        let rm = 0.5 * (grid.r(i) + grid.r(i - 1));
        if rm >= r_lo && rm <= r_hi {
            inside += seg;
        }
    }
    inside / total.max(1e-300)
}

/// Probability fraction of a level inside a well's radial range.
pub fn fraction_in_well(level: &VibrationalLevel, grid: &RadialGrid, well: &Well) -> f64 {
    fraction_in_range(level, grid, well.r_lo, well.r_hi)
}

/// Levels of the outermost well, relabeled v = 0, 1 by energy order.
#[derive(Debug, Clone, Serialize)]
pub struct OuterWellSelection {
    pub well: Option<Well>,
    pub v0: Option<VibrationalLevel>,
    pub v1: Option<VibrationalLevel>,
    /// Why a slot is empty, when it is.
    pub diagnostics: Vec<String>,
}

/// v = 0 must put `localization` of its probability inside the outermost
/// lobe itself. v = 1 is tested against the outermost few lobes (see
/// [`SolverOptions::outer_region_lobes`]): its wavefunction straddles the
/// barrier nodes between the near-degenerate outer wells while staying far
/// outside the inner-well ladder.
pub fn select_outer_well_levels(
    levels: &[VibrationalLevel],
    potential: &PotentialCurve,
    opts: &SolverOptions,
) -> OuterWellSelection {
    let mut diagnostics = Vec::new();
    let wells = potential.wells(opts.well_depth_fraction);
    let Some(well) = wells.last().copied() else {
        diagnostics.push("potential has no negative lobe deeper than threshold".to_string());
        return OuterWellSelection {
            well: None,
            v0: None,
            v1: None,
            diagnostics,
        };
    };
    let grid = potential.grid();
    let mut v0: Option<VibrationalLevel> = None;
    for lv in levels {
        if fraction_in_well(lv, grid, &well) >= opts.localization {
            let mut lv = lv.clone();
            lv.v = 0;
            v0 = Some(lv);
            break;
        }
    }
    if v0.is_none() {
        let best = levels
            .iter()
            .map(|lv| fraction_in_well(lv, grid, &well))
            .fold(0.0f64, f64::max);
        diagnostics.push(format!(
            "no level reaches localization {} in the outer well [{:.1}, {:.1}] bohr \
             (best fraction {:.3}, {} levels in window)",
            opts.localization,
            well.r_lo,
            well.r_hi,
            best,
            levels.len()
        ));
    }

    let region_start = wells.len().saturating_sub(opts.outer_region_lobes.max(1));
    let region_lo = wells[region_start].r_lo;
    let region_hi = grid.r_last();
    let mut v1: Option<VibrationalLevel> = None;
    if let Some(ref ground) = v0 {
        for lv in levels {
            if lv.energy_au <= ground.energy_au {
                continue;
            }
            if fraction_in_range(lv, grid, region_lo, region_hi) >= opts.localization {
                let mut lv = lv.clone();
                lv.v = 1;
                v1 = Some(lv);
                break;
            }
        }
        if v1.is_none() {
            diagnostics.push(format!(
                "no excited level reaches localization {} in the outer region r >= {:.1} bohr",
                opts.localization, region_lo
            ));
        }
    }
    OuterWellSelection {
        well: Some(well),
        v0,
        v1,
        diagnostics,
    }
}

/// Per-level lines of the structured text report.
pub fn level_report_rows(levels: &[VibrationalLevel]) -> Vec<String> {
    levels
        .iter()
        .map(|lv| {
            format!(
                "{}\t{}\t{}\t{}\t{}\t{}\t{}",
                lv.v,
                crate::textfmt::sci9(lv.energy_mhz),
                crate::textfmt::sci9(lv.r_expect),
                crate::textfmt::sci9(lv.b_rot_mhz * 1e3),
                lv.n_nodes,
                crate::textfmt::sci9(lv.well_span.0),
                crate::textfmt::sci9(lv.well_span.1),
            )
        })
        .collect()
}
