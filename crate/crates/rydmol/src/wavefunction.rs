//! Radial Rydberg wavefunctions by inward Numerov integration.
//!
//! The reduced radial function u(r) = r R(r) is integrated inward over the
//! bare Coulomb potential -1/r at the quantum-defect energy -1/(2 n*^2), on
//! the square-root mesh of [`crate::grid`]. Substituting x = sqrt(r) and
//! w(x) = u(r) / sqrt(x) turns the radial equation into
//!
//! ```text
//! w''(x) = [ 8 x^2 (V(x^2) - E) + (2l + 1/2)(2l + 3/2) / x^2 ] w(x)
//! ```
//!
//! which Numerov handles directly on the uniform x mesh.
//!
//! For non-integer n* the solution regular at infinity picks up an irregular
//! component near the core. Integration therefore stops where the amplitude
//! starts to run away inward; the function is zeroed below that point and the
//! truncation radius recorded. Everything this crate consumes lives at
//! r >> 100 bohr, far outside the truncated region.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::constants::PhysicalConstants;
use crate::defect::{QuantumDefectModel, RydbergState};
use crate::error::{Error, Result};
use crate::grid::{simpson_uniform, CubicSpline, GridSpec, RadialGrid};
use crate::numerov;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WavefunctionConfig {
    /// Step of the sqrt-scaled mesh. The Coulomb oscillation wavelength in x
    /// is close to 2 pi / sqrt(8) everywhere, so 0.01 gives a few hundred
    /// points per wavelength.
    pub x_step: f64,
    /// Inner mesh radius in bohr.
    pub r_min: f64,
    /// Outer mesh radius in bohr; None picks 2 n (n + 15).
    pub r_out: Option<f64>,
    /// Inward amplitude growth, relative to the oscillatory region, treated
    /// as the start of the irregular divergence.
    pub divergence_factor: f64,
}

impl Default for WavefunctionConfig {
    fn default() -> Self {
        Self {
            x_step: 0.01,
            r_min: 2.0,
            r_out: None,
            divergence_factor: 10.0,
        }
    }
}

pub fn default_r_out(n: u32) -> f64 {
    2.0 * n as f64 * (n as f64 + 15.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WavefunctionMeta {
    pub n: u32,
    pub l: u32,
    pub n_star: f64,
    /// State energy in hartree.
    pub energy: f64,
    pub defect_source: String,
    pub mesh_id: String,
    /// Radius below which the function was zeroed, if any.
    pub truncation_radius: Option<f64>,
}

/// Normalized reduced radial function on the sqrt mesh.
#[derive(Debug, Clone)]
pub struct RadialWavefunction {
    grid: RadialGrid,
    u: Vec<f64>,
    n_nodes: usize,
    norm: f64,
    spline: CubicSpline,
    meta: WavefunctionMeta,
}

impl RadialWavefunction {
    pub fn grid(&self) -> &RadialGrid {
        &self.grid
    }

    pub fn u_values(&self) -> &[f64] {
        &self.u
    }

    pub fn n_nodes(&self) -> usize {
        self.n_nodes
    }

    /// Verification integral of u^2 dr computed after normalization.
    pub fn norm(&self) -> f64 {
        self.norm
    }

    pub fn meta(&self) -> &WavefunctionMeta {
        &self.meta
    }

    /// u(r) by cubic interpolation on the stored mesh.
    pub fn u_at(&self, r: f64) -> Result<f64> {
        if r < 0.0 {
            return Err(Error::InvalidInput(format!("negative radius {r}")));
        }
        self.spline.eval(r.sqrt()).ok_or_else(|| {
            Error::InvalidInput(format!(
                "r = {r} outside wavefunction grid [{}, {}]",
                self.grid.r_first(),
                self.grid.r_last()
            ))
        })
    }

    /// |Psi(R)|^2 = (u/R)^2 / (4 pi) for an l = 0 state.
    pub fn probability_density_s(&self, r: f64) -> Result<f64> {
        let u = self.u_at(r)?;
        Ok((u / r).powi(2) / (4.0 * std::f64::consts::PI))
    }

    /// Position of the outermost local maximum of u^2, refined parabolically.
    pub fn outermost_antinode_r(&self) -> f64 {
        let n = self.u.len();
        let mut best = self.grid.r(n - 1);
        for i in (1..n - 1).rev() {
            let (a, b, c) = (
                self.u[i - 1] * self.u[i - 1],
                self.u[i] * self.u[i],
                self.u[i + 1] * self.u[i + 1],
            );
            if b > a && b >= c && b > 0.0 {
                best = parabolic_vertex(
                    self.grid.r(i - 1),
                    a,
                    self.grid.r(i),
                    b,
                    self.grid.r(i + 1),
                    c,
                );
                break;
            }
        }
        best
    }

    /// Two-column (r, u) table, or three columns with |Psi|^2 appended.
    pub fn write_table(&self, out: &mut impl Write, with_density: bool) -> Result<()> {
        if with_density {
            writeln!(out, "r_bohr,u,psi_sq_per_bohr3")?;
        } else {
            writeln!(out, "r_bohr,u")?;
        }
        for (i, &u) in self.u.iter().enumerate() {
            let r = self.grid.r(i);
            if with_density {
                let d = (u / r).powi(2) / (4.0 * std::f64::consts::PI);
                writeln!(
                    out,
                    "{},{},{}",
                    crate::textfmt::sci9(r),
                    crate::textfmt::sci9(u),
                    crate::textfmt::sci9(d)
                )?;
            } else {
                writeln!(out, "{},{}", crate::textfmt::sci9(r), crate::textfmt::sci9(u))?;
            }
        }
        Ok(())
    }
}

fn parabolic_vertex(x1: f64, y1: f64, x2: f64, y2: f64, x3: f64, y3: f64) -> f64 {
    let d21 = x2 - x1;
    let d23 = x2 - x3;
    let num = d21 * d21 * (y2 - y3) - d23 * d23 * (y2 - y1);
    let den = d21 * (y2 - y3) - d23 * (y2 - y1);
    if den.abs() < 1e-300 {
        x2
    } else {
        x2 - 0.5 * num / den
    }
}

/// Computes the normalized u(r) for an nS state by inward Numerov integration.
pub fn compute_wavefunction(
    n: u32,
    l: u32,
    model: &QuantumDefectModel,
    cfg: &WavefunctionConfig,
) -> Result<RadialWavefunction> {
    let state = RydbergState::new(n, l, model)?;
    let n_star = state.n_star;
    let energy = state.energy;

    let r_out = cfg.r_out.unwrap_or_else(|| default_r_out(n));
    let r_needed = 2.0 * n_star * n_star + 10.0 * n_star;
    if r_out < r_needed {
        return Err(Error::InvalidInput(format!(
            "outer radius {r_out} bohr too small for n* = {n_star:.3}; need >= {r_needed:.0}"
        )));
    }
    let grid = RadialGrid::from_spec(&GridSpec {
        r_min: cfg.r_min,
        r_max: r_out,
        x_step: cfg.x_step,
    })?;

    let npts = grid.len();
    // w'' = g w on the x mesh; the 3/4 x^-2 term comes from the substitution.
    let g: Vec<f64> = (0..npts)
        .map(|i| {
            let x = grid.x(i);
            let r = grid.r(i);
            8.0 * x * x * (-1.0 / r - energy) + 0.75 / (x * x)
        })
        .collect();

    // Inward sweep: zero at the outer end, tiny seed one step in.
    let g_rev: Vec<f64> = g.iter().rev().copied().collect();
    let mut w: Vec<f64> = numerov::propagate(&g_rev, grid.step(), 0.0, 1e-15);
    w.reverse();

    // Amplitude reference from the classically allowed region.
    let w_max_allowed = w
        .iter()
        .zip(&g)
        .filter(|(_, &gi)| gi < 0.0)
        .map(|(wi, _)| wi.abs())
        .fold(0.0f64, f64::max);
    if w_max_allowed == 0.0 {
        return Err(Error::InvalidInput(format!(
            "no classically allowed region on the grid for n = {n}"
        )));
    }

    // Truncate the irregular inward runaway at the first node past the point
    // where the amplitude is back to normal.
    let cap = cfg.divergence_factor * w_max_allowed;
    let mut truncation_radius = None;
    if w[0].abs() > cap {
        if w[0].abs() > 1e6 * w_max_allowed {
            let mut i = 0;
            while i < npts && w[i].abs() > cap {
                i += 1;
            }
            return Err(Error::Divergence {
                radius: grid.r_first(),
                suggested_cutoff: grid.r(i.min(npts - 1)),
            });
        }
        let mut i = 0;
        while i < npts && w[i].abs() > w_max_allowed {
            i += 1;
        }
        while i + 1 < npts && w[i] * w[i + 1] > 0.0 {
            i += 1;
        }
        let cut = (i + 1).min(npts - 1);
        for v in w.iter_mut().take(cut) {
            *v = 0.0;
        }
        truncation_radius = Some(grid.r(cut));
    }

    // Enforce u -> 0 at the inner grid end. A quantum-defect state arrives at
    // r_min mid-oscillation; cutting at its innermost node costs nothing in
    // the region this crate consumes and keeps the boundary clean. Hydrogenic
    // states integrated deep into the r^1 falloff are already small there and
    // keep their full node set.
    let u_raw = |i: usize, wi: f64| grid.x(i).sqrt() * wi;
    let u_max_raw = w
        .iter()
        .enumerate()
        .map(|(i, &wi)| u_raw(i, wi).abs())
        .fold(0.0f64, f64::max);
    let first_kept = w.iter().position(|v| *v != 0.0).unwrap_or(0);
    if u_raw(first_kept, w[first_kept]).abs() > 1e-4 * u_max_raw {
        let mut s = first_kept;
        while s + 1 < npts && w[s] * w[s + 1] > 0.0 {
            s += 1;
        }
        if s + 1 < npts {
            for v in w.iter_mut().take(s + 1) {
                *v = 0.0;
            }
            truncation_radius = Some(grid.r(s + 1));
        }
    }

    let found_nodes = numerov::count_sign_changes(&w);
    check_node_count(n, l, model, &grid, &g, truncation_radius, found_nodes, cfg)?;

    // Normalize: u = sqrt(x) w, integral of u^2 dr = integral of 2 x^2 w^2 dx.
    let u2_dx: Vec<f64> = (0..npts)
        .map(|i| {
            let x = grid.x(i);
            2.0 * x * x * w[i] * w[i]
        })
        .collect();
    let norm2 = simpson_uniform(&u2_dx, grid.step());
    if !(norm2.is_finite() && norm2 > 0.0) {
        return Err(Error::InvalidInput(format!(
            "wavefunction norm degenerate ({norm2}) for n = {n}"
        )));
    }
    let scale = 1.0 / norm2.sqrt();
    let u: Vec<f64> = (0..npts)
        .map(|i| grid.x(i).sqrt() * w[i] * scale)
        .collect();

    let u2: Vec<f64> = u.iter().map(|v| v * v).collect();
    let norm = grid.integrate_dr(&u2);

    let spline = CubicSpline::new_uniform(grid.x(0), grid.step(), u.clone());
    let meta = WavefunctionMeta {
        n,
        l,
        n_star,
        energy,
        defect_source: model.source.clone(),
        mesh_id: grid.mesh_id(),
        truncation_radius,
    };
    Ok(RadialWavefunction {
        grid,
        u,
        n_nodes: found_nodes,
        norm,
        spline,
        meta,
    })
}

/// Node-count sanity. Hydrogenic states integrated through the innermost
/// analytic node (always near 1.8 bohr) must show exactly n - l - 1 nodes.
/// Quantum-defect states lose a non-integer amount of phase to the truncated
/// core region, so they are checked against the semiclassical phase integral
/// over the kept range instead.
#[allow(clippy::too_many_arguments)]
fn check_node_count(
    n: u32,
    l: u32,
    model: &QuantumDefectModel,
    grid: &RadialGrid,
    g: &[f64],
    truncation_radius: Option<f64>,
    found: usize,
    cfg: &WavefunctionConfig,
) -> Result<()> {
    let strict = model.is_hydrogenic() && truncation_radius.is_none() && grid.r_first() <= 1.0;
    if strict {
        let expected = (n - l - 1) as usize;
        if found != expected {
            return Err(Error::NodeCountMismatch {
                n,
                expected,
                found,
                x_step: cfg.x_step,
            });
        }
        return Ok(());
    }
    // Phase integral of k dr = (2 x k) dx over the kept allowed region; the
    // 3/4 x^-2 transform term is excluded, it carries no physical phase.
    let r_keep = truncation_radius.unwrap_or(grid.r_first());
    let q: Vec<f64> = (0..grid.len())
        .map(|i| {
            let x = grid.x(i);
            if grid.r(i) < r_keep {
                0.0
            } else {
                (-(g[i] - 0.75 / (x * x))).max(0.0).sqrt()
            }
        })
        .collect();
    let phase = simpson_uniform(&q, grid.step());
    let expected = (phase / std::f64::consts::PI).round() as isize;
    if (found as isize - expected).abs() > 2 {
        return Err(Error::NodeCountMismatch {
            n,
            expected: expected.max(0) as usize,
            found,
            x_step: cfg.x_step,
        });
    }
    Ok(())
}

/// Energy of the state in MHz relative to the ionization threshold.
pub fn energy_mhz(state: &RydbergState, constants: &PhysicalConstants) -> f64 {
    constants.energy_au_to_mhz(state.energy)
}
