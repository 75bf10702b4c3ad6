//! Independent bound-state oracle: Numerov shooting with node counting.
//!
//! Works on its own uniform-R grid with the potential evaluated by cubic
//! interpolation, so it shares neither discretization nor algorithm with the
//! finite-difference solver it cross-checks. For the regular solution started
//! at the left boundary, the number of internal sign changes equals the
//! number of eigenvalues below the trial energy; bisection on that count
//! converges to each level without ever storing a wavefunction.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::CubicSpline;
use crate::numerov::count_nodes_sweep;
use crate::potential::PotentialCurve;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShootingOptions {
    /// Target spacing of the uniform R grid, bohr.
    pub dr: f64,
    /// Bisection tolerance on energies, hartree.
    pub e_tol_au: f64,
}

impl Default for ShootingOptions {
    fn default() -> Self {
        Self {
            dr: 0.25,
            // about 1e-5 MHz
            e_tol_au: 1.5e-15,
        }
    }
}

/// All eigenvalues in [e_lo, e_hi), ascending.
pub fn shooting_energies(
    potential: &PotentialCurve,
    mu: f64,
    e_window: (f64, f64),
    opts: &ShootingOptions,
) -> Result<Vec<f64>> {
    let (e_lo, e_hi) = e_window;
    if e_lo >= e_hi {
        return Err(Error::InvalidInput(format!(
            "energy window [{e_lo}, {e_hi}] is empty"
        )));
    }
    if !(mu > 0.0 && opts.dr > 0.0) {
        return Err(Error::InvalidInput(
            "shooting solver needs positive mu and dr".to_string(),
        ));
    }
    let grid = potential.grid();
    let spline = CubicSpline::new_uniform(grid.x(0), grid.step(), potential.values().to_vec());

    let span = grid.r_last() - grid.r_first();
    let m = ((span / opts.dr).ceil() as usize + 1).max(64);
    let dr = span / (m - 1) as f64;
    let r0 = grid.r_first();
    let v: Vec<f64> = (0..m)
        .map(|j| {
            let r = r0 + dr * j as f64;
            spline.eval(r.sqrt()).unwrap_or(0.0)
        })
        .collect();

    let count = |e: f64| -> usize {
        let g: Vec<f64> = v.iter().map(|&vj| 2.0 * mu * (vj - e)).collect();
        count_nodes_sweep(&g, dr, 0.0, 1e-12)
    };

    let k_lo = count(e_lo);
    let k_hi = count(e_hi);
    let mut out = Vec::with_capacity(k_hi.saturating_sub(k_lo));
    let mut floor = e_lo;
    for j in 0..k_hi.saturating_sub(k_lo) {
        let want = k_lo + j + 1;
        let (mut a, mut b) = (floor, e_hi);
        while b - a > opts.e_tol_au.max(4.0 * f64::EPSILON * a.abs().max(b.abs())) {
            let mid = 0.5 * (a + b);
            if count(mid) >= want {
                b = mid;
            } else {
                a = mid;
            }
        }
        out.push(0.5 * (a + b));
        floor = a;
    }
    Ok(out)
}
