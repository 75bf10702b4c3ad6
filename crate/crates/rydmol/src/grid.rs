//! Square-root-scaled radial mesh.
//!
//! All radial functions live on a mesh uniform in `x = sqrt(r)`. For a
//! Coulomb problem this makes the local oscillation wavelength nearly
//! constant across the whole grid, so a single step size resolves both the
//! fast inner oscillations and the stretched outer lobes.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    /// Inner radius in bohr.
    pub r_min: f64,
    /// Outer radius in bohr (the grid end lands at or just beyond it).
    pub r_max: f64,
    /// Step in x = sqrt(r), in sqrt(bohr).
    pub x_step: f64,
}

/// Uniform mesh in x = sqrt(r).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialGrid {
    x0: f64,
    h: f64,
    len: usize,
}

impl RadialGrid {
    pub fn from_spec(spec: &GridSpec) -> Result<Self> {
        if !(spec.r_min.is_finite() && spec.r_min > 0.0) {
            return Err(Error::InvalidInput(format!(
                "grid r_min must be positive, got {}",
                spec.r_min
            )));
        }
        if !(spec.r_max.is_finite() && spec.r_max > spec.r_min) {
            return Err(Error::InvalidInput(format!(
                "grid r_max must exceed r_min, got {} <= {}",
                spec.r_max, spec.r_min
            )));
        }
        if !(spec.x_step.is_finite() && spec.x_step > 0.0) {
            return Err(Error::InvalidInput(format!(
                "grid x_step must be positive, got {}",
                spec.x_step
            )));
        }
        let x0 = spec.r_min.sqrt();
        let span = spec.r_max.sqrt() - x0;
        let len = (span / spec.x_step).ceil() as usize + 1;
        if len < 16 {
            return Err(Error::InvalidInput(format!(
                "grid has only {len} points; widen the range or shrink x_step"
            )));
        }
        Ok(Self {
            x0,
            h: spec.x_step,
            len,
        })
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn step(&self) -> f64 {
        self.h
    }

    #[inline]
    pub fn x(&self, i: usize) -> f64 {
        self.x0 + self.h * i as f64
    }

    #[inline]
    pub fn r(&self, i: usize) -> f64 {
        let x = self.x(i);
        x * x
    }

    pub fn r_first(&self) -> f64 {
        self.r(0)
    }

    pub fn r_last(&self) -> f64 {
        self.r(self.len - 1)
    }

    pub fn rs(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len).map(|i| self.r(i))
    }

    /// Identifier embedded in metadata and mismatch diagnostics.
    pub fn mesh_id(&self) -> String {
        format!("sqrt[x0={:.9},h={:.9},n={}]", self.x0, self.h, self.len)
    }

    /// Sub-grid starting at the first point with r >= r_from.
    pub fn tail_from(&self, r_from: f64) -> (usize, RadialGrid) {
        let x_from = r_from.max(0.0).sqrt();
        let i0 = if x_from <= self.x0 {
            0
        } else {
            (((x_from - self.x0) / self.h).ceil() as usize).min(self.len - 1)
        };
        (
            i0,
            RadialGrid {
                x0: self.x(i0),
                h: self.h,
                len: self.len - i0,
            },
        )
    }

    /// Every-other-point grid, used for grid-convergence diagnostics.
    pub fn decimated(&self) -> RadialGrid {
        RadialGrid {
            x0: self.x0,
            h: 2.0 * self.h,
            len: self.len.div_ceil(2),
        }
    }

    /// Integral of f over r, i.e. of 2 x f over x, from samples on this mesh.
    pub fn integrate_dr(&self, f: &[f64]) -> f64 {
        assert_eq!(f.len(), self.len);
        let g: Vec<f64> = (0..self.len).map(|i| 2.0 * self.x(i) * f[i]).collect();
        simpson_uniform(&g, self.h)
    }
}

/// Composite Simpson on a uniform mesh; falls back to one trapezoid panel at
/// the end when the sample count is even.
pub fn simpson_uniform(y: &[f64], h: f64) -> f64 {
    let n = y.len();
    if n < 2 {
        return 0.0;
    }
    if n == 2 {
        return 0.5 * h * (y[0] + y[1]);
    }
    let odd_panels = (n - 1) % 2 == 1;
    let m = if odd_panels { n - 1 } else { n };
    let mut s = y[0] + y[m - 1];
    for (i, yi) in y.iter().enumerate().take(m - 1).skip(1) {
        s += if i % 2 == 1 { 4.0 * yi } else { 2.0 * yi };
    }
    let mut total = s * h / 3.0;
    if odd_panels {
        total += 0.5 * h * (y[n - 2] + y[n - 1]);
    }
    total
}

/// Natural cubic spline on a uniform mesh.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CubicSpline {
    x0: f64,
    h: f64,
    y: Vec<f64>,
    /// Second derivatives at the knots.
    m: Vec<f64>,
}

impl CubicSpline {
    pub fn new_uniform(x0: f64, h: f64, y: Vec<f64>) -> Self {
        let n = y.len();
        let mut m = vec![0.0; n];
        if n >= 3 {
            // Tridiagonal (1, 4, 1) system for the interior second derivatives.
            let k = n - 2;
            let mut diag = vec![4.0; k];
            let mut rhs: Vec<f64> = (0..k)
                .map(|i| 6.0 * (y[i] - 2.0 * y[i + 1] + y[i + 2]) / (h * h))
                .collect();
            for i in 1..k {
                let w = 1.0 / diag[i - 1];
                diag[i] -= w;
                rhs[i] -= w * rhs[i - 1];
            }
            m[k] = rhs[k - 1] / diag[k - 1];
            for i in (0..k - 1).rev() {
                m[i + 1] = (rhs[i] - m[i + 2]) / diag[i];
            }
        }
        Self { x0, h, y, m }
    }

    pub fn x_min(&self) -> f64 {
        self.x0
    }

    pub fn x_max(&self) -> f64 {
        self.x0 + self.h * (self.y.len() - 1) as f64
    }

    /// Value at x; None outside the knot range.
    pub fn eval(&self, x: f64) -> Option<f64> {
        let n = self.y.len();
        if n < 2 || x < self.x0 - 1e-12 || x > self.x_max() + 1e-12 {
            return None;
        }
        let t = ((x - self.x0) / self.h).floor();
        let i = (t.max(0.0) as usize).min(n - 2);
        let a = (self.x0 + self.h * (i + 1) as f64 - x) / self.h;
        let b = 1.0 - a;
        let h2 = self.h * self.h / 6.0;
        Some(
            a * self.y[i]
                + b * self.y[i + 1]
                + ((a * a * a - a) * self.m[i] + (b * b * b - b) * self.m[i + 1]) * h2,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn grid_covers_requested_range() {
        let g = RadialGrid::from_spec(&GridSpec {
            r_min: 2.0,
            r_max: 3500.0,
            x_step: 0.01,
        })
        .unwrap();
        assert!(g.r_first() <= 2.0 + 1e-9);
        assert!(g.r_last() >= 3500.0 - 1e-6);
        // strictly increasing
        for i in 1..g.len() {
            assert!(g.r(i) > g.r(i - 1));
        }
    }

    #[test]
    fn rejects_degenerate_specs() {
        assert!(RadialGrid::from_spec(&GridSpec {
            r_min: -1.0,
            r_max: 10.0,
            x_step: 0.01
        })
        .is_err());
        assert!(RadialGrid::from_spec(&GridSpec {
            r_min: 5.0,
            r_max: 5.0,
            x_step: 0.01
        })
        .is_err());
        assert!(RadialGrid::from_spec(&GridSpec {
            r_min: 1.0,
            r_max: 10.0,
            x_step: 0.0
        })
        .is_err());
    }

    #[test]
    fn simpson_integrates_polynomials_exactly() {
        // x^3 on [0, 1] with 101 points
        let h = 0.01;
        let y: Vec<f64> = (0..101).map(|i| (i as f64 * h).powi(3)).collect();
        assert_relative_eq!(simpson_uniform(&y, h), 0.25, max_relative = 1e-12);
    }

    #[test]
    fn integrate_dr_matches_analytic() {
        // integral of r over [1, 4] = 7.5
        let g = RadialGrid::from_spec(&GridSpec {
            r_min: 1.0,
            r_max: 4.0,
            x_step: 0.002,
        })
        .unwrap();
        let f: Vec<f64> = g.rs().collect();
        assert_relative_eq!(g.integrate_dr(&f), (16.0 - 1.0) / 2.0, max_relative = 1e-6);
    }

    #[test]
    fn spline_reproduces_smooth_function() {
        let h = 0.05;
        let y: Vec<f64> = (0..200).map(|i| (i as f64 * h).sin()).collect();
        let s = CubicSpline::new_uniform(0.0, h, y);
        for k in 0..500 {
            let x = 0.3 + k as f64 * 0.018;
            let v = s.eval(x).unwrap();
            assert!((v - x.sin()).abs() < 2e-6, "x={x} v={v}");
        }
        assert!(s.eval(-0.5).is_none());
        assert!(s.eval(100.0).is_none());
    }

    #[test]
    fn decimated_grid_spans_same_range() {
        let g = RadialGrid::from_spec(&GridSpec {
            r_min: 100.0,
            r_max: 3000.0,
            x_step: 0.01,
        })
        .unwrap();
        let d = g.decimated();
        assert_eq!(d.step(), 2.0 * g.step());
        assert!((d.r_first() - g.r_first()).abs() < 1e-9);
        assert!(d.r_last() <= g.r_last() + 1e-9);
    }
}
