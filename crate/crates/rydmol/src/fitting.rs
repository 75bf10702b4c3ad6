//! Small dense Levenberg-Marquardt engine for the line, lifetime and similar
//! few-parameter fits. Models supply analytic partials.

// index loops follow the normal-equation algebra directly
#![allow(clippy::needless_range_loop, clippy::type_complexity)]

use crate::error::{Error, Result};

pub struct LmOptions {
    pub max_iterations: usize,
    /// Convergence threshold on the infinity norm of the gradient, relative
    /// to the current chi^2 scale.
    pub grad_tol: f64,
    pub step_tol: f64,
}

impl Default for LmOptions {
    fn default() -> Self {
        Self {
            max_iterations: 200,
            grad_tol: 1e-10,
            step_tol: 1e-14,
        }
    }
}

#[derive(Debug, Clone)]
pub struct FitOutcome {
    pub params: Vec<f64>,
    /// Parameter covariance. For weighted fits this is (J^T J)^-1 with the
    /// supplied sigmas; for unweighted fits it is scaled by chi^2/(m - p).
    pub covariance: Vec<Vec<f64>>,
    pub chi2: f64,
    pub iterations: usize,
    pub grad_norm: f64,
}

/// Minimizes sum_i ((y_i - f(x_i, theta)) / sigma_i)^2.
///
/// `model` returns the value and the partial derivatives with respect to
/// every parameter at one sample point.
pub fn levenberg_marquardt(
    model: &dyn Fn(f64, &[f64]) -> (f64, Vec<f64>),
    x: &[f64],
    y: &[f64],
    sigma: Option<&[f64]>,
    theta0: Vec<f64>,
    opts: &LmOptions,
) -> Result<FitOutcome> {
    let m = x.len();
    let p = theta0.len();
    if m != y.len() || m <= p {
        return Err(Error::InvalidInput(format!(
            "fit needs more samples ({m}) than parameters ({p})"
        )));
    }
    if let Some(s) = sigma {
        if s.len() != m || s.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(Error::InvalidInput(
                "sigmas must be positive and match the sample count".to_string(),
            ));
        }
    }
    let weight = |i: usize| sigma.map_or(1.0, |s| 1.0 / s[i]);

    let chi2_of = |theta: &[f64]| -> f64 {
        (0..m)
            .map(|i| {
                let (f, _) = model(x[i], theta);
                ((y[i] - f) * weight(i)).powi(2)
            })
            .sum()
    };

    let mut theta = theta0;
    let mut chi2 = chi2_of(&theta);
    let mut lambda = 1e-3;
    let mut grad_norm = f64::INFINITY;
    let mut iterations = 0;

    for iter in 0..opts.max_iterations {
        iterations = iter + 1;
        // normal equations at the current point
        let mut jtj = vec![vec![0.0; p]; p];
        let mut jtr = vec![0.0; p];
        for i in 0..m {
            let w = weight(i);
            let (f, grad) = model(x[i], &theta);
            let r = (y[i] - f) * w;
            for a in 0..p {
                let ja = grad[a] * w;
                jtr[a] += ja * r;
                for b in a..p {
                    jtj[a][b] += ja * grad[b] * w;
                }
            }
        }
        for a in 0..p {
            for b in 0..a {
                jtj[a][b] = jtj[b][a];
            }
        }
        grad_norm = jtr.iter().fold(0.0f64, |mx, g| mx.max(g.abs()));
        if grad_norm < opts.grad_tol * chi2.max(1.0) {
            break;
        }

        // damped step, retried with a stiffer lambda on failure
        let mut accepted = false;
        for _ in 0..40 {
            let mut damped = jtj.clone();
            for (a, row) in damped.iter_mut().enumerate() {
                row[a] += lambda * jtj[a][a].max(1e-300);
            }
            let Some(step) = solve_dense(damped, jtr.clone()) else {
                lambda *= 10.0;
                continue;
            };
            let trial: Vec<f64> = theta.iter().zip(&step).map(|(t, d)| t + d).collect();
            let trial_chi2 = chi2_of(&trial);
            if trial_chi2.is_finite() && trial_chi2 <= chi2 {
                let rel_step = step
                    .iter()
                    .zip(&theta)
                    .fold(0.0f64, |mx, (d, t)| mx.max((d / t.abs().max(1.0)).abs()));
                theta = trial;
                let improved = (chi2 - trial_chi2) / chi2.max(1e-300);
                chi2 = trial_chi2;
                lambda = (lambda / 3.0).max(1e-12);
                accepted = true;
                if rel_step < opts.step_tol || improved < 1e-14 {
                    // converged by stagnation; report gradient at the new point
                    grad_norm = 0.0;
                }
                break;
            }
            lambda *= 5.0;
        }
        if !accepted || grad_norm == 0.0 {
            break;
        }
    }

    if grad_norm > opts.grad_tol * chi2.max(1.0) && grad_norm != 0.0 {
        return Err(Error::NonConvergence {
            iterations,
            trace: format!("chi2 = {chi2:.6e}, |grad| = {grad_norm:.3e}, lambda = {lambda:.1e}"),
        });
    }

    // covariance from the undamped normal matrix at the optimum
    let mut jtj = vec![vec![0.0; p]; p];
    for i in 0..m {
        let w = weight(i);
        let (_, grad) = model(x[i], &theta);
        for a in 0..p {
            for b in a..p {
                jtj[a][b] += grad[a] * grad[b] * w * w;
            }
        }
    }
    for a in 0..p {
        for b in 0..a {
            jtj[a][b] = jtj[b][a];
        }
    }
    let mut cov = invert_dense(jtj).ok_or_else(|| Error::NonConvergence {
        iterations,
        trace: "singular normal matrix at the optimum".to_string(),
    })?;
    if sigma.is_none() {
        let s2 = chi2 / (m - p) as f64;
        for row in cov.iter_mut() {
            for v in row.iter_mut() {
                *v *= s2;
            }
        }
    }

    Ok(FitOutcome {
        params: theta,
        covariance: cov,
        chi2,
        iterations,
        grad_norm,
    })
}

/// Gaussian elimination with partial pivoting; None when singular.
pub fn solve_dense(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())?;
        if a[piv][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            for k in col..n {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut s = b[row];
        for k in row + 1..n {
            s -= a[row][k] * x[k];
        }
        x[row] = s / a[row][row];
    }
    Some(x)
}

pub fn invert_dense(a: Vec<Vec<f64>>) -> Option<Vec<Vec<f64>>> {
    let n = a.len();
    let mut cols = Vec::with_capacity(n);
    for j in 0..n {
        let mut e = vec![0.0; n];
        e[j] = 1.0;
        cols.push(solve_dense(a.clone(), e)?);
    }
    let mut inv = vec![vec![0.0; n]; n];
    for (j, col) in cols.iter().enumerate() {
        for i in 0..n {
            inv[i][j] = col[i];
        }
    }
    Some(inv)
}
