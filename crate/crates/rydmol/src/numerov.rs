//! Numerov propagation for y''(x) = g(x) y(x) on uniform meshes.

/// Threshold at which the running solution is rescaled to avoid overflow.
const RENORM_CAP: f64 = 1e250;

/// Propagates y'' = g y forward through the samples of `g`, seeding with the
/// first two values. When the solution grows past the overflow cap the whole
/// history is rescaled in place; only the shape matters to callers, which
/// normalize afterwards.
pub fn propagate(g: &[f64], h: f64, y0: f64, y1: f64) -> Vec<f64> {
    let n = g.len();
    assert!(n >= 2, "need at least 2 grid points");
    let mut y = vec![0.0; n];
    y[0] = y0;
    y[1] = y1;
    let c = h * h / 12.0;
    for i in 1..n - 1 {
        let a = 1.0 - c * g[i + 1];
        let b = 2.0 * (1.0 + 5.0 * c * g[i]) * y[i];
        let d = (1.0 - c * g[i - 1]) * y[i - 1];
        y[i + 1] = (b - d) / a;
        if y[i + 1].abs() > RENORM_CAP {
            let s = 1.0 / y[i + 1].abs();
            for v in y.iter_mut().take(i + 2) {
                *v *= s;
            }
        }
    }
    y
}

/// Forward sweep that only counts internal sign changes, streaming with O(1)
/// memory. Used by the shooting solver, where the node count of the regular
/// solution equals the number of eigenvalues below the trial energy.
pub fn count_nodes_sweep(g: &[f64], h: f64, y0: f64, y1: f64) -> usize {
    let n = g.len();
    assert!(n >= 3);
    let c = h * h / 12.0;
    let mut ym = y0;
    let mut yc = y1;
    let mut nodes = 0;
    for i in 1..n - 1 {
        let a = 1.0 - c * g[i + 1];
        let b = 2.0 * (1.0 + 5.0 * c * g[i]) * yc;
        let d = (1.0 - c * g[i - 1]) * ym;
        let mut yn = (b - d) / a;
        if yn * yc < 0.0 {
            nodes += 1;
        }
        if yn.abs() > RENORM_CAP {
            let s = 1.0 / yn.abs();
            yn *= s;
            yc *= s;
        }
        ym = yc;
        yc = yn;
    }
    nodes
}

/// Sign changes among consecutive nonzero samples.
pub fn count_sign_changes(y: &[f64]) -> usize {
    let mut nodes = 0;
    let mut prev = 0.0f64;
    for &v in y {
        if v == 0.0 {
            continue;
        }
        if prev != 0.0 && prev * v < 0.0 {
            nodes += 1;
        }
        prev = v;
    }
    nodes
}
