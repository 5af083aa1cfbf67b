//! Automatic regularization-parameter selection on the projected problem.

use nalgebra::DVector;

use crate::operators::LinearOperator;

use super::projected::{operator_times_basis, scale_block_rows, ProjectedProblem};

/// Search window for λ, in log10.
pub const LOG_LAMBDA_MIN: f64 = -12.0;
pub const LOG_LAMBDA_MAX: f64 = 12.0;
/// Relative tolerance on |φ(λ) - τδ| for the discrepancy bisection.
pub const DISCREPANCY_REL_TOL: f64 = 1e-3;
/// Default grid size for the L-curve sweep.
pub const DEFAULT_LCURVE_GRID: usize = 60;

const LCURVE_LOG_MIN: f64 = -10.0;
const LCURVE_LOG_MAX: f64 = 4.0;
/// Bisect until the log10 window is this narrow, so the returned λ pins the
/// crossing itself and not just any point inside the φ tolerance band.
const LOG_WINDOW_TOL: f64 = 1e-3;
const MAX_BISECTIONS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LambdaStatus {
    /// The residual was driven into the tolerance band around τδ.
    Converged,
    /// The unregularized projected residual already meets or exceeds τδ;
    /// λ = 0 was returned.
    ZeroOptimal,
    /// Even the largest λ in the window leaves the residual below τδ.
    OverRegularized,
    /// L-curve: a corner of maximum curvature was found.
    Corner,
    /// L-curve: the curve was flat or degenerate, fell back to the median
    /// grid value.
    DegenerateFallback,
}

#[derive(Debug, Clone, Copy)]
pub struct LambdaSelection {
    pub lambda: f64,
    pub status: LambdaStatus,
}

/// Discrepancy principle: the smallest λ with ‖A V z(λ) - b‖ ≈ τδ, located by
/// bisection on log10 λ using the monotonicity of the residual in λ.
pub fn select_lambda_discrepancy_proj(
    proj: &ProjectedProblem,
    delta: f64,
    tau: f64,
) -> LambdaSelection {
    assert!(delta >= 0.0, "noise norm must be nonnegative");
    assert!(tau >= 1.0, "discrepancy safety factor must be >= 1");
    if delta == 0.0 {
        return LambdaSelection {
            lambda: 0.0,
            status: LambdaStatus::ZeroOptimal,
        };
    }
    let target = tau * delta;
    let tol = DISCREPANCY_REL_TOL * target;

    if proj.residual_norm(0.0) >= target {
        return LambdaSelection {
            lambda: 0.0,
            status: LambdaStatus::ZeroOptimal,
        };
    }
    if proj.residual_norm(10f64.powf(LOG_LAMBDA_MAX)) < target {
        return LambdaSelection {
            lambda: 10f64.powf(LOG_LAMBDA_MAX),
            status: LambdaStatus::OverRegularized,
        };
    }

    let mut lo = LOG_LAMBDA_MIN;
    let mut hi = LOG_LAMBDA_MAX;
    let mut mid = 0.5 * (lo + hi);
    let mut best = (mid, f64::INFINITY);
    for _ in 0..MAX_BISECTIONS {
        mid = 0.5 * (lo + hi);
        let phi = proj.residual_norm(10f64.powf(mid));
        let err = (phi - target).abs();
        if err < best.1 {
            best = (mid, err);
        }
        if err <= tol && hi - lo <= LOG_WINDOW_TOL {
            return LambdaSelection {
                lambda: 10f64.powf(mid),
                status: LambdaStatus::Converged,
            };
        }
        if phi > target {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo < 1e-14 {
            break;
        }
    }
    LambdaSelection {
        lambda: 10f64.powf(best.0),
        status: LambdaStatus::Converged,
    }
}

/// L-curve rule: sweeps a log-spaced λ grid, plots (log residual norm,
/// log seminorm) and returns the λ of maximum discrete curvature at the
/// convex corner. Degenerate curves fall back to the median grid λ.
pub fn select_lambda_lcurve_proj(proj: &ProjectedProblem, grid_size: usize) -> LambdaSelection {
    assert!(grid_size >= 10, "l-curve grid must have at least 10 points");
    let lambdas: Vec<f64> = (0..grid_size)
        .map(|i| {
            let t = i as f64 / (grid_size - 1) as f64;
            10f64.powf(LCURVE_LOG_MIN + t * (LCURVE_LOG_MAX - LCURVE_LOG_MIN))
        })
        .collect();
    let mut xs = Vec::with_capacity(grid_size);
    let mut ys = Vec::with_capacity(grid_size);
    for &lam in &lambdas {
        let sol = proj.solve(lam);
        xs.push(sol.residual_norm.max(1e-300).ln());
        ys.push(proj.seminorm(&sol.z).max(1e-300).ln());
    }
    match max_curvature_index(&xs, &ys) {
        Some(idx) => LambdaSelection {
            lambda: lambdas[idx],
            status: LambdaStatus::Corner,
        },
        None => LambdaSelection {
            lambda: lambdas[grid_size / 2],
            status: LambdaStatus::DegenerateFallback,
        },
    }
}

/// Index of the point of maximum positive discrete (Menger) curvature, i.e.
/// the sharpest counterclockwise corner when the curve is traversed in input
/// order. Returns `None` when no interior point bends that way.
pub fn max_curvature_index(xs: &[f64], ys: &[f64]) -> Option<usize> {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len();
    if n < 3 {
        return None;
    }
    let mut best: Option<(usize, f64)> = None;
    for i in 1..n - 1 {
        let (ax, ay) = (xs[i] - xs[i - 1], ys[i] - ys[i - 1]);
        let (bx, by) = (xs[i + 1] - xs[i], ys[i + 1] - ys[i]);
        let cross = ax * by - ay * bx;
        if cross <= 0.0 {
            continue;
        }
        let la = (ax * ax + ay * ay).sqrt();
        let lb = (bx * bx + by * by).sqrt();
        let (cx, cy) = (xs[i + 1] - xs[i - 1], ys[i + 1] - ys[i - 1]);
        let lc = (cx * cx + cy * cy).sqrt();
        if la < 1e-300 || lb < 1e-300 || lc < 1e-300 {
            continue;
        }
        let curvature = 2.0 * cross / (la * lb * lc);
        if curvature > 1e-9 && best.map_or(true, |(_, b)| curvature > b) {
            best = Some((i, curvature));
        }
    }
    best.map(|(i, _)| i)
}

/// Operator-level convenience wrapper for the discrepancy rule.
pub fn select_lambda_discrepancy(
    a: &LinearOperator,
    l: &LinearOperator,
    b: &DVector<f64>,
    basis: &[DVector<f64>],
    w: &DVector<f64>,
    delta: f64,
    tau: f64,
) -> LambdaSelection {
    let g_a = operator_times_basis(a, basis);
    let g_l = scale_block_rows(&operator_times_basis(l, basis), w);
    select_lambda_discrepancy_proj(&ProjectedProblem::new(g_a, g_l, b), delta, tau)
}

/// Operator-level convenience wrapper for the L-curve rule.
pub fn select_lambda_lcurve(
    a: &LinearOperator,
    l: &LinearOperator,
    b: &DVector<f64>,
    basis: &[DVector<f64>],
    w: &DVector<f64>,
    grid_size: usize,
) -> LambdaSelection {
    let g_a = operator_times_basis(a, basis);
    let g_l = scale_block_rows(&operator_times_basis(l, basis), w);
    select_lambda_lcurve_proj(&ProjectedProblem::new(g_a, g_l, b), grid_size)
}
