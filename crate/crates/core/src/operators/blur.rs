//! Banded Gaussian convolution operators for 1D deblurring problems.
//!
//! Each row carries the kernel exp(-k²/(2σ²)) truncated at ±`kernel_halfwidth`.
//! Truncation at the signal ends breaks both row and column sums, so the
//! banded matrix is rebalanced with a symmetric Sinkhorn iteration to be
//! doubly stochastic: rows sum to one (constants are preserved) and columns
//! sum to one (total mass is preserved). Interior rows stay proportional to
//! the truncated Gaussian.

use super::linop::{LinearOperator, OperatorError};

const SINKHORN_TOL: f64 = 1e-13;
const SINKHORN_MAX_ITERS: usize = 10_000;

/// n×n banded Gaussian blur matrix, doubly stochastic to ~1e-13.
pub fn build_gaussian_blur(
    n: usize,
    sigma: f64,
    kernel_halfwidth: usize,
) -> Result<LinearOperator, OperatorError> {
    if sigma <= 0.0 || !sigma.is_finite() {
        return Err(OperatorError::InvalidParameter(format!(
            "blur sigma must be positive, got {sigma}"
        )));
    }
    if kernel_halfwidth < 1 {
        return Err(OperatorError::InvalidParameter(
            "kernel halfwidth must be >= 1".into(),
        ));
    }
    if n == 0 {
        return Err(OperatorError::InvalidDimension("blur needs n >= 1".into()));
    }

    let hw = kernel_halfwidth.min(n - 1);
    let kernel: Vec<f64> = (0..=hw)
        .map(|k| {
            let k = k as f64;
            (-k * k / (2.0 * sigma * sigma)).exp()
        })
        .collect();

    // Symmetric Sinkhorn balancing: find u > 0 with u_i (K u)_i = 1, then
    // the matrix u_i K_ij u_j is doubly stochastic. K is symmetric banded.
    let kernel_apply = |u: &[f64], out: &mut [f64]| {
        for (i, o) in out.iter_mut().enumerate() {
            let lo = i.saturating_sub(hw);
            let hi = (i + hw).min(n - 1);
            let mut acc = 0.0;
            for j in lo..=hi {
                acc += kernel[i.abs_diff(j)] * u[j];
            }
            *o = acc;
        }
    };

    let mut u = vec![1.0_f64; n];
    let mut ku = vec![0.0_f64; n];
    let mut converged = false;
    for _ in 0..SINKHORN_MAX_ITERS {
        kernel_apply(&u, &mut ku);
        let mut defect = 0.0_f64;
        for i in 0..n {
            defect = defect.max((u[i] * ku[i] - 1.0).abs());
        }
        if defect <= SINKHORN_TOL {
            converged = true;
            break;
        }
        // Geometric-mean damping keeps the fixed-point iteration monotone.
        for i in 0..n {
            u[i] = (u[i] / ku[i]).sqrt();
        }
    }
    debug_assert!(converged, "sinkhorn balancing did not converge");

    let rows: Vec<Vec<(usize, f64)>> = (0..n)
        .map(|i| {
            let lo = i.saturating_sub(hw);
            let hi = (i + hw).min(n - 1);
            (lo..=hi)
                .map(|j| (j, u[i] * kernel[i.abs_diff(j)] * u[j]))
                .collect()
        })
        .collect();
    Ok(LinearOperator::from_rows_auto(n, n, &rows))
}
