//! Deterministic ground-truth phantoms.

use nalgebra::DVector;

use crate::operators::Grid2;

/// Piecewise-constant 1D test signal: six plateaus with heights
/// (0, 1, 0.4, 1.6, 0.2, 0) over segments of 15/20/15/20/15/15 percent of n.
/// Jump magnitudes span a factor of 7, exercising edge detection at several
/// contrast levels.
pub fn phantom_piecewise_1d(n: usize) -> DVector<f64> {
    assert!(n >= 20, "1d phantom needs n >= 20");
    const HEIGHTS: [f64; 6] = [0.0, 1.0, 0.4, 1.6, 0.2, 0.0];
    const CUM_PERCENT: [f64; 6] = [15.0, 35.0, 50.0, 70.0, 85.0, 100.0];
    let mut x = DVector::zeros(n);
    let mut start = 0usize;
    for (h, cum) in HEIGHTS.iter().zip(CUM_PERCENT.iter()) {
        let end = ((cum / 100.0) * n as f64).round() as usize;
        for i in start..end.min(n) {
            x[i] = *h;
        }
        start = end;
    }
    x
}

struct Ellipse {
    value: f64,
    x0: f64,
    y0: f64,
    a: f64,
    b: f64,
    theta_deg: f64,
}

/// The ten canonical head-phantom ellipses with the high-contrast intensity
/// set; summed intensities already lie in [0, 1] away from roundoff.
const SHEPP_LOGAN: [Ellipse; 10] = [
    Ellipse { value: 1.0, x0: 0.0, y0: 0.0, a: 0.69, b: 0.92, theta_deg: 0.0 },
    Ellipse { value: -0.8, x0: 0.0, y0: -0.0184, a: 0.6624, b: 0.874, theta_deg: 0.0 },
    Ellipse { value: -0.2, x0: 0.22, y0: 0.0, a: 0.11, b: 0.31, theta_deg: -18.0 },
    Ellipse { value: -0.2, x0: -0.22, y0: 0.0, a: 0.16, b: 0.41, theta_deg: 18.0 },
    Ellipse { value: 0.1, x0: 0.0, y0: 0.35, a: 0.21, b: 0.25, theta_deg: 0.0 },
    Ellipse { value: 0.1, x0: 0.0, y0: 0.1, a: 0.046, b: 0.046, theta_deg: 0.0 },
    Ellipse { value: 0.1, x0: 0.0, y0: -0.1, a: 0.046, b: 0.046, theta_deg: 0.0 },
    Ellipse { value: 0.1, x0: -0.08, y0: -0.605, a: 0.046, b: 0.023, theta_deg: 0.0 },
    Ellipse { value: 0.1, x0: 0.0, y0: -0.606, a: 0.023, b: 0.023, theta_deg: 0.0 },
    Ellipse { value: 0.1, x0: 0.06, y0: -0.605, a: 0.023, b: 0.046, theta_deg: 0.0 },
];

/// n×n head phantom, vectorized column-major, intensities clipped to [0, 1].
pub fn phantom_shepp_logan(n: usize) -> DVector<f64> {
    assert!(n >= 16, "head phantom needs n >= 16");
    let grid = Grid2::new(n, n);
    let mut x = DVector::zeros(grid.len());
    for ix in 0..n {
        for iy in 0..n {
            let (u, v) = grid.pixel_center(ix, iy);
            let mut val = 0.0;
            for e in &SHEPP_LOGAN {
                let t = e.theta_deg.to_radians();
                let (du, dv) = (u - e.x0, v - e.y0);
                let ue = du * t.cos() + dv * t.sin();
                let ve = -du * t.sin() + dv * t.cos();
                if (ue / e.a).powi(2) + (ve / e.b).powi(2) <= 1.0 {
                    val += e.value;
                }
            }
            x[grid.index(ix, iy)] = val.clamp(0.0, 1.0);
        }
    }
    x
}

/// n×n piecewise-constant image of four oblique bands with distinct
/// intensities; a stand-in for layered geological test images. Band
/// boundaries are lines perpendicular to a 30° direction, so their gradients
/// mix horizontal and vertical components.
pub fn phantom_layered(n: usize) -> DVector<f64> {
    assert!(n >= 16, "layered phantom needs n >= 16");
    let grid = Grid2::new(n, n);
    let alpha = 30f64.to_radians();
    let (ca, sa) = (alpha.cos(), alpha.sin());
    const THRESHOLDS: [f64; 3] = [-0.55, 0.05, 0.6];
    const LEVELS: [f64; 4] = [0.15, 0.95, 0.4, 0.75];
    let mut x = DVector::zeros(grid.len());
    for ix in 0..n {
        for iy in 0..n {
            let (u, v) = grid.pixel_center(ix, iy);
            let t = ca * u + sa * v;
            let band = THRESHOLDS.iter().take_while(|&&thr| t > thr).count();
            x[grid.index(ix, iy)] = LEVELS[band];
        }
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::{build_gradient_1d, build_gradient_2d};

    #[test]
    fn piecewise_1d_shape_and_determinism() {
        let x = phantom_piecewise_1d(200);
        assert_eq!(x.len(), 200);
        assert_eq!(x, phantom_piecewise_1d(200));
        // Segment boundaries for n=200 are at 30/70/100/140/170.
        assert_eq!(x[0], 0.0);
        assert_eq!(x[30], 1.0);
        assert_eq!(x[70], 0.4);
        assert_eq!(x[100], 1.6);
        assert_eq!(x[140], 0.2);
        assert_eq!(x[170], 0.0);
    }

    #[test]
    fn piecewise_1d_gradient_is_sparse_with_one_nonzero_per_jump() {
        let x = phantom_piecewise_1d(200);
        let l = build_gradient_1d(200).unwrap();
        let lx = l.apply(&x);
        let nnz = lx.iter().filter(|&&v| v != 0.0).count();
        assert_eq!(nnz, 5);
        // At least four plateaus and jumps spanning a factor >= 3.
        let jumps: Vec<f64> = lx.iter().filter(|&&v| v != 0.0).map(|v| v.abs()).collect();
        let max = jumps.iter().cloned().fold(0.0_f64, f64::max);
        let min = jumps.iter().cloned().fold(f64::INFINITY, f64::min);
        assert!(max / min >= 3.0);
    }

    #[test]
    fn shepp_logan_center_positive_corners_zero() {
        let n = 128;
        let x = phantom_shepp_logan(n);
        assert_eq!(x.len(), 16384);
        let grid = Grid2::new(n, n);
        let center = x[grid.index(n / 2, n / 2)];
        assert!(center > 0.0, "center = {center}");
        for (ix, iy) in [(0, 0), (0, n - 1), (n - 1, 0), (n - 1, n - 1)] {
            assert_eq!(x[grid.index(ix, iy)], 0.0);
        }
        for v in x.iter() {
            assert!((0.0..=1.0).contains(v));
        }
    }

    #[test]
    fn layered_shape_and_determinism() {
        let x = phantom_layered(64);
        assert_eq!(x.len(), 4096);
        assert_eq!(x, phantom_layered(64));
        let distinct: std::collections::BTreeSet<u64> = x.iter().map(|v| v.to_bits()).collect();
        assert_eq!(distinct.len(), 4);
    }

    #[test]
    fn layered_gradient_nonzero_only_on_band_boundaries() {
        let n = 64;
        let x = phantom_layered(n);
        let l = build_gradient_2d(n, n).unwrap();
        let lx = l.apply(&x);
        let nnz = lx.iter().filter(|&&v| v != 0.0).count();
        let p = lx.len();
        assert!(nnz > 0);
        // Sparse-gradient contract used by the experiments: below 5% of p.
        assert!(
            (nnz as f64) < 0.05 * p as f64,
            "boundary pixels {nnz} vs 5% of {p}"
        );
    }
}
