//! First-order finite difference operators with Neumann boundary conditions.
//!
//! The 2D operator stacks a horizontal-difference block over a vertical one,
//! equivalent to `[D_x ⊗ I; I ⊗ D_y]` acting on the column-major
//! vectorization of the image (see [`Grid2`]). Each block uses the square
//! n×n difference matrix whose last row is zero, so the stacked operator has
//! exactly `2·nx·ny` rows and annihilates constant images.

use nalgebra::DVector;

use super::linop::{LinearOperator, OperatorError};

/// Pixel indexing convention for 2D problems, fixed globally.
///
/// Images are vectorized column-major over an `nx × ny` grid: pixel
/// `(ix, iy)` maps to index `ix * ny + iy`, so the y index varies fastest.
/// Physical coordinates place the grid on `[-1, 1]²` with `ix` increasing
/// along +x and `iy` along +y.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Grid2 {
    pub nx: usize,
    pub ny: usize,
}

impl Grid2 {
    pub fn new(nx: usize, ny: usize) -> Self {
        Self { nx, ny }
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn index(&self, ix: usize, iy: usize) -> usize {
        debug_assert!(ix < self.nx && iy < self.ny);
        ix * self.ny + iy
    }

    /// Physical center of pixel `(ix, iy)` on the `[-1, 1]²` domain.
    #[inline]
    pub fn pixel_center(&self, ix: usize, iy: usize) -> (f64, f64) {
        let hx = 2.0 / self.nx as f64;
        let hy = 2.0 / self.ny as f64;
        (-1.0 + (ix as f64 + 0.5) * hx, -1.0 + (iy as f64 + 0.5) * hy)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GradientGeometry {
    OneD { n: usize },
    TwoD(Grid2),
}

/// A discrete gradient operator together with the geometry it acts on.
#[derive(Debug, Clone)]
pub struct GradientOperator {
    op: LinearOperator,
    geometry: GradientGeometry,
}

impl GradientOperator {
    pub fn operator(&self) -> &LinearOperator {
        &self.op
    }

    pub fn geometry(&self) -> GradientGeometry {
        self.geometry
    }

    pub fn rows(&self) -> usize {
        self.op.rows()
    }

    pub fn cols(&self) -> usize {
        self.op.cols()
    }

    pub fn apply(&self, x: &DVector<f64>) -> DVector<f64> {
        self.op.apply(x)
    }
}

/// (n-1)×n forward-difference matrix: row i maps x to x[i+1] - x[i].
pub fn build_gradient_1d(n: usize) -> Result<GradientOperator, OperatorError> {
    if n < 2 {
        return Err(OperatorError::InvalidDimension(format!(
            "1d gradient needs n >= 2, got {n}"
        )));
    }
    let rows: Vec<Vec<(usize, f64)>> = (0..n - 1)
        .map(|i| vec![(i, -1.0), (i + 1, 1.0)])
        .collect();
    Ok(GradientOperator {
        op: LinearOperator::from_rows_auto(n - 1, n, &rows),
        geometry: GradientGeometry::OneD { n },
    })
}

/// Stacked 2D gradient on the column-major grid: first `nx·ny` rows hold
/// horizontal differences, the next `nx·ny` vertical ones. Boundary rows
/// (last column for the horizontal block, last row of each column for the
/// vertical block) are zero.
pub fn build_gradient_2d(nx: usize, ny: usize) -> Result<GradientOperator, OperatorError> {
    if nx < 2 || ny < 2 {
        return Err(OperatorError::InvalidDimension(format!(
            "2d gradient needs nx, ny >= 2, got {nx}x{ny}"
        )));
    }
    let grid = Grid2::new(nx, ny);
    let p = grid.len();
    let mut rows: Vec<Vec<(usize, f64)>> = Vec::with_capacity(2 * p);
    // Horizontal block: difference along x at fixed y.
    for ix in 0..nx {
        for iy in 0..ny {
            if ix + 1 < nx {
                rows.push(vec![(grid.index(ix, iy), -1.0), (grid.index(ix + 1, iy), 1.0)]);
            } else {
                rows.push(Vec::new());
            }
        }
    }
    // Vertical block: difference along y at fixed x.
    for ix in 0..nx {
        for iy in 0..ny {
            if iy + 1 < ny {
                rows.push(vec![(grid.index(ix, iy), -1.0), (grid.index(ix, iy + 1), 1.0)]);
            } else {
                rows.push(Vec::new());
            }
        }
    }
    Ok(GradientOperator {
        op: LinearOperator::from_rows_auto(2 * p, p, &rows),
        geometry: GradientGeometry::TwoD(grid),
    })
}
