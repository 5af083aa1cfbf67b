//! Construction and application of the linear operators used by the solvers:
//! dense and CSR matrices, 1D/2D discrete gradients, Gaussian blur matrices,
//! and fan-beam Radon matrices.
//!
//! Operators are immutable after construction and safe to apply concurrently.

mod blur;
mod gradient;
mod linop;
mod radon;

pub use blur::build_gaussian_blur;
pub use gradient::{build_gradient_1d, build_gradient_2d, GradientGeometry, GradientOperator, Grid2};
pub use linop::{CsrMatrix, LinearOperator, MatrixStorage, OperatorError, DENSE_ENTRY_BUDGET};
pub use radon::{build_radon_fanbeam, equidistant_angles, trace_ray, TraceDomain};
