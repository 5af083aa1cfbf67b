//! Edge-preserving solvers for ill-posed linear inverse problems.
//!
//! The crate solves min_x ‖Ax - b‖² + λ‖D L x‖_q^q for 0 < q ≤ 2 by
//! combining three ingredients:
//!
//! - majorization-minimization, which turns the ℓq penalty into a sequence
//!   of weighted ℓ2 subproblems,
//! - a generalized Krylov subspace that is enlarged with residual-gradient
//!   directions, compressed back to its dominant directions by SVD, and
//!   recycled across solves, with the regularization parameter selected
//!   automatically on the small projected problem, and
//! - a cumulative edge-weight vector d ∈ [0,1]^p that shrinks
//!   multiplicatively wherever gradients are detected and never grows back,
//!   so edges found early stay protected from later smoothing.
//!
//! [`operators`] builds the forward models (Gaussian blur, fan-beam Radon)
//! and discrete gradients, [`problems`] the benchmark instances, [`solver`]
//! the numerical core, and [`methods`] exposes the solver variants behind a
//! name-resolved strategy trait.

pub mod io;
pub mod methods;
pub mod operators;
pub mod problems;
pub mod solver;
