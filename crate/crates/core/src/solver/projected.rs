//! The projected weighted Tikhonov subproblem over a subspace basis.
//!
//! With basis V, data-fit block G_A = A V and penalty block G_L = W L V, the
//! subproblem min_z ‖G_A z - b‖² + λ‖G_L z‖² is reduced once per basis by two
//! thin QR factorizations. Every λ evaluation afterwards only touches the
//! small stacked system [R_A; √λ R_L] z ≈ [Qᵀb; 0], which makes
//! discrepancy-principle bisection and L-curve sweeps cheap.

use nalgebra::{DMatrix, DVector};

use crate::operators::LinearOperator;

/// Residual gradient r = Aᵀ(Ax - b) + λ LᵀW²Lx, which equals one half the
/// gradient of ‖Ax - b‖² + λ‖WLx‖².
pub fn residual_gradient(
    a: &LinearOperator,
    l: &LinearOperator,
    b: &DVector<f64>,
    x: &DVector<f64>,
    lambda: f64,
    w: &DVector<f64>,
) -> DVector<f64> {
    let mut r = a.apply_transpose(&(a.apply(x) - b));
    if lambda != 0.0 {
        let mut lx = l.apply(x);
        for i in 0..lx.len() {
            lx[i] *= w[i] * w[i];
        }
        r += lambda * l.apply_transpose(&lx);
    }
    r
}

#[derive(Debug, Clone)]
pub struct ProjectedSolution {
    /// Coefficients of the solution in the basis: x = V z.
    pub z: DVector<f64>,
    /// Data residual norm ‖A V z - b‖₂.
    pub residual_norm: f64,
}

/// QR-reduced form of the projected subproblem for one fixed basis and one
/// fixed set of majorization weights.
#[derive(Debug, Clone)]
pub struct ProjectedProblem {
    r_a: DMatrix<f64>,
    r_l: DMatrix<f64>,
    c: DVector<f64>,
    /// ‖b‖² - ‖Qᵀb‖² over the thin Q of G_A: the part of the data residual no
    /// subspace coefficient can reach.
    offset_sq: f64,
    k: usize,
}

impl ProjectedProblem {
    /// Reduces the blocks G_A = A·V (m×k) and G_L = (W L)·V (p×k).
    pub fn new(g_a: DMatrix<f64>, g_l: DMatrix<f64>, b: &DVector<f64>) -> Self {
        let k = g_a.ncols();
        assert_eq!(g_l.ncols(), k);
        assert_eq!(g_a.nrows(), b.len());

        let m = g_a.nrows();
        let qr_a = g_a.qr();
        let mut qtb = b.clone();
        qr_a.q_tr_mul(&mut qtb);
        let ra_rows = m.min(k);
        let c = DVector::from_fn(ra_rows, |i, _| qtb[i]);
        let offset_sq: f64 = (ra_rows..m).map(|i| qtb[i] * qtb[i]).sum();

        let qr_l = g_l.qr();
        Self {
            r_a: qr_a.r(),
            r_l: qr_l.r(),
            c,
            offset_sq,
            k,
        }
    }

    pub fn dim(&self) -> usize {
        self.k
    }

    /// Solves the reduced problem at the given λ ≥ 0. Rank-deficient stacks
    /// (possible at λ = 0) fall back to the minimum-norm solution through the
    /// SVD's singular-value cutoff.
    pub fn solve(&self, lambda: f64) -> ProjectedSolution {
        assert!(lambda >= 0.0 && lambda.is_finite());
        let ra_rows = self.r_a.nrows();
        let rl_rows = self.r_l.nrows();
        let sqrt_lambda = lambda.sqrt();

        let mut stacked = DMatrix::zeros(ra_rows + rl_rows, self.k);
        stacked.view_mut((0, 0), (ra_rows, self.k)).copy_from(&self.r_a);
        if sqrt_lambda != 0.0 {
            let mut bottom = stacked.view_mut((ra_rows, 0), (rl_rows, self.k));
            bottom.copy_from(&self.r_l);
            bottom.scale_mut(sqrt_lambda);
        }
        let mut rhs = DVector::zeros(ra_rows + rl_rows);
        rhs.rows_mut(0, ra_rows).copy_from(&self.c);

        let svd = stacked.svd(true, true);
        let s_max = svd.singular_values.max();
        let eps = if s_max > 0.0 { s_max * 1e-13 } else { 1.0 };
        let z = svd
            .solve(&rhs, eps)
            .expect("svd solve on computed factors")
            .column(0)
            .into_owned();

        let fit = &self.r_a * &z - &self.c;
        let residual_norm = (fit.norm_squared() + self.offset_sq).sqrt();
        ProjectedSolution { z, residual_norm }
    }

    /// ‖A V z(λ) - b‖₂ as a function of λ; nondecreasing in λ.
    pub fn residual_norm(&self, lambda: f64) -> f64 {
        self.solve(lambda).residual_norm
    }

    /// Regularization seminorm ‖W L V z‖₂ for given coefficients.
    pub fn seminorm(&self, z: &DVector<f64>) -> f64 {
        (&self.r_l * z).norm()
    }
}

/// Builds the G_A block by applying `a` to each basis column.
pub fn operator_times_basis(a: &LinearOperator, basis: &[DVector<f64>]) -> DMatrix<f64> {
    let cols: Vec<DVector<f64>> = basis.iter().map(|v| a.apply(v)).collect();
    DMatrix::from_columns(&cols)
}

/// Scales the rows of a block by the majorization weights.
pub fn scale_block_rows(block: &DMatrix<f64>, w: &DVector<f64>) -> DMatrix<f64> {
    let mut out = block.clone();
    for r in 0..out.nrows() {
        out.row_mut(r).scale_mut(w[r]);
    }
    out
}

/// One-shot projected solve over an explicit orthonormal basis.
pub fn solve_projected(
    a: &LinearOperator,
    l: &LinearOperator,
    b: &DVector<f64>,
    basis: &[DVector<f64>],
    w: &DVector<f64>,
    lambda: f64,
) -> ProjectedSolution {
    let g_a = operator_times_basis(a, basis);
    let g_l = scale_block_rows(&operator_times_basis(l, basis), w);
    ProjectedProblem::new(g_a, g_l, b).solve(lambda)
}

/// Combines basis columns with coefficients: x = V z.
pub fn basis_combination(basis: &[DVector<f64>], z: &DVector<f64>) -> DVector<f64> {
    assert_eq!(basis.len(), z.len());
    let n = basis.first().map_or(0, |v| v.len());
    let mut x = DVector::zeros(n);
    for (v, &zi) in basis.iter().zip(z.iter()) {
        x.axpy(zi, v, 1.0);
    }
    x
}
