//! Orthonormal solution subspaces with the enlarge/compress/append moves of
//! the recycling solver.

use nalgebra::{DMatrix, DVector};
use rand::Rng;

use crate::operators::LinearOperator;

/// Relative threshold below which a candidate direction counts as already
/// represented in the basis.
pub const REPRESENTED_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExpandOutcome {
    Expanded,
    /// The direction lies in the span of the current basis (its orthogonal
    /// component fell below `REPRESENTED_TOL` relative to its norm).
    AlreadyRepresented,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AppendOutcome {
    Appended,
    AlreadyRepresented,
    ZeroSolution,
}

/// Basis, iterate and weights carried through one recycled solve and across
/// outer iterations.
#[derive(Debug, Clone)]
pub struct SubspaceState {
    basis: Vec<DVector<f64>>,
    pub solution: DVector<f64>,
    pub lambda: f64,
    pub mm_weights: DVector<f64>,
    pub inner_iter: usize,
}

impl SubspaceState {
    pub fn new(basis: Vec<DVector<f64>>, n: usize, mm_weights: DVector<f64>) -> Self {
        debug_assert!(basis.iter().all(|v| v.len() == n));
        Self {
            basis,
            solution: DVector::zeros(n),
            lambda: 0.0,
            mm_weights,
            inner_iter: 0,
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[DVector<f64>] {
        &self.basis
    }

    pub fn into_basis(self) -> Vec<DVector<f64>> {
        self.basis
    }

    /// Orthogonalizes `r` against the basis (modified Gram-Schmidt with one
    /// reorthogonalization pass) and appends the normalized remainder.
    pub fn expand(&mut self, r: &DVector<f64>) -> ExpandOutcome {
        match orthogonal_complement(&self.basis, r) {
            Some(v) => {
                self.basis.push(v);
                ExpandOutcome::Expanded
            }
            None => ExpandOutcome::AlreadyRepresented,
        }
    }

    /// Appends the component of the current solution orthogonal to the basis.
    /// Right after a projected solve the solution lies in the span, so this
    /// only has an effect after compression changed the basis.
    pub fn append_solution_direction(&mut self) -> AppendOutcome {
        if self.solution.norm() == 0.0 {
            return AppendOutcome::ZeroSolution;
        }
        match orthogonal_complement(&self.basis, &self.solution) {
            Some(v) => {
                self.basis.push(v);
                AppendOutcome::Appended
            }
            None => AppendOutcome::AlreadyRepresented,
        }
    }

    /// Compresses the basis to the `k_min` right singular directions of the
    /// stacked projected matrix [G_A; √λ G_L], the directions carrying the
    /// most regularized-operator energy.
    pub fn compress(&mut self, g_a: &DMatrix<f64>, g_l: &DMatrix<f64>, lambda: f64, k_min: usize) {
        let k = self.basis.len();
        if k <= k_min {
            return;
        }
        let mut stacked = DMatrix::zeros(g_a.nrows() + g_l.nrows(), k);
        stacked.view_mut((0, 0), (g_a.nrows(), k)).copy_from(g_a);
        {
            let mut bottom = stacked.view_mut((g_a.nrows(), 0), (g_l.nrows(), k));
            bottom.copy_from(g_l);
            bottom.scale_mut(lambda.sqrt());
        }
        let svd = stacked.svd(false, true);
        let v_t = svd.v_t.expect("svd with right singular vectors");
        // Mix old columns: new_j = Σ_i basis_i · M[i, j], M = first k_min
        // right singular vectors.
        let n = self.basis[0].len();
        let mut new_basis = Vec::with_capacity(k_min);
        for j in 0..k_min {
            let mut col = DVector::zeros(n);
            for i in 0..k {
                col.axpy(v_t[(j, i)], &self.basis[i], 1.0);
            }
            new_basis.push(col);
        }
        reorthonormalize(&mut new_basis);
        self.basis = new_basis;
    }

    /// Operator-level compression: forms the stacked blocks from A and the
    /// (weighted) regularization operator before compressing.
    pub fn compress_with_operators(
        &mut self,
        a: &LinearOperator,
        l: &LinearOperator,
        w: &DVector<f64>,
        lambda: f64,
        k_min: usize,
    ) {
        if self.basis.len() <= k_min {
            return;
        }
        let g_a = super::projected::operator_times_basis(a, &self.basis);
        let g_l =
            super::projected::scale_block_rows(&super::projected::operator_times_basis(l, &self.basis), w);
        self.compress(&g_a, &g_l, lambda, k_min);
    }
}

/// MGS with one reorthogonalization pass; `None` when the remainder is below
/// `REPRESENTED_TOL` relative to the input norm.
fn orthogonal_complement(basis: &[DVector<f64>], r: &DVector<f64>) -> Option<DVector<f64>> {
    let r_norm = r.norm();
    if r_norm == 0.0 {
        return None;
    }
    let mut v = r.clone();
    for _ in 0..2 {
        for q in basis {
            let coeff = q.dot(&v);
            v.axpy(-coeff, q, 1.0);
        }
    }
    let v_norm = v.norm();
    if v_norm <= REPRESENTED_TOL * r_norm {
        None
    } else {
        Some(v / v_norm)
    }
}

/// Re-runs MGS over a whole set of near-orthonormal columns.
fn reorthonormalize(basis: &mut Vec<DVector<f64>>) {
    let mut out: Vec<DVector<f64>> = Vec::with_capacity(basis.len());
    for v in basis.iter() {
        if let Some(q) = orthogonal_complement(&out, v) {
            out.push(q);
        }
    }
    *basis = out;
}

/// Max-norm of VᵀV - I; the orthonormality defect of a basis.
pub fn orthonormality_defect(basis: &[DVector<f64>]) -> f64 {
    let k = basis.len();
    let mut defect = 0.0_f64;
    for i in 0..k {
        for j in i..k {
            let d = basis[i].dot(&basis[j]) - if i == j { 1.0 } else { 0.0 };
            defect = defect.max(d.abs());
        }
    }
    defect
}

/// Initial subspace from `k` Golub-Kahan bidiagonalization steps on (A, b):
/// the orthonormalized Krylov directions Aᵀb, (AᵀA)Aᵀb, ... with full
/// reorthogonalization. If the recurrence breaks down before `k` directions
/// exist (tiny problems), seeded random directions fill the remainder.
pub fn golub_kahan_basis(
    a: &LinearOperator,
    b: &DVector<f64>,
    k: usize,
    rng: &mut impl Rng,
) -> Vec<DVector<f64>> {
    let n = a.cols();
    let k = k.min(n);
    let mut us: Vec<DVector<f64>> = Vec::with_capacity(k + 1);
    let mut vs: Vec<DVector<f64>> = Vec::with_capacity(k);

    let b_norm = b.norm();
    if b_norm > 0.0 {
        us.push(b / b_norm);
        while vs.len() < k {
            let u_last = us.last().expect("nonempty u sequence");
            let cand = a.apply_transpose(u_last);
            match orthogonal_complement(&vs, &cand) {
                Some(v) => {
                    let next_u = a.apply(&v);
                    vs.push(v);
                    match orthogonal_complement(&us, &next_u) {
                        Some(u) => us.push(u),
                        None => break,
                    }
                }
                None => break,
            }
        }
    }
    // Breakdown padding keeps the contract of exactly k orthonormal columns.
    while vs.len() < k {
        let cand = DVector::from_fn(n, |_, _| rng.gen_range(-1.0_f64..1.0));
        if let Some(v) = orthogonal_complement(&vs, &cand) {
            vs.push(v);
        }
    }
    vs
}
