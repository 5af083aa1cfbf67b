//! The recycled majorization-minimization generalized Krylov subspace solver.
//!
//! One call solves min_x ‖Ax - b‖² + λ‖L_eff x‖_q^q for a fixed effective
//! regularization operator. Each enlarge cycle runs `k_max - k_min` inner
//! steps of: residual gradient → basis expansion → parameter selection →
//! projected solve → majorization weight refresh. The basis is then
//! compressed back to `k_min` dominant directions and the current solution
//! direction is appended. Cycles repeat until the relative solution change
//! between consecutive inner steps drops below the tolerance or the global
//! iteration budget runs out. The compressed-and-appended basis is returned
//! for recycling.

use nalgebra::{DMatrix, DVector};

use crate::operators::LinearOperator;

use super::lambda::{
    select_lambda_discrepancy_proj, select_lambda_lcurve_proj, DEFAULT_LCURVE_GRID,
};
use super::log::{ConvergenceLog, ConvergenceRecord};
use super::projected::{basis_combination, scale_block_rows, ProjectedProblem};
use super::subspace::{ExpandOutcome, SubspaceState};
use super::weights::mm_weights;
use super::{ParamRule, SolverConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    /// Relative solution change between enlarge cycles fell below the
    /// tolerance.
    Converged,
    /// The shared inner-iteration budget ran out; the best iterate so far is
    /// returned.
    BudgetExhausted,
}

/// Shared bookkeeping across one solver run (and across the outer loop of the
/// cumulative driver): the convergence log, optional ground truth for RRE,
/// and the global iteration budget.
#[derive(Debug)]
pub struct RunContext<'a> {
    pub log: &'a mut ConvergenceLog,
    pub truth: Option<&'a DVector<f64>>,
    pub budget: usize,
    pub used: usize,
    pub outer_index: usize,
}

impl<'a> RunContext<'a> {
    pub fn new(log: &'a mut ConvergenceLog, truth: Option<&'a DVector<f64>>, budget: usize) -> Self {
        Self {
            log,
            truth,
            budget,
            used: 0,
            outer_index: 1,
        }
    }

    fn exhausted(&self) -> bool {
        self.used >= self.budget
    }

    fn record(&mut self, x: &DVector<f64>, residual_norm: f64, lambda: f64, dim: usize) {
        let rre = self.truth.map(|t| (x - t).norm() / t.norm());
        self.log.push(ConvergenceRecord {
            global_iter: self.used,
            outer_iter: self.outer_index,
            rre,
            residual_norm,
            lambda,
            subspace_dim: dim,
        });
    }
}

#[derive(Debug, Clone)]
pub struct GksOutcome {
    pub solution: DVector<f64>,
    pub lambda: f64,
    /// Compressed-and-appended basis for warm-starting the next solve.
    pub basis: Vec<DVector<f64>>,
    pub status: SolveStatus,
    /// Inner iterations consumed by this call.
    pub iterations: usize,
}

/// Caches A·V and L·V columns so each inner step pays one operator
/// application instead of `k`.
struct ProjectionCache {
    av: Vec<DVector<f64>>,
    lv: Vec<DVector<f64>>,
}

impl ProjectionCache {
    fn rebuild(a: &LinearOperator, l: &LinearOperator, basis: &[DVector<f64>]) -> Self {
        Self {
            av: basis.iter().map(|v| a.apply(v)).collect(),
            lv: basis.iter().map(|v| l.apply(v)).collect(),
        }
    }

    fn push(&mut self, a: &LinearOperator, l: &LinearOperator, v: &DVector<f64>) {
        self.av.push(a.apply(v));
        self.lv.push(l.apply(v));
    }

    fn blocks(&self, w: &DVector<f64>) -> (DMatrix<f64>, DMatrix<f64>) {
        let g_a = DMatrix::from_columns(&self.av);
        let g_l = scale_block_rows(&DMatrix::from_columns(&self.lv), w);
        (g_a, g_l)
    }
}

/// Runs the recycled solver for one effective regularization operator.
///
/// `v_init` must hold orthonormal columns (at least one); warm-started bases
/// may carry more than `k_min`. `delta` is the noise norm consumed by the
/// discrepancy rule.
pub fn rmm_gks(
    a: &LinearOperator,
    l_eff: &LinearOperator,
    b: &DVector<f64>,
    config: &SolverConfig,
    v_init: Vec<DVector<f64>>,
    delta: f64,
    ctx: &mut RunContext<'_>,
) -> GksOutcome {
    let n = a.cols();
    let k_min = config.k_min.min(n).max(1);
    let k_max = config.k_max.min(n).max(k_min);
    let steps_per_cycle = (k_max - k_min).max(1);

    let mut state = SubspaceState::new(
        v_init,
        n,
        mm_weights(&l_eff.apply(&DVector::zeros(n)), config.q, config.epsilon),
    );
    let mut cache = ProjectionCache::rebuild(a, l_eff, state.basis());
    let mut status = SolveStatus::BudgetExhausted;
    let start_used = ctx.used;

    while !ctx.exhausted() {
        let mut converged = false;
        for _ in 0..steps_per_cycle {
            if ctx.exhausted() {
                break;
            }
            let r = super::projected::residual_gradient(
                a,
                l_eff,
                b,
                &state.solution,
                state.lambda,
                &state.mm_weights,
            );
            if r.norm() > 0.0 {
                if let ExpandOutcome::Expanded = state.expand(&r) {
                    cache.push(a, l_eff, state.basis().last().expect("just expanded"));
                }
            }

            let (g_a, g_l) = cache.blocks(&state.mm_weights);
            let proj = ProjectedProblem::new(g_a, g_l, b);
            let selection = match config.param_rule {
                ParamRule::Discrepancy => select_lambda_discrepancy_proj(&proj, delta, config.tau),
                ParamRule::LCurve => select_lambda_lcurve_proj(&proj, DEFAULT_LCURVE_GRID),
            };
            state.lambda = selection.lambda;

            let sol = proj.solve(state.lambda);
            let next = basis_combination(state.basis(), &sol.z);
            let previous = std::mem::replace(&mut state.solution, next);
            state.mm_weights = mm_weights(&l_eff.apply(&state.solution), config.q, config.epsilon);
            state.inner_iter += 1;
            ctx.used += 1;
            ctx.record(&state.solution, sol.residual_norm, state.lambda, state.dim());

            // Step-to-step stagnation test; a zero previous iterate counts as
            // not converged.
            let prev_norm = previous.norm();
            if prev_norm > 0.0
                && (&state.solution - &previous).norm() / prev_norm < config.inner_tol
            {
                converged = true;
                status = SolveStatus::Converged;
                break;
            }
        }

        // Compress and append even on the way out, so the returned basis is
        // always in recycled form.
        let (g_a, g_l) = cache.blocks(&state.mm_weights);
        state.compress(&g_a, &g_l, state.lambda, k_min);
        state.append_solution_direction();
        if converged {
            break;
        }
        cache = ProjectionCache::rebuild(a, l_eff, state.basis());
    }

    GksOutcome {
        solution: state.solution.clone(),
        lambda: state.lambda,
        iterations: ctx.used - start_used,
        basis: state.into_basis(),
        status,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::build_gradient_1d;
    use crate::solver::subspace::{golub_kahan_basis, orthonormality_defect};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn well_conditioned_instance(
        rng: &mut ChaCha8Rng,
        n: usize,
    ) -> (LinearOperator, DVector<f64>, DVector<f64>) {
        let m = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0_f64..1.0))
            + DMatrix::identity(n, n) * 3.0;
        let x_true = DVector::from_fn(n, |i, _| if i < n / 2 { 1.0 } else { 0.2 });
        let b = &m * &x_true;
        (LinearOperator::from_dense(m), b, x_true)
    }

    #[test]
    fn noiseless_consistent_system_is_recovered() {
        let mut rng = ChaCha8Rng::seed_from_u64(71);
        let n = 10;
        let (a, b, x_true) = well_conditioned_instance(&mut rng, n);
        let l = build_gradient_1d(n).unwrap();
        let config = SolverConfig {
            q: 2.0,
            k_min: 3,
            k_max: 8,
            total_budget: 200,
            inner_tol: 1e-10,
            ..SolverConfig::default()
        };
        let v0 = golub_kahan_basis(&a, &b, 3, &mut rng);
        let mut log = ConvergenceLog::new();
        let mut ctx = RunContext::new(&mut log, Some(&x_true), config.total_budget);
        let out = rmm_gks(&a, l.operator(), &b, &config, v0, 0.0, &mut ctx);
        let rre = (&out.solution - &x_true).norm() / x_true.norm();
        assert!(rre < 1e-6, "rre = {rre}");
        assert!(orthonormality_defect(&out.basis) < 1e-10);
    }

    #[test]
    fn budget_is_respected_and_logged() {
        let mut rng = ChaCha8Rng::seed_from_u64(73);
        let (a, b, x_true) = well_conditioned_instance(&mut rng, 12);
        let l = build_gradient_1d(12).unwrap();
        let config = SolverConfig {
            k_min: 2,
            k_max: 6,
            total_budget: 7,
            inner_tol: 0.0,
            ..SolverConfig::default()
        };
        let v0 = golub_kahan_basis(&a, &b, 2, &mut rng);
        let mut log = ConvergenceLog::new();
        let mut ctx = RunContext::new(&mut log, Some(&x_true), config.total_budget);
        let out = rmm_gks(&a, l.operator(), &b, &config, v0, 0.0, &mut ctx);
        assert_eq!(out.status, SolveStatus::BudgetExhausted);
        assert_eq!(out.iterations, 7);
        assert_eq!(log.len(), 7);
        let iters: Vec<usize> = log.records().iter().map(|r| r.global_iter).collect();
        assert_eq!(iters, vec![1, 2, 3, 4, 5, 6, 7]);
    }

    /// Enlarging the subspace while λ and the weights stay fixed cannot raise
    /// the minimum of the weighted objective.
    #[test]
    fn surrogate_descent_under_expansion() {
        use crate::solver::projected::solve_projected;
        let mut rng = ChaCha8Rng::seed_from_u64(79);
        let n = 14;
        let a_mat = DMatrix::from_fn(16, n, |_, _| rng.gen_range(-1.0_f64..1.0));
        let a = LinearOperator::from_dense(a_mat.clone());
        let l = build_gradient_1d(n).unwrap();
        let b = DVector::from_fn(16, |_, _| rng.gen_range(-1.0_f64..1.0));
        let w = DVector::from_fn(n - 1, |_, _| rng.gen_range(0.5_f64..1.5));
        let lambda = 0.4;

        let objective = |x: &DVector<f64>| {
            let mut lx = l.apply(x);
            for i in 0..lx.len() {
                lx[i] *= w[i];
            }
            (a.apply(x) - &b).norm_squared() + lambda * lx.norm_squared()
        };

        let mut state = SubspaceState::new(
            golub_kahan_basis(&a, &b, 4, &mut rng),
            n,
            w.clone(),
        );
        let sol = solve_projected(&a, l.operator(), &b, state.basis(), &w, lambda);
        state.solution = basis_combination(state.basis(), &sol.z);
        let j_before = objective(&state.solution);

        let r = DVector::from_fn(n, |_, _| rng.gen_range(-1.0_f64..1.0));
        state.expand(&r);
        let sol2 = solve_projected(&a, l.operator(), &b, state.basis(), &w, lambda);
        let x2 = basis_combination(state.basis(), &sol2.z);
        let j_after = objective(&x2);
        assert!(
            j_after <= j_before + 1e-9 * j_before.abs().max(1.0),
            "objective rose: {j_before} -> {j_after}"
        );
    }
}
