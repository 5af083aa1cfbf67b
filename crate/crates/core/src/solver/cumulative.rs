//! The cumulative reweighted outer driver.
//!
//! Outer iteration ℓ scales the gradient operator by the edge-memory vector,
//! L̃ = diag(d) L, solves the resulting ℓq problem with the recycled inner
//! solver warm-started from the previous basis, and then shrinks d from the
//! weighted gradient of the new solution. Weights only ever decrease, so
//! detected edges stay protected for the rest of the run.

use nalgebra::DVector;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::operators::{GradientOperator, LinearOperator};

use super::gks::{rmm_gks, GksOutcome, RunContext, SolveStatus};
use super::log::ConvergenceLog;
use super::subspace::golub_kahan_basis;
use super::weights::{CumulativeUpdateStatus, CumulativeWeights};
use super::SolverConfig;

#[derive(Debug, Clone)]
pub struct CrOutcome {
    pub solution: DVector<f64>,
    pub lambda: f64,
    pub log: ConvergenceLog,
    /// Final cumulative weights d.
    pub weights: CumulativeWeights,
    pub status: SolveStatus,
    /// Total inner iterations across all outer iterations.
    pub iterations: usize,
    /// Outer iterations actually executed.
    pub outer_iterations: usize,
    /// Outer iterations whose weight update was degenerate (flat iterate).
    pub degenerate_updates: usize,
}

/// Runs `config.n_outer` outer iterations (or until the shared budget is
/// exhausted). With `n_outer = 1` the weights never update and the run is
/// identical to a single plain inner solve with L_eff = L.
///
/// The global iteration budget is rationed evenly across the outer
/// iterations: each inner solve may use at most `total_budget / n_outer`
/// steps (at least one enlarge cycle) before the next weight update, unless
/// it converges earlier. Unused slices roll over, and the total never
/// exceeds `total_budget`. This keeps weight updates distributed over the
/// whole run instead of letting a slowly-stagnating first solve starve all
/// later ones.
pub fn cr_lq_rmm_gks(
    a: &LinearOperator,
    l: &GradientOperator,
    b: &DVector<f64>,
    config: &SolverConfig,
    delta: f64,
    truth: Option<&DVector<f64>>,
    seed: u64,
) -> CrOutcome {
    config.validate().expect("solver configuration is valid");
    assert!(config.n_outer >= 1, "need at least one outer iteration");

    let p = l.rows();
    let mut weights = CumulativeWeights::ones(p);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k_min = config.k_min.min(a.cols()).max(1);
    let mut basis = golub_kahan_basis(a, b, k_min, &mut rng);

    let mut log = ConvergenceLog::new();
    let mut ctx = RunContext::new(&mut log, truth, config.total_budget);
    let mut solution = DVector::zeros(a.cols());
    let mut lambda = 0.0;
    let mut status = SolveStatus::BudgetExhausted;
    let mut outer_done = 0;
    let mut degenerate = 0;

    let slice = (config.total_budget / config.n_outer).max(1);
    for outer in 1..=config.n_outer {
        ctx.outer_index = outer;
        // Ration the remaining budget: later outers may reuse steps earlier
        // ones left unused, but no outer may push past the global cap.
        let remaining_outers = config.n_outer - outer + 1;
        let fair_share = ((config.total_budget - ctx.used) / remaining_outers).max(slice);
        ctx.budget = (ctx.used + fair_share).min(config.total_budget);
        // On the first pass d is all ones; scaling by exactly 1.0 keeps the
        // operator bit-identical to L.
        let l_eff = l.operator().scaled_rows(weights.values());
        let GksOutcome {
            solution: x,
            lambda: lam,
            basis: recycled,
            status: inner_status,
            ..
        } = rmm_gks(a, &l_eff, b, config, basis, delta, &mut ctx);
        solution = x;
        lambda = lam;
        basis = recycled;
        status = inner_status;
        outer_done = outer;

        if outer < config.n_outer {
            let weighted_gradient = l_eff.apply(&solution);
            if weights.update(&weighted_gradient, config.s) == CumulativeUpdateStatus::Degenerate {
                degenerate += 1;
            }
        }
        if ctx.used >= config.total_budget {
            break;
        }
    }
    if ctx.used >= config.total_budget {
        status = SolveStatus::BudgetExhausted;
    }

    let iterations = ctx.used;
    CrOutcome {
        solution,
        lambda,
        log,
        weights,
        status,
        iterations,
        outer_iterations: outer_done,
        degenerate_updates: degenerate,
    }
}
