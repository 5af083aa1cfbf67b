//! The recycled ℓq solver stack: majorization weights, projected subproblems,
//! automatic parameter selection, subspace recycling, and the cumulative
//! reweighted outer loop.

mod cumulative;
mod gks;
mod lambda;
mod log;
mod projected;
mod subspace;
mod weights;

pub use cumulative::{cr_lq_rmm_gks, CrOutcome};
pub use gks::{rmm_gks, GksOutcome, RunContext, SolveStatus};
pub use lambda::{
    max_curvature_index, select_lambda_discrepancy, select_lambda_discrepancy_proj,
    select_lambda_lcurve, select_lambda_lcurve_proj, LambdaSelection, LambdaStatus,
    DEFAULT_LCURVE_GRID, DISCREPANCY_REL_TOL, LOG_LAMBDA_MAX, LOG_LAMBDA_MIN,
};
pub use log::{ConvergenceLog, ConvergenceRecord};
pub use projected::{
    basis_combination, operator_times_basis, residual_gradient, scale_block_rows, solve_projected,
    ProjectedProblem, ProjectedSolution,
};
pub use subspace::{
    golub_kahan_basis, orthonormality_defect, AppendOutcome, ExpandOutcome, SubspaceState,
    REPRESENTED_TOL,
};
pub use weights::{mm_weights, CumulativeUpdateStatus, CumulativeWeights};

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConfigError {
    #[error("q must lie in (0, 2], got {0}")]
    InvalidQ(String),
    #[error("subspace bounds must satisfy 1 <= k_min < k_max, got k_min={0}, k_max={1}")]
    InvalidSubspaceBounds(usize, usize),
    #[error("epsilon must be positive, got {0}")]
    InvalidEpsilon(String),
    #[error("cumulative exponent s must be positive, got {0}")]
    InvalidS(String),
    #[error("discrepancy safety factor tau must be >= 1, got {0}")]
    InvalidTau(String),
    #[error("need at least one outer iteration")]
    InvalidOuterCount,
}

/// Regularization-parameter selection rule for the projected subproblems.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ParamRule {
    #[default]
    Discrepancy,
    LCurve,
}

impl std::str::FromStr for ParamRule {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "discrepancy" => Ok(ParamRule::Discrepancy),
            "lcurve" => Ok(ParamRule::LCurve),
            other => Err(format!("unknown parameter rule '{other}' (expected 'discrepancy' or 'lcurve')")),
        }
    }
}

/// All solver knobs with their standard defaults.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    /// Penalty exponent, 0 < q <= 2.
    pub q: f64,
    /// Compressed subspace dimension.
    pub k_min: usize,
    /// Maximum subspace dimension per enlarge cycle.
    pub k_max: usize,
    /// Majorization smoothing, keeps weights finite at zero gradients.
    pub epsilon: f64,
    /// Cumulative weighting exponent.
    pub s: f64,
    /// Maximum outer (cumulative) iterations.
    pub n_outer: usize,
    /// Relative solution-change tolerance between enlarge cycles.
    pub inner_tol: f64,
    /// Global cap on inner iterations summed across all outer iterations.
    pub total_budget: usize,
    /// Discrepancy safety factor.
    pub tau: f64,
    pub param_rule: ParamRule,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            q: 1.0,
            k_min: 5,
            k_max: 25,
            epsilon: 1e-4,
            s: 1.0,
            n_outer: 30,
            inner_tol: 1e-5,
            total_budget: 600,
            tau: 1.01,
            param_rule: ParamRule::Discrepancy,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(self.q > 0.0 && self.q <= 2.0) {
            return Err(ConfigError::InvalidQ(self.q.to_string()));
        }
        if self.k_min < 1 || self.k_min >= self.k_max {
            return Err(ConfigError::InvalidSubspaceBounds(self.k_min, self.k_max));
        }
        if !(self.epsilon > 0.0) {
            return Err(ConfigError::InvalidEpsilon(self.epsilon.to_string()));
        }
        if !(self.s > 0.0) {
            return Err(ConfigError::InvalidS(self.s.to_string()));
        }
        if !(self.tau >= 1.0) {
            return Err(ConfigError::InvalidTau(self.tau.to_string()));
        }
        if self.n_outer < 1 {
            return Err(ConfigError::InvalidOuterCount);
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_config_is_valid() {
        assert!(SolverConfig::default().validate().is_ok());
    }

    #[test]
    fn invalid_configs_are_rejected() {
        let base = SolverConfig::default();
        assert!(SolverConfig { q: 0.0, ..base.clone() }.validate().is_err());
        assert!(SolverConfig { q: 2.5, ..base.clone() }.validate().is_err());
        assert!(SolverConfig { k_min: 9, k_max: 9, ..base.clone() }.validate().is_err());
        assert!(SolverConfig { epsilon: 0.0, ..base.clone() }.validate().is_err());
        assert!(SolverConfig { tau: 0.9, ..base.clone() }.validate().is_err());
        assert!(SolverConfig { n_outer: 0, ..base }.validate().is_err());
    }

    #[test]
    fn param_rule_parsing() {
        assert_eq!("discrepancy".parse::<ParamRule>().unwrap(), ParamRule::Discrepancy);
        assert_eq!("lcurve".parse::<ParamRule>().unwrap(), ParamRule::LCurve);
        assert!("corner".parse::<ParamRule>().is_err());
    }
}
