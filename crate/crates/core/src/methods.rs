//! Reconstruction methods behind a common trait, resolved by name.
//!
//! The method names mirror the benchmark variants: `l2` and `l1` are the
//! non-cumulative solvers with fixed penalty exponent, `cr-l2` and `cr-l1`
//! their cumulative counterparts, and `lq:<q>` / `cr-lq:<q>` expose the
//! general exponent. Names are resolved at runtime so front ends can select
//! a variant from configuration alone.

use nalgebra::DVector;
use thiserror::Error;

use crate::problems::InverseProblem;
use crate::solver::{cr_lq_rmm_gks, ConvergenceLog, CumulativeWeights, SolveStatus, SolverConfig};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MethodError {
    #[error("unknown method '{0}' (expected l2, l1, cr-l2, cr-l1, lq:<q> or cr-lq:<q>)")]
    UnknownMethod(String),
    #[error("method exponent must lie in (0, 2], got '{0}'")]
    InvalidExponent(String),
}

/// Everything a method run produces.
#[derive(Debug, Clone)]
pub struct MethodOutcome {
    pub method: String,
    pub solution: DVector<f64>,
    pub lambda: f64,
    pub log: ConvergenceLog,
    /// Final cumulative weights; `None` for non-cumulative methods, whose
    /// effective operator never changes.
    pub cumulative_weights: Option<CumulativeWeights>,
    pub status: SolveStatus,
    pub iterations: usize,
    pub final_rre: Option<f64>,
}

/// A named, interchangeable reconstruction strategy.
pub trait ReconstructionMethod: Send + Sync {
    /// Registry name, e.g. "cr-l1".
    fn id(&self) -> String;

    /// Penalty exponent the method runs with.
    fn q(&self) -> f64;

    /// Whether the method updates cumulative edge weights across outer
    /// iterations.
    fn cumulative(&self) -> bool;

    /// Runs the method on a problem instance. The configuration's `q` and
    /// `n_outer` are overridden by the method's own identity.
    fn run(&self, problem: &InverseProblem, config: &SolverConfig) -> MethodOutcome {
        let mut cfg = config.clone();
        cfg.q = self.q();
        if !self.cumulative() {
            cfg.n_outer = 1;
        }
        let out = cr_lq_rmm_gks(
            &problem.a,
            &problem.l,
            &problem.b,
            &cfg,
            problem.delta,
            problem.x_true.as_ref(),
            problem.seed,
        );
        let final_rre = problem.rre(&out.solution);
        MethodOutcome {
            method: self.id(),
            solution: out.solution,
            lambda: out.lambda,
            log: out.log,
            cumulative_weights: self.cumulative().then_some(out.weights),
            status: out.status,
            iterations: out.iterations,
            final_rre,
        }
    }
}

struct NonCumulativeLq {
    q: f64,
    name: Option<&'static str>,
}

impl ReconstructionMethod for NonCumulativeLq {
    fn id(&self) -> String {
        self.name.map(str::to_string).unwrap_or_else(|| format!("lq:{}", self.q))
    }

    fn q(&self) -> f64 {
        self.q
    }

    fn cumulative(&self) -> bool {
        false
    }
}

struct CumulativeLq {
    q: f64,
    name: Option<&'static str>,
}

impl ReconstructionMethod for CumulativeLq {
    fn id(&self) -> String {
        self.name.map(str::to_string).unwrap_or_else(|| format!("cr-lq:{}", self.q))
    }

    fn q(&self) -> f64 {
        self.q
    }

    fn cumulative(&self) -> bool {
        true
    }
}

/// The four named benchmark methods, in canonical table order.
pub const BUILTIN_METHOD_NAMES: [&str; 4] = ["l2", "l1", "cr-l2", "cr-l1"];

/// Instantiates the four named methods in canonical order.
pub fn builtin_methods() -> Vec<Box<dyn ReconstructionMethod>> {
    BUILTIN_METHOD_NAMES
        .iter()
        .map(|name| resolve(name).expect("builtin names resolve"))
        .collect()
}

/// Resolves a method by registry name.
pub fn resolve(name: &str) -> Result<Box<dyn ReconstructionMethod>, MethodError> {
    match name {
        "l2" => Ok(Box::new(NonCumulativeLq { q: 2.0, name: Some("l2") })),
        "l1" => Ok(Box::new(NonCumulativeLq { q: 1.0, name: Some("l1") })),
        "cr-l2" => Ok(Box::new(CumulativeLq { q: 2.0, name: Some("cr-l2") })),
        "cr-l1" => Ok(Box::new(CumulativeLq { q: 1.0, name: Some("cr-l1") })),
        _ => {
            if let Some(rest) = name.strip_prefix("cr-lq:") {
                let q = parse_exponent(rest)?;
                Ok(Box::new(CumulativeLq { q, name: None }))
            } else if let Some(rest) = name.strip_prefix("lq:") {
                let q = parse_exponent(rest)?;
                Ok(Box::new(NonCumulativeLq { q, name: None }))
            } else {
                Err(MethodError::UnknownMethod(name.to_string()))
            }
        }
    }
}

fn parse_exponent(text: &str) -> Result<f64, MethodError> {
    let q: f64 = text
        .parse()
        .map_err(|_| MethodError::InvalidExponent(text.to_string()))?;
    if q > 0.0 && q <= 2.0 {
        Ok(q)
    } else {
        Err(MethodError::InvalidExponent(text.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::{make_experiment, ExperimentId};

    #[test]
    fn builtin_names_resolve_with_expected_parameters() {
        let cases = [
            ("l2", 2.0, false),
            ("l1", 1.0, false),
            ("cr-l2", 2.0, true),
            ("cr-l1", 1.0, true),
        ];
        for (name, q, cumulative) in cases {
            let m = resolve(name).unwrap();
            assert_eq!(m.id(), name);
            assert_eq!(m.q(), q);
            assert_eq!(m.cumulative(), cumulative);
        }
    }

    #[test]
    fn parameterized_exponents() {
        let m = resolve("lq:0.5").unwrap();
        assert_eq!(m.q(), 0.5);
        assert!(!m.cumulative());
        let m = resolve("cr-lq:1.5").unwrap();
        assert_eq!(m.q(), 1.5);
        assert!(m.cumulative());

        assert!(matches!(resolve("lq:0"), Err(MethodError::InvalidExponent(_))));
        assert!(matches!(resolve("lq:2.1"), Err(MethodError::InvalidExponent(_))));
        assert!(matches!(resolve("ridge"), Err(MethodError::UnknownMethod(_))));
    }

    #[test]
    fn method_run_reports_consistent_outcome() {
        let problem = make_experiment(ExperimentId::Exp1, None, 3).unwrap();
        let config = SolverConfig {
            total_budget: 40,
            ..SolverConfig::default()
        };
        let out = resolve("l1").unwrap().run(&problem, &config);
        assert_eq!(out.method, "l1");
        assert!(out.iterations <= 40);
        assert_eq!(out.log.total_iterations(), out.iterations);
        assert_eq!(out.final_rre, out.log.final_rre());
        assert!(out.cumulative_weights.is_none());

        let out = resolve("cr-l1").unwrap().run(&problem, &config);
        assert!(out.cumulative_weights.is_some());
    }
}
