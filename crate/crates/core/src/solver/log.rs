//! Per-iteration convergence records and their CSV export.

use std::io::{self, Write};

/// One inner-iteration snapshot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRecord {
    /// 1-based count of inner iterations across the whole run.
    pub global_iter: usize,
    /// 1-based outer (cumulative reweighting) iteration this step belongs to.
    pub outer_iter: usize,
    /// Relative reconstruction error, when ground truth is known.
    pub rre: Option<f64>,
    /// Data residual norm ‖A V z - b‖₂ of the projected solve.
    pub residual_norm: f64,
    pub lambda: f64,
    pub subspace_dim: usize,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConvergenceLog {
    records: Vec<ConvergenceRecord>,
}

impl ConvergenceLog {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, record: ConvergenceRecord) {
        if let Some(last) = self.records.last() {
            debug_assert!(
                record.global_iter > last.global_iter,
                "global iteration index must be strictly increasing"
            );
        }
        self.records.push(record);
    }

    pub fn records(&self) -> &[ConvergenceRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn final_rre(&self) -> Option<f64> {
        self.records.last().and_then(|r| r.rre)
    }

    pub fn total_iterations(&self) -> usize {
        self.records.last().map_or(0, |r| r.global_iter)
    }

    /// First global iteration whose RRE is within `fraction` of the final
    /// RRE, i.e. rre ≤ (1 + fraction) · rre_final. Captures how quickly a
    /// method reaches its eventual accuracy.
    pub fn iters_to_within_fraction_of_final(&self, fraction: f64) -> Option<usize> {
        let last = self.final_rre()?;
        let threshold = (1.0 + fraction) * last;
        self.records
            .iter()
            .find(|r| r.rre.is_some_and(|v| v <= threshold))
            .map(|r| r.global_iter)
    }

    pub fn write_csv<W: Write>(&self, w: &mut W) -> io::Result<()> {
        writeln!(w, "iter,outer,rre,resnorm,lambda,subdim")?;
        for r in &self.records {
            let rre = r.rre.map(|v| v.to_string()).unwrap_or_default();
            writeln!(
                w,
                "{},{},{},{},{},{}",
                r.global_iter, r.outer_iter, rre, r.residual_norm, r.lambda, r.subspace_dim
            )?;
        }
        Ok(())
    }
}
