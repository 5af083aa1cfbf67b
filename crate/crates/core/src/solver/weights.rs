//! Majorization weights and the cumulative edge-memory vector.

use nalgebra::DVector;

/// Diagonal majorization weights w_i = (|Lx|_i² + ε²)^((q-2)/2).
///
/// For q = 2 the exponent is zero and every weight is exactly one; for q = 1
/// small gradients receive large penalties and large gradients small ones,
/// which is what makes the ℓ1 surrogate sparsity-promoting. ε > 0 keeps the
/// weights finite at exact zeros of Lx.
pub fn mm_weights(lx: &DVector<f64>, q: f64, epsilon: f64) -> DVector<f64> {
    debug_assert!(epsilon > 0.0, "mm weights need epsilon > 0");
    debug_assert!(q > 0.0 && q <= 2.0, "mm weights need q in (0, 2]");
    // hypot keeps |Lx|² + ε² from overflowing before the root is taken.
    DVector::from_fn(lx.len(), |i, _| lx[i].hypot(epsilon).powf(q - 2.0))
}

/// Outcome of a cumulative weight update.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CumulativeUpdateStatus {
    Updated,
    /// The weighted gradient was identically zero; the weights were left
    /// unchanged because a flat iterate carries no edge information.
    Degenerate,
}

/// The edge-memory vector d ∈ [0,1]^p multiplying the gradient operator.
///
/// Each update normalizes the weighted gradient magnitude to g ∈ [0,1] by its
/// max and shrinks d multiplicatively: d ← d ∘ (1-g)^s. Entries only ever
/// decrease, so a detected edge stays protected in every later iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct CumulativeWeights {
    d: DVector<f64>,
}

impl CumulativeWeights {
    pub fn ones(p: usize) -> Self {
        Self {
            d: DVector::from_element(p, 1.0),
        }
    }

    pub fn values(&self) -> &DVector<f64> {
        &self.d
    }

    pub fn len(&self) -> usize {
        self.d.len()
    }

    pub fn is_empty(&self) -> bool {
        self.d.len() == 0
    }

    /// Applies d ← d ∘ (1 - |v|/‖v‖_∞)^s for the weighted gradient v = DLx.
    pub fn update(&mut self, weighted_gradient: &DVector<f64>, s: f64) -> CumulativeUpdateStatus {
        assert_eq!(weighted_gradient.len(), self.d.len());
        assert!(s > 0.0, "cumulative exponent s must be positive");
        let max = weighted_gradient.amax();
        if max == 0.0 || !max.is_finite() {
            return CumulativeUpdateStatus::Degenerate;
        }
        for i in 0..self.d.len() {
            let g = weighted_gradient[i].abs() / max;
            self.d[i] *= (1.0 - g).powf(s);
        }
        CumulativeUpdateStatus::Updated
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q2_weights_are_exactly_one() {
        let lx = DVector::from_vec(vec![0.0, -3.7, 1e8, 1e-12]);
        let w = mm_weights(&lx, 2.0, 0.1);
        for i in 0..w.len() {
            assert_eq!(w[i], 1.0);
        }
    }

    #[test]
    fn q1_zero_gradient_gives_one_over_epsilon() {
        let lx = DVector::from_vec(vec![0.0]);
        let w = mm_weights(&lx, 1.0, 0.1);
        assert!((w[0] - 10.0).abs() < 1e-12);
    }

    #[test]
    fn q1_formula_value() {
        // (|3|² + (1e-4)²)^(-1/2), evaluated independently.
        let lx = DVector::from_vec(vec![3.0]);
        let w = mm_weights(&lx, 1.0, 1e-4);
        let oracle = (9.0_f64 + 1e-8).powf(-0.5);
        assert!((w[0] - oracle).abs() < 1e-15);
        assert!((w[0] - 1.0 / 3.0).abs() < 1e-9);
    }

    #[test]
    fn weights_positive_and_finite() {
        let lx = DVector::from_vec(vec![0.0, 1e150, -1e150, 42.0]);
        for q in [0.1, 0.5, 1.0, 1.7, 2.0] {
            let w = mm_weights(&lx, q, 1e-4);
            for i in 0..w.len() {
                assert!(w[i] > 0.0 && w[i].is_finite(), "q={q}, i={i}: {}", w[i]);
            }
        }
    }

    #[test]
    fn cumulative_update_hand_evaluated() {
        // d = (1,1,1), v = (2,4,1), s = 1: g = (0.5, 1, 0.25), d' = (0.5, 0, 0.75).
        let mut d = CumulativeWeights::ones(3);
        let v = DVector::from_vec(vec![2.0, 4.0, 1.0]);
        assert_eq!(d.update(&v, 1.0), CumulativeUpdateStatus::Updated);
        let got = d.values();
        assert!((got[0] - 0.5).abs() < 1e-15);
        assert_eq!(got[1], 0.0);
        assert!((got[2] - 0.75).abs() < 1e-15);
    }

    #[test]
    fn max_entry_locks_to_zero_and_zero_entries_keep_weight() {
        let mut d = CumulativeWeights::ones(4);
        let v = DVector::from_vec(vec![0.0, 0.0, 5.0, 0.0]);
        d.update(&v, 2.5);
        assert_eq!(d.values()[2], 0.0);
        for i in [0usize, 1, 3] {
            assert_eq!(d.values()[i], 1.0);
        }
    }

    #[test]
    fn degenerate_update_leaves_weights() {
        let mut d = CumulativeWeights::ones(3);
        let before = d.clone();
        let status = d.update(&DVector::zeros(3), 1.0);
        assert_eq!(status, CumulativeUpdateStatus::Degenerate);
        assert_eq!(d, before);
    }

    #[test]
    fn updates_are_monotone_and_bounded() {
        let mut d = CumulativeWeights::ones(5);
        let mut prev = d.values().clone();
        for round in 0..20 {
            let v = DVector::from_fn(5, |i, _| ((i + round) as f64 * 0.7).sin().abs() + 0.01);
            d.update(&v, 1.0);
            for i in 0..5 {
                assert!(d.values()[i] <= prev[i] + 1e-15);
                assert!((0.0..=1.0).contains(&d.values()[i]));
            }
            prev = d.values().clone();
        }
    }
}
