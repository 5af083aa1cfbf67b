//! Calibrated additive Gaussian noise.

use nalgebra::DVector;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::ProblemError;

/// Adds white Gaussian noise rescaled so the realized noise norm is exactly
/// `level * ‖clean‖₂`: draws g from a seeded standard normal stream and
/// returns b = clean + level·‖clean‖·g/‖g‖ together with delta = level·‖clean‖.
///
/// The generator is ChaCha8 keyed by the 64-bit seed, so runs are
/// reproducible across platforms.
pub fn add_noise(
    clean: &DVector<f64>,
    level: f64,
    seed: u64,
) -> Result<(DVector<f64>, f64), ProblemError> {
    if level < 0.0 || !level.is_finite() {
        return Err(ProblemError::InvalidNoiseLevel(level));
    }
    if level == 0.0 {
        return Ok((clean.clone(), 0.0));
    }
    let norm = clean.norm();
    if norm == 0.0 {
        return Err(ProblemError::ZeroSignal);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = DVector::from_fn(clean.len(), |_, _| {
        let v: f64 = StandardNormal.sample(&mut rng);
        v
    });
    let g_norm = g.norm();
    debug_assert!(g_norm > 0.0);
    g /= g_norm;
    let delta = level * norm;
    Ok((clean + delta * &g, delta))
}
