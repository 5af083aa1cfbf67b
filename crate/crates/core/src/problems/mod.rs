//! Ground-truth phantoms, forward-data synthesis with calibrated noise, and
//! assembly of the benchmark experiment instances.

mod noise;
mod phantoms;

pub use noise::add_noise;
pub use phantoms::{phantom_layered, phantom_piecewise_1d, phantom_shepp_logan};

use nalgebra::DVector;
use thiserror::Error;

use crate::operators::{
    build_gaussian_blur, build_gradient_1d, build_gradient_2d, build_radon_fanbeam,
    equidistant_angles, GradientOperator, LinearOperator, OperatorError,
};

#[derive(Debug, Error)]
pub enum ProblemError {
    #[error("unknown experiment id '{0}' (expected exp1, exp2 or exp3)")]
    UnknownExperiment(String),
    #[error("scale must be at least 16, got {0}")]
    ScaleTooSmall(usize),
    #[error("noise level must be a finite nonnegative number, got {0}")]
    InvalidNoiseLevel(f64),
    #[error("cannot add relative noise to an identically zero signal")]
    ZeroSignal,
    #[error(transparent)]
    Operator(#[from] OperatorError),
}

/// Shape of the data vector b, used for exports.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DataShape {
    Vector,
    /// Fan-beam sinogram: one row of detector readings per angle.
    Sinogram { angles: usize, detectors: usize },
}

/// A fully assembled inverse problem instance.
#[derive(Debug, Clone)]
pub struct InverseProblem {
    pub a: LinearOperator,
    pub b: DVector<f64>,
    pub l: GradientOperator,
    pub x_true: Option<DVector<f64>>,
    /// Exact noise norm ‖η‖₂.
    pub delta: f64,
    /// Relative noise level ‖η‖₂ / ‖A x_true‖₂.
    pub noise_level: f64,
    pub seed: u64,
    pub data_shape: DataShape,
}

impl InverseProblem {
    pub fn rre(&self, x: &DVector<f64>) -> Option<f64> {
        self.x_true.as_ref().map(|t| (x - t).norm() / t.norm())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExperimentId {
    /// 1D deblurring of a piecewise-constant signal, n = 200, 1% noise.
    Exp1,
    /// Sparse-angle fan-beam tomography of the head phantom: 30 angles over
    /// 180°, 181 detectors, 1% noise, default grid 128.
    Exp2,
    /// Limited-angle fan-beam tomography of the layered phantom: 60 angles
    /// over [0°, 60°), 91 detectors, 0.5% noise, default grid 64.
    Exp3,
}

impl ExperimentId {
    pub fn as_str(&self) -> &'static str {
        match self {
            ExperimentId::Exp1 => "exp1",
            ExperimentId::Exp2 => "exp2",
            ExperimentId::Exp3 => "exp3",
        }
    }

    pub const ALL: [ExperimentId; 3] = [ExperimentId::Exp1, ExperimentId::Exp2, ExperimentId::Exp3];
}

impl std::str::FromStr for ExperimentId {
    type Err = ProblemError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "exp1" => Ok(ExperimentId::Exp1),
            "exp2" => Ok(ExperimentId::Exp2),
            "exp3" => Ok(ExperimentId::Exp3),
            other => Err(ProblemError::UnknownExperiment(other.to_string())),
        }
    }
}

impl std::fmt::Display for ExperimentId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Default blur width for the 1D deblurring experiment; the kernel halfwidth
/// is 4σ rounded up.
pub const EXP1_BLUR_SIGMA: f64 = 2.0;
pub const EXP2_DETECTORS: usize = 181;
pub const EXP3_DETECTORS: usize = 91;

/// Assembles one of the three benchmark instances. `scale` overrides the
/// default grid size of the 2D experiments (the 1D experiment is fixed at
/// n = 200); it must be at least 16.
pub fn make_experiment(
    id: ExperimentId,
    scale: Option<usize>,
    seed: u64,
) -> Result<InverseProblem, ProblemError> {
    if let Some(s) = scale {
        if s < 16 {
            return Err(ProblemError::ScaleTooSmall(s));
        }
    }
    match id {
        ExperimentId::Exp1 => {
            let n = 200;
            let halfwidth = (4.0 * EXP1_BLUR_SIGMA).ceil() as usize;
            let a = build_gaussian_blur(n, EXP1_BLUR_SIGMA, halfwidth)?;
            let l = build_gradient_1d(n)?;
            let x_true = phantom_piecewise_1d(n);
            assemble(a, l, x_true, 0.01, seed, DataShape::Vector)
        }
        ExperimentId::Exp2 => {
            let n = scale.unwrap_or(128);
            let angles = equidistant_angles(0.0, 180.0, 30);
            let a = build_radon_fanbeam(n, n, &angles, EXP2_DETECTORS)?;
            let l = build_gradient_2d(n, n)?;
            let x_true = phantom_shepp_logan(n);
            assemble(
                a,
                l,
                x_true,
                0.01,
                seed,
                DataShape::Sinogram { angles: 30, detectors: EXP2_DETECTORS },
            )
        }
        ExperimentId::Exp3 => {
            let n = scale.unwrap_or(64);
            let angles = equidistant_angles(0.0, 60.0, 60);
            let a = build_radon_fanbeam(n, n, &angles, EXP3_DETECTORS)?;
            let l = build_gradient_2d(n, n)?;
            let x_true = phantom_layered(n);
            assemble(
                a,
                l,
                x_true,
                0.005,
                seed,
                DataShape::Sinogram { angles: 60, detectors: EXP3_DETECTORS },
            )
        }
    }
}

fn assemble(
    a: LinearOperator,
    l: GradientOperator,
    x_true: DVector<f64>,
    noise_level: f64,
    seed: u64,
    data_shape: DataShape,
) -> Result<InverseProblem, ProblemError> {
    let clean = a.apply(&x_true);
    let (b, delta) = add_noise(&clean, noise_level, seed)?;
    Ok(InverseProblem {
        a,
        b,
        l,
        x_true: Some(x_true),
        delta,
        noise_level,
        seed,
        data_shape,
    })
}
