//! Stable derivative estimation from noisy point queries.
//!
//! The estimator is the plain central difference at the policy step:
//! `f_j = (f_noisy(x+h) - f_noisy(x-h)) / (2h)`. On any interval
//! `(x-h, x+h)` free of discontinuities the error splits into noise
//! amplification `delta/h` and a truncation term `m2*h/2`, so with the
//! policy step the total is at most `epsilon = sqrt(2*m2*delta)`. The
//! estimate is computed at every grid node regardless of discontinuities;
//! masking contaminated nodes is the detector's job (it needs the blown-up
//! values at jumps to find them).

use crate::model::{DetectionGrid, SignalSource, SmoothnessKind, StepPolicy};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DiffError {
    #[error("abscissa {x} with step {h} leaves [0,1]")]
    OutOfDomain { x: f64, h: f64 },
}

/// One derivative estimate: `value` approximates `f'(x)` with worst-case
/// error `bound` whenever `(x-h, x+h)` contains no discontinuity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivativeEstimate {
    pub x: f64,
    pub value: f64,
    pub bound: f64,
}

/// Central difference of the noisy signal at `x` with half-width `h`.
pub fn central_difference<S: SignalSource + ?Sized>(
    src: &S,
    x: f64,
    h: f64,
) -> Result<f64, DiffError> {
    if !h.is_finite() || h <= 0.0 || x - h < -1e-12 || x + h > 1.0 + 1e-12 {
        return Err(DiffError::OutOfDomain { x, h });
    }
    Ok((src.eval(x + h) - src.eval(x - h)) / (2.0 * h))
}

/// One estimate per grid node, in index order.
///
/// The `bound` field is [`error_bound`] of the policy; it presumes the grid
/// step matches the policy (the detection step for smooth/fractional, the
/// slope step for linear) and is only valid at nodes whose interval avoids
/// every discontinuity; the detector masks the rest.
pub fn derivative_table<S: SignalSource + ?Sized>(
    src: &S,
    grid: &DetectionGrid,
    policy: &StepPolicy,
) -> Vec<DerivativeEstimate> {
    let bound = error_bound(policy);
    grid.nodes()
        .map(|j| {
            let x = grid.node_x(j);
            let value = (src.eval(x + grid.h()) - src.eval(x - grid.h())) / (2.0 * grid.h());
            DerivativeEstimate { x, value, bound }
        })
        .collect()
}

/// Guaranteed sup-norm error of the derivative estimate on the warranted
/// sub-domain.
///
/// * smooth: `sqrt(2*m2*delta)`
/// * fractional: `a * ma^(1/a) * (2/(a-1))^((a-1)/a) * delta^((a-1)/a)`
/// * linear: `delta / slope_step = m1/t` (pure noise term; there is no
///   truncation term to balance, and the slope step is the wide one)
pub fn error_bound(policy: &StepPolicy) -> f64 {
    match policy.class().kind() {
        SmoothnessKind::Smooth { .. } | SmoothnessKind::Fractional { .. } => policy.epsilon(),
        SmoothnessKind::Linear { .. } => {
            let hs = policy.slope_step().expect("linear policy has a slope step");
            policy.delta() / hs
        }
    }
}
