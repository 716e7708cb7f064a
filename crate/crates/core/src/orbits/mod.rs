//! Real orbits of ζ_λ: iteration with termination bookkeeping, limit
//! classification, Lyapunov exponents, cobweb paths and bifurcation sweeps.

mod bifurcation;
mod cobweb;
mod limit;
mod lyapunov;

pub use bifurcation::{bifurcation_sweep, BifurcationRecord};
pub use cobweb::{cobweb, CobwebPath};
pub use limit::{classify_limit, LimitClassifier, LimitOutcome};
pub use lyapunov::{lyapunov, lyapunov_sweep, LyapunovEstimate};

use crate::error::{DynamicsError, Result};
use crate::fixed_points::{nonzero_fixed_point, DEFAULT_ROOT_TOL};
use crate::map::{critical_point_positive, map_real, Parameter, Regime, DELTA_POLE};

/// Step size below which an orbit near a hyperbolic attractor is converged.
pub const EPS_CONV: f64 = 1e-9;

/// Distance to a hyperbolic attracting fixed point required for convergence.
pub const CAPTURE_RADIUS: f64 = 1e-6;

/// Per-point distance for convergence onto an attracting cycle.
pub const CYCLE_EPS: f64 = 1e-7;

/// |x| beyond this counts as escape.
pub const M_ESCAPE: f64 = 1e8;

/// Relaxed step tolerance at the indifferent fixed points (λ = 1, λ = λ*).
/// Measured over one return of the local map: one step when the multiplier
/// is +1, two steps when it is −1.
pub const EPS_RELAXED: f64 = 1e-5;

/// Capture radius at an indifferent fixed point, ∛EPS_RELAXED.
pub fn parabolic_capture_radius() -> f64 {
    EPS_RELAXED.cbrt()
}

/// Longest period probed when looking for attracting cycles.
pub const MAX_ATTRACTOR_PERIOD: usize = 8;

/// Step budget used by callers at the indifferent parameters.
pub const INDIFFERENT_MAX_STEPS: usize = 1_000_000;

/// How orbit seeds are chosen.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum SeedRule {
    /// The positive critical point (−1 + √5)/2.
    #[default]
    CriticalPoint,
    FixedSeed(f64),
}

impl SeedRule {
    pub fn seed(self) -> f64 {
        match self {
            SeedRule::CriticalPoint => critical_point_positive(),
            SeedRule::FixedSeed(x) => x,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Termination {
    /// `samples[step]` is within tolerance of `target`.
    Converged {
        target: f64,
        step: usize,
    },
    /// `samples[step]` exceeded [`M_ESCAPE`] or overflowed.
    Escaped {
        step: usize,
    },
    /// `samples[step]` is within [`DELTA_POLE`] of −1.
    HitPole {
        step: usize,
    },
    Exhausted,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Orbit {
    pub seed: f64,
    pub samples: Vec<f64>,
    pub termination: Termination,
}

/// Regime attractor on the real axis together with its convergence test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct FixedTarget {
    pub location: f64,
    /// `None` for a hyperbolic attractor; otherwise the number of steps after
    /// which the local map returns to the same side (1 for μ = +1, 2 for
    /// μ = −1).
    pub parabolic_return: Option<usize>,
}

impl FixedTarget {
    /// Attracting or indifferent real fixed point for λ ≤ λ*; `None` above.
    pub fn for_parameter(p: Parameter) -> Result<Option<Self>> {
        let target = match p.regime() {
            Regime::BelowOne => Some(Self {
                location: 0.0,
                parabolic_return: None,
            }),
            Regime::One => Some(Self {
                location: 0.0,
                parabolic_return: Some(1),
            }),
            Regime::Middle => nonzero_fixed_point(p, DEFAULT_ROOT_TOL)?.map(|a| Self {
                location: a,
                parabolic_return: None,
            }),
            Regime::LambdaStar => nonzero_fixed_point(p, DEFAULT_ROOT_TOL)?.map(|a| Self {
                location: a,
                parabolic_return: Some(2),
            }),
            Regime::AboveStar => None,
        };
        Ok(target)
    }

    /// Whether the newest entry of `history` has converged onto the target.
    pub fn reached(&self, history: &[f64]) -> bool {
        let n = history.len();
        let Some(&last) = history.last() else {
            return false;
        };
        match self.parabolic_return {
            None => {
                n >= 2
                    && (last - history[n - 2]).abs() < EPS_CONV
                    && (last - self.location).abs() < CAPTURE_RADIUS
            }
            Some(q) => {
                n > q
                    && (last - history[n - 1 - q]).abs() < EPS_RELAXED
                    && (last - self.location).abs() < parabolic_capture_radius()
            }
        }
    }
}

#[inline]
pub(crate) fn escaped(x: f64) -> bool {
    !(x.abs() <= M_ESCAPE)
}

#[inline]
pub(crate) fn at_pole(x: f64) -> bool {
    (x + 1.0).abs() <= DELTA_POLE
}

/// Iterate from `seed` until convergence to the regime attractor, escape,
/// a pole hit, or `max_steps` applications of the map.
pub fn iterate(p: Parameter, seed: f64, max_steps: usize) -> Result<Orbit> {
    if at_pole(seed) {
        return Err(DynamicsError::SeedIsPole(seed));
    }
    let target = FixedTarget::for_parameter(p)?;
    let mut samples = vec![seed];
    let mut step = 0;
    let termination = loop {
        let x = samples[step];
        if escaped(x) {
            break Termination::Escaped { step };
        }
        if at_pole(x) {
            break Termination::HitPole { step };
        }
        if step == max_steps {
            break Termination::Exhausted;
        }
        samples.push(map_real(p, x)?);
        step += 1;
        if let Some(t) = target {
            if !escaped(samples[step]) && t.reached(&samples) {
                break Termination::Converged {
                    target: t.location,
                    step,
                };
            }
        }
    };
    Ok(Orbit {
        seed,
        samples,
        termination,
    })
}
