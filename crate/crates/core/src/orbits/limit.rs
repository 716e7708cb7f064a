use crate::error::Result;
use crate::fixed_points::{attracting_cycles, PeriodicCycle};
use crate::map::{map_real, Parameter, Regime};

use super::{at_pole, FixedTarget, CYCLE_EPS, MAX_ATTRACTOR_PERIOD};

/// Where a real orbit ends up.
#[derive(Debug, Clone, PartialEq)]
pub enum LimitOutcome {
    ToZero,
    ToALambda,
    ToSqrt2,
    ToCycle(PeriodicCycle),
    NonConvergent,
    /// The orbit lands on the pole (a prepole seed).
    PoleOrbit,
}

impl LimitOutcome {
    pub fn label(&self) -> &'static str {
        match self {
            LimitOutcome::ToZero => "to-zero",
            LimitOutcome::ToALambda => "to-a-lambda",
            LimitOutcome::ToSqrt2 => "to-sqrt2",
            LimitOutcome::ToCycle(_) => "to-cycle",
            LimitOutcome::NonConvergent => "non-convergent",
            LimitOutcome::PoleOrbit => "pole-orbit",
        }
    }
}

/// Classifies orbit limits for one parameter, computing the attractors once.
///
/// Orbits are followed on the extended real line: an overflow to +∞ is
/// continued at the asymptotic value 0⁺ (ζ(x) → 0 as x → +∞), so orbits
/// that pass near ∞ on their way back are not mistaken for escapes.
#[derive(Debug, Clone)]
pub struct LimitClassifier {
    p: Parameter,
    target: Option<FixedTarget>,
    cycles: Vec<PeriodicCycle>,
    max_steps: usize,
}

impl LimitClassifier {
    pub fn new(p: Parameter, max_steps: usize) -> Result<Self> {
        let target = FixedTarget::for_parameter(p)?;
        let cycles = if p.regime() == Regime::AboveStar {
            attracting_cycles(p, MAX_ATTRACTOR_PERIOD)?
        } else {
            Vec::new()
        };
        Ok(Self {
            p,
            target,
            cycles,
            max_steps,
        })
    }

    pub fn attracting_cycles(&self) -> &[PeriodicCycle] {
        &self.cycles
    }

    fn fixed_label(&self) -> LimitOutcome {
        match self.p.regime() {
            Regime::BelowOne | Regime::One => LimitOutcome::ToZero,
            Regime::Middle => LimitOutcome::ToALambda,
            Regime::LambdaStar => LimitOutcome::ToSqrt2,
            Regime::AboveStar => LimitOutcome::NonConvergent,
        }
    }

    fn step(&self, x: f64) -> Option<f64> {
        if x == f64::INFINITY {
            Some(f64::MIN_POSITIVE)
        } else if x == f64::NEG_INFINITY {
            Some(f64::INFINITY)
        } else {
            map_real(self.p, x).ok()
        }
    }

    pub fn classify(&self, seed: f64) -> LimitOutcome {
        if at_pole(seed) {
            return LimitOutcome::PoleOrbit;
        }
        // a short ring buffer is enough for both convergence tests
        let mut history: Vec<f64> = Vec::with_capacity(4);
        history.push(seed);
        // (cycle index, position of the next expected point, run length)
        let mut tracking: Option<(usize, usize, usize)> = None;
        let mut x = seed;
        for _ in 0..self.max_steps {
            let Some(y) = self.step(x) else {
                return LimitOutcome::PoleOrbit;
            };
            if at_pole(y) {
                return LimitOutcome::PoleOrbit;
            }
            x = y;
            if history.len() == 4 {
                history.remove(0);
            }
            history.push(x);

            if let Some(t) = &self.target {
                if x.is_finite() && t.reached(&history) {
                    return self.fixed_label();
                }
            }
            if !self.cycles.is_empty() {
                tracking = self.track_cycle(x, tracking);
                if let Some((ci, _, run)) = tracking {
                    if run >= self.cycles[ci].period {
                        return LimitOutcome::ToCycle(self.cycles[ci].clone());
                    }
                }
            }
        }
        LimitOutcome::NonConvergent
    }

    fn track_cycle(
        &self,
        x: f64,
        tracking: Option<(usize, usize, usize)>,
    ) -> Option<(usize, usize, usize)> {
        if let Some((ci, pos, run)) = tracking {
            let c = &self.cycles[ci];
            if (x - c.points[pos]).abs() < CYCLE_EPS {
                return Some((ci, (pos + 1) % c.period, run + 1));
            }
        }
        self.cycles.iter().enumerate().find_map(|(ci, c)| {
            c.points
                .iter()
                .position(|&q| (x - q).abs() < CYCLE_EPS)
                .map(|pos| (ci, (pos + 1) % c.period, 1))
        })
    }
}

/// One-off classification; prefer [`LimitClassifier`] for many seeds.
pub fn classify_limit(p: Parameter, seed: f64, max_steps: usize) -> Result<LimitOutcome> {
    Ok(LimitClassifier::new(p, max_steps)?.classify(seed))
}
