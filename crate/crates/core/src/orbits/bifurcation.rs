use rayon::prelude::*;

use crate::error::{invalid, Result};
use crate::map::{map_real, Parameter};

use super::{at_pole, escaped, SeedRule};

/// Post-transient orbit values for one λ.
#[derive(Debug, Clone, PartialEq)]
pub struct BifurcationRecord {
    pub lambda: f64,
    /// Empty when the orbit escaped or hit the pole.
    pub attractor_samples: Vec<f64>,
}

impl BifurcationRecord {
    /// Cluster the samples into branches: sorted values whose gaps exceed
    /// `tol` start a new branch; each branch is reported by its mean.
    pub fn branches(&self, tol: f64) -> Vec<f64> {
        let mut s = self.attractor_samples.clone();
        s.sort_by(f64::total_cmp);
        let mut out: Vec<(f64, usize)> = Vec::new();
        let mut prev = f64::NEG_INFINITY;
        for x in s {
            match out.last_mut() {
                Some((sum, n)) if x - prev <= tol => {
                    *sum += x;
                    *n += 1;
                }
                _ => out.push((x, 1)),
            }
            prev = x;
        }
        out.into_iter().map(|(sum, n)| sum / n as f64).collect()
    }
}

pub(crate) fn lambda_grid(lambda_min: f64, lambda_max: f64, steps: usize) -> Result<Vec<f64>> {
    if !(lambda_min > 0.0 && lambda_min < lambda_max && lambda_max.is_finite()) {
        return Err(invalid(
            "lambda-range",
            format!("need 0 < min < max, got [{lambda_min}, {lambda_max}]"),
        ));
    }
    if steps < 2 {
        return Err(invalid("steps", format!("must be at least 2, got {steps}")));
    }
    let span = lambda_max - lambda_min;
    let last = (steps - 1) as f64;
    Ok((0..steps)
        .map(|k| {
            if k + 1 == steps {
                lambda_max
            } else {
                lambda_min + span * k as f64 / last
            }
        })
        .collect())
}

fn attractor_samples(p: Parameter, seed: f64, transient: usize, samples: usize) -> Vec<f64> {
    let mut x = seed;
    let step = |x: f64| -> Option<f64> {
        if at_pole(x) {
            return None;
        }
        let y = map_real(p, x).ok()?;
        (!escaped(y)).then_some(y)
    };
    if at_pole(x) || escaped(x) {
        return Vec::new();
    }
    for _ in 0..transient {
        match step(x) {
            Some(y) => x = y,
            None => return Vec::new(),
        }
    }
    let mut out = Vec::with_capacity(samples);
    for i in 0..samples {
        out.push(x);
        if i + 1 < samples {
            match step(x) {
                Some(y) => x = y,
                None => return Vec::new(),
            }
        }
    }
    out
}

/// Sweep λ over `steps` evenly spaced values in `[lambda_min, lambda_max]`.
/// For each, the seed is iterated `transient` times and the following
/// `samples` orbit values are kept. Records come back in grid order.
pub fn bifurcation_sweep(
    lambda_min: f64,
    lambda_max: f64,
    steps: usize,
    transient: usize,
    samples: usize,
    seed_rule: SeedRule,
) -> Result<Vec<BifurcationRecord>> {
    let grid = lambda_grid(lambda_min, lambda_max, steps)?;
    grid.into_par_iter()
        .map(|l| {
            let p = Parameter::new(l)?;
            Ok(BifurcationRecord {
                lambda: l,
                attractor_samples: attractor_samples(p, seed_rule.seed(), transient, samples),
            })
        })
        .collect()
}
