use rayon::prelude::*;

use crate::error::{invalid, DynamicsError, Result};
use crate::map::{log_abs_derivative_real, map_real, Parameter, DELTA_CRIT};

use super::{at_pole, escaped, SeedRule, M_ESCAPE};

const MIN_TERMS: usize = 100;

/// Finite-orbit estimate of the Lyapunov exponent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LyapunovEstimate {
    pub lambda: f64,
    pub seed: f64,
    /// Terms that entered the average (`k − skipped_terms`).
    pub terms_used: usize,
    pub burn_in: usize,
    pub value: f64,
    /// Terms dropped because the iterate sat on a critical point or the pole.
    pub skipped_terms: usize,
}

/// Average of ln|ζ′_λ(xᵢ)| over `k` iterates following `burn_in` discarded
/// ones. Critical-point terms (ln 0) are skipped and counted.
pub fn lyapunov(p: Parameter, seed: f64, k: usize, burn_in: usize) -> Result<LyapunovEstimate> {
    if k < MIN_TERMS {
        return Err(invalid(
            "k",
            format!("must be at least {MIN_TERMS}, got {k}"),
        ));
    }
    if at_pole(seed) {
        return Err(DynamicsError::SeedIsPole(seed));
    }
    let mut x = seed;
    for step in 0..burn_in {
        x = map_real(p, x)?;
        if escaped(x) {
            return Err(DynamicsError::OrbitEscaped {
                step: step + 1,
                bound: M_ESCAPE,
            });
        }
    }

    let mut sum = 0.0;
    let mut used = 0usize;
    let mut skipped = 0usize;
    for i in 0..k {
        if at_pole(x) || (x * x + x - 1.0).abs() <= DELTA_CRIT {
            skipped += 1;
        } else {
            sum += log_abs_derivative_real(p, x)?;
            used += 1;
        }
        if i + 1 == k {
            break;
        }
        x = map_real(p, x)?;
        if escaped(x) {
            return Err(DynamicsError::OrbitEscaped {
                step: burn_in + i + 1,
                bound: M_ESCAPE,
            });
        }
    }
    if used == 0 {
        return Err(invalid("seed", "every term of the orbit was singular"));
    }
    Ok(LyapunovEstimate {
        lambda: p.lambda(),
        seed,
        terms_used: used,
        burn_in,
        value: sum / used as f64,
        skipped_terms: skipped,
    })
}

/// Lyapunov estimates on a uniform λ grid of `steps` points. Output order
/// follows the grid regardless of scheduling.
pub fn lyapunov_sweep(
    lambda_min: f64,
    lambda_max: f64,
    steps: usize,
    seed_rule: SeedRule,
    k: usize,
    burn_in: usize,
) -> Result<Vec<(f64, Result<LyapunovEstimate>)>> {
    let grid = super::bifurcation::lambda_grid(lambda_min, lambda_max, steps)?;
    Ok(grid
        .into_par_iter()
        .map(|l| {
            let est = Parameter::new(l).and_then(|p| lyapunov(p, seed_rule.seed(), k, burn_in));
            (l, est)
        })
        .collect())
}
