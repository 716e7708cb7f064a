use crate::error::{invalid, DynamicsError, Result};
use crate::map::{map_real, Parameter};

use super::{at_pole, escaped};

/// Vertices of a web diagram: (x₀, 0) → (x₀, x₁) → (x₁, x₁) → (x₁, x₂) → …
#[derive(Debug, Clone, PartialEq)]
pub struct CobwebPath {
    pub vertices: Vec<(f64, f64)>,
}

impl CobwebPath {
    /// Orbit values visited by the path: the seed followed by every point
    /// where a horizontal segment meets the diagonal.
    pub fn orbit(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.vertices.len() / 2 + 1);
        if let Some(&(x0, _)) = self.vertices.first() {
            out.push(x0);
        }
        out.extend(self.vertices.iter().skip(2).step_by(2).map(|&(x, _)| x));
        out
    }

    /// Completed map applications.
    pub fn steps(&self) -> usize {
        self.vertices.len().saturating_sub(1) / 2
    }
}

/// Cobweb of `n` iterations from `seed`, truncated at a pole hit or escape.
pub fn cobweb(p: Parameter, seed: f64, n: usize) -> Result<CobwebPath> {
    if at_pole(seed) {
        return Err(DynamicsError::SeedIsPole(seed));
    }
    if n == 0 {
        return Err(invalid("n", "must be at least 1"));
    }
    let mut vertices = Vec::with_capacity(2 * n + 1);
    vertices.push((seed, 0.0));
    let mut x = seed;
    for _ in 0..n {
        if at_pole(x) || escaped(x) {
            break;
        }
        let y = map_real(p, x)?;
        if escaped(y) {
            break;
        }
        vertices.push((x, y));
        vertices.push((y, y));
        x = y;
    }
    Ok(CobwebPath { vertices })
}
