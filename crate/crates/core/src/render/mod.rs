//! Escape-time rendering of ζ_λ on a rectangular window, with per-pixel
//! Fatou/Julia classification.

mod ppm;

pub use ppm::{encode_ppm, pixel_rgb, write_ppm};

use rayon::prelude::*;

use crate::error::{DynamicsError, Result};
use crate::fixed_points::{attracting_cycles, nonzero_fixed_point, DEFAULT_ROOT_TOL};
use crate::map::{eval_map, ComplexPoint, Parameter, Regime, DELTA_POLE};
use crate::orbits::MAX_ATTRACTOR_PERIOD;

pub const DEFAULT_MAX_ITER: usize = 250;
pub const DEFAULT_ESCAPE_BOUND: f64 = 1e8;
pub const DEFAULT_CONV_EPS: f64 = 1e-6;
pub const DEFAULT_SIZE: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl Window {
    pub fn new(re_min: f64, re_max: f64, im_min: f64, im_max: f64) -> Self {
        Self {
            re_min,
            re_max,
            im_min,
            im_max,
        }
    }

    /// The square [−1, 1] × [−1, 1].
    pub fn unit_square() -> Self {
        Self::new(-1.0, 1.0, -1.0, 1.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RenderMode {
    /// Escape past the bound is Fatou; everything else is undecided.
    EscapeOnly,
    /// Also detects convergence onto the regime's attractor.
    #[default]
    AttractorAware,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Palette {
    /// Fatou red, Julia white.
    #[default]
    RedWhite,
    /// Fatou shaded by the step at which it was decided.
    IterationShaded,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RenderConfig {
    pub lambda: f64,
    pub window: Window,
    pub width: usize,
    pub height: usize,
    pub max_iter: usize,
    pub escape_bound: f64,
    pub conv_eps: f64,
    pub mode: RenderMode,
    pub palette: Palette,
}

impl RenderConfig {
    /// Defaults: unit square, 1000×1000, N = 250, M = 1e8, conv_eps = 1e−6.
    pub fn new(lambda: f64) -> Self {
        Self {
            lambda,
            window: Window::unit_square(),
            width: DEFAULT_SIZE,
            height: DEFAULT_SIZE,
            max_iter: DEFAULT_MAX_ITER,
            escape_bound: DEFAULT_ESCAPE_BOUND,
            conv_eps: DEFAULT_CONV_EPS,
            mode: RenderMode::default(),
            palette: Palette::default(),
        }
    }

    pub fn validate(&self) -> Result<Parameter> {
        let w = &self.window;
        let all_finite = [w.re_min, w.re_max, w.im_min, w.im_max]
            .iter()
            .all(|v| v.is_finite());
        if !all_finite || !(w.re_min < w.re_max) || !(w.im_min < w.im_max) {
            return Err(DynamicsError::Config(format!(
                "window [{}, {}] x [{}, {}] is degenerate",
                w.re_min, w.re_max, w.im_min, w.im_max
            )));
        }
        if self.width == 0 || self.height == 0 {
            return Err(DynamicsError::Config(format!(
                "image size {}x{} has no pixels",
                self.width, self.height
            )));
        }
        if self.max_iter == 0 {
            return Err(DynamicsError::Config("max_iter must be at least 1".into()));
        }
        if !(self.escape_bound > 0.0) {
            return Err(DynamicsError::Config(format!(
                "escape bound must be positive, got {}",
                self.escape_bound
            )));
        }
        if !(self.conv_eps > 0.0) {
            return Err(DynamicsError::Config(format!(
                "conv_eps must be positive, got {}",
                self.conv_eps
            )));
        }
        Parameter::new(self.lambda)
    }

    /// Midpoint of pixel `(col, row)`, row 0 at the top.
    ///
    /// Offsets are taken from the window centre, so mirrored rows of a
    /// window symmetric about the real axis get exactly negated imaginary
    /// parts.
    pub fn pixel_center(&self, col: usize, row: usize) -> ComplexPoint {
        let w = &self.window;
        let d_re = (w.re_max - w.re_min) / self.width as f64;
        let d_im = (w.im_max - w.im_min) / self.height as f64;
        let re_c = 0.5 * (w.re_min + w.re_max);
        let im_c = 0.5 * (w.im_min + w.im_max);
        let re = re_c + (col as f64 + 0.5 - 0.5 * self.width as f64) * d_re;
        let im = im_c + (0.5 * self.height as f64 - row as f64 - 0.5) * d_im;
        ComplexPoint::new(re, im)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PixelState {
    /// Escaped or converged at this step.
    Fatou(usize),
    Julia,
    /// Neither escaped nor hit the pole within N steps (escape-only mode).
    Undecided(usize),
}

impl PixelState {
    pub fn label(self) -> &'static str {
        match self {
            PixelState::Fatou(_) => "fatou",
            PixelState::Julia => "julia",
            PixelState::Undecided(_) => "undecided",
        }
    }

    pub fn is_fatou(self) -> bool {
        matches!(self, PixelState::Fatou(_))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PixelOutcome {
    pub state: PixelState,
    pub iterations: usize,
}

/// Row-major grid of pixel outcomes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RasterImage {
    pub width: usize,
    pub height: usize,
    pub outcomes: Vec<PixelOutcome>,
}

impl RasterImage {
    pub fn get(&self, col: usize, row: usize) -> PixelOutcome {
        self.outcomes[row * self.width + col]
    }

    pub fn row(&self, row: usize) -> &[PixelOutcome] {
        &self.outcomes[row * self.width..(row + 1) * self.width]
    }

    pub fn fatou_fraction(&self) -> f64 {
        let n = self.outcomes.iter().filter(|o| o.state.is_fatou()).count();
        n as f64 / self.outcomes.len() as f64
    }
}

/// A validated configuration with its attractors computed once.
#[derive(Debug, Clone)]
pub struct Renderer {
    cfg: RenderConfig,
    p: Parameter,
    attractors: Vec<f64>,
}

impl Renderer {
    pub fn new(cfg: RenderConfig) -> Result<Self> {
        let p = cfg.validate()?;
        let attractors = match cfg.mode {
            RenderMode::EscapeOnly => Vec::new(),
            RenderMode::AttractorAware => regime_attractors(p)?,
        };
        Ok(Self { cfg, p, attractors })
    }

    pub fn config(&self) -> &RenderConfig {
        &self.cfg
    }

    /// Real attracting (or indifferent) points tested in attractor-aware mode.
    pub fn attractors(&self) -> &[f64] {
        &self.attractors
    }

    pub fn classify(&self, z0: ComplexPoint) -> PixelOutcome {
        let n = self.cfg.max_iter;
        let m = self.cfg.escape_bound;
        let mut z = z0;
        for i in 0..n {
            if !(z.norm() <= m) {
                return outcome(PixelState::Fatou(i), i);
            }
            if (z + 1.0).norm() <= DELTA_POLE {
                return outcome(PixelState::Julia, i);
            }
            if self
                .attractors
                .iter()
                .any(|&a| (z - a).norm() < self.cfg.conv_eps)
            {
                return outcome(PixelState::Fatou(i), i);
            }
            z = match eval_map(self.p, z) {
                Ok(w) => w,
                Err(_) => return outcome(PixelState::Julia, i),
            };
        }
        match self.cfg.mode {
            RenderMode::EscapeOnly => outcome(PixelState::Undecided(n), n),
            RenderMode::AttractorAware => outcome(PixelState::Julia, n),
        }
    }

    pub fn render(&self) -> RasterImage {
        let w = self.cfg.width;
        let mut outcomes = vec![outcome(PixelState::Julia, 0); w * self.cfg.height];
        outcomes
            .par_chunks_mut(w)
            .enumerate()
            .for_each(|(row, line)| {
                for (col, px) in line.iter_mut().enumerate() {
                    *px = self.classify(self.cfg.pixel_center(col, row));
                }
            });
        RasterImage {
            width: w,
            height: self.cfg.height,
            outcomes,
        }
    }

    /// Renders on a dedicated pool of `workers` threads.
    pub fn render_with_workers(&self, workers: usize) -> Result<RasterImage> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| DynamicsError::Config(format!("cannot start {workers} workers: {e}")))?;
        Ok(pool.install(|| self.render()))
    }
}

fn outcome(state: PixelState, iterations: usize) -> PixelOutcome {
    PixelOutcome { state, iterations }
}

fn regime_attractors(p: Parameter) -> Result<Vec<f64>> {
    Ok(match p.regime() {
        Regime::BelowOne | Regime::One => vec![0.0],
        Regime::Middle | Regime::LambdaStar => nonzero_fixed_point(p, DEFAULT_ROOT_TOL)?
            .into_iter()
            .collect(),
        Regime::AboveStar => attracting_cycles(p, MAX_ATTRACTOR_PERIOD)?
            .into_iter()
            .flat_map(|c| c.points)
            .collect(),
    })
}

pub fn classify_pixel(cfg: &RenderConfig, z0: ComplexPoint) -> Result<PixelOutcome> {
    Ok(Renderer::new(*cfg)?.classify(z0))
}

pub fn render(cfg: &RenderConfig) -> Result<RasterImage> {
    Ok(Renderer::new(*cfg)?.render())
}
