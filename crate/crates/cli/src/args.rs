use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use merodyn_core::orbits::SeedRule;
use merodyn_core::render::{Palette, RenderMode, Window};

#[derive(Debug, Parser)]
#[command(
    name = "merodyn",
    version,
    about = "Real and complex dynamics of λ·z·e^(−z)/(z+1)"
)]
pub struct Cli {
    /// Reproduce a figure: 1, 2, 3, 4, 5, 6, 7, 8, 9 (or a panel 5a, 5b, 9a–9d).
    #[arg(long, value_name = "ID")]
    pub figure: Option<Figure>,

    /// Image side length for figure 9 panels.
    #[arg(long, value_parser = parse_positive_usize, requires = "figure")]
    pub size: Option<usize>,

    /// Output file, or a directory for figure 9. Standard output when omitted.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Worker threads for sweeps and rendering.
    #[arg(long, global = true, env = "MERODYN_WORKERS", value_parser = parse_positive_usize)]
    pub workers: Option<usize>,

    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Ppm,
    Text,
}

#[derive(Debug, Clone, PartialEq, Subcommand)]
pub enum Command {
    /// Fixed points with multipliers and stability.
    FixedPoints(FixedPointsArgs),
    /// Real periodic cycles of one period.
    Cycles(CyclesArgs),
    /// Limit of real orbits.
    Classify(ClassifyArgs),
    /// Lyapunov exponent at one λ or across a range.
    Lyapunov(LyapunovArgs),
    /// Cobweb vertices of real orbits.
    Cobweb(CobwebArgs),
    /// Attractor samples across a λ range.
    Bifurcation(BifurcationArgs),
    /// Fatou/Julia image of a window.
    Julia(JuliaArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::FixedPoints(_) => "fixed-points",
            Command::Cycles(_) => "cycles",
            Command::Classify(_) => "classify",
            Command::Lyapunov(_) => "lyapunov",
            Command::Cobweb(_) => "cobweb",
            Command::Bifurcation(_) => "bifurcation",
            Command::Julia(_) => "julia",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Args)]
pub struct FixedPointsArgs {
    #[arg(long, allow_hyphen_values = true, value_parser = parse_lambda)]
    pub lambda: f64,
    /// Root tolerance.
    #[arg(long, default_value_t = 1e-12, value_parser = parse_positive_f64)]
    pub tol: f64,
}

#[derive(Debug, Clone, PartialEq, Args)]
pub struct CyclesArgs {
    #[arg(long, allow_hyphen_values = true, value_parser = parse_lambda)]
    pub lambda: f64,
    /// Exact period, at least 2.
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(2..))]
    pub period: u32,
    /// Search interval as lo,hi; must not contain −1.
    #[arg(long, default_value = "0,10", allow_hyphen_values = true, value_parser = parse_range)]
    pub interval: Range,
    /// Sign-scan grid points, at least 100.
    #[arg(long, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(100..))]
    pub grid: u64,
    #[arg(long, default_value_t = 1e-12, value_parser = parse_positive_f64)]
    pub tol: f64,
}

#[derive(Debug, Clone, PartialEq, Args)]
pub struct ClassifyArgs {
    #[arg(long, allow_hyphen_values = true, value_parser = parse_lambda)]
    pub lambda: f64,
    /// Comma-separated seeds; overrides --seed-rule.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, value_parser = parse_finite_f64)]
    pub seeds: Vec<f64>,
    #[arg(long, default_value = "critical", value_parser = parse_seed_rule)]
    pub seed_rule: SeedRule,
    #[arg(long, default_value_t = 1_000_000, value_parser = parse_positive_usize)]
    pub max_steps: usize,
}

#[derive(Debug, Clone, PartialEq, Args)]
#[command(group(clap::ArgGroup::new("which").required(true).args(["lambda", "lambda_range"])))]
pub struct LyapunovArgs {
    #[arg(long, allow_hyphen_values = true, value_parser = parse_lambda)]
    pub lambda: Option<f64>,
    /// λ range as min,max (both positive, min < max).
    #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
    pub lambda_range: Option<Range>,
    /// Grid points across --lambda-range, at least 2.
    #[arg(long, default_value_t = 200, value_parser = clap::value_parser!(u64).range(2..))]
    pub steps: u64,
    /// Terms averaged, at least 100.
    #[arg(long, default_value_t = 2000, value_parser = clap::value_parser!(u64).range(100..))]
    pub k: u64,
    #[arg(long, default_value_t = 0)]
    pub burn_in: usize,
    #[arg(long, default_value = "critical", value_parser = parse_seed_rule)]
    pub seed_rule: SeedRule,
}

#[derive(Debug, Clone, PartialEq, Args)]
pub struct CobwebArgs {
    #[arg(long, allow_hyphen_values = true, value_parser = parse_lambda)]
    pub lambda: f64,
    /// Comma-separated seeds; overrides --seed-rule.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, value_parser = parse_finite_f64)]
    pub seeds: Vec<f64>,
    #[arg(long, default_value = "critical", value_parser = parse_seed_rule)]
    pub seed_rule: SeedRule,
    /// Iterations, at least 1.
    #[arg(long, default_value_t = 10, value_parser = parse_positive_usize)]
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq, Args)]
pub struct BifurcationArgs {
    #[arg(long, default_value = "0.2,15", allow_hyphen_values = true, value_parser = parse_range)]
    pub lambda_range: Range,
    #[arg(long, default_value_t = 500, value_parser = clap::value_parser!(u64).range(2..))]
    pub steps: u64,
    #[arg(long, default_value_t = 100_000)]
    pub transient: usize,
    #[arg(long, default_value_t = 64, value_parser = parse_positive_usize)]
    pub samples: usize,
    #[arg(long, default_value = "critical", value_parser = parse_seed_rule)]
    pub seed_rule: SeedRule,
}

#[derive(Debug, Clone, PartialEq, Args)]
pub struct JuliaArgs {
    #[arg(long, allow_hyphen_values = true, value_parser = parse_lambda)]
    pub lambda: f64,
    /// re_min,re_max,im_min,im_max
    #[arg(long, default_value = "-1,1,-1,1", allow_hyphen_values = true, value_parser = parse_window)]
    pub window: Window,
    /// Maximum iterations N, at least 1.
    #[arg(long, default_value_t = 250, value_parser = parse_positive_usize)]
    pub n: usize,
    /// Width and height in pixels.
    #[arg(long, default_value_t = 1000, value_parser = parse_positive_usize)]
    pub size: usize,
    #[arg(long, value_parser = parse_positive_usize)]
    pub width: Option<usize>,
    #[arg(long, value_parser = parse_positive_usize)]
    pub height: Option<usize>,
    /// Escape bound M.
    #[arg(long, default_value_t = 1e8, value_parser = parse_positive_f64)]
    pub escape_bound: f64,
    #[arg(long, default_value_t = 1e-6, value_parser = parse_positive_f64)]
    pub conv_eps: f64,
    #[arg(long, value_enum, default_value_t = ModeArg::AttractorAware)]
    pub mode: ModeArg,
    #[arg(long, value_enum, default_value_t = PaletteArg::RedWhite)]
    pub palette: PaletteArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    EscapeOnly,
    AttractorAware,
}

impl From<ModeArg> for RenderMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::EscapeOnly => RenderMode::EscapeOnly,
            ModeArg::AttractorAware => RenderMode::AttractorAware,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PaletteArg {
    RedWhite,
    Shaded,
}

impl From<PaletteArg> for Palette {
    fn from(p: PaletteArg) -> Self {
        match p {
            PaletteArg::RedWhite => Palette::RedWhite,
            PaletteArg::Shaded => Palette::IterationShaded,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range {
    pub min: f64,
    pub max: f64,
}

/// A figure, or one panel of a multi-panel figure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Figure {
    pub number: u8,
    pub panel: Option<char>,
}

impl FromStr for Figure {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let err = || format!("unknown figure '{s}' (valid: 1-9, 5a, 5b, 9a-9d)");
        let (digits, panel) = match s.char_indices().last() {
            Some((i, c)) if c.is_ascii_lowercase() => (&s[..i], Some(c)),
            _ => (s, None),
        };
        let number: u8 = digits.parse().map_err(|_| err())?;
        let ok = matches!(
            (number, panel),
            (1..=9, None) | (5, Some('a' | 'b')) | (9, Some('a'..='d'))
        );
        if ok {
            Ok(Self { number, panel })
        } else {
            Err(err())
        }
    }
}

fn parse_finite_f64(s: &str) -> Result<f64, String> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| format!("'{s}' is not a number"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("{v} is not finite"))
    }
}

pub fn parse_lambda(s: &str) -> Result<f64, String> {
    let v = parse_finite_f64(s)?;
    if v > 0.0 {
        Ok(v)
    } else {
        Err(format!("{v} is out of range (valid: λ > 0)"))
    }
}

fn parse_positive_f64(s: &str) -> Result<f64, String> {
    let v = parse_finite_f64(s)?;
    if v > 0.0 {
        Ok(v)
    } else {
        Err(format!("{v} is out of range (valid: > 0)"))
    }
}

fn parse_positive_usize(s: &str) -> Result<usize, String> {
    match s.trim().parse::<usize>() {
        Ok(v) if v >= 1 => Ok(v),
        _ => Err(format!("'{s}' is out of range (valid: integer ≥ 1)")),
    }
}

fn parse_list(s: &str, n: usize) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != n {
        return Err(format!("expected {n} comma-separated numbers, got '{s}'"));
    }
    parts.into_iter().map(parse_finite_f64).collect()
}

pub fn parse_range(s: &str) -> Result<Range, String> {
    let v = parse_list(s, 2)?;
    if v[0] < v[1] {
        Ok(Range {
            min: v[0],
            max: v[1],
        })
    } else {
        Err(format!("'{s}' is out of range (valid: min < max)"))
    }
}

pub fn parse_window(s: &str) -> Result<Window, String> {
    let v = parse_list(s, 4)?;
    if v[0] < v[1] && v[2] < v[3] {
        Ok(Window::new(v[0], v[1], v[2], v[3]))
    } else {
        Err(format!(
            "'{s}' is out of range (valid: re_min < re_max and im_min < im_max)"
        ))
    }
}

pub fn parse_seed_rule(s: &str) -> Result<SeedRule, String> {
    if s == "critical" {
        return Ok(SeedRule::CriticalPoint);
    }
    match s.strip_prefix("value:") {
        Some(x) => Ok(SeedRule::FixedSeed(parse_finite_f64(x)?)),
        None => Err(format!(
            "'{s}' is not a seed rule (valid: critical, value:<x>)"
        )),
    }
}

pub fn seed_rule_str(rule: SeedRule) -> String {
    match rule {
        SeedRule::CriticalPoint => "critical".into(),
        SeedRule::FixedSeed(x) => format!("value:{x}"),
    }
}
