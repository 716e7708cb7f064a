//! Real fixed points and periodic cycles of ζ_λ.
//!
//! Nonzero fixed points solve (x + 1)eˣ = λ. On (−1, ∞) the left side is
//! strictly increasing and on (−∞, −1) it is negative, so there is exactly
//! one nonzero solution for λ ≠ 1 and it is bracketed from the pole.
//! Cycles of period n are located as sign changes of ζⁿ(x) − x on a grid.

use rayon::prelude::*;

use crate::error::{invalid, DynamicsError, Result};
use crate::map::{derivative_real, map_real, Parameter};

/// Default absolute root tolerance on x.
pub const DEFAULT_ROOT_TOL: f64 = 1e-12;

/// Half-width of the band around |μ| = 1 classified as indifferent.
pub const TOL_CLASS: f64 = 1e-5;

/// Default cycle search interval.
pub const DEFAULT_CYCLE_INTERVAL: (f64, f64) = (0.0, 10.0);

/// Default number of grid cells for the cycle scan.
pub const DEFAULT_CYCLE_GRID: usize = 100_000;

const MIN_CYCLE_GRID: usize = 100;
const NEWTON_MAX_STEPS: usize = 50;
const BISECTION_MAX_STEPS: usize = 400;

/// Roots of ζⁿ(x) − x are kept only if the polished residual is this small
/// (relative to max(1, |x|)); jumps across prepoles fail it.
const CYCLE_RESIDUAL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Stability {
    Attracting,
    Repelling,
    RationallyIndifferent,
}

impl Stability {
    pub fn from_multiplier(multiplier: f64) -> Self {
        let m = multiplier.abs();
        if (m - 1.0).abs() <= TOL_CLASS {
            Stability::RationallyIndifferent
        } else if m < 1.0 {
            Stability::Attracting
        } else {
            Stability::Repelling
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Stability::Attracting => "attracting",
            Stability::Repelling => "repelling",
            Stability::RationallyIndifferent => "indifferent",
        }
    }
}

impl std::str::FromStr for Stability {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "attracting" => Ok(Stability::Attracting),
            "repelling" => Ok(Stability::Repelling),
            "indifferent" => Ok(Stability::RationallyIndifferent),
            other => Err(format!("unknown stability `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedPointRecord {
    pub location: f64,
    pub multiplier: f64,
    pub stability: Stability,
    pub is_origin: bool,
}

fn check_tol(tol: f64) -> Result<()> {
    if tol.is_finite() && tol > 0.0 {
        Ok(())
    } else {
        Err(invalid(
            "tol",
            format!("must be positive and finite, got {tol}"),
        ))
    }
}

/// g(x) = (x + 1)eˣ − λ, written to keep precision for x near 0.
fn fixed_point_equation(lambda: f64, x: f64) -> f64 {
    (x + 1.0) * x.exp_m1() + x - (lambda - 1.0)
}

/// Bracket `[lo, hi]` of the nonzero fixed point: g(lo) < 0 < g(hi).
///
/// Starts at the pole and doubles the right end until g changes sign.
pub fn fixed_point_bracket(p: Parameter) -> (f64, f64) {
    let l = p.lambda();
    let lo = -1.0;
    let mut hi = 1.0;
    while fixed_point_equation(l, hi) <= 0.0 {
        hi *= 2.0;
    }
    (lo, hi)
}

/// The unique fixed point other than 0, or `None` when it coincides with
/// the origin (λ = 1, up to `tol`).
pub fn nonzero_fixed_point(p: Parameter, tol: f64) -> Result<Option<f64>> {
    check_tol(tol)?;
    let l = p.lambda();
    let (mut lo, mut hi) = fixed_point_bracket(p);
    for _ in 0..BISECTION_MAX_STEPS {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if fixed_point_equation(l, mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let bisected = 0.5 * (lo + hi);
    let spacing = ulp(bisected);
    if tol < spacing {
        return Err(DynamicsError::Tolerance {
            tol,
            spacing,
            near: bisected,
        });
    }

    // Newton polish inside the final bracket
    let mut x = bisected;
    for _ in 0..NEWTON_MAX_STEPS {
        let g = fixed_point_equation(l, x);
        let dg = (x + 2.0) * x.exp();
        let next = x - g / dg;
        if !next.is_finite() || next < lo - tol || next > hi + tol {
            x = bisected;
            break;
        }
        let done = (next - x).abs() <= spacing;
        x = next;
        if done {
            break;
        }
    }

    if x.abs() <= tol {
        Ok(None)
    } else {
        Ok(Some(x))
    }
}

fn ulp(x: f64) -> f64 {
    if x == 0.0 {
        f64::MIN_POSITIVE
    } else {
        let a = x.abs();
        f64::from_bits(a.to_bits() + 1) - a
    }
}

/// All real fixed points, ascending. The origin is always present.
pub fn solve_fixed_points(p: Parameter, tol: f64) -> Result<Vec<FixedPointRecord>> {
    let mut out = vec![classify_fixed_point(p, 0.0, tol)?];
    if let Some(x) = nonzero_fixed_point(p, tol)? {
        out.push(classify_fixed_point(p, x, tol)?);
    }
    out.sort_by(|a, b| a.location.total_cmp(&b.location));
    Ok(out)
}

/// Multiplier and stability of a fixed point. Fails if `x_f` is not a fixed
/// point to within `10·tol`.
pub fn classify_fixed_point(p: Parameter, x_f: f64, tol: f64) -> Result<FixedPointRecord> {
    check_tol(tol)?;
    let residual = (map_real(p, x_f)? - x_f).abs();
    if !(residual <= 10.0 * tol) {
        return Err(DynamicsError::NotAFixedPoint { x: x_f, residual });
    }
    let multiplier = derivative_real(p, x_f)?;
    Ok(FixedPointRecord {
        location: x_f,
        multiplier,
        stability: Stability::from_multiplier(multiplier),
        is_origin: x_f == 0.0,
    })
}

/// A periodic orbit of exact period ≥ 2 with `points[i+1] = ζ(points[i])`.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicCycle {
    pub period: usize,
    pub points: Vec<f64>,
    pub multiplier: f64,
    pub stability: Stability,
}

impl PeriodicCycle {
    /// Builds a cycle from its points in orbit order. The multiplier is
    /// recomputed; closure is not checked.
    pub fn new(p: Parameter, points: Vec<f64>) -> Result<Self> {
        if points.len() < 2 {
            return Err(invalid("points", "a cycle needs at least two points"));
        }
        let multiplier = points_multiplier(p, &points)?;
        Ok(Self {
            period: points.len(),
            points,
            multiplier,
            stability: Stability::from_multiplier(multiplier),
        })
    }

    pub fn smallest(&self) -> f64 {
        self.points.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Same cycle listed from point `k`.
    pub fn rotated(&self, k: usize) -> Self {
        let mut points = self.points.clone();
        points.rotate_left(k % self.period);
        Self {
            points,
            ..self.clone()
        }
    }
}

fn points_multiplier(p: Parameter, points: &[f64]) -> Result<f64> {
    points
        .iter()
        .try_fold(1.0, |acc, &x| Ok(acc * derivative_real(p, x)?))
}

/// Product of ζ′ along the cycle and the resulting stability.
pub fn cycle_multiplier(p: Parameter, cycle: &PeriodicCycle) -> Result<(f64, Stability)> {
    let m = points_multiplier(p, &cycle.points)?;
    Ok((m, Stability::from_multiplier(m)))
}

#[derive(Debug, Clone, PartialEq)]
pub struct CycleSearch {
    pub cycles: Vec<PeriodicCycle>,
    /// Grid brackets dropped because the orbit hit the pole or jumped
    /// across a prepole.
    pub pole_brackets_skipped: usize,
}

/// ζⁿ(x) and (ζⁿ)′(x), or `None` if the orbit meets the pole or overflows.
fn iterate_with_derivative(p: Parameter, x: f64, n: usize) -> Option<(f64, f64)> {
    let mut y = x;
    let mut d = 1.0;
    for _ in 0..n {
        d *= derivative_real(p, y).ok()?;
        y = map_real(p, y).ok()?;
        if !y.is_finite() {
            return None;
        }
    }
    Some((y, d))
}

fn iterate_n(p: Parameter, x: f64, n: usize) -> Option<f64> {
    let mut y = x;
    for _ in 0..n {
        y = map_real(p, y).ok()?;
        if !y.is_finite() {
            return None;
        }
    }
    Some(y)
}

fn cycle_residual(p: Parameter, x: f64, n: usize) -> Option<f64> {
    iterate_n(p, x, n).map(|y| y - x)
}

/// Bisect a sign change of ζⁿ(x) − x down to `tol`, then Newton-polish.
fn refine_root(
    p: Parameter,
    n: usize,
    mut lo: f64,
    mut hi: f64,
    mut h_lo: f64,
    tol: f64,
) -> Option<f64> {
    for _ in 0..BISECTION_MAX_STEPS {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let h_mid = cycle_residual(p, mid, n)?;
        if h_mid == 0.0 {
            return Some(mid);
        }
        if (h_mid < 0.0) == (h_lo < 0.0) {
            lo = mid;
            h_lo = h_mid;
        } else {
            hi = mid;
        }
    }
    let bisected = 0.5 * (lo + hi);
    let mut x = bisected;
    for _ in 0..NEWTON_MAX_STEPS {
        let Some((y, d)) = iterate_with_derivative(p, x, n) else {
            return Some(bisected);
        };
        let slope = d - 1.0;
        let next = x - (y - x) / slope;
        if !next.is_finite() || (next - bisected).abs() > (hi - lo).max(tol) * 10.0 {
            return Some(bisected);
        }
        let step = (next - x).abs();
        x = next;
        if step <= 1e-3 * tol {
            break;
        }
    }
    Some(x)
}

fn proper_divisors(n: usize) -> impl Iterator<Item = usize> {
    (1..n).filter(move |&d| n.is_multiple_of(d))
}

/// Cycles of exact period `period` meeting `[lo, hi]`, sorted by their
/// smallest point.
pub fn find_cycles(
    p: Parameter,
    period: usize,
    interval: (f64, f64),
    grid: usize,
    tol: f64,
) -> Result<CycleSearch> {
    check_tol(tol)?;
    if period < 2 {
        return Err(invalid(
            "period",
            format!("must be at least 2, got {period}"),
        ));
    }
    if grid < MIN_CYCLE_GRID {
        return Err(invalid(
            "grid",
            format!("must be at least {MIN_CYCLE_GRID}, got {grid}"),
        ));
    }
    let (lo, hi) = interval;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(invalid(
            "interval",
            format!("need finite lo < hi, got [{lo}, {hi}]"),
        ));
    }
    if lo <= -1.0 && -1.0 <= hi {
        return Err(invalid("interval", "must not contain the pole -1"));
    }

    let width = hi - lo;
    let nodes: Vec<(f64, Option<f64>)> = (0..=grid)
        .into_par_iter()
        .map(|k| {
            let x = lo + width * (k as f64 / grid as f64);
            (x, cycle_residual(p, x, period))
        })
        .collect();

    let mut skipped = 0usize;
    let mut brackets = Vec::new();
    let mut exact = Vec::new();
    for (k, pair) in nodes.windows(2).enumerate() {
        let (x0, h0) = pair[0];
        let (x1, h1) = pair[1];
        match (h0, h1) {
            (Some(a), Some(b)) => {
                if a == 0.0 {
                    exact.push(x0);
                }
                if k + 1 == grid && b == 0.0 {
                    exact.push(x1);
                }
                if a * b < 0.0 {
                    brackets.push((x0, x1, a));
                }
            }
            _ => skipped += 1,
        }
    }

    let refined: Vec<Option<f64>> = brackets
        .par_iter()
        .map(|&(a, b, ha)| {
            let r = refine_root(p, period, a, b, ha, tol)?;
            let res = cycle_residual(p, r, period)?;
            (res.abs() <= CYCLE_RESIDUAL * r.abs().max(1.0)).then_some(r)
        })
        .collect();
    let mut roots = exact;
    for r in refined {
        match r {
            Some(x) => roots.push(x),
            None => skipped += 1,
        }
    }
    roots.sort_by(f64::total_cmp);

    let tol_distinct = 100.0 * tol;
    let mut cycles: Vec<PeriodicCycle> = Vec::new();
    for &root in &roots {
        if cycles
            .iter()
            .any(|c| c.points.iter().any(|&q| (q - root).abs() <= tol_distinct))
        {
            continue;
        }
        // orbit of the root with accumulated |(ζᵏ)′| for error amplification
        let mut orbit = Vec::with_capacity(period + 1);
        let mut amp = Vec::with_capacity(period + 1);
        let (mut x, mut a) = (root, 1.0f64);
        let mut broken = false;
        for _ in 0..=period {
            orbit.push(x);
            amp.push(a.max(1.0));
            match (derivative_real(p, x), map_real(p, x)) {
                (Ok(d), Ok(y)) if y.is_finite() => {
                    a *= d.abs();
                    x = y;
                }
                _ => {
                    broken = true;
                    break;
                }
            }
        }
        if broken {
            skipped += 1;
            continue;
        }
        if proper_divisors(period).any(|d| (orbit[d] - root).abs() <= tol_distinct * amp[d]) {
            continue;
        }
        let mut points: Vec<f64> = orbit[..period]
            .iter()
            .zip(&amp)
            .map(|(&q, &a)| {
                roots
                    .iter()
                    .copied()
                    .filter(|r| (r - q).abs() <= tol_distinct * a)
                    .min_by(|r, s| (r - q).abs().total_cmp(&(s - q).abs()))
                    .unwrap_or(q)
            })
            .collect();
        let distinct = points.iter().enumerate().all(|(i, &u)| {
            points[i + 1..]
                .iter()
                .all(|&v| (u - v).abs() > tol_distinct)
        });
        if !distinct {
            continue;
        }
        let first = points
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .map(|(i, _)| i)
            .unwrap_or(0);
        points.rotate_left(first);
        cycles.push(PeriodicCycle::new(p, points)?);
    }
    cycles.sort_by(|a, b| a.smallest().total_cmp(&b.smallest()));
    Ok(CycleSearch {
        cycles,
        pole_brackets_skipped: skipped,
    })
}

/// Attracting cycles of every period in `2..=max_period`, searched with the
/// default interval, grid and tolerance.
pub fn attracting_cycles(p: Parameter, max_period: usize) -> Result<Vec<PeriodicCycle>> {
    let mut out = Vec::new();
    for period in 2..=max_period {
        let search = find_cycles(
            p,
            period,
            DEFAULT_CYCLE_INTERVAL,
            DEFAULT_CYCLE_GRID,
            DEFAULT_ROOT_TOL,
        )?;
        out.extend(
            search
                .cycles
                .into_iter()
                .filter(|c| c.stability == Stability::Attracting),
        );
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::map::lambda_star;
    use proptest::prelude::*;
    use std::f64::consts::SQRT_2;

    fn lam(l: f64) -> Parameter {
        Parameter::new(l).unwrap()
    }

    fn nonzero(records: &[FixedPointRecord]) -> FixedPointRecord {
        *records.iter().find(|r| !r.is_origin).unwrap()
    }

    #[test]
    fn fixed_points_below_one() {
        let fps = solve_fixed_points(lam(0.5), DEFAULT_ROOT_TOL).unwrap();
        assert_eq!(fps.len(), 2);
        let origin = fps.iter().find(|r| r.is_origin).unwrap();
        assert_eq!(origin.multiplier, 0.5);
        assert_eq!(origin.stability, Stability::Attracting);
        let r = nonzero(&fps);
        assert!((r.location + 0.314923).abs() < 1e-5);
        assert_eq!(r.stability, Stability::Repelling);
        assert!(fps[0].location < fps[1].location);
    }

    #[test]
    fn fixed_points_middle() {
        let fps = solve_fixed_points(lam(2.0), DEFAULT_ROOT_TOL).unwrap();
        let origin = fps.iter().find(|r| r.is_origin).unwrap();
        assert_eq!(origin.stability, Stability::Repelling);
        assert_eq!(origin.multiplier, 2.0);
        let a = nonzero(&fps);
        assert!((a.location - 0.374823).abs() < 1e-5);
        assert_eq!(a.stability, Stability::Attracting);
    }

    #[test]
    fn fixed_points_at_lambda_star() {
        let fps = solve_fixed_points(lam(lambda_star()), DEFAULT_ROOT_TOL).unwrap();
        let x = nonzero(&fps);
        assert!((x.location - SQRT_2).abs() < 1e-12);
        assert!((x.multiplier.abs() - 1.0).abs() < 1e-12);
        assert_eq!(x.stability, Stability::RationallyIndifferent);
        assert_eq!(
            fps.iter().find(|r| r.is_origin).unwrap().stability,
            Stability::Repelling
        );
    }

    #[test]
    fn lambda_one_has_only_origin() {
        let fps = solve_fixed_points(lam(1.0), DEFAULT_ROOT_TOL).unwrap();
        assert_eq!(fps.len(), 1);
        assert_eq!(fps[0].stability, Stability::RationallyIndifferent);
    }

    #[test]
    fn classify_examples() {
        let tol = DEFAULT_ROOT_TOL;
        assert_eq!(
            classify_fixed_point(lam(0.9), 0.0, tol).unwrap().stability,
            Stability::Attracting
        );
        assert_eq!(
            classify_fixed_point(lam(1.0), 0.0, tol).unwrap().stability,
            Stability::RationallyIndifferent
        );
        let r = classify_fixed_point(lam(11.0), 0.0, tol).unwrap();
        assert_eq!(r.stability, Stability::Repelling);
        assert_eq!(r.multiplier, 11.0);
        assert!(matches!(
            classify_fixed_point(lam(2.0), 0.5, tol),
            Err(DynamicsError::NotAFixedPoint { .. })
        ));
    }

    #[test]
    fn tolerance_below_spacing_is_rejected() {
        assert!(matches!(
            nonzero_fixed_point(lam(30.0), 1e-18),
            Err(DynamicsError::Tolerance { .. })
        ));
        assert!(nonzero_fixed_point(lam(2.0), 0.0).is_err());
    }

    #[test]
    fn two_cycle_at_twelve() {
        let s = find_cycles(lam(12.0), 2, (0.01, 6.0), 100_000, DEFAULT_ROOT_TOL).unwrap();
        assert_eq!(s.cycles.len(), 1);
        let c = &s.cycles[0];
        assert!((c.points[0] - 0.748218).abs() < 1e-4);
        assert!((c.points[1] - 2.43034).abs() < 1e-4);
        let (m, st) = cycle_multiplier(lam(12.0), c).unwrap();
        assert!((m.abs() - 0.376878).abs() < 1e-3);
        assert_eq!(st, Stability::Attracting);
    }

    #[test]
    fn two_cycle_at_eighteen_and_a_half() {
        let s = find_cycles(lam(18.5), 2, (0.01, 6.0), 100_000, DEFAULT_ROOT_TOL).unwrap();
        assert_eq!(s.cycles.len(), 1);
        let c = &s.cycles[0];
        assert!((c.points[0] - 0.408442).abs() < 1e-4);
        assert!((c.points[1] - 3.56598).abs() < 1e-4);
        assert!((c.multiplier.abs() - 1.00932).abs() < 1e-3);
        assert_eq!(c.stability, Stability::Repelling);
    }

    #[test]
    fn indifferent_two_cycle() {
        let s = find_cycles(lam(18.44505), 2, (0.01, 6.0), 100_000, DEFAULT_ROOT_TOL).unwrap();
        let c = &s.cycles[0];
        assert!((c.points[0] - 0.409865).abs() < 1e-4);
        assert!((c.points[1] - 3.55911).abs() < 1e-4);
        assert!((c.multiplier.abs() - 1.0).abs() < 1e-3);
        assert_eq!(c.stability, Stability::RationallyIndifferent);
    }

    /// Brute-force oracle: scan ζ²(x) − x on 10⁶ points and report every
    /// sign change.
    fn brute_force_sign_changes(p: Parameter, lo: f64, hi: f64, n: usize) -> Vec<f64> {
        let h = |x: f64| map_real(p, map_real(p, x).unwrap()).unwrap() - x;
        let mut out = Vec::new();
        let mut prev = (lo, h(lo));
        for k in 1..=n {
            let x = lo + (hi - lo) * k as f64 / n as f64;
            let v = h(x);
            if prev.1 * v <= 0.0 {
                out.push(0.5 * (prev.0 + x));
            }
            prev = (x, v);
        }
        out
    }

    #[test]
    fn no_two_cycle_at_two() {
        let changes = brute_force_sign_changes(lam(2.0), 0.01, 6.0, 1_000_000);
        assert_eq!(changes.len(), 1);
        assert!((changes[0] - 0.374823).abs() < 1e-5);
        let s = find_cycles(lam(2.0), 2, (0.01, 6.0), 100_000, DEFAULT_ROOT_TOL).unwrap();
        assert!(s.cycles.is_empty());
    }

    #[test]
    fn cycles_of_divisor_period_are_excluded() {
        // at λ = 12 the only attractor is the 2-cycle; period 4 must not
        // report it again
        let s = find_cycles(lam(12.0), 4, (0.01, 6.0), 100_000, DEFAULT_ROOT_TOL).unwrap();
        assert!(s.cycles.iter().all(|c| c.period == 4));
        for c in &s.cycles {
            assert!(c.points.iter().all(|x| (x - 0.748218).abs() > 1e-3));
        }
    }

    #[test]
    fn four_cycle_after_period_doubling() {
        let s = find_cycles(
            lam(18.5),
            4,
            DEFAULT_CYCLE_INTERVAL,
            DEFAULT_CYCLE_GRID,
            DEFAULT_ROOT_TOL,
        )
        .unwrap();
        assert!(s
            .cycles
            .iter()
            .any(|c| c.stability == Stability::Attracting));
        for c in &s.cycles {
            let mut x = c.points[0];
            for i in 0..4 {
                assert!((x - c.points[i]).abs() < 1e-9);
                x = map_real(lam(18.5), x).unwrap();
            }
            assert!((x - c.points[0]).abs() < 1e-9);
        }
    }

    #[test]
    fn interval_across_pole_is_rejected() {
        assert!(find_cycles(lam(5.0), 2, (-2.0, 1.0), 1000, 1e-12).is_err());
        assert!(find_cycles(lam(5.0), 1, (0.0, 1.0), 1000, 1e-12).is_err());
        assert!(find_cycles(lam(5.0), 2, (0.0, 1.0), 10, 1e-12).is_err());
    }

    #[test]
    fn negative_interval_skips_prepole_jumps() {
        // ζ² has poles inside (−0.99, −0.01); the scan must survive them and
        // every reported point must genuinely close up
        let p = lam(12.0);
        let s = find_cycles(p, 2, (-0.99, -0.01), 10_000, DEFAULT_ROOT_TOL).unwrap();
        for c in &s.cycles {
            let y = map_real(p, map_real(p, c.points[0]).unwrap()).unwrap();
            assert!((y - c.points[0]).abs() < 1e-8);
        }
    }

    #[test]
    fn attracting_cycles_at_twelve() {
        let cycles = attracting_cycles(lam(12.0), 8).unwrap();
        assert_eq!(cycles.len(), 1);
        assert_eq!(cycles[0].period, 2);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn nonzero_fixed_point_lies_in_regime_interval(u in 0.0f64..1.0, band in 0usize..3) {
            let star = lambda_star();
            let (a, b) = [(0.0, 1.0), (1.0, star), (star, 50.0)][band];
            let l = a + (b - a) * u;
            prop_assume!(l > 0.0 && (l - 1.0).abs() > 1e-9 && (l - star).abs() > 1e-9);
            let x = nonzero_fixed_point(lam(l), DEFAULT_ROOT_TOL).unwrap().unwrap();
            let (lo, hi) = [(-1.0, 0.0), (0.0, SQRT_2), (SQRT_2, f64::INFINITY)][band];
            prop_assert!(x > lo && x < hi, "λ={l} x={x}");
            prop_assert!((map_real(lam(l), x).unwrap() - x).abs() < 1e-10);
        }

        #[test]
        fn bracket_is_monotone(l in 1e-3f64..200.0) {
            let (lo, hi) = fixed_point_bracket(lam(l));
            let g = |x: f64| (x + 1.0) * x.exp() - l;
            prop_assert!(g(lo) < 0.0 && g(hi) > 0.0);
            let m = 0.5 * (lo + hi);
            prop_assert!(g(lo) < g(m) && g(m) < g(hi));
        }

        #[test]
        fn multiplier_is_rotation_invariant(l in 10.5f64..17.0) {
            let p = lam(l);
            let s = find_cycles(p, 2, (0.01, 6.0), 2_000, DEFAULT_ROOT_TOL).unwrap();
            for c in &s.cycles {
                let (m0, _) = cycle_multiplier(p, c).unwrap();
                let (m1, _) = cycle_multiplier(p, &c.rotated(1)).unwrap();
                prop_assert!((m0 - m1).abs() <= 1e-12);
            }
        }
    }
}
