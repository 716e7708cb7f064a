//! Evaluation of ζ_λ(z) = λ·z·e^(−z)/(z+1), its derivative and Schwarzian
//! derivative, and the singular values of the family.
//!
//! Real-axis work goes through the `*_real` functions, which never touch
//! complex arithmetic. Their results carry the exact sign of λ·x/(x+1): an
//! underflow is clamped to the smallest normal double of that sign, and an
//! overflow returns the matching infinity. Callers treat non-finite values
//! as escape.

use std::f64::consts::SQRT_2;

use num_complex::Complex64;

use crate::error::{DynamicsError, Result};

/// A point of the complex plane.
pub type ComplexPoint = Complex64;

/// `|z + 1|` at or below this is treated as the pole.
pub const DELTA_POLE: f64 = 1e-12;

/// `|z² + z − 1|` at or below this is treated as a critical point.
pub const DELTA_CRIT: f64 = 1e-9;

/// The second bifurcation value λ* = (√2 + 1)·e^√2.
pub fn lambda_star() -> f64 {
    (SQRT_2 + 1.0) * SQRT_2.exp()
}

/// Positive critical point (−1 + √5)/2.
pub fn critical_point_positive() -> f64 {
    (5f64.sqrt() - 1.0) / 2.0
}

/// Negative critical point (−1 − √5)/2.
pub fn critical_point_negative() -> f64 {
    -(5f64.sqrt() + 1.0) / 2.0
}

/// Where λ sits relative to the two bifurcation values 1 and λ*.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    BelowOne,
    One,
    Middle,
    LambdaStar,
    AboveStar,
}

/// Number of ulps around 1 and λ* that still count as the bifurcation value.
const REGIME_ULPS: f64 = 4.0;

/// The family parameter λ > 0.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Parameter(f64);

impl Parameter {
    pub fn new(lambda: f64) -> Result<Self> {
        if lambda.is_finite() && lambda > 0.0 {
            Ok(Self(lambda))
        } else {
            Err(DynamicsError::InvalidParameter(lambda))
        }
    }

    pub fn lambda(self) -> f64 {
        self.0
    }

    pub fn regime(self) -> Regime {
        let l = self.0;
        let star = lambda_star();
        if (l - 1.0).abs() <= REGIME_ULPS * f64::EPSILON {
            Regime::One
        } else if (l - star).abs() <= REGIME_ULPS * f64::EPSILON * star {
            Regime::LambdaStar
        } else if l < 1.0 {
            Regime::BelowOne
        } else if l < star {
            Regime::Middle
        } else {
            Regime::AboveStar
        }
    }

    pub fn singular_data(self) -> SingularData {
        SingularData::new(self)
    }
}

/// Critical points, critical values, asymptotic value and pole of ζ_λ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingularData {
    /// `[(−1 − √5)/2, (−1 + √5)/2]`
    pub critical_points: [f64; 2],
    /// Values of ζ_λ at `critical_points`, same order.
    pub critical_values: [f64; 2],
    pub asymptotic_value: f64,
    pub pole: f64,
}

impl SingularData {
    pub fn new(p: Parameter) -> Self {
        let s5 = 5f64.sqrt();
        let l = p.lambda();
        Self {
            critical_points: [critical_point_negative(), critical_point_positive()],
            critical_values: [
                (3.0 + s5) / 2.0 * l * ((1.0 + s5) / 2.0).exp(),
                (3.0 - s5) / 2.0 * l * ((1.0 - s5) / 2.0).exp(),
            ],
            asymptotic_value: 0.0,
            pole: -1.0,
        }
    }
}

#[inline]
fn pole_check_real(x: f64) -> Result<()> {
    if (x + 1.0).abs() <= DELTA_POLE {
        Err(DynamicsError::Pole { re: x, im: 0.0 })
    } else {
        Ok(())
    }
}

#[inline]
fn pole_check(z: ComplexPoint) -> Result<()> {
    if (z + 1.0).norm() <= DELTA_POLE {
        Err(DynamicsError::Pole { re: z.re, im: z.im })
    } else {
        Ok(())
    }
}

/// ζ_λ(x) on the real axis.
pub fn map_real(p: Parameter, x: f64) -> Result<f64> {
    pole_check_real(x)?;
    let ratio = x / (x + 1.0);
    let y = p.lambda() * ratio * (-x).exp();
    if y == 0.0 && x != 0.0 {
        // e^(−x) underflowed; keep the sign of λ·x/(x+1)
        return Ok(f64::MIN_POSITIVE.copysign(ratio));
    }
    Ok(y)
}

/// ζ′_λ(x) = −λ(x² + x − 1)e^(−x)/(x + 1)² on the real axis.
pub fn derivative_real(p: Parameter, x: f64) -> Result<f64> {
    pole_check_real(x)?;
    let q = x * x + x - 1.0;
    let d = x + 1.0;
    Ok(-p.lambda() * q * (-x).exp() / (d * d))
}

/// ln|ζ′_λ(x)| written as ln λ + ln|x² + x − 1| − x − 2 ln|x + 1|.
///
/// Stays finite where e^(−x) alone would over- or underflow. Returns
/// `-inf` at the critical points.
pub fn log_abs_derivative_real(p: Parameter, x: f64) -> Result<f64> {
    pole_check_real(x)?;
    let q = (x * x + x - 1.0).abs();
    Ok(p.lambda().ln() + q.ln() - x - 2.0 * (x + 1.0).abs().ln())
}

/// ζ_λ(z). Overflow collapses to the point at infinity `(+∞, 0)`, so no
/// NaN ever leaves this function.
pub fn eval_map(p: Parameter, z: ComplexPoint) -> Result<ComplexPoint> {
    pole_check(z)?;
    let w = z / (z + 1.0) * (-z).exp() * p.lambda();
    Ok(finite_or_infinity(w))
}

/// ζ′_λ(z), with the same overflow convention as [`eval_map`].
pub fn eval_derivative(p: Parameter, z: ComplexPoint) -> Result<ComplexPoint> {
    pole_check(z)?;
    let q = z * z + z - 1.0;
    let d = z + 1.0;
    let w = -(q * (-z).exp() / (d * d)) * p.lambda();
    Ok(finite_or_infinity(w))
}

#[inline]
pub(crate) fn finite_or_infinity(w: ComplexPoint) -> ComplexPoint {
    if w.re.is_finite() && w.im.is_finite() {
        w
    } else {
        ComplexPoint::new(f64::INFINITY, 0.0)
    }
}

/// Closed-form Schwarzian derivative
/// `SD(z) = −(z⁴ + 2z³ − 3z² − 4z + 18) / (2(z² + z − 1)²)`.
///
/// Independent of λ, since scaling by a constant leaves SD unchanged.
pub fn eval_schwarzian(z: ComplexPoint) -> Result<ComplexPoint> {
    pole_check(z)?;
    let q = z * z + z - 1.0;
    if q.norm() <= DELTA_CRIT {
        return Err(DynamicsError::CriticalPoint { re: z.re, im: z.im });
    }
    let num = (((z + 2.0) * z - 3.0) * z - 4.0) * z + 18.0;
    Ok(-num / (q * q * 2.0))
}

/// Real specialisation of [`eval_schwarzian`].
pub fn schwarzian_real(x: f64) -> Result<f64> {
    pole_check_real(x)?;
    let q = x * x + x - 1.0;
    if q.abs() <= DELTA_CRIT {
        return Err(DynamicsError::CriticalPoint { re: x, im: 0.0 });
    }
    let num = (((x + 2.0) * x - 3.0) * x - 4.0) * x + 18.0;
    Ok(-num / (2.0 * q * q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn lam(l: f64) -> Parameter {
        Parameter::new(l).unwrap()
    }

    fn c(re: f64, im: f64) -> ComplexPoint {
        ComplexPoint::new(re, im)
    }

    /// Schwarzian of ζ_λ from numerically differentiated map values.
    ///
    /// f′, f″, f‴ come from trapezoidal Cauchy-integral differences on a
    /// circle around x (spectrally accurate finite differences), then
    /// SD = f‴/f′ − 3/2·(f″/f′)².
    pub(crate) fn fd_schwarzian(p: Parameter, x: f64) -> f64 {
        let r = (0.5 * (x + 1.0).abs()).min(0.5);
        let n = 96;
        let mut d = [ComplexPoint::new(0.0, 0.0); 4];
        for j in 0..n {
            let w = ComplexPoint::from_polar(1.0, 2.0 * std::f64::consts::PI * j as f64 / n as f64);
            let fz = eval_map(p, c(x, 0.0) + w * r).unwrap();
            for (k, dk) in d.iter_mut().enumerate() {
                *dk += fz / w.powi(k as i32);
            }
        }
        let deriv = |k: usize| (d[k] / n as f64).re * [1.0, 1.0, 2.0, 6.0][k] / r.powi(k as i32);
        let (d1, d2, d3) = (deriv(1), deriv(2), deriv(3));
        d3 / d1 - 1.5 * (d2 / d1).powi(2)
    }

    #[test]
    fn map_examples() {
        assert_eq!(eval_map(lam(1.0), c(0.0, 0.0)).unwrap(), c(0.0, 0.0));
        let y = map_real(lam(0.5), -0.314923).unwrap();
        assert!((y + 0.314923).abs() < 1e-5);
        let y = map_real(lam(12.0), 0.748218).unwrap();
        assert!((y - 2.43034).abs() < 1e-4);
        let z = eval_map(lam(12.0), c(0.748218, 0.0)).unwrap();
        assert_eq!(z.im, 0.0);
        assert_relative_eq!(z.re, y, max_relative = 1e-14);
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(derivative_real(lam(0.9), 0.0).unwrap(), 0.9);
        assert!((derivative_real(lam(12.0), 0.748218).unwrap() + 0.57235).abs() < 1e-4);
        let cp = critical_point_positive();
        assert!(derivative_real(lam(3.7), cp).unwrap().abs() < 1e-15);
        assert!(eval_derivative(lam(3.7), c(cp, 0.0)).unwrap().norm() < 1e-15);
    }

    #[test]
    fn schwarzian_examples() {
        assert_eq!(eval_schwarzian(c(0.0, 0.0)).unwrap(), c(-9.0, 0.0));
        assert_eq!(eval_schwarzian(c(1.0, 0.0)).unwrap(), c(-7.0, 0.0));
        assert!(matches!(
            eval_schwarzian(c(critical_point_positive(), 0.0)),
            Err(DynamicsError::CriticalPoint { .. })
        ));
        assert!(matches!(
            schwarzian_real(critical_point_negative()),
            Err(DynamicsError::CriticalPoint { .. })
        ));
    }

    #[test]
    fn schwarzian_finite_difference_at_examples() {
        for l in [0.5, 2.0, 12.0] {
            assert_relative_eq!(fd_schwarzian(lam(l), 0.0), -9.0, max_relative = 1e-4);
            assert_relative_eq!(fd_schwarzian(lam(l), 1.0), -7.0, max_relative = 1e-4);
        }
    }

    #[test]
    fn pole_is_rejected() {
        let p = lam(2.0);
        assert!(matches!(map_real(p, -1.0), Err(DynamicsError::Pole { .. })));
        assert!(matches!(
            map_real(p, -1.0 + 5e-13),
            Err(DynamicsError::Pole { .. })
        ));
        assert!(map_real(p, -1.0 + 1e-11).is_ok());
        assert!(matches!(
            eval_map(p, c(-1.0, 0.0)),
            Err(DynamicsError::Pole { .. })
        ));
        assert!(matches!(
            eval_derivative(p, c(-1.0, 1e-13)),
            Err(DynamicsError::Pole { .. })
        ));
    }

    #[test]
    fn invalid_parameters() {
        for l in [0.0, -1.0, f64::NAN, f64::INFINITY] {
            assert!(Parameter::new(l).is_err());
        }
    }

    #[test]
    fn lambda_star_and_regimes() {
        assert!((lambda_star() - 9.93026).abs() < 5e-4);
        assert_eq!(lam(9.93).regime(), Regime::Middle);
        assert_eq!(lam(9.94).regime(), Regime::AboveStar);
        assert_eq!(lam(lambda_star()).regime(), Regime::LambdaStar);
        assert_eq!(lam(1.0).regime(), Regime::One);
        assert_eq!(lam(0.999999).regime(), Regime::BelowOne);
        assert_eq!(lam(1.000001).regime(), Regime::Middle);
    }

    #[test]
    fn singular_values() {
        let p = lam(2.0);
        let s = p.singular_data();
        for (cp, cv) in s.critical_points.iter().zip(s.critical_values) {
            assert!((cp * cp + cp - 1.0).abs() < 1e-15);
            assert_relative_eq!(map_real(p, *cp).unwrap(), cv, max_relative = 1e-14);
        }
        assert_eq!(s.asymptotic_value, 0.0);
        assert_eq!(s.pole, -1.0);
        // ζ(x) → 0 as x → +∞
        assert!(map_real(p, 800.0).unwrap() <= f64::MIN_POSITIVE);
    }

    #[test]
    fn sign_survives_underflow_and_overflow() {
        let p = lam(1.1);
        assert_eq!(map_real(p, 4e10).unwrap(), f64::MIN_POSITIVE);
        assert_eq!(map_real(p, -800.0).unwrap(), f64::INFINITY);
        assert_eq!(map_real(p, -1.0 + 1e-11).unwrap().signum(), -1.0);
        let w = eval_map(p, c(-800.0, 3.0)).unwrap();
        assert!(w.re.is_infinite() && !w.im.is_nan());
    }

    #[test]
    fn log_derivative_matches_direct_form() {
        let p = lam(25.0);
        for x in [-3.0, -0.5, 0.3, 2.0, 7.5] {
            let direct = derivative_real(p, x).unwrap().abs().ln();
            assert_relative_eq!(
                log_abs_derivative_real(p, x).unwrap(),
                direct,
                max_relative = 1e-12
            );
        }
    }

    /// Five-point central difference along the real direction.
    fn fd_derivative(p: Parameter, z: ComplexPoint) -> ComplexPoint {
        let h = 1e-3;
        let f = |t: f64| eval_map(p, z + t).unwrap();
        (f(-2.0 * h) - f(2.0 * h) + (f(h) - f(-h)) * 8.0) / (12.0 * h)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn real_sign_matches_rational_factor(l in 1e-3f64..60.0, x in -40.0f64..40.0) {
            prop_assume!((x + 1.0).abs() > 1e-9);
            let y = map_real(lam(l), x).unwrap();
            prop_assert_eq!(y.signum() * (x != 0.0) as i32 as f64,
                            (x / (x + 1.0)).signum() * (x != 0.0) as i32 as f64);
            prop_assert_eq!(eval_map(lam(l), c(x, 0.0)).unwrap().im, 0.0);
        }

        #[test]
        fn derivative_matches_finite_difference(
            l in 0.05f64..30.0, re in -5.0f64..5.0, im in -5.0f64..5.0,
        ) {
            let z = c(re, im);
            prop_assume!(z.norm() < 5.0 && (z + 1.0).norm() > 0.1);
            let p = lam(l);
            let exact = eval_derivative(p, z).unwrap();
            let fd = fd_derivative(p, z);
            prop_assert!((exact - fd).norm() <= 1e-6 * exact.norm() + 1e-12,
                "z={z} exact={exact} fd={fd}");
        }

        #[test]
        fn fixed_point_identity(x in -0.99f64..6.0) {
            let l = (x + 1.0) * x.exp();
            let p = lam(l);
            prop_assert!((map_real(p, x).unwrap() - x).abs() < 1e-10);
            if x.abs() > 1e-6 {
                let mult = derivative_real(p, x).unwrap().abs();
                let closed = (x * x + x - 1.0).abs() / (x + 1.0);
                prop_assert!((mult - closed).abs() < 1e-10, "{mult} vs {closed}");
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(500))]

        #[test]
        fn schwarzian_matches_finite_difference(x in -4.0f64..4.0, li in 0usize..3) {
            prop_assume!((x + 1.0).abs() > 0.05);
            prop_assume!((x * x + x - 1.0).abs() > 1e-3);
            let p = lam([0.5, 2.0, 12.0][li]);
            let closed = schwarzian_real(x).unwrap();
            let fd = fd_schwarzian(p, x);
            prop_assert!((closed - fd).abs() <= 1e-4 * closed.abs(), "x={x} closed={closed} fd={fd}");
        }
    }
}
