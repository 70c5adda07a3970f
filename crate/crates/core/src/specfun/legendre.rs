use crate::error::{Error, Result};
use crate::scalar::Real;

use super::gamma::{factorial, gamma_ratio};
use super::hyper::hyp2f1_terminating;

/// Degree `l'` and order `m'` of a real-order Legendre function whose
/// difference `n_theta = l' - m'` is a non-negative integer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealOrderLegendreParams<T> {
    lprime: T,
    mprime: T,
    ntheta: u32,
}

impl<T: Real> RealOrderLegendreParams<T> {
    pub fn new(mprime: T, ntheta: u32) -> Result<Self> {
        if !(mprime >= T::zero()) || !mprime.is_finite() {
            return Err(Error::Domain(format!("order m' must be finite and >= 0, got {mprime}")));
        }
        Ok(Self { lprime: mprime + T::from_u32(ntheta).unwrap(), mprime, ntheta })
    }

    /// From degree and order; `lprime - mprime` must be an integer to 1e-9.
    pub fn from_degree_order(lprime: T, mprime: T) -> Result<Self> {
        let diff = lprime - mprime;
        let rounded = diff.round();
        if (diff - rounded).abs() > T::lit(1e-9) || rounded < T::zero() {
            return Err(Error::Domain(format!(
                "l' - m' must be a non-negative integer, got {lprime} - {mprime}"
            )));
        }
        Self::new(mprime, rounded.to_u32().unwrap())
    }

    pub fn lprime(&self) -> T {
        self.lprime
    }

    pub fn mprime(&self) -> T {
        self.mprime
    }

    pub fn ntheta(&self) -> u32 {
        self.ntheta
    }
}

/// `(1 - x^2)^(p / 2)`, with `0^p = 0` for `p > 0` and `1` for `p = 0`.
pub fn sin_power<T: Real>(x: T, p: T) -> T {
    if p == T::zero() {
        return T::one();
    }
    let s2 = (T::one() - x) * (T::one() + x);
    if s2 <= T::zero() {
        return T::zero();
    }
    s2.powf(p / T::lit(2.0))
}

fn check_unit<T: Real>(x: T) -> Result<()> {
    if x.abs() > T::one() || x.is_nan() {
        return Err(Error::Domain(format!("Legendre argument must lie in [-1, 1], got {x}")));
    }
    Ok(())
}

/// Real-order associated Legendre function `P_{l'}^{m'}` with its
/// constant prefactor cached, for repeated evaluation.
///
/// Convention:
///
/// ```text
/// P_{l'}^{m'}(x) = (1-x^2)^{m'/2} Γ(l'+m'+1) / (2^{m'} Γ(m'+1) n_θ!)
///                  · 2F1(-n_θ, l'+m'+1; m'+1; (1-x)/2)
/// ```
///
/// For integer `l' = l`, `m' = m` this is the Rodrigues-form `P_l^m`
/// without the Condon-Shortley phase, e.g. `P_1^1(x) = +sqrt(1-x^2)`.
#[derive(Debug, Clone, Copy)]
pub struct LegendreRealOrder<T> {
    params: RealOrderLegendreParams<T>,
    prefactor: T,
}

impl<T: Real> LegendreRealOrder<T> {
    pub fn new(params: RealOrderLegendreParams<T>) -> Result<Self> {
        let m = params.mprime;
        let two = T::lit(2.0);
        let prefactor = gamma_ratio(params.lprime + m + T::one(), m + T::one())?
            / (two.powf(m) * factorial::<T>(params.ntheta));
        Ok(Self { params, prefactor })
    }

    pub fn params(&self) -> &RealOrderLegendreParams<T> {
        &self.params
    }

    /// The constant multiplying `(1-x^2)^{m'/2} 2F1(...)`.
    pub fn prefactor(&self) -> T {
        self.prefactor
    }

    pub fn eval(&self, x: T) -> Result<T> {
        check_unit(x)?;
        let p = &self.params;
        // Parity (-1)^{n_θ} keeps the series argument in [0, 1/2], where the
        // alternating terms cancel least.
        let (xa, sign) = if x < T::zero() && p.ntheta % 2 == 1 {
            (-x, -T::one())
        } else {
            (x.abs(), T::one())
        };
        let series = hyp2f1_terminating(
            -(p.ntheta as i64),
            p.lprime + p.mprime + T::one(),
            p.mprime + T::one(),
            (T::one() - xa) / T::lit(2.0),
        )?;
        Ok(sign * sin_power(x, p.mprime) * self.prefactor * series)
    }
}

pub fn legendre_real_order<T: Real>(p: RealOrderLegendreParams<T>, x: T) -> Result<T> {
    LegendreRealOrder::new(p)?.eval(x)
}

/// Integer-order associated Legendre function without the Condon-Shortley
/// phase, by upward recurrence in `l` from the diagonal `P_m^m`.
///
/// Negative orders follow `P_l^{-m} = (-1)^m (l-m)!/(l+m)! P_l^m`.
pub fn legendre_int<T: Real>(l: u32, m: i32, x: T) -> Result<T> {
    check_unit(x)?;
    let am = m.unsigned_abs();
    if am > l {
        return Err(Error::Domain(format!("|m| = {am} exceeds l = {l}")));
    }
    let positive = legendre_int_nonneg(l, am, x);
    if m >= 0 {
        return Ok(positive);
    }
    let sign = if am.is_multiple_of(2) { T::one() } else { -T::one() };
    Ok(sign * factorial::<T>(l - am) / factorial::<T>(l + am) * positive)
}

fn legendre_int_nonneg<T: Real>(l: u32, m: u32, x: T) -> T {
    let s = ((T::one() - x) * (T::one() + x)).max(T::zero()).sqrt();
    // P_m^m = (2m-1)!! s^m
    let mut pmm = T::one();
    let mut odd = T::one();
    for _ in 0..m {
        pmm = pmm * odd * s;
        odd += T::lit(2.0);
    }
    if l == m {
        return pmm;
    }
    let mf = T::from_u32(m).unwrap();
    let mut prev = pmm;
    let mut cur = x * (T::lit(2.0) * mf + T::one()) * pmm;
    for ll in (m + 1)..l {
        let lf = T::from_u32(ll).unwrap();
        let next = ((T::lit(2.0) * lf + T::one()) * x * cur - (lf + mf) * prev) / (lf - mf + T::one());
        prev = cur;
        cur = next;
    }
    cur
}

/// `P_{l'}^{-m'}(x) = (-1)^m Γ(l'-m'+1)/Γ(l'+m'+1) P_{l'}^{m'}(x)`, where
/// `m_int` is the integer magnetic number whose parity sets the sign.
pub fn legendre_negative_order<T: Real>(p: RealOrderLegendreParams<T>, m_int: i32, x: T) -> Result<T> {
    let sign = if m_int.rem_euclid(2) == 0 { T::one() } else { -T::one() };
    let ratio = gamma_ratio(
        p.lprime - p.mprime + T::one(),
        p.lprime + p.mprime + T::one(),
    )?;
    Ok(sign * ratio * legendre_real_order(p, x)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn params(m: f64, n: u32) -> RealOrderLegendreParams<f64> {
        RealOrderLegendreParams::new(m, n).unwrap()
    }

    #[test]
    fn diagonal_is_prefactor_times_sin_power() {
        let leg = LegendreRealOrder::new(params(1.7, 0)).unwrap();
        assert_eq!(leg.eval(0.0).unwrap(), leg.prefactor());
        let x = 0.3_f64;
        let expect = leg.prefactor() * (1.0 - x * x).powf(0.85);
        assert!((leg.eval(x).unwrap() - expect).abs() < 1e-14);
    }

    #[test]
    fn integer_reduction_p21() {
        // Rodrigues form without Condon-Shortley: P_2^1(x) = 3x sqrt(1-x^2)
        let expect = 3.0 * 0.5 * 0.75_f64.sqrt();
        assert!((legendre_real_order(params(1.0, 1), 0.5).unwrap() - expect).abs() < 1e-14);
        assert!((legendre_int(2, 1, 0.5).unwrap() - expect).abs() < 1e-14);
    }

    #[test]
    fn real_order_matches_ferrers_oracle() {
        // Γ(l'+m'+1)/n_θ! · Ferrers P_{l'}^{-m'}(0.3), l' = m' + 2, m' = sqrt(1.5)
        let v = legendre_real_order(params(1.5_f64.sqrt(), 2), 0.3).unwrap();
        assert!((v - -0.999_248_508_751_670_259_37).abs() < 1e-13);
    }

    #[test]
    fn integer_known_values() {
        for x in [-1.0, -0.3, 0.0, 0.8, 1.0] {
            assert_eq!(legendre_int(0, 0, x).unwrap(), 1.0);
        }
        assert_eq!(legendre_int(1, 1, 0.0_f64).unwrap(), 1.0);
        // Rodrigues (symbolic differentiation) P_3^1(1/2)
        assert!((legendre_int(3, 1, 0.5_f64).unwrap() - 0.324_759_526_419_164_492_54).abs() < 1e-14);
        assert!(legendre_int(2, 3, 0.1_f64).is_err());
        assert!(legendre_int(2, -3, 0.1_f64).is_err());
    }

    #[test]
    fn endpoint_rules() {
        assert_eq!(sin_power(1.0_f64, 0.8), 0.0);
        assert_eq!(sin_power(-1.0_f64, 0.8), 0.0);
        assert_eq!(sin_power(1.0_f64, 0.0), 1.0);
        let v = legendre_real_order(params(0.7, 2), 1.0).unwrap();
        assert_eq!(v, 0.0);
        assert!(legendre_real_order(params(0.0, 2), 1.0).unwrap().is_finite());
        assert!(legendre_real_order(params(0.7, 2), 1.0 + 1e-9).is_err());
    }

    #[test]
    fn negative_order_identity() {
        // l' = 3, m' = 1, m = 1: -(2!/4!) P_3^1(0.4); Rodrigues P_3^1(0.4) = -0.27495...
        let v = legendre_negative_order(params(1.0, 2), 1, 0.4_f64).unwrap();
        let expect = -(2.0 / 24.0) * -0.274_954_541_697_350_400_40;
        assert!((v - expect).abs() < 1e-14);
        let p = params(2.2, 3);
        let even = legendre_negative_order(p, 2, 0.1).unwrap();
        let odd = legendre_negative_order(p, 3, 0.1).unwrap();
        assert_eq!(even, -odd);
        let zero = legendre_negative_order(params(0.5, 1), 0, 0.2).unwrap();
        let ratio = 1.0 / crate::specfun::gamma(2.0 + 1.0).unwrap();
        assert!((zero - ratio * legendre_real_order(params(0.5, 1), 0.2).unwrap()).abs() < 1e-15);
        // The negative-order relation at b = 0 agrees with the integer negative-order branch
        for l in 0..6u32 {
            for m in 0..=l {
                let lhs = legendre_negative_order(params(m as f64, l - m), m as i32, 0.37).unwrap();
                let rhs = legendre_int(l, -(m as i32), 0.37).unwrap();
                assert!((lhs - rhs).abs() < 1e-13 * (1.0 + rhs.abs()));
            }
        }
    }

    #[test]
    fn b_zero_reduction_grid() {
        for l in 0..=6u32 {
            for m in 0..=l {
                let leg = LegendreRealOrder::new(params(m as f64, l - m)).unwrap();
                for i in 0..=200 {
                    let x = -1.0 + i as f64 * 0.01;
                    let a = leg.eval(x).unwrap();
                    let b = legendre_int(l, m as i32, x).unwrap();
                    assert!((a - b).abs() <= 1e-10, "l={l} m={m} x={x}: {a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn satisfies_polar_equation() {
        // (1-x^2)H'' - 2xH' + (λ - m'^2/(1-x^2))H = 0, 6th-order central differences
        for &(mprime, nth) in &[(0.5_f64.sqrt(), 0u32), (1.5_f64.sqrt(), 2), (11.0_f64.sqrt(), 3), (2.3, 4)] {
            let leg = LegendreRealOrder::new(params(mprime, nth)).unwrap();
            let lp = leg.params().lprime();
            let lambda = lp * (lp + 1.0);
            let f = |x: f64| leg.eval(x).unwrap();
            let h = 1e-3;
            let max_h = (0..=400).map(|i| f(-1.0 + i as f64 * 0.005).abs()).fold(0.0, f64::max);
            for i in 0..=190 {
                let x = -0.95 + i as f64 * 0.01;
                let d1 = (-f(x + 3.0 * h) + 9.0 * f(x + 2.0 * h) - 45.0 * f(x + h) + 45.0 * f(x - h)
                    - 9.0 * f(x - 2.0 * h)
                    + f(x - 3.0 * h))
                    / (-60.0 * h);
                let d2 = (2.0 * f(x + 3.0 * h) - 27.0 * f(x + 2.0 * h) + 270.0 * f(x + h) - 490.0 * f(x)
                    + 270.0 * f(x - h)
                    - 27.0 * f(x - 2.0 * h)
                    + 2.0 * f(x - 3.0 * h))
                    / (180.0 * h * h);
                let s2 = 1.0 - x * x;
                let res = s2 * d2 - 2.0 * x * d1 + (lambda - mprime * mprime / s2) * f(x);
                assert!(res.abs() <= 1e-6 * max_h, "m'={mprime} n={nth} x={x} res={res}");
            }
        }
    }

    proptest! {
        #[test]
        fn parity(mprime in 0.0f64..6.0, nth in 0u32..7, x in -1.0f64..1.0) {
            let leg = LegendreRealOrder::new(params(mprime, nth)).unwrap();
            let a = leg.eval(x).unwrap();
            let b = leg.eval(-x).unwrap();
            let sign = if nth % 2 == 0 { 1.0 } else { -1.0 };
            let scale = leg.prefactor().abs().max(1.0) * (1u64 << nth) as f64;
            prop_assert!((b - sign * a).abs() <= 1e-12 * scale, "{} vs {}", a, b);
        }
    }
}
