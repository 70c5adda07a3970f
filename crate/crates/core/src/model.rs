//! Quantum numbers, deformed spherical harmonics, radial functions and the
//! position-space density of the ring-shaped Coulomb problem.
//!
//! Atomic units throughout: `ħ = M = e = 1`, lengths in Bohr radii.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad::{integrate_doubling, Doubling, Integral};
use crate::scalar::Real;
use crate::specfun::{
    factorial, gamma, gamma_ratio, legendre_int, legendre_negative_order, ln_gamma, hyp1f1_terminating,
    LegendreRealOrder, RealOrderLegendreParams,
};

/// Physical labels `(n, l, m)` plus the ring strength `b` and charge `Z`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuantumState<T> {
    pub n: u32,
    pub l: u32,
    pub m: i32,
    pub b: T,
    #[serde(rename = "Z")]
    pub z: T,
}

impl<T: Real> QuantumState<T> {
    pub fn new(n: u32, l: u32, m: i32, b: T, z: T) -> Result<Self> {
        let qs = Self { n, l, m, b, z };
        qs.validate()?;
        Ok(qs)
    }

    /// Hydrogen-like charge `Z = 1`.
    pub fn with_b(n: u32, l: u32, m: i32, b: T) -> Result<Self> {
        Self::new(n, l, m, b, T::one())
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 1 {
            return Err(Error::Invalid("n ≥ 1 violated".into()));
        }
        if self.l + 1 > self.n {
            return Err(Error::Invalid(format!("l ≤ n−1 violated (n = {}, l = {})", self.n, self.l)));
        }
        if self.m.unsigned_abs() > self.l {
            return Err(Error::Invalid(format!("|m| ≤ l violated (l = {}, m = {})", self.l, self.m)));
        }
        if !(self.z > T::zero()) || !self.z.is_finite() {
            return Err(Error::Invalid(format!("Z must be positive, got {}", self.z)));
        }
        let m2 = T::from_i32(self.m * self.m).unwrap();
        if !self.b.is_finite() {
            return Err(Error::Invalid("b must be finite".into()));
        }
        if self.m == 0 {
            if self.b < T::zero() {
                return Err(Error::Invalid(format!("b must exceed −m² (b ≥ 0 when m = 0), got b = {}", self.b)));
            }
        } else if !(self.b > -m2) {
            return Err(Error::Invalid(format!("b must exceed −m² = {}, got b = {}", -m2, self.b)));
        }
        Ok(())
    }

    /// Same state with the opposite sign of `m`.
    pub fn mirrored(&self) -> Self {
        Self { m: -self.m, ..*self }
    }
}

/// Real-valued labels produced by the ring term.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuasiNumbers<T> {
    /// Integer magnetic number carried along for parity and selection rules.
    pub m: i32,
    pub mprime: T,
    pub lprime: T,
    pub ntheta: u32,
    pub nr: u32,
    pub nprime: T,
    pub lambda: T,
}

impl<T: Real> QuasiNumbers<T> {
    pub fn legendre_params(&self) -> RealOrderLegendreParams<T> {
        RealOrderLegendreParams::new(self.mprime, self.ntheta).expect("m' ≥ 0 by construction")
    }
}

/// `m' = sqrt(m² + b)`, `l' = n_θ + m'`, `n' = n_r + l' + 1`, `λ = l'(l'+1)`.
pub fn derive_quasi<T: Real>(qs: &QuantumState<T>) -> Result<QuasiNumbers<T>> {
    qs.validate()?;
    let m2 = T::from_i32(qs.m * qs.m).unwrap() + qs.b;
    let mprime = m2.sqrt();
    let ntheta = qs.l - qs.m.unsigned_abs();
    let nr = qs.n - qs.l - 1;
    let lprime = T::from_u32(ntheta).unwrap() + mprime;
    let nprime = T::from_u32(nr).unwrap() + lprime + T::one();
    Ok(QuasiNumbers { m: qs.m, mprime, lprime, ntheta, nr, nprime, lambda: lprime * (lprime + T::one()) })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergyLevel<T> {
    pub value: T,
}

/// `E = -Z² / (2 n'²)`.
pub fn energy<T: Real>(qs: &QuantumState<T>) -> Result<EnergyLevel<T>> {
    let q = derive_quasi(qs)?;
    Ok(EnergyLevel { value: -qs.z * qs.z / (T::lit(2.0) * q.nprime * q.nprime) })
}

fn sign_of_parity<T: Real>(m: i32) -> T {
    if m.rem_euclid(2) == 0 {
        T::one()
    } else {
        -T::one()
    }
}

/// A bound state with its normalisation constants evaluated once.
#[derive(Debug, Clone)]
pub struct Orbital<T> {
    state: QuantumState<T>,
    quasi: QuasiNumbers<T>,
    legendre: LegendreRealOrder<T>,
    /// `N_{l'm'}` of the polar function.
    angular_norm: T,
    /// Constant in front of `ρ^{l'+1} e^{-ρ/2} 1F1(-n_r, 2l'+2, ρ)`.
    radial_norm: T,
    /// `2Z / n'`, so that `ρ = radial_scale · r`.
    radial_scale: T,
}

impl<T: Real> Orbital<T> {
    pub fn new(state: QuantumState<T>) -> Result<Self> {
        let quasi = derive_quasi(&state)?;
        Self::with_angular_scale(state, quasi, T::one())
    }

    /// Multiplies `N_{l'm'}` by `scale`; only used to seed deliberately
    /// broken orbitals for the self-test of the check suite.
    pub fn with_angular_scale(state: QuantumState<T>, quasi: QuasiNumbers<T>, scale: T) -> Result<Self> {
        let legendre = LegendreRealOrder::new(quasi.legendre_params())?;
        let two = T::lit(2.0);
        let (lp, mp) = (quasi.lprime, quasi.mprime);
        let angular_norm = (
            (two * lp + T::one()) * factorial::<T>(quasi.ntheta) / (two * gamma(lp + mp + T::one())?)
        )
        .sqrt()
            * scale;

        let n_p = quasi.nprime;
        let big = T::lit(140.0);
        let a = n_p + lp + T::one();
        let c = two * lp + two;
        let ratio = if a > big || c > big {
            (ln_gamma(a)? - two * ln_gamma(c)?).exp()
        } else {
            gamma(a)? / (gamma(c)? * gamma(c)?)
        };
        let radial_norm = (state.z * ratio / (factorial::<T>(quasi.nr) * n_p * n_p)).sqrt();
        Ok(Self { state, quasi, legendre, angular_norm, radial_norm, radial_scale: two * state.z / n_p })
    }

    pub fn state(&self) -> &QuantumState<T> {
        &self.state
    }

    pub fn quasi(&self) -> &QuasiNumbers<T> {
        &self.quasi
    }

    pub fn energy(&self) -> T {
        -self.state.z * self.state.z / (T::lit(2.0) * self.quasi.nprime * self.quasi.nprime)
    }

    /// Normalised polar function `H(x) = N_{l'm'} P_{l'}^{m'}(x)`, `∫ H² dx = 1`.
    pub fn angular_h(&self, costheta: T) -> Result<T> {
        Ok(self.angular_norm * self.legendre.eval(costheta)?)
    }

    /// `u_{n'l'}(r)`, normalised so that `∫ u² dr = 1`.
    pub fn radial_u(&self, r: T) -> Result<T> {
        if r < T::zero() || r.is_nan() {
            return Err(Error::Domain(format!("radius must be non-negative, got {r}")));
        }
        if r == T::zero() {
            return Ok(T::zero());
        }
        let rho = self.radial_scale * r;
        let q = &self.quasi;
        let two = T::lit(2.0);
        let series = hyp1f1_terminating(-(q.nr as i64), two * q.lprime + two, rho)?;
        Ok(self.radial_norm * rho.powf(q.lprime + T::one()) * (-rho / two).exp() * series)
    }

    /// `lim_{r→0} u(r)/r`: nonzero only for `l' = 0`.
    fn u_over_r_at_origin(&self) -> T {
        if self.quasi.lprime == T::zero() {
            self.radial_norm * self.radial_scale
        } else {
            T::zero()
        }
    }

    /// `ρ = u²/r² · H²(cosθ) / 2π` at spherical `(r, cosθ)`.
    pub fn density_spherical(&self, r: T, costheta: T) -> Result<T> {
        let two_pi = T::lit(2.0) * T::PI();
        if r == T::zero() {
            let ur = self.u_over_r_at_origin();
            if ur == T::zero() {
                return Ok(T::zero());
            }
            // l' = 0 forces m' = 0, so H is the constant N_{00}
            let h = self.angular_norm * self.legendre.prefactor();
            return Ok(ur * ur * h * h / two_pi);
        }
        let u = self.radial_u(r)?;
        let h = self.angular_h(costheta.max(-T::one()).min(T::one()))?;
        let ur = u / r;
        Ok(ur * ur * h * h / two_pi)
    }

    /// Density at Cartesian `(x, y, z)` in Bohr radii.
    pub fn density(&self, x: T, y: T, z: T) -> T {
        let r = (x * x + y * y + z * z).sqrt();
        let c = if r > T::zero() { z / r } else { T::zero() };
        self.density_spherical(r, c).expect("arguments are in range by construction")
    }

    /// Deformed spherical harmonic `Y_{l'm'}(θ, φ)`.
    ///
    /// `m ≥ 0` uses the positive-order function directly. `m < 0` goes
    /// through the negative-order relation for `P_{l'}^{-m'}`.
    pub fn deformed_ylm(&self, theta: T, phi: T) -> Result<Complex<T>> {
        let q = &self.quasi;
        let x = theta.cos();
        let four_pi = T::lit(4.0) * T::PI();
        let two = T::lit(2.0);
        let one = T::one();
        let lp = q.lprime;
        let mp = q.mprime;
        let magnitude = if q.m >= 0 {
            let norm = ((two * lp + one) / four_pi * gamma_ratio(lp - mp + one, lp + mp + one)?).sqrt();
            norm * self.legendre.eval(x)?
        } else {
            let norm = ((two * lp + one) / four_pi * gamma_ratio(lp + mp + one, lp - mp + one)?).sqrt();
            norm * legendre_negative_order(*self.legendre.params(), q.m, x)?
        };
        let phase = Complex::from_polar(T::one(), T::from_i32(q.m).unwrap() * phi);
        Ok(phase * (sign_of_parity::<T>(q.m) * magnitude))
    }
}

/// Ordinary spherical harmonic with the Condon-Shortley phase, for integer
/// `l`, `|m| ≤ l`.
pub fn spherical_harmonic<T: Real>(l: u32, m: i32, theta: T, phi: T) -> Result<Complex<T>> {
    let lm = l as i64 - m as i64;
    let lp = l as i64 + m as i64;
    if lm < 0 || lp < 0 {
        return Err(Error::Domain(format!("|m| = {} exceeds l = {l}", m.unsigned_abs())));
    }
    let two = T::lit(2.0);
    let ratio = gamma_ratio(T::from_i64(lm + 1).unwrap(), T::from_i64(lp + 1).unwrap())?;
    let norm = ((two * T::from_u32(l).unwrap() + T::one()) / (T::lit(4.0) * T::PI()) * ratio).sqrt();
    let p = legendre_int(l, m, theta.cos())?;
    let phase = Complex::from_polar(T::one(), T::from_i32(m).unwrap() * phi);
    Ok(phase * (sign_of_parity::<T>(m) * norm * p))
}

pub fn angular_h<T: Real>(q: &QuasiNumbers<T>, costheta: T) -> Result<T> {
    let qs = QuantumState {
        n: q.ntheta + q.m.unsigned_abs() + q.nr + 1,
        l: q.ntheta + q.m.unsigned_abs(),
        m: q.m,
        b: q.mprime * q.mprime - T::from_i32(q.m * q.m).unwrap(),
        z: T::one(),
    };
    Orbital::with_angular_scale(qs, *q, T::one())?.angular_h(costheta)
}

pub fn deformed_ylm<T: Real>(qs: &QuantumState<T>, theta: T, phi: T) -> Result<Complex<T>> {
    Orbital::new(*qs)?.deformed_ylm(theta, phi)
}

/// `(Y_{l'm'}, Y_{l'(-m')})` for `+|m|` and `-|m|`.
pub fn conjugation_pair<T: Real>(qs: &QuantumState<T>, theta: T, phi: T) -> Result<(Complex<T>, Complex<T>)> {
    let pos = QuantumState { m: qs.m.abs(), ..*qs };
    Ok((deformed_ylm(&pos, theta, phi)?, deformed_ylm(&pos.mirrored(), theta, phi)?))
}

pub fn radial_u<T: Real>(qs: &QuantumState<T>, r: T) -> Result<T> {
    Orbital::new(*qs)?.radial_u(r)
}

pub fn density<T: Real>(qs: &QuantumState<T>, x: T, y: T, z: T) -> Result<T> {
    Ok(Orbital::new(*qs)?.density(x, y, z))
}

/// Radius beyond which `u²` is negligible: `ρ = 4n' + 60`.
pub fn radial_cutoff<T: Real>(q: &QuasiNumbers<T>, z: T) -> T {
    (T::lit(4.0) * q.nprime + T::lit(60.0)) * q.nprime / (T::lit(2.0) * z)
}

/// Radial grid extent guaranteed to contain every node, `4 n'² / Z`.
pub fn node_search_radius<T: Real>(q: &QuasiNumbers<T>, z: T) -> T {
    T::lit(4.0) * q.nprime * q.nprime / z
}

impl<T: Real> Orbital<T> {
    /// `∫_0^R w(r) u(r)² dr` on 16 equal panels with node doubling.
    pub fn radial_expectation<W: Fn(T) -> T>(&self, upper: T, weight: W) -> Result<Integral<T>> {
        let panels = 16;
        let breaks: Vec<T> =
            (0..=panels).map(|i| upper * T::from_usize_lossy(i) / T::from_usize_lossy(panels)).collect();
        integrate_doubling(
            |r| {
                let u = self.radial_u(r).unwrap_or_else(|_| T::zero());
                weight(r) * u * u
            },
            &breaks,
            Doubling { start: 32, ..Doubling::default() },
            "radial integral",
        )
    }

    /// `∫_0^∞ u² dr`.
    pub fn radial_norm_integral(&self) -> Result<T> {
        let upper = radial_cutoff(&self.quasi, self.state.z);
        Ok(self.radial_expectation(upper, |_| T::one())?.value)
    }

    /// `⟨r⟩ = ∫ r u² dr`.
    pub fn mean_radius(&self) -> Result<T> {
        let upper = radial_cutoff(&self.quasi, self.state.z);
        Ok(self.radial_expectation(upper, |r| r)?.value)
    }

    /// `∫_{-1}^{1} H² dx`.
    pub fn angular_norm_integral(&self) -> Result<T> {
        // In θ the (1 - x²)^{m'} endpoint factor becomes sin^{2m'+1} θ.
        Ok(integrate_doubling(
            |theta| {
                let h = self.angular_h(theta.cos()).unwrap_or_else(|_| T::zero());
                h * h * theta.sin()
            },
            &[T::zero(), T::FRAC_PI_2(), T::PI()],
            Doubling::default(),
            "angular normalisation",
        )?
        .value)
    }

    /// Strict sign changes of `u` on `samples` uniform points of `(0, R]`
    /// with `R = 4n'²/Z`.
    pub fn radial_sign_changes(&self, samples: usize) -> Result<usize> {
        let upper = node_search_radius(&self.quasi, self.state.z);
        let mut last = T::zero();
        let mut changes = 0;
        for i in 1..=samples {
            let r = upper * T::from_usize_lossy(i) / T::from_usize_lossy(samples);
            let u = self.radial_u(r)?;
            if u == T::zero() {
                continue;
            }
            if last != T::zero() && (u > T::zero()) != (last > T::zero()) {
                changes += 1;
            }
            last = u;
        }
        Ok(changes)
    }

    /// Maximum of `|u'' + (2E + 2Z/r - λ/r²) u|` over a log-spaced grid,
    /// divided by `max |u|`. `u''` is a sixth-order central difference.
    pub fn radial_residual(&self, points: usize) -> Result<T> {
        let q = &self.quasi;
        let z = self.state.z;
        let lo = T::lit(1e-2) * q.nprime / z;
        let hi = node_search_radius(q, z);
        let e = self.energy();
        let two = T::lit(2.0);
        let ratio = (hi / lo).ln();
        let mut worst = T::zero();
        let mut umax = T::zero();
        for i in 0..points {
            let r = lo * (ratio * T::from_usize_lossy(i) / T::from_usize_lossy(points - 1)).exp();
            let h = T::lit(2e-3) * r;
            let f = |k: i32| self.radial_u(r + T::from_i32(k).unwrap() * h);
            let d2 = (two * (f(3)? + f(-3)?) - T::lit(27.0) * (f(2)? + f(-2)?) + T::lit(270.0) * (f(1)? + f(-1)?)
                - T::lit(490.0) * f(0)?)
                / (T::lit(180.0) * h * h);
            let u = f(0)?;
            umax = umax.max(u.abs());
            let res = d2 + (two * e + two * z / r - q.lambda / (r * r)) * u;
            worst = worst.max(res.abs());
        }
        Ok(worst / umax)
    }
}
