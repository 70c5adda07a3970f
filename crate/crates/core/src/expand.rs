//! Expansion of a deformed spherical harmonic over ordinary ones,
//! `Y_{l'm'} = Σ_l a_{lm} Y_{lm}`.
//!
//! Only the `l` with `l - |m| ≡ n_θ (mod 2)` can contribute (both Legendre
//! factors have definite parity), and only the same integer `m`.

use num_complex::Complex;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{derive_quasi, spherical_harmonic, QuantumState, QuasiNumbers};
use crate::quad::{integrate_doubling, Doubling};
use crate::scalar::Real;
use crate::specfun::{gamma_ratio, legendre_int, LegendreRealOrder};

/// Headroom added to `|m| + n_θ` when no `l_max` is given.
pub const DEFAULT_L_HEADROOM: u32 = 12;
/// Smallest accepted headroom.
pub const MIN_L_HEADROOM: u32 = 6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Coefficient<T> {
    pub value: T,
    /// Gauss-Legendre nodes of the accepted estimate (0 when not computed).
    pub nodes: usize,
}

/// `a_{lm}` by Gauss-Legendre quadrature, 64 nodes doubling to 4096 until
/// successive estimates agree to 1e-10. Returns exact zero when `m` differs
/// from the magnetic number carried by `q`.
pub fn coefficient<T: Real>(l: u32, m: i32, q: &QuasiNumbers<T>) -> Result<Coefficient<T>> {
    if m.unsigned_abs() > l {
        return Err(Error::Domain(format!("coefficient needs l ≥ |m|, got l = {l}, m = {m}")));
    }
    if m != q.m {
        return Ok(Coefficient { value: T::zero(), nodes: 0 });
    }
    let am = m.unsigned_abs();
    let legendre = LegendreRealOrder::new(q.legendre_params())?;
    let one = T::one();
    let two = T::lit(2.0);
    let lf = T::from_u32(l).unwrap();
    let amf = T::from_u32(am).unwrap();
    let (lp, mp) = (q.lprime, q.mprime);
    let prefactor = ((two * lp + one) * (two * lf + one) / T::lit(4.0)
        * gamma_ratio(lf - amf + one, lf + amf + one)?
        * gamma_ratio(lp - mp + one, lp + mp + one)?)
    .sqrt();
    // Integrating in θ smooths the (1 - x²)^{m'/2} endpoint factor; the
    // prefactor sits inside so the tolerance applies to the coefficient.
    let half_pi = T::FRAC_PI_2();
    let integral = integrate_doubling(
        |theta| {
            let (x, s) = (theta.cos(), theta.sin());
            let a = legendre_int(l, am as i32, x).unwrap_or_else(|_| T::zero());
            let b = legendre.eval(x).unwrap_or_else(|_| T::zero());
            prefactor * a * b * s
        },
        &[T::zero(), half_pi, T::PI()],
        Doubling::default(),
        &format!("a_{{{l},{m}}} quadrature"),
    )?;
    Ok(Coefficient { value: integral.value, nodes: integral.nodes })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExpansionEntry<T> {
    pub l: u32,
    /// `l - |m|`, the ordinary-harmonic analogue of `n_θ`.
    pub offset: u32,
    pub a_lm: T,
    pub nodes: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExpansionTable<T> {
    pub m: i32,
    pub ntheta: u32,
    pub b: T,
    pub l_max: u32,
    /// Parity-allowed `l` from `|m|` to `l_max`.
    pub entries: Vec<ExpansionEntry<T>>,
    /// Largest node count any coefficient needed.
    pub quad_nodes: usize,
    pub converged: bool,
    /// `1 - Σ a_lm²`.
    pub completeness_defect: T,
}

impl<T: Real> ExpansionTable<T> {
    /// Coefficient for any `l`, including the pinned zeros.
    pub fn get(&self, l: u32) -> T {
        self.entries.iter().find(|e| e.l == l).map_or(T::zero(), |e| e.a_lm)
    }

    /// Entry with the largest `a_lm²`.
    pub fn principal(&self) -> Option<&ExpansionEntry<T>> {
        self.entries.iter().max_by(|a, b| (a.a_lm * a.a_lm).partial_cmp(&(b.a_lm * b.a_lm)).unwrap())
    }

    /// `Σ_l a_lm Y_lm(θ, φ)`.
    pub fn reconstruct(&self, theta: T, phi: T) -> Result<Complex<T>> {
        let mut acc = Complex::new(T::zero(), T::zero());
        for e in &self.entries {
            acc += spherical_harmonic(e.l, self.m, theta, phi)? * e.a_lm;
        }
        Ok(acc)
    }
}

fn quasi_for<T: Real>(m: i32, ntheta: u32, b: T) -> Result<QuasiNumbers<T>> {
    let l = m.unsigned_abs() + ntheta;
    derive_quasi(&QuantumState::new(l + 1, l, m, b, T::one())?)
}

/// Coefficients for `|m| ≤ l ≤ l_max`; parity-forbidden `l` are exact zeros
/// and are not listed.
pub fn table<T: Real>(m: i32, ntheta: u32, b: T, l_max: Option<u32>) -> Result<ExpansionTable<T>> {
    let am = m.unsigned_abs();
    let l_max = l_max.unwrap_or(am + ntheta + DEFAULT_L_HEADROOM);
    if l_max < am + ntheta + MIN_L_HEADROOM {
        return Err(Error::Invalid(format!(
            "l_max must be at least |m| + n_θ + {MIN_L_HEADROOM} = {}, got {l_max}",
            am + ntheta + MIN_L_HEADROOM
        )));
    }
    let q = quasi_for(m, ntheta, b)?;
    let mut entries = Vec::new();
    for l in am..=l_max {
        if (l - am) % 2 != ntheta % 2 {
            continue;
        }
        let c = coefficient(l, m, &q)?;
        entries.push(ExpansionEntry { l, offset: l - am, a_lm: c.value, nodes: c.nodes });
    }
    let quad_nodes = entries.iter().map(|e| e.nodes).max().unwrap_or(0);
    let sum_sq = entries.iter().fold(T::zero(), |acc, e| acc + e.a_lm * e.a_lm);
    Ok(ExpansionTable {
        m,
        ntheta,
        b,
        l_max,
        entries,
        quad_nodes,
        converged: true,
        completeness_defect: T::one() - sum_sq,
    })
}

/// Header `l,m,a_lm,a_lm_squared`, then a `#` footer line with the
/// completeness defect and node count.
pub fn write_csv<T: Real, W: std::io::Write>(t: &ExpansionTable<T>, mut out: W) -> Result<()> {
    writeln!(out, "l,m,a_lm,a_lm_squared")?;
    for e in &t.entries {
        let a = e.a_lm.as_f64();
        writeln!(out, "{},{},{},{}", e.l, t.m, a, a * a)?;
    }
    writeln!(
        out,
        "# b={},n_theta={},completeness_defect={:e},quad_nodes={}",
        t.b.as_f64(),
        t.ntheta,
        t.completeness_defect.as_f64(),
        t.quad_nodes
    )?;
    Ok(())
}
