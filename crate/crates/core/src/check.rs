//! Invariant suite behind `ringcoulomb check`: normalisations, node counts,
//! radial residual, hydrogen reduction and the conjugation identity over a
//! roster of states.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::io::StateRecord;
use crate::model::{derive_quasi, spherical_harmonic, Orbital, QuantumState};

pub const NORM_TOL: f64 = 1e-8;
pub const RESIDUAL_TOL: f64 = 1e-6;
pub const REDUCTION_TOL: f64 = 1e-12;
pub const NODE_SAMPLES: usize = 20_000;

#[derive(Debug, Clone)]
pub struct CheckOptions {
    /// Roster holds every `(n, l, m ≥ 0)` with `n ≤ n_max`.
    pub n_max: u32,
    pub b_values: Vec<f64>,
    /// Multiplies `N_{l'm'}` by `1 + perturbation` to prove the suite bites.
    pub perturbation: Option<f64>,
}

impl Default for CheckOptions {
    fn default() -> Self {
        Self { n_max: 5, b_values: vec![0.0, 0.5, 10.0], perturbation: None }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckRecord {
    pub name: &'static str,
    pub state: StateRecord,
    pub value: f64,
    pub threshold: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub passed: usize,
    pub failed: usize,
    pub records: Vec<CheckRecord>,
}

impl CheckReport {
    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }
}

/// States `n ≤ n_max`, `0 ≤ l < n`, `0 ≤ m ≤ l` for each `b` (skipping
/// combinations that violate `b > -m²`).
pub fn roster(n_max: u32, b_values: &[f64]) -> Vec<QuantumState<f64>> {
    let mut out = Vec::new();
    for &b in b_values {
        for n in 1..=n_max {
            for l in 0..n {
                for m in 0..=l as i32 {
                    if let Ok(s) = QuantumState::with_b(n, l, m, b) {
                        out.push(s);
                    }
                }
            }
        }
    }
    out
}

fn record(name: &'static str, s: &QuantumState<f64>, value: f64, threshold: f64, pass: bool) -> CheckRecord {
    CheckRecord { name, state: StateRecord { n: s.n, l: s.l, m: s.m, b: s.b, z: s.z }, value, threshold, pass }
}

fn check_state(s: &QuantumState<f64>, opts: &CheckOptions) -> Result<Vec<CheckRecord>> {
    let q = derive_quasi(s)?;
    let scale = 1.0 + opts.perturbation.unwrap_or(0.0);
    let orb = Orbital::with_angular_scale(*s, q, scale)?;
    let mut out = Vec::new();

    let radial = (orb.radial_norm_integral()? - 1.0).abs();
    out.push(record("radial_normalization", s, radial, NORM_TOL, radial <= NORM_TOL));
    let angular = (orb.angular_norm_integral()? - 1.0).abs();
    out.push(record("angular_normalization", s, angular, NORM_TOL, angular <= NORM_TOL));

    let nodes = orb.radial_sign_changes(NODE_SAMPLES)?;
    out.push(record("radial_nodes", s, nodes as f64, q.nr as f64, nodes == q.nr as usize));

    let residual = orb.radial_residual(200)?;
    out.push(record("radial_residual", s, residual, RESIDUAL_TOL, residual <= RESIDUAL_TOL));

    if s.b == 0.0 {
        let mut worst: f64 = 0.0;
        for i in 0..24 {
            let theta = 0.05 + i as f64 * 0.13;
            let phi = 0.3 + i as f64 * 0.27;
            let d = orb.deformed_ylm(theta, phi)? - spherical_harmonic(s.l, s.m, theta, phi)?;
            worst = worst.max(d.norm());
        }
        out.push(record("hydrogen_reduction", s, worst, REDUCTION_TOL, worst <= REDUCTION_TOL));
        let e = orb.energy() + 0.5 * s.z * s.z / (s.n as f64 * s.n as f64);
        out.push(record("hydrogen_energy", s, e.abs(), 1e-14, e.abs() <= 1e-14));
    }

    if s.m != 0 {
        let neg = Orbital::new(s.mirrored())?;
        let mut worst: f64 = 0.0;
        for i in 0..12 {
            let theta = 0.1 + i as f64 * 0.25;
            let phi = -1.0 + i as f64 * 0.4;
            let pos = Orbital::new(*s)?.deformed_ylm(theta, phi)?;
            let sign = if s.m % 2 == 0 { 1.0 } else { -1.0 };
            let d = neg.deformed_ylm(theta, phi)? - pos.conj() * sign;
            worst = worst.max(d.norm() / pos.norm().max(1e-300));
        }
        out.push(record("conjugation_identity", s, worst, 1e-12, worst <= 1e-12));
    }
    Ok(out)
}

pub fn run_checks(opts: &CheckOptions) -> Result<CheckReport> {
    let states = roster(opts.n_max, &opts.b_values);
    if states.is_empty() {
        return Err(Error::Invalid("check roster is empty".into()));
    }
    let mut records = Vec::new();
    for s in &states {
        records.extend(check_state(s, opts)?);
    }
    let passed = records.iter().filter(|r| r.pass).count();
    Ok(CheckReport { passed, failed: records.len() - passed, records })
}
