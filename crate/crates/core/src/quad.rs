//! Gauss-Legendre quadrature with node doubling.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::scalar::{KahanSum, Real};

/// Nodes and weights of the `n`-point Gauss-Legendre rule on `[-1, 1]`.
#[derive(Debug)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// Rules are computed once per size and shared.
    pub fn get(n: usize) -> Arc<GaussLegendre> {
        static CACHE: OnceLock<Mutex<HashMap<usize, Arc<GaussLegendre>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(rule) = cache.lock().unwrap().get(&n) {
            return Arc::clone(rule);
        }
        let rule = Arc::new(Self::compute(n));
        cache.lock().unwrap().entry(n).or_insert(rule).clone()
    }

    fn compute(n: usize) -> GaussLegendre {
        assert!(n >= 1, "rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            // Tricomi initial guess, then Newton on the three-term recurrence
            let k = i as f64 + 1.0;
            let theta = std::f64::consts::PI * (4.0 * k - 1.0) / (4.0 * nf + 2.0);
            let mut x = (1.0 - (nf - 1.0) / (8.0 * nf * nf * nf)) * theta.cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_and_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() <= 1e-16 * x.abs().max(1e-300) {
                    break;
                }
            }
            let (_, d) = legendre_and_derivative(n, x);
            if d.is_finite() {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        GaussLegendre { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `∫_a^b f`.
    pub fn integrate<T: Real, F: FnMut(T) -> T>(&self, mut f: F, a: T, b: T) -> T {
        let half = (b - a) / T::lit(2.0);
        let mid = (b + a) / T::lit(2.0);
        let mut acc = KahanSum::new();
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            acc.add(T::lit(w) * f(mid + half * T::lit(x)));
        }
        acc.total() * half
    }
}

fn legendre_and_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Node-doubling schedule.
#[derive(Debug, Clone, Copy)]
pub struct Doubling {
    pub start: usize,
    pub cap: usize,
    /// Successive estimates must differ by at most `tol * max(1, |value|)`.
    pub tol: f64,
}

impl Default for Doubling {
    fn default() -> Self {
        Self { start: 64, cap: 4096, tol: 1e-10 }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Integral<T> {
    pub value: T,
    /// Nodes per panel of the accepted estimate.
    pub nodes: usize,
    pub last_change: T,
}

/// Composite Gauss-Legendre over the panels `breaks[i]..breaks[i+1]`,
/// doubling the per-panel node count until two estimates agree.
pub fn integrate_doubling<T: Real, F: FnMut(T) -> T>(
    mut f: F,
    breaks: &[T],
    schedule: Doubling,
    what: &str,
) -> Result<Integral<T>> {
    assert!(breaks.len() >= 2, "need at least one panel");
    let composite = |n: usize, f: &mut F| {
        let rule = GaussLegendre::get(n);
        let mut acc = KahanSum::new();
        for w in breaks.windows(2) {
            acc.add(rule.integrate(&mut *f, w[0], w[1]));
        }
        acc.total()
    };
    let mut n = schedule.start;
    let mut prev = composite(n, &mut f);
    let mut change = T::infinity();
    while n < schedule.cap {
        n *= 2;
        let next = composite(n, &mut f);
        change = (next - prev).abs();
        prev = next;
        if change <= T::lit(schedule.tol) * prev.abs().max(T::one()) {
            return Ok(Integral { value: next, nodes: n, last_change: change });
        }
    }
    Err(Error::NoConvergence { what: what.to_string(), nodes: n, last_change: change.as_f64() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_for_polynomials() {
        for n in [1usize, 2, 5, 16, 64] {
            let rule = GaussLegendre::get(n);
            let deg = 2 * n - 1;
            let v: f64 = rule.integrate(|x: f64| x.powi(deg as i32 - 1) * 3.0 + 1.0, -1.0, 1.0);
            let expect = if (deg - 1) % 2 == 0 { 3.0 * 2.0 / deg as f64 + 2.0 } else { 2.0 };
            assert!((v - expect).abs() < 1e-13, "n={n}");
        }
    }

    #[test]
    fn large_rules_are_sane() {
        for n in [1024usize, 4096] {
            let rule = GaussLegendre::get(n);
            let total: f64 = rule.weights.iter().sum();
            assert!((total - 2.0).abs() < 1e-12);
            assert!(rule.nodes.windows(2).all(|w| w[0] < w[1]));
            let v = rule.integrate(|x: f64| (3.0 * x).cos(), -1.0, 1.0);
            assert!((v - 2.0 * 3.0_f64.sin() / 3.0).abs() < 1e-13);
        }
    }

    #[test]
    fn doubling_converges_on_endpoint_power() {
        // ∫_{-1}^{1} (1-x^2)^{0.7} dx = sqrt(pi) Γ(1.7)/Γ(2.2)
        let exact = std::f64::consts::PI.sqrt() * crate::specfun::gamma(1.7).unwrap()
            / crate::specfun::gamma(2.2).unwrap();
        let r = integrate_doubling(|x: f64| (1.0 - x * x).powf(0.7), &[-1.0, 1.0], Doubling::default(), "test")
            .unwrap();
        assert!((r.value - exact).abs() < 1e-9);
    }

    #[test]
    fn reports_non_convergence() {
        let sched = Doubling { start: 4, cap: 16, tol: 1e-14 };
        let err = integrate_doubling(|x: f64| (50.0 * x).sin().abs(), &[-1.0, 1.0], sched, "wiggly");
        assert!(matches!(err, Err(Error::NoConvergence { .. })));
    }
}
