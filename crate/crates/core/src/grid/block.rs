use std::thread;

use crate::error::{Error, Result};
use crate::model::{derive_quasi, Orbital, QuantumState};
use crate::scalar::{KahanSum, Real};

/// Uniform axis-aligned grid on `[-L, L]³` with an odd number of samples per
/// axis, so the origin is a sample point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec<T> {
    pub n_points: usize,
    pub half_extent: T,
    pub state: QuantumState<T>,
}

impl<T: Real> GridSpec<T> {
    pub fn new(n_points: usize, half_extent: T, state: QuantumState<T>) -> Result<Self> {
        if n_points < 3 || n_points.is_multiple_of(2) {
            return Err(Error::Invalid(format!("grid points per axis must be odd and ≥ 3, got {n_points}")));
        }
        if !(half_extent > T::zero()) || !half_extent.is_finite() {
            return Err(Error::Invalid(format!("half extent must be positive, got {half_extent}")));
        }
        state.validate()?;
        Ok(Self { n_points, half_extent, state })
    }

    pub fn spacing(&self) -> T {
        T::lit(2.0) * self.half_extent / T::from_usize_lossy(self.n_points - 1)
    }

    /// Coordinate of sample `i`; symmetric about the centre index exactly.
    pub fn coord(&self, i: usize) -> T {
        let c = (self.n_points - 1) / 2;
        let offset = i as i64 - c as i64;
        T::from_i64(offset).unwrap() * self.spacing()
    }

    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        i + self.n_points * (j + self.n_points * k)
    }

    pub fn len(&self) -> usize {
        self.n_points * self.n_points * self.n_points
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// Densities on a [`GridSpec`], x fastest, then y, then z.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityBlock<T> {
    pub spec: GridSpec<T>,
    pub values: Vec<T>,
    pub rho_max: T,
    /// `Σ ρ Δ³`.
    pub riemann_mass: T,
}

impl<T: Real> DensityBlock<T> {
    pub fn from_values(spec: GridSpec<T>, values: Vec<T>) -> Result<Self> {
        if values.len() != spec.len() {
            return Err(Error::Invalid(format!("expected {} values, got {}", spec.len(), values.len())));
        }
        if let Some(bad) = values.iter().find(|v| !v.is_finite() || **v < T::zero()) {
            return Err(Error::Invalid(format!("density values must be finite and ≥ 0, found {bad}")));
        }
        let rho_max = values.iter().copied().fold(T::zero(), T::max);
        let cell = spec.spacing().powi(3);
        let mass: KahanSum<T> = values.iter().copied().collect();
        Ok(Self { spec, values, rho_max, riemann_mass: mass.total() * cell })
    }

    pub fn at(&self, i: usize, j: usize, k: usize) -> T {
        self.values[self.spec.index(i, j, k)]
    }

    pub fn point(&self, i: usize, j: usize, k: usize) -> [T; 3] {
        [self.spec.coord(i), self.spec.coord(j), self.spec.coord(k)]
    }

    /// Indices with `ρ ≥ level` (closed superlevel set).
    pub fn superlevel(&self, level: T) -> impl Iterator<Item = usize> + '_ {
        self.values.iter().enumerate().filter(move |(_, &v)| v >= level).map(|(i, _)| i)
    }

    pub fn unravel(&self, idx: usize) -> (usize, usize, usize) {
        let n = self.spec.n_points;
        (idx % n, (idx / n) % n, idx / (n * n))
    }
}

pub fn sample_block<T: Real>(spec: &GridSpec<T>) -> Result<DensityBlock<T>> {
    sample_block_parallel(spec, 1)
}

/// Samples the density, splitting z-slabs over `workers` threads. Output is
/// bit-identical for any worker count.
pub fn sample_block_parallel<T: Real>(spec: &GridSpec<T>, workers: usize) -> Result<DensityBlock<T>> {
    let orbital = Orbital::new(spec.state)?;
    let n = spec.n_points;
    let slab = n * n;
    let mut values = vec![T::zero(); spec.len()];
    let workers = workers.clamp(1, n);
    let per_worker = n.div_ceil(workers);

    let fill = |k0: usize, chunk: &mut [T]| {
        for (dk, plane) in chunk.chunks_mut(slab).enumerate() {
            let z = spec.coord(k0 + dk);
            for j in 0..n {
                let y = spec.coord(j);
                for i in 0..n {
                    plane[i + n * j] = orbital.density(spec.coord(i), y, z);
                }
            }
        }
    };

    if workers == 1 {
        fill(0, &mut values);
    } else {
        thread::scope(|s| {
            for (w, chunk) in values.chunks_mut(per_worker * slab).enumerate() {
                let fill = &fill;
                s.spawn(move || fill(w * per_worker, chunk));
            }
        });
    }
    DensityBlock::from_values(*spec, values)
}

const LADDER_STEPS_PER_OCTAVE: i32 = 32;

fn ladder<T: Real>(k: i32) -> T {
    T::lit(2.0).powf(T::from_i32(k).unwrap() / T::from_i32(LADDER_STEPS_PER_OCTAVE).unwrap())
}

/// Smallest rung `L = 2^{k/32}` (Bohr radii) of a geometric ladder with
/// `∫_0^L u² dr ≥ coverage`.
pub fn auto_extent<T: Real>(qs: &QuantumState<T>, coverage: T) -> Result<T> {
    if !(coverage > T::zero() && coverage < T::one()) {
        return Err(Error::Invalid(format!("coverage must lie in (0, 1), got {coverage}")));
    }
    let orbital = Orbital::new(*qs)?;
    let mass = |k: i32| -> Result<T> { Ok(orbital.radial_expectation(ladder(k), |_| T::one())?.value) };
    let q = derive_quasi(qs)?;
    let (mut lo, mut hi) = (-8 * LADDER_STEPS_PER_OCTAVE, 0);
    while ladder::<T>(hi) < crate::model::radial_cutoff(&q, qs.z) {
        hi += LADDER_STEPS_PER_OCTAVE;
    }
    if mass(hi)? < coverage {
        return Err(Error::NoConvergence {
            what: format!("radial coverage {coverage} unreachable"),
            nodes: 0,
            last_change: 0.0,
        });
    }
    if mass(lo)? >= coverage {
        return Ok(ladder(lo));
    }
    // invariant: mass(lo) < coverage ≤ mass(hi)
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if mass(mid)? >= coverage {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(ladder(hi))
}

/// Density thresholds `level_i = p_i ρ_max`, sorted by `p`.
#[derive(Debug, Clone, PartialEq)]
pub struct IsoLevelSet<T> {
    pub p_values: Vec<T>,
    pub levels: Vec<T>,
}

pub fn iso_levels<T: Real>(block: &DensityBlock<T>, p_values: &[T]) -> Result<IsoLevelSet<T>> {
    if p_values.is_empty() {
        return Err(Error::Invalid("at least one relative probability value is required".into()));
    }
    if let Some(p) = p_values.iter().find(|p| !(**p > T::zero() && **p <= T::one())) {
        return Err(Error::Invalid(format!("relative probability values must lie in (0, 1], got {p}")));
    }
    let mut ps = p_values.to_vec();
    ps.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ps.dedup();
    let levels = ps.iter().map(|&p| p * block.rho_max).collect();
    Ok(IsoLevelSet { p_values: ps, levels })
}

/// Mean `|z|/r` over samples with `ρ ≥ p ρ_max`, for `p_low` and `p_high`.
/// The origin is skipped since `|z|/r` is undefined there.
pub fn polar_drift<T: Real>(block: &DensityBlock<T>, p_low: T, p_high: T) -> Result<(T, T)> {
    if !(p_low > T::zero() && p_low < p_high && p_high < T::one()) {
        return Err(Error::Invalid(format!("need 0 < p_low < p_high < 1, got {p_low}, {p_high}")));
    }
    let mean = |p: T| -> Result<T> {
        let mut acc = KahanSum::new();
        let mut count = 0usize;
        for idx in block.superlevel(p * block.rho_max) {
            let (i, j, k) = block.unravel(idx);
            let [x, y, z] = block.point(i, j, k);
            let r = (x * x + y * y + z * z).sqrt();
            if r > T::zero() {
                acc.add(z.abs() / r);
                count += 1;
            }
        }
        if count == 0 {
            return Err(Error::EmptySuperlevel(p.as_f64()));
        }
        Ok(acc.total() / T::from_usize_lossy(count))
    };
    Ok((mean(p_low)?, mean(p_high)?))
}
