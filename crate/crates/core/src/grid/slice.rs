use crate::error::{Error, Result};
use crate::model::Orbital;
use crate::scalar::Real;

/// Density on the `x = 0` plane scaled so its maximum is exactly 100.
#[derive(Debug, Clone, PartialEq)]
pub struct ContourSlice<T> {
    pub n_points: usize,
    pub half_extent: T,
    /// `n_points²` values, y fastest then z.
    pub values_normalized: Vec<T>,
    /// Contour levels 10, 20, …, 100.
    pub levels: Vec<T>,
    /// Restricted to `y ≥ 0, z ≥ 0`.
    pub first_quadrant: bool,
}

impl<T: Real> ContourSlice<T> {
    pub fn coord(&self, i: usize) -> T {
        if self.first_quadrant {
            return T::from_usize_lossy(i) * self.spacing();
        }
        let twice = 2 * i as i64 - (self.n_points as i64 - 1);
        T::from_i64(twice).unwrap() * self.half_extent / T::from_usize_lossy(self.n_points - 1)
    }

    pub fn spacing(&self) -> T {
        if self.first_quadrant {
            self.half_extent / T::from_usize_lossy(self.n_points - 1)
        } else {
            T::lit(2.0) * self.half_extent / T::from_usize_lossy(self.n_points - 1)
        }
    }

    pub fn at(&self, iy: usize, iz: usize) -> T {
        self.values_normalized[iy + self.n_points * iz]
    }

    pub fn max(&self) -> T {
        self.values_normalized.iter().copied().fold(T::zero(), T::max)
    }

    /// Area of `{value ≥ threshold}` counted in pixels of `spacing²`.
    pub fn superlevel_area(&self, threshold: T) -> T {
        let count = self.values_normalized.iter().filter(|&&v| v >= threshold).count();
        T::from_usize_lossy(count) * self.spacing() * self.spacing()
    }
}

fn default_levels<T: Real>() -> Vec<T> {
    (1..=10).map(|k| T::from_i32(10 * k).unwrap()).collect()
}

fn normalize<T: Real>(raw: Vec<T>) -> Result<Vec<T>> {
    let max = raw.iter().copied().fold(T::zero(), T::max);
    if !(max > T::zero()) {
        return Err(Error::Domain("density vanishes on the whole slice".into()));
    }
    let hundred = T::lit(100.0);
    Ok(raw.into_iter().map(|v| v / max * hundred).collect())
}

/// Evaluates the density directly on the yoz plane over `[-L, L]²` (or
/// `[0, L]²` with `first_quadrant`), then rescales to a maximum of 100.
pub fn contour_slice<T: Real>(
    orbital: &Orbital<T>,
    half_extent: T,
    n_points: usize,
    first_quadrant: bool,
) -> Result<ContourSlice<T>> {
    if n_points < 2 {
        return Err(Error::Invalid(format!("slice needs at least 2 points per axis, got {n_points}")));
    }
    if !(half_extent > T::zero()) {
        return Err(Error::Invalid(format!("half extent must be positive, got {half_extent}")));
    }
    let mut slice = ContourSlice {
        n_points,
        half_extent,
        values_normalized: Vec::new(),
        levels: default_levels(),
        first_quadrant,
    };
    let mut raw = Vec::with_capacity(n_points * n_points);
    for iz in 0..n_points {
        let z = slice.coord(iz);
        for iy in 0..n_points {
            raw.push(orbital.density(T::zero(), slice.coord(iy), z));
        }
    }
    slice.values_normalized = normalize(raw)?;
    Ok(slice)
}
