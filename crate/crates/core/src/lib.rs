//! Bound states of the single ring-shaped Coulomb potential
//! `V(r, θ) = -Z/r + b / (2 r² sin²θ)` in atomic units.
//!
//! The crate evaluates the closed-form eigenfunctions (real-order Legendre
//! polar part, hydrogen-like radial part with real quasi quantum numbers),
//! samples the probability density on Cartesian grids, extracts
//! isosurfaces and contour slices, and expands the deformed spherical
//! harmonics over ordinary ones.
//!
//! Numerical code is generic over [`Real`] (`f32` or `f64`); the aliases
//! below fix it to `f64`, which is what the accuracy targets assume.

// `!(x > 0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod error;
pub mod scalar;
pub mod specfun;
pub mod quad;
pub mod model;
pub mod grid;
pub mod expand;
pub mod check;
pub mod cli;

pub use error::{Error, Result};
pub use scalar::Real;

pub type State = model::QuantumState<f64>;
pub type Quasi = model::QuasiNumbers<f64>;
pub type Orbital = model::Orbital<f64>;
pub type Block = grid::DensityBlock<f64>;
pub type Grid = grid::GridSpec<f64>;
pub type Mesh = grid::TriangleMesh<f64>;
pub type Slice = grid::ContourSlice<f64>;
pub type Table = expand::ExpansionTable<f64>;
