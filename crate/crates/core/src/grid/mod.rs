//! Cartesian sampling of the density and everything derived from it:
//! relative-probability levels, isosurfaces, yoz contour slices.

mod block;
pub mod io;
mod mesh;
mod slice;

pub use block::{auto_extent, iso_levels, polar_drift, sample_block, sample_block_parallel, DensityBlock, GridSpec, IsoLevelSet};
pub use mesh::{marching_cubes, MeshStats, TriangleMesh};
pub use slice::{contour_slice, ContourSlice};

/// Default samples per axis.
pub const DEFAULT_POINTS: usize = 81;
