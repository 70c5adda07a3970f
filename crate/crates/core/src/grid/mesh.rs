use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::scalar::Real;

use super::block::DensityBlock;

/// Indexed triangle mesh in Bohr radii.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TriangleMesh<T> {
    pub vertices: Vec<[T; 3]>,
    pub triangles: Vec<[u32; 3]>,
    /// The superlevel set reaches the faces of the sampling box, so the
    /// surface is open there.
    pub touches_box: bool,
}

// Cube corner c sits at offset (c & 1, (c >> 1) & 1, (c >> 2) & 1).
// Six tetrahedra sharing the 0-7 diagonal; adjacent cubes split shared
// faces along the same diagonal, so the surface is crack-free.
const TETRAHEDRA: [[usize; 4]; 6] = [
    [0, 1, 3, 7],
    [0, 1, 5, 7],
    [0, 2, 3, 7],
    [0, 2, 6, 7],
    [0, 4, 5, 7],
    [0, 4, 6, 7],
];

struct Builder<'a, T> {
    block: &'a DensityBlock<T>,
    level: T,
    mesh: TriangleMesh<T>,
    edge_vertex: HashMap<(usize, usize), u32>,
}

impl<T: Real> Builder<'_, T> {
    fn position(&self, idx: usize) -> [T; 3] {
        let (i, j, k) = self.block.unravel(idx);
        self.block.point(i, j, k)
    }

    /// Vertex on the grid edge from an inside sample to an outside one.
    fn crossing(&mut self, inside: usize, outside: usize) -> u32 {
        let vi = self.block.values[inside];
        let vo = self.block.values[outside];
        let key = if vi == self.level { (inside, inside) } else { (inside.min(outside), inside.max(outside)) };
        if let Some(&v) = self.edge_vertex.get(&key) {
            return v;
        }
        let t = (vi - self.level) / (vi - vo);
        let a = self.position(inside);
        let b = self.position(outside);
        let p = [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]), a[2] + t * (b[2] - a[2])];
        let id = self.mesh.vertices.len() as u32;
        self.mesh.vertices.push(p);
        self.edge_vertex.insert(key, id);
        id
    }

    /// Emits `tri`, oriented so its normal points from `inside` toward `outside`.
    fn emit(&mut self, mut tri: [u32; 3], inside: [T; 3], outside: [T; 3]) {
        if tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2] {
            return;
        }
        let v = |i: u32| self.mesh.vertices[i as usize];
        let (a, b, c) = (v(tri[0]), v(tri[1]), v(tri[2]));
        let n = cross(sub(b, a), sub(c, a));
        let area2 = dot(n, n).sqrt();
        if area2 <= T::lit(2e-12) {
            return;
        }
        if dot(n, sub(outside, inside)) < T::zero() {
            tri.swap(1, 2);
        }
        self.mesh.triangles.push(tri);
    }

    fn tetrahedron(&mut self, corners: [usize; 4]) {
        let inside: Vec<usize> = corners.iter().copied().filter(|&c| self.block.values[c] >= self.level).collect();
        let outside: Vec<usize> = corners.iter().copied().filter(|&c| self.block.values[c] < self.level).collect();
        let centroid = |this: &Self, pts: &[usize]| {
            let mut s = [T::zero(); 3];
            for &p in pts {
                let q = this.position(p);
                for d in 0..3 {
                    s[d] += q[d];
                }
            }
            let k = T::from_usize_lossy(pts.len());
            [s[0] / k, s[1] / k, s[2] / k]
        };
        match inside.len() {
            1 => {
                let tri = [
                    self.crossing(inside[0], outside[0]),
                    self.crossing(inside[0], outside[1]),
                    self.crossing(inside[0], outside[2]),
                ];
                let (ci, co) = (centroid(self, &inside), centroid(self, &outside));
                self.emit(tri, ci, co);
            }
            3 => {
                let tri = [
                    self.crossing(inside[0], outside[0]),
                    self.crossing(inside[1], outside[0]),
                    self.crossing(inside[2], outside[0]),
                ];
                let (ci, co) = (centroid(self, &inside), centroid(self, &outside));
                self.emit(tri, ci, co);
            }
            2 => {
                // quad a-b-c-d around the tetrahedron
                let a = self.crossing(inside[0], outside[0]);
                let b = self.crossing(inside[0], outside[1]);
                let c = self.crossing(inside[1], outside[1]);
                let d = self.crossing(inside[1], outside[0]);
                let (ci, co) = (centroid(self, &inside), centroid(self, &outside));
                self.emit([a, b, c], ci, co);
                self.emit([a, c, d], ci, co);
            }
            _ => {}
        }
    }
}

fn sub<T: Real>(a: [T; 3], b: [T; 3]) -> [T; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn cross<T: Real>(a: [T; 3], b: [T; 3]) -> [T; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn dot<T: Real>(a: [T; 3], b: [T; 3]) -> T {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Isosurface `ρ = level` by marching each grid cube as six tetrahedra with
/// linear edge interpolation. With `cut`, cubes whose centres lie in the
/// open octant `x < 0, y < 0, z > 0` are skipped, leaving the section
/// faces open.
pub fn marching_cubes<T: Real>(block: &DensityBlock<T>, level: T, cut: bool) -> Result<TriangleMesh<T>> {
    if !(level > T::zero() && level < block.rho_max) {
        return Err(Error::Domain(format!("iso level {level} must lie in (0, {})", block.rho_max)));
    }
    let spec = &block.spec;
    let n = spec.n_points;
    let half = spec.spacing() / T::lit(2.0);
    let mut builder = Builder { block, level, mesh: TriangleMesh::default(), edge_vertex: HashMap::new() };
    for k in 0..n - 1 {
        let cz = spec.coord(k) + half;
        for j in 0..n - 1 {
            let cy = spec.coord(j) + half;
            for i in 0..n - 1 {
                let cx = spec.coord(i) + half;
                if cut && cx < T::zero() && cy < T::zero() && cz > T::zero() {
                    continue;
                }
                let corner = |c: usize| spec.index(i + (c & 1), j + ((c >> 1) & 1), k + ((c >> 2) & 1));
                let ids: [usize; 8] = std::array::from_fn(corner);
                let above = ids.iter().filter(|&&c| block.values[c] >= level).count();
                if above == 0 || above == 8 {
                    continue;
                }
                for tet in TETRAHEDRA {
                    builder.tetrahedron(tet.map(|c| ids[c]));
                }
            }
        }
    }
    let mut mesh = builder.mesh;
    mesh.touches_box = (0..n).any(|a| {
        (0..n).any(|b| {
            [
                spec.index(0, a, b),
                spec.index(n - 1, a, b),
                spec.index(a, 0, b),
                spec.index(a, n - 1, b),
                spec.index(a, b, 0),
                spec.index(a, b, n - 1),
            ]
            .iter()
            .any(|&idx| block.values[idx] >= level)
        })
    });
    Ok(mesh)
}

/// Topology and shape summaries used by the geometry checks.
#[derive(Debug, Clone, PartialEq)]
pub struct MeshStats<T> {
    pub vertices: usize,
    pub triangles: usize,
    pub edges: usize,
    /// Edges not shared by exactly two triangles.
    pub open_edges: usize,
    pub components: usize,
    pub euler_characteristic: i64,
    pub min_radius: T,
    pub max_radius: T,
    pub mean_radius: T,
    /// Smallest distance of any vertex from the z-axis.
    pub axis_clearance: T,
}

impl<T: Real> TriangleMesh<T> {
    fn edge_uses(&self) -> HashMap<(u32, u32), u32> {
        let mut uses = HashMap::new();
        for t in &self.triangles {
            for (a, b) in [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])] {
                *uses.entry((a.min(b), a.max(b))).or_insert(0) += 1;
            }
        }
        uses
    }

    /// Every edge is shared by exactly two triangles.
    pub fn is_watertight(&self) -> bool {
        self.edge_uses().values().all(|&c| c == 2)
    }

    /// Connected components of the triangle graph (shared vertices).
    pub fn component_labels(&self) -> Vec<u32> {
        let mut parent: Vec<u32> = (0..self.vertices.len() as u32).collect();
        fn find(parent: &mut [u32], mut x: u32) -> u32 {
            while parent[x as usize] != x {
                parent[x as usize] = parent[parent[x as usize] as usize];
                x = parent[x as usize];
            }
            x
        }
        for t in &self.triangles {
            let r0 = find(&mut parent, t[0]);
            for &v in &t[1..] {
                let r = find(&mut parent, v);
                if r != r0 {
                    parent[r as usize] = r0;
                }
            }
        }
        (0..self.vertices.len() as u32).map(|v| find(&mut parent, v)).collect()
    }

    pub fn stats(&self) -> MeshStats<T> {
        let uses = self.edge_uses();
        let labels = self.component_labels();
        let mut used = vec![false; self.vertices.len()];
        for t in &self.triangles {
            for &v in t {
                used[v as usize] = true;
            }
        }
        let mut roots: Vec<u32> = labels.iter().zip(&used).filter(|(_, &u)| u).map(|(&l, _)| l).collect();
        roots.sort_unstable();
        roots.dedup();
        let radii: Vec<T> = self.vertices.iter().map(|p| dot(*p, *p).sqrt()).collect();
        let count = T::from_usize_lossy(radii.len().max(1));
        let used_vertices = used.iter().filter(|&&u| u).count();
        MeshStats {
            vertices: self.vertices.len(),
            triangles: self.triangles.len(),
            edges: uses.len(),
            open_edges: uses.values().filter(|&&c| c != 2).count(),
            components: roots.len(),
            euler_characteristic: used_vertices as i64 - uses.len() as i64 + self.triangles.len() as i64,
            min_radius: radii.iter().copied().fold(T::infinity(), T::min),
            max_radius: radii.iter().copied().fold(T::zero(), T::max),
            mean_radius: radii.iter().copied().fold(T::zero(), |a, b| a + b) / count,
            axis_clearance: self
                .vertices
                .iter()
                .map(|p| (p[0] * p[0] + p[1] * p[1]).sqrt())
                .fold(T::infinity(), T::min),
        }
    }

    /// Largest empty gap between consecutive sorted vertex radii.
    pub fn largest_radial_gap(&self) -> T {
        let mut radii: Vec<T> = self.vertices.iter().map(|p| dot(*p, *p).sqrt()).collect();
        radii.sort_by(|a, b| a.partial_cmp(b).unwrap());
        radii.windows(2).map(|w| w[1] - w[0]).fold(T::zero(), T::max)
    }
}
