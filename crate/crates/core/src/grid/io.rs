//! File formats: raw `f64` density blocks with a JSON sidecar, Wavefront
//! OBJ meshes, CSV and PGM contour slices.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::QuantumState;
use crate::scalar::Real;

use super::block::{DensityBlock, GridSpec};
use super::mesh::TriangleMesh;
use super::slice::ContourSlice;

pub const FORMAT_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateRecord {
    pub n: u32,
    pub l: u32,
    pub m: i32,
    pub b: f64,
    #[serde(rename = "Z")]
    pub z: f64,
}

/// Sidecar document written next to a raw density block.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlockMetadata {
    pub n_points: usize,
    pub half_extent: f64,
    pub state: StateRecord,
    pub rho_max: f64,
    pub riemann_mass: f64,
    pub version: String,
}

/// Paths of the two block files for a stem `foo`: `foo.f64`, `foo.json`.
pub fn block_paths(stem: &Path) -> (PathBuf, PathBuf) {
    let with = |ext: &str| {
        let mut os = stem.as_os_str().to_owned();
        os.push(ext);
        PathBuf::from(os)
    };
    (with(".f64"), with(".json"))
}

pub fn write_block<T: Real>(block: &DensityBlock<T>, stem: &Path) -> Result<(PathBuf, PathBuf)> {
    let (raw_path, meta_path) = block_paths(stem);
    let mut out = BufWriter::new(File::create(&raw_path)?);
    for v in &block.values {
        out.write_all(&v.as_f64().to_le_bytes())?;
    }
    out.flush()?;
    let st = &block.spec.state;
    let meta = BlockMetadata {
        n_points: block.spec.n_points,
        half_extent: block.spec.half_extent.as_f64(),
        state: StateRecord { n: st.n, l: st.l, m: st.m, b: st.b.as_f64(), z: st.z.as_f64() },
        rho_max: block.rho_max.as_f64(),
        riemann_mass: block.riemann_mass.as_f64(),
        version: FORMAT_VERSION.to_string(),
    };
    let mut f = BufWriter::new(File::create(&meta_path)?);
    serde_json::to_writer_pretty(&mut f, &meta)?;
    f.write_all(b"\n")?;
    f.flush()?;
    Ok((raw_path, meta_path))
}

pub fn read_block(stem: &Path) -> Result<DensityBlock<f64>> {
    let (raw_path, meta_path) = block_paths(stem);
    let meta: BlockMetadata = serde_json::from_reader(BufReader::new(File::open(meta_path)?))?;
    let s = &meta.state;
    let state = QuantumState::new(s.n, s.l, s.m, s.b, s.z)?;
    let spec = GridSpec::new(meta.n_points, meta.half_extent, state)?;
    let mut bytes = Vec::new();
    File::open(raw_path)?.read_to_end(&mut bytes)?;
    if bytes.len() != spec.len() * 8 {
        return Err(Error::Invalid(format!("raw block has {} bytes, expected {}", bytes.len(), spec.len() * 8)));
    }
    let values = bytes.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().unwrap())).collect();
    DensityBlock::from_values(spec, values)
}

/// `v`/`f` records only, 1-based indices.
pub fn write_obj<T: Real, W: Write>(mesh: &TriangleMesh<T>, out: W) -> Result<()> {
    let mut out = BufWriter::new(out);
    for v in &mesh.vertices {
        writeln!(out, "v {} {} {}", v[0].as_f64(), v[1].as_f64(), v[2].as_f64())?;
    }
    for t in &mesh.triangles {
        writeln!(out, "f {} {} {}", t[0] + 1, t[1] + 1, t[2] + 1)?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_obj<R: Read>(input: R) -> Result<TriangleMesh<f64>> {
    let mut mesh = TriangleMesh::default();
    for line in BufReader::new(input).lines() {
        let line = line?;
        let mut parts = line.split_whitespace();
        let bad = || Error::Invalid(format!("malformed OBJ record: {line}"));
        match parts.next() {
            Some("v") => {
                let xs: Vec<f64> = parts.map(|p| p.parse().map_err(|_| bad())).collect::<Result<_>>()?;
                let [x, y, z] = xs[..] else { return Err(bad()) };
                mesh.vertices.push([x, y, z]);
            }
            Some("f") => {
                let ix: Vec<u32> = parts.map(|p| p.parse().map_err(|_| bad())).collect::<Result<_>>()?;
                let [a, b, c] = ix[..] else { return Err(bad()) };
                if a == 0 || b == 0 || c == 0 {
                    return Err(bad());
                }
                mesh.triangles.push([a - 1, b - 1, c - 1]);
            }
            _ => {}
        }
    }
    Ok(mesh)
}

/// Header `y,z,value_normalized`, y varying fastest.
pub fn write_slice_csv<T: Real, W: Write>(slice: &ContourSlice<T>, out: W) -> Result<()> {
    let mut out = BufWriter::new(out);
    writeln!(out, "y,z,value_normalized")?;
    for iz in 0..slice.n_points {
        let z = slice.coord(iz).as_f64();
        for iy in 0..slice.n_points {
            writeln!(out, "{},{},{}", slice.coord(iy).as_f64(), z, slice.at(iy, iz).as_f64())?;
        }
    }
    out.flush()?;
    Ok(())
}

/// Plain PGM (`P2`, maxval 100); the first image row is the largest z.
pub fn write_slice_pgm<T: Real, W: Write>(slice: &ContourSlice<T>, out: W) -> Result<()> {
    let mut out = BufWriter::new(out);
    let n = slice.n_points;
    writeln!(out, "P2\n{n} {n}\n100")?;
    for iz in (0..n).rev() {
        let row: Vec<String> =
            (0..n).map(|iy| (slice.at(iy, iz).as_f64().round() as i64).clamp(0, 100).to_string()).collect();
        writeln!(out, "{}", row.join(" "))?;
    }
    out.flush()?;
    Ok(())
}
