//! Command-line front end. Every run resolves its arguments into a
//! [`RunConfig`], writes it next to the outputs and can be replayed from it.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::check::{run_checks, CheckOptions, CheckReport};
use crate::error::{Error, Result};
use crate::expand;
use crate::grid::io::{write_block, write_obj, write_slice_csv, write_slice_pgm};
use crate::grid::{auto_extent, contour_slice, iso_levels, marching_cubes, sample_block_parallel, GridSpec};
use crate::model::{Orbital, QuantumState};

/// Overrides the output directory when `--out` is absent. Nothing else is
/// read from the environment.
pub const OUT_ENV: &str = "RINGCOULOMB_OUT";
pub const DEFAULT_OUT: &str = "out";
pub const CONFIG_FILE: &str = "run_config.json";
/// Relative size of the `N_{l'm'}` error injected by `check --perturb`.
pub const PERTURBATION: f64 = 1e-3;

#[derive(Debug, Parser)]
#[command(name = "ringcoulomb", version, about = "Ring-shaped Coulomb potential orbitals")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample the density on a cubic grid (raw f64 block + JSON sidecar).
    Density(DensityArgs),
    /// Extract isosurfaces as OBJ meshes.
    Mesh(MeshArgs),
    /// Contour slice of the density on the yoz plane.
    Slice(SliceArgs),
    /// Expansion coefficients of deformed harmonics over ordinary ones.
    Expand(ExpandArgs),
    /// Run the invariant suite.
    Check(CheckArgs),
    /// Re-run from a previously written run_config.json.
    Replay {
        config: PathBuf,
        /// Write outputs here instead of the directory stored in the config.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Args, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct StateArgs {
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub l: u32,
    #[arg(long, allow_negative_numbers = true)]
    pub m: i32,
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
    pub b: f64,
    #[arg(long = "Z", default_value_t = 1.0)]
    #[serde(rename = "Z")]
    pub z: f64,
}

impl StateArgs {
    pub fn state(&self) -> Result<QuantumState<f64>> {
        QuantumState::new(self.n, self.l, self.m, self.b, self.z)
    }

    fn stem(&self) -> String {
        format!("n{}_l{}_m{}_b{}_Z{}", self.n, self.l, self.m, self.b, self.z)
    }
}

#[derive(Debug, Clone, Args, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct GridArgs {
    #[arg(long = "grid-n", default_value_t = crate::grid::DEFAULT_POINTS)]
    pub grid_n: usize,
    /// Half extent of the box; chosen from `--coverage` when absent.
    #[arg(long)]
    pub extent: Option<f64>,
    #[arg(long, default_value_t = 0.99)]
    pub coverage: f64,
}

impl GridArgs {
    fn resolve_extent(&mut self, state: &QuantumState<f64>) -> Result<f64> {
        let l = match self.extent {
            Some(l) => l,
            None => auto_extent(state, self.coverage)?,
        };
        self.extent = Some(l);
        Ok(l)
    }
}

#[derive(Debug, Clone, Args)]
pub struct DensityArgs {
    #[command(flatten)]
    pub state: StateArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct MeshArgs {
    #[command(flatten)]
    pub state: StateArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
    /// Relative levels `p` (isovalue `p ρ_max`), comma separated.
    #[arg(long, value_delimiter = ',')]
    pub p: Vec<f64>,
    /// Absolute isovalues, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub levels: Vec<f64>,
    /// Drop the octant x>0, y>0, z<0 to expose the interior.
    #[arg(long)]
    pub cut: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SliceFormat {
    Csv,
    Pgm,
    Both,
}

#[derive(Debug, Clone, Args)]
pub struct SliceArgs {
    #[command(flatten)]
    pub state: StateArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long)]
    pub quadrant1: bool,
    #[arg(long, value_enum, default_value_t = SliceFormat::Csv)]
    pub format: SliceFormat,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ExpandArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub m: i32,
    #[arg(long)]
    pub l: u32,
    /// Deformation parameters, comma separated.
    #[arg(long, allow_hyphen_values = true, value_delimiter = ',', required = true)]
    pub b: Vec<f64>,
    #[arg(long = "l-max")]
    pub l_max: Option<u32>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct CheckArgs {
    #[arg(long = "n-max", default_value_t = 5)]
    pub n_max: u32,
    #[arg(long, allow_hyphen_values = true, value_delimiter = ',', default_values_t = vec![0.0, 0.5, 10.0])]
    pub b: Vec<f64>,
    /// Mis-scale `N_{l'm'}` so the normalisation checks must fail.
    #[arg(long)]
    pub perturb: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Fully resolved parameters of one run.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, tag = "command", rename_all = "lowercase")]
pub enum RunConfig {
    Density { state: StateArgs, grid: GridArgs, workers: usize, out: PathBuf },
    Mesh { state: StateArgs, grid: GridArgs, workers: usize, p: Vec<f64>, levels: Vec<f64>, cut: bool, out: PathBuf },
    Slice { state: StateArgs, grid: GridArgs, quadrant1: bool, format: SliceFormat, out: PathBuf },
    Expand { m: i32, l: u32, b: Vec<f64>, l_max: Option<u32>, out: PathBuf },
    Check { n_max: u32, b: Vec<f64>, perturb: bool, out: PathBuf },
}

/// What a run did; `failed` is only set by a check run with failures.
#[derive(Debug, Default)]
pub struct Outcome {
    pub files: Vec<PathBuf>,
    pub summary: Vec<String>,
    pub failed: bool,
}

fn resolve_out(out: Option<PathBuf>) -> PathBuf {
    out.or_else(|| std::env::var_os(OUT_ENV).map(PathBuf::from)).unwrap_or_else(|| PathBuf::from(DEFAULT_OUT))
}

impl RunConfig {
    pub fn from_command(cmd: Command) -> Result<Self> {
        Ok(match cmd {
            Command::Density(a) => {
                let mut grid = a.grid;
                grid.resolve_extent(&a.state.state()?)?;
                RunConfig::Density { state: a.state, grid, workers: a.workers, out: resolve_out(a.out) }
            }
            Command::Mesh(a) => {
                let mut grid = a.grid;
                grid.resolve_extent(&a.state.state()?)?;
                let p = if a.p.is_empty() && a.levels.is_empty() { vec![0.5] } else { a.p };
                RunConfig::Mesh {
                    state: a.state,
                    grid,
                    workers: a.workers,
                    p,
                    levels: a.levels,
                    cut: a.cut,
                    out: resolve_out(a.out),
                }
            }
            Command::Slice(a) => {
                let mut grid = a.grid;
                grid.resolve_extent(&a.state.state()?)?;
                RunConfig::Slice {
                    state: a.state,
                    grid,
                    quadrant1: a.quadrant1,
                    format: a.format,
                    out: resolve_out(a.out),
                }
            }
            Command::Expand(a) => RunConfig::Expand { m: a.m, l: a.l, b: a.b, l_max: a.l_max, out: resolve_out(a.out) },
            Command::Check(a) => RunConfig::Check { n_max: a.n_max, b: a.b, perturb: a.perturb, out: resolve_out(a.out) },
            Command::Replay { config, out } => {
                let mut cfg = Self::load(&config)?;
                if let Some(dir) = out {
                    *cfg.out_mut() = dir;
                }
                cfg
            }
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn out(&self) -> &Path {
        match self {
            RunConfig::Density { out, .. }
            | RunConfig::Mesh { out, .. }
            | RunConfig::Slice { out, .. }
            | RunConfig::Expand { out, .. }
            | RunConfig::Check { out, .. } => out,
        }
    }

    fn out_mut(&mut self) -> &mut PathBuf {
        match self {
            RunConfig::Density { out, .. }
            | RunConfig::Mesh { out, .. }
            | RunConfig::Slice { out, .. }
            | RunConfig::Expand { out, .. }
            | RunConfig::Check { out, .. } => out,
        }
    }

    /// Executes the run and writes `run_config.json` alongside the outputs.
    pub fn execute(&self) -> Result<Outcome> {
        let dir = self.out();
        fs::create_dir_all(dir)?;
        let mut outcome = match self {
            RunConfig::Density { state, grid, workers, .. } => run_density(state, grid, *workers, dir)?,
            RunConfig::Mesh { state, grid, workers, p, levels, cut, .. } => {
                run_mesh(state, grid, *workers, p, levels, *cut, dir)?
            }
            RunConfig::Slice { state, grid, quadrant1, format, .. } => {
                run_slice(state, grid, *quadrant1, *format, dir)?
            }
            RunConfig::Expand { m, l, b, l_max, .. } => run_expand(*m, *l, b, *l_max, dir)?,
            RunConfig::Check { n_max, b, perturb, .. } => run_check(*n_max, b, *perturb, dir)?,
        };
        let path = dir.join(CONFIG_FILE);
        let mut f = BufWriter::new(File::create(&path)?);
        serde_json::to_writer_pretty(&mut f, self)?;
        f.write_all(b"\n")?;
        f.flush()?;
        outcome.files.push(path);
        Ok(outcome)
    }
}

fn extent(grid: &GridArgs) -> f64 {
    grid.extent.expect("extent resolved before execution")
}

fn run_density(state: &StateArgs, grid: &GridArgs, workers: usize, dir: &Path) -> Result<Outcome> {
    let spec = GridSpec::new(grid.grid_n, extent(grid), state.state()?)?;
    let block = sample_block_parallel(&spec, workers)?;
    let (raw, meta) = write_block(&block, &dir.join(state.stem()))?;
    Ok(Outcome {
        files: vec![raw, meta],
        summary: vec![format!(
            "rho_max={:e} riemann_mass={:.6} half_extent={}",
            block.rho_max, block.riemann_mass, spec.half_extent
        )],
        failed: false,
    })
}

fn run_mesh(
    state: &StateArgs,
    grid: &GridArgs,
    workers: usize,
    p: &[f64],
    levels: &[f64],
    cut: bool,
    dir: &Path,
) -> Result<Outcome> {
    let spec = GridSpec::new(grid.grid_n, extent(grid), state.state()?)?;
    let block = sample_block_parallel(&spec, workers)?;
    let mut targets = Vec::new();
    if !p.is_empty() {
        let set = iso_levels(&block, p)?;
        for (p, level) in set.p_values.iter().zip(&set.levels) {
            targets.push((format!("p{p}"), *level));
        }
    }
    for level in levels {
        targets.push((format!("level{level:e}"), *level));
    }
    let suffix = if cut { "_cut" } else { "" };
    let mut outcome = Outcome::default();
    for (tag, level) in targets {
        let mesh = marching_cubes(&block, level, cut)?;
        let path = dir.join(format!("{}_{tag}{suffix}.obj", state.stem()));
        write_obj(&mesh, File::create(&path)?)?;
        let s = mesh.stats();
        outcome.summary.push(format!(
            "{tag}: level={level:e} vertices={} triangles={} components={} euler={} watertight={}",
            s.vertices,
            s.triangles,
            s.components,
            s.euler_characteristic,
            mesh.is_watertight()
        ));
        outcome.files.push(path);
    }
    Ok(outcome)
}

fn run_slice(state: &StateArgs, grid: &GridArgs, quadrant1: bool, format: SliceFormat, dir: &Path) -> Result<Outcome> {
    let orbital = Orbital::new(state.state()?)?;
    let slice = contour_slice(&orbital, extent(grid), grid.grid_n, quadrant1)?;
    let stem = format!("{}_slice{}", state.stem(), if quadrant1 { "_q1" } else { "" });
    let mut outcome = Outcome::default();
    if matches!(format, SliceFormat::Csv | SliceFormat::Both) {
        let path = dir.join(format!("{stem}.csv"));
        write_slice_csv(&slice, File::create(&path)?)?;
        outcome.files.push(path);
    }
    if matches!(format, SliceFormat::Pgm | SliceFormat::Both) {
        let path = dir.join(format!("{stem}.pgm"));
        write_slice_pgm(&slice, File::create(&path)?)?;
        outcome.files.push(path);
    }
    outcome.summary.push(format!("{0}x{0} slice over half extent {1}", slice.n_points, slice.half_extent));
    Ok(outcome)
}

fn run_expand(m: i32, l: u32, b: &[f64], l_max: Option<u32>, dir: &Path) -> Result<Outcome> {
    if l < m.unsigned_abs() {
        return Err(Error::Invalid(format!("|m| ≤ l violated: l={l}, m={m}")));
    }
    if b.is_empty() {
        return Err(Error::Invalid("at least one b value is required".into()));
    }
    let ntheta = l - m.unsigned_abs();
    let mut outcome = Outcome::default();
    for &bv in b {
        let t = expand::table(m, ntheta, bv, l_max)?;
        let path = dir.join(format!("expand_m{m}_l{l}_b{bv}.csv"));
        expand::write_csv(&t, File::create(&path)?)?;
        let line = match t.principal() {
            Some(e) => format!(
                "b={bv}: principal l={} a={:.8} defect={:e}",
                e.l, e.a_lm, t.completeness_defect
            ),
            None => format!("b={bv}: empty table"),
        };
        outcome.summary.push(line);
        outcome.files.push(path);
    }
    Ok(outcome)
}

fn run_check(n_max: u32, b: &[f64], perturb: bool, dir: &Path) -> Result<Outcome> {
    let opts = CheckOptions { n_max, b_values: b.to_vec(), perturbation: perturb.then_some(PERTURBATION) };
    let report = run_checks(&opts)?;
    let path = dir.join("check_report.json");
    let mut f = BufWriter::new(File::create(&path)?);
    serde_json::to_writer_pretty(&mut f, &report)?;
    f.write_all(b"\n")?;
    f.flush()?;
    Ok(Outcome { files: vec![path], summary: check_summary(&report), failed: !report.all_passed() })
}

fn check_summary(report: &CheckReport) -> Vec<String> {
    let mut lines = vec![format!("{} checks passed, {} failed", report.passed, report.failed)];
    for r in report.records.iter().filter(|r| !r.pass) {
        let s = &r.state;
        lines.push(format!(
            "FAIL {} (n={}, l={}, m={}, b={}, Z={}): {:e} vs {:e}",
            r.name, s.n, s.l, s.m, s.b, s.z, r.value, r.threshold
        ));
    }
    lines
}

/// Parses, runs and maps the outcome to a process exit code.
pub fn main_with_args<I, S>(args: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match RunConfig::from_command(cli.command).and_then(|cfg| cfg.execute()) {
        Ok(outcome) => {
            for line in &outcome.summary {
                println!("{line}");
            }
            for f in &outcome.files {
                println!("wrote {}", f.display());
            }
            if outcome.failed {
                1
            } else {
                0
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
