//! Command-line front end: rank scans, compression benchmarks, scenario
//! solves, field maps and oracle spot values.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};
use nalgebra::DMatrix;
use num_complex::Complex64 as C;
use serde::Serialize;

use crate::analytic::{default_terms, dielectric_cylinder, pec_cylinder};
use crate::config::{Config, Geometry};
use crate::error::{Error, Result};
use crate::fds::{
    check_memory, default_memory_cap, eri, metal_memory_estimate, skin_memory_estimate,
    solve_scenario, FdsSolver, Method, SkeletonOptions, SolveResult,
};
use crate::fields::{box_grid, field_map, FieldGrid, Traces};
use crate::formulations::{BlockSystem, CalderonParts, PlaneWave, Polarization};
use crate::geometry::BoundaryMesh;
use crate::media::{penetration_length, Medium, MediumSpec};

/// Mesh size above which a benchmark row is reported as long-running.
pub const LONG_RUNNING_N: usize = 8192;

#[derive(Debug, Parser)]
#[command(name = "thzbem", version, about = "2D BEM THz scattering solver")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Run configuration (TOML key–value file).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Override a config key, e.g. --set k0=[25,50] or --set skin.medium=air.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    pub set: Vec<String>,
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Skeleton rank per (k0, polarization).
    RankScan,
    /// Compression time and eri over a list of mesh sizes.
    Bench,
    /// Solve the metal and/or skin block for one plane wave.
    Solve,
    /// Solve and map the scattered/interior field on a grid.
    FieldMap,
    /// Analytic spot values.
    Oracle,
}

/// Parses the process arguments, runs and returns the exit code.
pub fn main() -> i32 {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn load_config(cli: &Cli) -> Result<Config> {
    let mut cfg = match &cli.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    for s in &cli.set {
        cfg.set(s)?;
    }
    if let Some(seed) = cli.seed {
        cfg.set(&format!("seed={seed}"))?;
    }
    if let Some(t) = cli.threads {
        cfg.set(&format!("threads={t}"))?;
    }
    if let Some(out) = &cli.out {
        cfg.set(&format!("out={:?}", out.to_string_lossy()))?;
    }
    Ok(cfg)
}

pub fn run(cli: &Cli) -> Result<()> {
    let cfg = load_config(cli)?;
    if let Some(t) = cfg.usize("threads")? {
        if t == 0 {
            return Err(Error::Config("threads must be positive".into()));
        }
        // a pool built earlier in the same process stays in place
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global();
    }
    let out = PathBuf::from(cfg.require_str("out")?);
    fs::create_dir_all(&out)?;
    match cli.command {
        Command::RankScan => rank_scan(&cfg, &out).map(drop),
        Command::Bench => bench(&cfg, &out).map(drop),
        Command::Solve => solve(&cfg, &out).map(drop),
        Command::FieldMap => field_map_cmd(&cfg, &out).map(drop),
        Command::Oracle => oracle(&cfg, &out),
    }
}

fn memory_cap(cfg: &Config) -> Result<Option<u64>> {
    Ok(match cfg.f64("memory_cap_mib")? {
        Some(m) => Some((m * 1024.0 * 1024.0) as u64),
        None => default_memory_cap(),
    })
}

fn status_of(e: &Error) -> &'static str {
    match e {
        Error::CompressionIneffective { .. } => "compression-ineffective",
        Error::MemoryCap { .. } => "memory-cap",
        _ => "failed",
    }
}

pub const RANK_HEADER: &str = "k0[rad/m],n,polarization,rank,tolerance,seed,status";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankRow {
    pub k0: f64,
    pub n: usize,
    pub polarization: Polarization,
    /// Rank reached; for an ineffective compression, the rank at which it stopped.
    pub rank: Option<usize>,
    pub tolerance: f64,
    pub seed: u64,
    pub status: String,
}

pub fn rank_csv(rows: &[RankRow]) -> String {
    let mut s = format!("{RANK_HEADER}\n");
    for r in rows {
        let rank = r.rank.map(|v| v.to_string()).unwrap_or_default();
        let _ = writeln!(
            s,
            "{:.16e},{},{},{},{:e},{},{}",
            r.k0, r.n, r.polarization, rank, r.tolerance, r.seed, r.status
        );
    }
    s
}

fn skeleton_rank(
    mesh: &BoundaryMesh,
    k0: f64,
    pol: Polarization,
    options: &SkeletonOptions,
    cap: Option<u64>,
) -> Result<(usize, f64)> {
    check_memory(metal_memory_estimate(mesh.len()), cap)?;
    let parts = CalderonParts::assemble(mesh, k0, pol)?;
    let solver = FdsSolver::build(&parts, mesh.perimeter(), options)?;
    Ok((solver.rank(), solver.compression_time))
}

/// Parts for the requested polarizations; both share one assembly pass.
fn assemble_parts(
    mesh: &BoundaryMesh,
    k0: f64,
    pols: &[Polarization],
    cap: Option<u64>,
) -> Result<Vec<CalderonParts>> {
    let both = pols.contains(&Polarization::Tm) && pols.contains(&Polarization::Te);
    if both {
        check_memory(2 * metal_memory_estimate(mesh.len()), cap)?;
        Ok(CalderonParts::assemble_both(mesh, k0)?.into())
    } else {
        check_memory(metal_memory_estimate(mesh.len()), cap)?;
        Ok(vec![CalderonParts::assemble(mesh, k0, pols[0])?])
    }
}

pub fn rank_scan(cfg: &Config, out: &Path) -> Result<Vec<RankRow>> {
    let geometry = cfg.geometry("")?;
    let ks = cfg.wavenumbers()?;
    let pols = cfg.polarizations()?;
    let tolerance = cfg.f64_or("tolerance", 1e-6)?;
    let seed = cfg.seed()?;
    let cap = memory_cap(cfg)?;
    let mut rows = Vec::new();
    for &k0 in &ks {
        let n = geometry.elements(k0);
        let mesh = geometry.mesh_with(n)?;
        let parts = match assemble_parts(&mesh, k0, &pols, cap) {
            Err(e @ Error::Config(_)) => return Err(e),
            Err(e) => {
                eprintln!("k0 = {k0}: {e}");
                Err(e)
            }
            ok => ok,
        };
        for &pol in &pols {
            let options = SkeletonOptions::new(tolerance, seed);
            let (rank, status) = match &parts {
                Ok(parts) => {
                    let p = parts
                        .iter()
                        .find(|p| p.polarization == pol)
                        .expect("assembled");
                    match FdsSolver::build(p, mesh.perimeter(), &options) {
                        Ok(s) => (Some(s.rank()), "ok".to_string()),
                        Err(e) => {
                            eprintln!("{e}");
                            let rank = match e {
                                Error::CompressionIneffective { rank, .. } => Some(rank),
                                _ => None,
                            };
                            (rank, status_of(&e).to_string())
                        }
                    }
                }
                Err(e) => (None, status_of(e).to_string()),
            };
            eprintln!(
                "k0 = {k0} N = {} {pol}: rank {} {status}",
                mesh.len(),
                rank.map(|r| r.to_string()).unwrap_or_default()
            );
            rows.push(RankRow {
                k0,
                n: mesh.len(),
                polarization: pol,
                rank,
                tolerance,
                seed,
                status,
            });
        }
    }
    fs::write(out.join("ranks.csv"), rank_csv(&rows))?;
    Ok(rows)
}

pub const BENCH_HEADER: &str = "n,k0[rad/m],rank,compression_time[s],eri,threads,status";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRecord {
    pub n: usize,
    pub k0: f64,
    pub rank: Option<usize>,
    /// Seconds spent building the skeleton.
    pub compression_time: Option<f64>,
    /// Against the previous row; absent for the first row.
    pub eri: Option<f64>,
    pub threads: usize,
    pub status: String,
}

pub fn bench_csv(rows: &[BenchRecord]) -> String {
    let opt = |v: Option<f64>| v.map(|v| format!("{v:.6}")).unwrap_or_default();
    let mut s = format!("{BENCH_HEADER}\n");
    for r in rows {
        let _ = writeln!(
            s,
            "{},{:.16e},{},{},{},{},{}",
            r.n,
            r.k0,
            r.rank.map(|v| v.to_string()).unwrap_or_default(),
            opt(r.compression_time),
            opt(r.eri),
            r.threads,
            r.status
        );
    }
    s
}

/// Fills the eri column from consecutive timed rows.
pub fn fill_eri(rows: &mut [BenchRecord]) {
    for i in 0..rows.len() {
        rows[i].eri = None;
        if i > 0 {
            if let (Some(t1), Some(t2)) = (rows[i - 1].compression_time, rows[i].compression_time) {
                rows[i].eri = Some(eri(t1, t2, rows[i - 1].n, rows[i].n));
            }
        }
    }
}

pub fn bench(cfg: &Config, out: &Path) -> Result<Vec<BenchRecord>> {
    let geometry = cfg.geometry("")?;
    let ns = cfg
        .usize_list("n")?
        .unwrap_or_else(|| vec![2048, 4096, 8192]);
    if ns.is_empty() || ns.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Config("key 'n': expected an increasing list".into()));
    }
    let ks = match cfg.f64_list("k0")? {
        Some(k) if k.len() == ns.len() => k,
        Some(_) => return Err(Error::Config("key 'k0': one value per N".into())),
        None => ns
            .iter()
            .map(|&n| {
                2.0 * std::f64::consts::PI * n as f64
                    / (geometry.points_per_wavelength * geometry.perimeter)
            })
            .collect(),
    };
    let pol = cfg.polarizations()?[0];
    let tolerance = cfg.f64_or("tolerance", 1e-6)?;
    let seed = cfg.seed()?;
    let cap = memory_cap(cfg)?;
    for &n in &ns {
        check_memory(metal_memory_estimate(n), cap)?;
        if n > LONG_RUNNING_N {
            eprintln!("warning: N = {n} is long-running with dense operator products");
        }
    }
    let threads = rayon::current_num_threads();
    let mut rows = Vec::new();
    for (&n, &k0) in ns.iter().zip(&ks) {
        let mesh = geometry.mesh_with(n)?;
        let t = Instant::now();
        let r = skeleton_rank(&mesh, k0, pol, &SkeletonOptions::new(tolerance, seed), cap);
        let (rank, time, status) = match r {
            Ok((rank, time)) => (Some(rank), Some(time), "ok".to_string()),
            Err(e) => {
                eprintln!("N = {n}: {e}");
                let rank = match e {
                    Error::CompressionIneffective { rank, .. } => Some(rank),
                    _ => None,
                };
                (rank, None, status_of(&e).to_string())
            }
        };
        eprintln!(
            "N = {n} k0 = {k0:.3}: rank {rank:?}, compression {time:?} s, total {:.1} s",
            t.elapsed().as_secs_f64()
        );
        rows.push(BenchRecord {
            n,
            k0,
            rank,
            compression_time: time,
            eri: None,
            threads,
            status,
        });
        fill_eri(&mut rows);
        fs::write(out.join("bench.csv"), bench_csv(&rows))?;
    }
    Ok(rows)
}

/// Everything a solve produced, kept for field maps.
pub struct SolveOutput {
    pub medium0: Medium,
    pub wave: PlaneWave,
    pub metal: Option<BoundaryMesh>,
    pub skin: Option<(BoundaryMesh, Medium)>,
    pub solution: SolveResult,
}

fn penetrable(spec: MediumSpec, frequency: f64, key: &str) -> Result<Medium> {
    spec.medium(frequency)?
        .ok_or_else(|| Error::Config(format!("key '{key}': medium must be penetrable")))
}

fn body(cfg: &Config, name: &str) -> Result<Option<Geometry>> {
    if cfg.has(name) {
        cfg.geometry(&format!("{name}.")).map(Some)
    } else {
        Ok(None)
    }
}

pub fn currents_csv(mesh: &BoundaryMesh, values: &DMatrix<C>, unit: &str) -> String {
    let mut s = format!("node_index,s[m],re[{unit}],im[{unit}]\n");
    for i in 0..mesh.len() {
        let v = values[(i, 0)];
        let _ = writeln!(
            s,
            "{i},{:.16e},{:.16e},{:.16e}",
            mesh.node_arclength(i),
            v.re,
            v.im
        );
    }
    s
}

pub fn solve(cfg: &Config, out: &Path) -> Result<SolveOutput> {
    let frequency = cfg.frequency()?;
    let medium0 = penetrable(
        cfg.medium("medium")?.unwrap_or(MediumSpec::Air),
        frequency,
        "medium",
    )?;
    if cfg.polarizations()? != [Polarization::Tm] {
        return Err(Error::Polarization(
            "scenario solves take a single TM plane wave".into(),
        ));
    }
    let wave = PlaneWave::tm(
        cfg.f64_or("amplitude", 1.0)?,
        cfg.f64_or("angle", 0.0)?,
        frequency,
    );
    let metal_geometry = body(cfg, "metal")?;
    let skin_geometry = body(cfg, "skin")?;
    if metal_geometry.is_none() && skin_geometry.is_none() {
        return Err(Error::Config(
            "missing key 'metal.geometry' or 'skin.geometry'".into(),
        ));
    }
    if let Some(m) = cfg.medium("metal.medium")? {
        if m != MediumSpec::Pec {
            return Err(Error::Config("key 'metal.medium': must be pec".into()));
        }
    }
    let method = match cfg.str("method")?.unwrap_or("fds") {
        "fds" => Method::Fds {
            tolerance: cfg.f64_or("tolerance", 1e-6)?,
            seed: cfg.seed()?,
        },
        "dense" => Method::Dense,
        other => return Err(Error::Config(format!("key 'method': unknown '{other}'"))),
    };
    let cap = memory_cap(cfg)?;
    let metal = match &metal_geometry {
        Some(g) => {
            let mesh = g.mesh_for(medium0.k.re)?;
            check_memory(metal_memory_estimate(mesh.len()), cap)?;
            Some(mesh)
        }
        None => None,
    };
    let skin = match &skin_geometry {
        Some(g) => {
            let spec = cfg.medium("skin.medium")?.unwrap_or(MediumSpec::SkinDebye);
            let medium1 = penetrable(spec, frequency, "skin.medium")?;
            let mesh = g.mesh_for(medium1.k.re)?;
            check_memory(skin_memory_estimate(mesh.len()), cap)?;
            Some((mesh, medium1))
        }
        None => None,
    };
    let system = BlockSystem::assemble(
        metal.as_ref(),
        skin.as_ref().map(|(m, k)| (m, k)),
        &medium0,
        &[wave],
    )?;
    let solution = solve_scenario(&system, &method)?;
    fs::write(out.join("report.json"), solution.report.to_json()?)?;
    if let (Some(mesh), Some(j)) = (&metal, &solution.j_m) {
        fs::write(out.join("currents_metal.csv"), currents_csv(mesh, j, "A/m"))?;
    }
    if let Some((mesh, _)) = &skin {
        if let (Some(j), Some(m)) = (&solution.j_s, &solution.m_s) {
            fs::write(
                out.join("currents_skin_j.csv"),
                currents_csv(mesh, j, "A/m"),
            )?;
            fs::write(
                out.join("currents_skin_m.csv"),
                currents_csv(mesh, m, "V/m"),
            )?;
        }
    }
    if let Some(r) = &solution.report.metal {
        eprintln!(
            "metal: N = {} rank {} residual {:.3e}",
            r.n, r.rank, r.residual
        );
    }
    if let Some(r) = &solution.report.skin {
        eprintln!("skin: N = {} residual {:.3e}", r.n, r.residual);
    }
    Ok(SolveOutput {
        medium0,
        wave,
        metal,
        skin,
        solution,
    })
}

pub fn field_map_cmd(cfg: &Config, out: &Path) -> Result<FieldGrid> {
    if cfg.has("metal") && cfg.has("skin") {
        return Err(Error::Config(
            "field-map takes one body: give either [metal] or [skin]".into(),
        ));
    }
    let nx = cfg.usize("nx")?.unwrap_or(256);
    let ny = cfg.usize("ny")?.unwrap_or(256);
    let scale = cfg.f64_or("box_scale", 3.0)?;
    let s = solve(cfg, out)?;
    let grid = match (&s.metal, &s.skin) {
        (Some(mesh), None) => {
            let t = Traces::pec(&s.solution, 0)?;
            field_map(mesh, &t, &s.medium0, None, &box_grid(mesh, scale, nx, ny)?)?
        }
        (None, Some((mesh, m1))) => {
            let t = Traces::penetrable(&s.solution, 0)?;
            field_map(
                mesh,
                &t,
                &s.medium0,
                Some(m1),
                &box_grid(mesh, scale, nx, ny)?,
            )?
        }
        _ => unreachable!("one body checked above"),
    };
    grid.save_csv(&out.join("field.csv"))?;
    eprintln!("field map: {} points", grid.len());
    Ok(grid)
}

#[derive(Debug, Serialize)]
struct PenetrationReport {
    frequency: f64,
    eps_r: C,
    k: C,
    penetration_length: f64,
}

pub fn oracle(cfg: &Config, out: &Path) -> Result<()> {
    let kind = cfg.require_str("oracle")?;
    let frequency = cfg.frequency()?;
    let angle = cfg.f64_or("angle", 0.0)?;
    let amplitude = cfg.f64_or("amplitude", 1.0)?;
    let samples = cfg.usize("points")?.unwrap_or(72).max(1);
    let phis: Vec<f64> = (0..samples)
        .map(|i| 2.0 * std::f64::consts::PI * i as f64 / samples as f64)
        .collect();
    let medium0 = Medium::vacuum(frequency)?;
    let mut s = String::new();
    match kind {
        "penetration" => {
            let spec = cfg.medium("medium")?.unwrap_or(MediumSpec::SkinDebye);
            let m = penetrable(spec, frequency, "medium")?;
            let report = PenetrationReport {
                frequency,
                eps_r: m.eps_r,
                k: m.k,
                penetration_length: penetration_length(&m)?,
            };
            let json = serde_json::to_string_pretty(&report)?;
            println!("{json}");
            fs::write(out.join("oracle.json"), json)?;
            return Ok(());
        }
        "pec" => {
            let radius = cfg.require_f64("radius")?;
            let n = cfg
                .usize("n_terms")?
                .unwrap_or_else(|| default_terms(medium0.k, radius));
            let series = pec_cylinder(radius, &medium0, n, angle, amplitude)?;
            s.push_str("phi[rad],re_j[A/m],im_j[A/m]\n");
            for &p in &phis {
                let j = series.current(p);
                let _ = writeln!(s, "{p:.16e},{:.16e},{:.16e}", j.re, j.im);
            }
        }
        "dielectric" => {
            let radius = cfg.require_f64("radius")?;
            let spec = cfg.medium("medium")?.unwrap_or(MediumSpec::SkinDebye);
            let m1 = penetrable(spec, frequency, "medium")?;
            let n = cfg
                .usize("n_terms")?
                .unwrap_or_else(|| default_terms(medium0.k, radius));
            let series = dielectric_cylinder(radius, &medium0, &m1, n, angle, amplitude)?;
            s.push_str("phi[rad],re_e[V/m],im_e[V/m],re_h[A/m],im_h[A/m]\n");
            for &p in &phis {
                let (e, h) = (series.e_trace(p), series.h_trace(p));
                let _ = writeln!(
                    s,
                    "{p:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                    e.re, e.im, h.re, h.im
                );
            }
        }
        other => {
            return Err(Error::Config(format!(
                "key 'oracle': unknown '{other}' (pec, dielectric, penetration)"
            )))
        }
    }
    print!("{s}");
    fs::write(out.join("oracle.csv"), s)?;
    Ok(())
}
