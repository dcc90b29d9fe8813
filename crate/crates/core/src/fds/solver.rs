use std::time::Instant;

use nalgebra::DMatrix;
use num_complex::Complex64 as C;
use serde::{Deserialize, Serialize};

use super::circulant::{circulant_counterpart_with, CirculantOperator};
use super::skeleton::{adaptive_skeleton, LinearOperator, Skeleton, SkeletonOptions};
use super::woodbury::WoodburyInverse;
use crate::error::{Error, Result};
use crate::formulations::{BlockSystem, CalderonParts};

/// C_p,ext = C_p − C_p,c as a black box.
pub struct ExtOperator<'a> {
    pub parts: &'a CalderonParts,
    pub circulant: &'a CirculantOperator,
}

impl LinearOperator for ExtOperator<'_> {
    fn size(&self) -> usize {
        self.parts.size()
    }

    fn apply(&self, x: &DMatrix<C>) -> Result<DMatrix<C>> {
        Ok(self.parts.apply(x)? - self.circulant.apply(x)?)
    }

    fn apply_adjoint(&self, x: &DMatrix<C>) -> Result<DMatrix<C>> {
        Ok(self.parts.apply_adjoint(x)? - self.circulant.apply_adjoint(x)?)
    }
}

impl LinearOperator for CalderonParts {
    fn size(&self) -> usize {
        CalderonParts::size(self)
    }

    fn apply(&self, x: &DMatrix<C>) -> Result<DMatrix<C>> {
        CalderonParts::apply(self, x)
    }

    fn apply_adjoint(&self, x: &DMatrix<C>) -> Result<DMatrix<C>> {
        CalderonParts::apply_adjoint(self, x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "lowercase")]
pub enum Method {
    Fds { tolerance: f64, seed: u64 },
    Dense,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Fds { .. } => "fds",
            Method::Dense => "dense",
        }
    }
}

/// Circulant counterpart, skeleton of the remainder and the Woodbury inverse.
pub struct FdsSolver<'a> {
    pub parts: &'a CalderonParts,
    pub skeleton: Skeleton,
    pub inverse: WoodburyInverse,
    /// Seconds spent on the circulant counterpart.
    pub circulant_time: f64,
    /// Seconds spent on the skeleton.
    pub compression_time: f64,
    /// Seconds spent forming Z = C⁻¹U and the core.
    pub factorization_time: f64,
}

/// Remainders below this fraction of ‖C_p,c‖₂ are quadrature noise.
pub const NOISE_FLOOR: f64 = 1e-11;

impl<'a> FdsSolver<'a> {
    pub fn build(
        parts: &'a CalderonParts,
        perimeter: f64,
        options: &SkeletonOptions,
    ) -> Result<Self> {
        let n = parts.size();
        let t0 = Instant::now();
        let circulant =
            circulant_counterpart_with(n, parts.k0, parts.k_damped, perimeter, parts.polarization)?;
        let circulant_time = t0.elapsed().as_secs_f64();
        let t1 = Instant::now();
        let scale = circulant
            .eigenvalues()
            .iter()
            .map(|l| l.norm())
            .fold(0.0, f64::max);
        let options = SkeletonOptions {
            floor: options.floor.max(NOISE_FLOOR * scale),
            ..*options
        };
        let skeleton = adaptive_skeleton(
            &ExtOperator {
                parts,
                circulant: &circulant,
            },
            &options,
        )?;
        let compression_time = t1.elapsed().as_secs_f64();
        let t2 = Instant::now();
        let inverse = WoodburyInverse::from_skeleton(circulant, &skeleton)?;
        let factorization_time = t2.elapsed().as_secs_f64();
        Ok(FdsSolver {
            parts,
            skeleton,
            inverse,
            circulant_time,
            compression_time,
            factorization_time,
        })
    }

    pub fn solve(&self, b: &DMatrix<C>) -> Result<DMatrix<C>> {
        self.inverse.solve(b)
    }

    pub fn rank(&self) -> usize {
        self.skeleton.rank
    }
}

/// max over columns of ‖A x − b‖ / ‖b‖.
pub fn relative_residual(op: &dyn LinearOperator, x: &DMatrix<C>, b: &DMatrix<C>) -> Result<f64> {
    let r = op.apply(x)? - b;
    Ok((0..b.ncols())
        .map(|c| r.column(c).norm() / b.column(c).norm().max(f64::MIN_POSITIVE))
        .fold(0.0, f64::max))
}

#[derive(Debug, Clone, Serialize)]
pub struct MetalReport {
    pub n: usize,
    pub k0: f64,
    pub method: String,
    pub rank: usize,
    pub tolerance: Option<f64>,
    pub seed: Option<u64>,
    pub norm_estimate: Option<f64>,
    pub error_estimate: Option<f64>,
    pub core_condition: Option<f64>,
    pub circulant_time_s: f64,
    pub compression_time_s: f64,
    pub factorization_time_s: f64,
    pub solve_time_s: f64,
    pub residual: f64,
    pub n_rhs: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct SkinReport {
    pub n: usize,
    pub factorization_time_s: f64,
    pub solve_time_s: f64,
    pub residual: f64,
    pub n_rhs: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveReport {
    pub threads: usize,
    pub metal: Option<MetalReport>,
    pub skin: Option<SkinReport>,
}

impl SolveReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Unknowns per incident wave (one column each).
#[derive(Debug, Clone)]
pub struct SolveResult {
    /// j = H_t on the metal boundary.
    pub j_m: Option<DMatrix<C>>,
    /// j = −H_t on the skin boundary.
    pub j_s: Option<DMatrix<C>>,
    /// m = −E_z on the skin boundary.
    pub m_s: Option<DMatrix<C>>,
    pub report: SolveReport,
}

fn dense_solve(a: &DMatrix<C>, b: &DMatrix<C>, what: &str) -> Result<(DMatrix<C>, f64, f64)> {
    let t0 = Instant::now();
    let lu = a.clone().lu();
    let factor = t0.elapsed().as_secs_f64();
    let t1 = Instant::now();
    let x = lu
        .solve(b)
        .ok_or_else(|| Error::Solve(format!("{what} matrix is singular")))?;
    Ok((x, factor, t1.elapsed().as_secs_f64()))
}

pub fn solve_scenario(system: &BlockSystem, method: &Method) -> Result<SolveResult> {
    let mut report = SolveReport {
        threads: rayon::current_num_threads(),
        metal: None,
        skin: None,
    };
    let mut j_m = None;
    if let Some(metal) = &system.metal {
        let parts = &metal.parts;
        let b = parts.pec_rhs(&metal.rhs, &system.medium0)?;
        let n = parts.size();
        let (x, r) = match method {
            Method::Fds { tolerance, seed } => {
                let solver = FdsSolver::build(
                    parts,
                    metal.mesh.perimeter(),
                    &SkeletonOptions::new(*tolerance, *seed),
                )?;
                let t = Instant::now();
                let x = solver.solve(&b)?;
                let solve_time_s = t.elapsed().as_secs_f64();
                let r = MetalReport {
                    n,
                    k0: parts.k0,
                    method: method.name().into(),
                    rank: solver.rank(),
                    tolerance: Some(*tolerance),
                    seed: Some(*seed),
                    norm_estimate: Some(solver.skeleton.norm_estimate),
                    error_estimate: Some(solver.skeleton.error_estimate),
                    core_condition: Some(solver.inverse.core_condition),
                    circulant_time_s: solver.circulant_time,
                    compression_time_s: solver.compression_time,
                    factorization_time_s: solver.factorization_time,
                    solve_time_s,
                    residual: 0.0,
                    n_rhs: b.ncols(),
                };
                (x, r)
            }
            Method::Dense => {
                let (x, factor, solve) = dense_solve(&parts.to_dense(), &b, "C_p")?;
                let r = MetalReport {
                    n,
                    k0: parts.k0,
                    method: method.name().into(),
                    rank: 0,
                    tolerance: None,
                    seed: None,
                    norm_estimate: None,
                    error_estimate: None,
                    core_condition: None,
                    circulant_time_s: 0.0,
                    compression_time_s: 0.0,
                    factorization_time_s: factor,
                    solve_time_s: solve,
                    residual: 0.0,
                    n_rhs: b.ncols(),
                };
                (x, r)
            }
        };
        let mut r = r;
        r.residual = relative_residual(parts, &x, &b)?;
        report.metal = Some(r);
        j_m = Some(x);
    }
    let (mut j_s, mut m_s) = (None, None);
    if let Some(skin) = &system.skin {
        let n = skin.blocks.size();
        let a = skin.blocks.to_dense();
        let b = DMatrix::from_fn(2 * n, skin.rhs.len(), |i, c| {
            if i < n {
                skin.rhs[c].e[i]
            } else {
                skin.rhs[c].h[i - n]
            }
        });
        let (x, factor, solve) = dense_solve(&a, &b, "PMCHWT")?;
        let res = relative_residual(&a, &x, &b)?;
        report.skin = Some(SkinReport {
            n,
            factorization_time_s: factor,
            solve_time_s: solve,
            residual: res,
            n_rhs: b.ncols(),
        });
        j_s = Some(x.rows(0, n).into_owned());
        m_s = Some(x.rows(n, n).into_owned());
    }
    Ok(SolveResult {
        j_m,
        j_s,
        m_s,
        report,
    })
}
