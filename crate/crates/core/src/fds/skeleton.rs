use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64 as C;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg;

/// Black-box square operator with its adjoint, applied to blocks of columns.
pub trait LinearOperator: Sync {
    fn size(&self) -> usize;
    fn apply(&self, x: &DMatrix<C>) -> Result<DMatrix<C>>;
    fn apply_adjoint(&self, x: &DMatrix<C>) -> Result<DMatrix<C>>;
}

impl LinearOperator for DMatrix<C> {
    fn size(&self) -> usize {
        self.nrows()
    }

    fn apply(&self, x: &DMatrix<C>) -> Result<DMatrix<C>> {
        if x.nrows() != self.ncols() {
            return Err(Error::DimensionMismatch {
                expected: self.ncols(),
                got: x.nrows(),
            });
        }
        Ok(linalg::mul(self, x))
    }

    fn apply_adjoint(&self, x: &DMatrix<C>) -> Result<DMatrix<C>> {
        if x.nrows() != self.nrows() {
            return Err(Error::DimensionMismatch {
                expected: self.nrows(),
                got: x.nrows(),
            });
        }
        Ok(linalg::mul_transpose(self, x, true))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SkeletonOptions {
    pub tolerance: f64,
    pub seed: u64,
    pub block: usize,
    pub samples: usize,
    pub power_iterations: usize,
    /// Absolute threshold below which the remainder counts as zero.
    pub floor: f64,
}

impl SkeletonOptions {
    pub fn new(tolerance: f64, seed: u64) -> Self {
        SkeletonOptions {
            tolerance,
            seed,
            block: 16,
            samples: 10,
            power_iterations: 20,
            floor: 0.0,
        }
    }
}

/// A ≈ U Vᵀ with orthonormal U.
#[derive(Debug, Clone)]
pub struct Skeleton {
    pub u: DMatrix<C>,
    pub v: DMatrix<C>,
    pub rank: usize,
    pub tolerance: f64,
    pub seed: u64,
    /// Power-iteration estimate of ‖A‖₂.
    pub norm_estimate: f64,
    /// Power-iteration estimate of ‖A − UVᵀ‖₂.
    pub error_estimate: f64,
    /// Operator applications (columns) spent, forward and adjoint.
    pub applications: usize,
}

impl Skeleton {
    pub fn empty(n: usize, tolerance: f64, seed: u64) -> Self {
        Skeleton {
            u: DMatrix::zeros(n, 0),
            v: DMatrix::zeros(n, 0),
            rank: 0,
            tolerance,
            seed,
            norm_estimate: 0.0,
            error_estimate: 0.0,
            applications: 0,
        }
    }

    pub fn size(&self) -> usize {
        self.u.nrows()
    }

    /// U Vᵀ x.
    pub fn apply(&self, x: &DMatrix<C>) -> DMatrix<C> {
        &self.u * (self.v.transpose() * x)
    }

    pub fn to_dense(&self) -> DMatrix<C> {
        &self.u * self.v.transpose()
    }
}

fn gaussian(rng: &mut ChaCha8Rng, n: usize, m: usize) -> DMatrix<C> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    DMatrix::from_fn(n, m, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        C::new(re * s, im * s)
    })
}

struct Counted<'a> {
    op: &'a dyn LinearOperator,
    columns: usize,
}

impl Counted<'_> {
    fn apply(&mut self, x: &DMatrix<C>) -> Result<DMatrix<C>> {
        self.columns += x.ncols();
        self.op.apply(x)
    }

    fn apply_adjoint(&mut self, x: &DMatrix<C>) -> Result<DMatrix<C>> {
        self.columns += x.ncols();
        self.op.apply_adjoint(x)
    }

    fn act(&mut self, x: &DMatrix<C>, adjoint: bool) -> Result<DMatrix<C>> {
        if adjoint {
            self.apply_adjoint(x)
        } else {
            self.apply(x)
        }
    }
}

/// √(λ_max(MᴴM)) by power iteration, M given through its two actions.
fn power_norm(
    iterations: usize,
    rng: &mut ChaCha8Rng,
    n: usize,
    mut act: impl FnMut(&DMatrix<C>, bool) -> Result<DMatrix<C>>,
) -> Result<f64> {
    let mut x = gaussian(rng, n, 1);
    x /= C::new(x.norm(), 0.0);
    let mut sigma = 0.0;
    for _ in 0..iterations {
        let y = act(&x, false)?;
        sigma = y.norm();
        if sigma == 0.0 {
            return Ok(0.0);
        }
        let z = act(&y, true)?;
        let nz = z.norm();
        if nz == 0.0 {
            return Ok(sigma);
        }
        x = z / C::new(nz, 0.0);
    }
    Ok(sigma)
}

fn project_out(q: &DMatrix<C>, y: &mut DMatrix<C>) {
    if q.ncols() == 0 {
        return;
    }
    for _ in 0..2 {
        let c = linalg::mul_transpose(q, y, true);
        *y -= linalg::mul(q, &c);
    }
}

/// Blocked adaptive randomized range finder followed by SVD truncation.
///
/// Stops when 10·√(2/π)·max‖(I − QQᴴ)Aωᵢ‖ over `samples` fresh Gaussian
/// columns drops below tol·‖A‖₂; the a posteriori error is then checked by
/// power iteration on A − UVᵀ and the search resumes if it is too large.
/// A nonzero `floor` replaces tol·‖A‖₂ when larger.
pub fn adaptive_skeleton(op: &dyn LinearOperator, options: &SkeletonOptions) -> Result<Skeleton> {
    let n = op.size();
    let tol = options.tolerance;
    if !(tol > 0.0 && tol < 1.0) {
        return Err(Error::Config(format!(
            "skeleton tolerance must lie in (0, 1), got {tol}"
        )));
    }
    let mut counted = Counted { op, columns: 0 };
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let norm = power_norm(options.power_iterations, &mut rng, n, |x, adj| {
        counted.act(x, adj)
    })?;
    let mut skel = Skeleton::empty(n, tol, options.seed);
    skel.norm_estimate = norm;
    if norm <= options.floor {
        skel.applications = counted.columns;
        return Ok(skel);
    }
    let threshold = (tol * norm).max(options.floor);
    let samples = options.samples.min(options.block).max(1);
    let bound = 10.0 * (2.0 / PI).sqrt();
    let mut q = DMatrix::<C>::zeros(n, 0);
    let mut force = false;
    loop {
        loop {
            let omega = gaussian(&mut rng, n, options.block);
            let mut y = counted.apply(&omega)?;
            project_out(&q, &mut y);
            let est = (0..samples).map(|c| y.column(c).norm()).fold(0.0, f64::max) * bound;
            if (est <= threshold && !force) || q.ncols() >= n {
                break;
            }
            force = false;
            let fresh = y.qr().q();
            let mut fresh = fresh
                .columns(0, fresh.ncols().min(n - q.ncols()))
                .into_owned();
            project_out(&q, &mut fresh);
            let fresh = fresh.qr().q();
            q = DMatrix::from_fn(n, q.ncols() + fresh.ncols(), |i, j| {
                if j < q.ncols() {
                    q[(i, j)]
                } else {
                    fresh[(i, j - q.ncols())]
                }
            });
            if q.ncols() > n / 2 + options.block {
                break;
            }
        }
        // B = QᴴA = (AᴴQ)ᴴ, truncated SVD B ≈ Ũ Σ Wᴴ
        let (u, v) = if q.ncols() == 0 {
            (DMatrix::zeros(n, 0), DMatrix::zeros(n, 0))
        } else {
            let bh = counted.apply_adjoint(&q)?;
            let svd = bh.adjoint().svd(true, true);
            let (su, st) = (svd.u.unwrap(), svd.v_t.unwrap());
            let keep: Vec<usize> = (0..svd.singular_values.len())
                .filter(|&i| svd.singular_values[i] > 0.5 * threshold)
                .collect();
            let u = &q * su.select_columns(&keep);
            let v = DMatrix::from_fn(n, keep.len(), |i, j| {
                st[(keep[j], i)] * svd.singular_values[keep[j]]
            });
            (u, v)
        };
        let rank = u.ncols();
        if rank > n / 2 {
            return Err(Error::CompressionIneffective { rank, half: n / 2 });
        }
        let error = power_norm(options.power_iterations, &mut rng, n, |x, adj| {
            let ax = counted.act(x, adj)?;
            Ok(if adj {
                ax - v.conjugate() * (u.adjoint() * x)
            } else {
                ax - &u * (v.transpose() * x)
            })
        })?;
        skel.u = u;
        skel.v = v;
        skel.rank = rank;
        skel.error_estimate = error;
        if error <= threshold || q.ncols() >= n {
            break;
        }
        if q.ncols() > n / 2 {
            return Err(Error::CompressionIneffective {
                rank: q.ncols(),
                half: n / 2,
            });
        }
        force = true;
    }
    skel.applications = counted.columns;
    Ok(skel)
}
