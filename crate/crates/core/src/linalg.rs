//! Dense complex helpers and the cyclic tridiagonal Gram matrix.

use nalgebra::DMatrix;
use num_complex::Complex64 as C;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::BoundaryMesh;

/// Gram matrix of hat functions: (λᵢ, λⱼ) on a closed polygon.
///
/// Cyclic tridiagonal and SPD; solves use the Thomas algorithm with a
/// Sherman-Morrison correction for the two corner entries.
#[derive(Debug, Clone)]
pub struct GramMatrix {
    diag: Vec<f64>,
    /// upper[i] = G[i][i+1 mod n]
    upper: Vec<f64>,
    // factorization of the modified tridiagonal part
    cprime: Vec<f64>,
    denom: Vec<f64>,
    gamma: f64,
    corr: Vec<f64>,
    corr_scale: f64,
}

impl GramMatrix {
    pub fn new(mesh: &BoundaryMesh) -> Self {
        let h = mesh.segment_lengths();
        let n = h.len();
        let diag: Vec<f64> = (0..n).map(|i| (h[(i + n - 1) % n] + h[i]) / 3.0).collect();
        let upper: Vec<f64> = h.iter().map(|v| v / 6.0).collect();
        Self::from_parts(diag, upper)
    }

    fn from_parts(diag: Vec<f64>, upper: Vec<f64>) -> Self {
        let n = diag.len();
        let beta = upper[n - 1];
        let gamma = -diag[0];
        let mut b = diag.clone();
        b[0] -= gamma;
        b[n - 1] -= beta * beta / gamma;
        // Thomas factors for sub = super = upper[i] (i = 0..n-2)
        let mut cprime = vec![0.0; n];
        let mut denom = vec![0.0; n];
        denom[0] = b[0];
        cprime[0] = upper[0] / denom[0];
        for i in 1..n {
            denom[i] = b[i] - upper[i - 1] * cprime[i - 1];
            cprime[i] = if i < n - 1 { upper[i] / denom[i] } else { 0.0 };
        }
        let mut g = GramMatrix {
            diag,
            upper,
            cprime,
            denom,
            gamma,
            corr: vec![0.0; n],
            corr_scale: 0.0,
        };
        let mut u = vec![0.0; n];
        u[0] = gamma;
        u[n - 1] = beta;
        g.thomas_real(&mut u);
        g.corr_scale = 1.0 + u[0] + beta / gamma * u[n - 1];
        g.corr = u;
        g
    }

    fn thomas_real(&self, x: &mut [f64]) {
        let n = x.len();
        x[0] /= self.denom[0];
        for i in 1..n {
            x[i] = (x[i] - self.upper[i - 1] * x[i - 1]) / self.denom[i];
        }
        for i in (0..n - 1).rev() {
            x[i] -= self.cprime[i] * x[i + 1];
        }
    }

    fn thomas(&self, x: &mut [C]) {
        let n = x.len();
        x[0] /= self.denom[0];
        for i in 1..n {
            x[i] = (x[i] - self.upper[i - 1] * x[i - 1]) / self.denom[i];
        }
        for i in (0..n - 1).rev() {
            let next = x[i + 1];
            x[i] -= self.cprime[i] * next;
        }
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diag
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn apply_slice(&self, x: &[C], y: &mut [C]) {
        let n = self.len();
        for i in 0..n {
            let l = self.upper[(i + n - 1) % n];
            y[i] = self.diag[i] * x[i] + self.upper[i] * x[(i + 1) % n] + l * x[(i + n - 1) % n];
        }
    }

    /// In-place solve G x = b.
    pub fn solve_slice(&self, x: &mut [C]) {
        let n = self.len();
        self.thomas(x);
        let beta = self.upper[n - 1];
        let f = (x[0] + beta / self.gamma * x[n - 1]) / self.corr_scale;
        for (xi, zi) in x.iter_mut().zip(&self.corr) {
            *xi -= f * zi;
        }
    }

    pub fn apply(&self, x: &DMatrix<C>) -> DMatrix<C> {
        let mut y = DMatrix::zeros(x.nrows(), x.ncols());
        for c in 0..x.ncols() {
            self.apply_slice(x.column(c).as_slice(), y.column_mut(c).as_mut_slice());
        }
        y
    }

    pub fn solve(&self, b: &DMatrix<C>) -> DMatrix<C> {
        let mut x = b.clone();
        for c in 0..x.ncols() {
            self.solve_slice(x.column_mut(c).as_mut_slice());
        }
        x
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let n = self.len();
        let mut g = DMatrix::zeros(n, n);
        for i in 0..n {
            g[(i, i)] = self.diag[i];
            let j = (i + 1) % n;
            g[(i, j)] += self.upper[i];
            g[(j, i)] += self.upper[i];
        }
        g
    }

    pub fn to_dense_complex(&self) -> DMatrix<C> {
        self.to_dense().map(|v| C::new(v, 0.0))
    }
}

const ROW_CHUNK: usize = 256;

#[derive(Clone, Copy)]
struct OutPtr(*mut C);
// each task writes a disjoint row range
unsafe impl Send for OutPtr {}
unsafe impl Sync for OutPtr {}

/// y ← op(A) x with op(A) of shape rows × k, strides in elements.
/// Rows of y are split into chunks across the rayon pool.
fn gemm_rows(
    rows: usize,
    k: usize,
    a: &[C],
    (rsa, csa): (usize, usize),
    x: &DMatrix<C>,
) -> DMatrix<C> {
    let b = x.ncols();
    let mut y = DMatrix::zeros(rows, b);
    if rows == 0 || b == 0 || k == 0 {
        return y;
    }
    let out = OutPtr(y.as_mut_ptr());
    let starts: Vec<usize> = (0..rows).step_by(ROW_CHUNK).collect();
    starts.par_iter().for_each(|&r0| {
        let r1 = (r0 + ROW_CHUNK).min(rows);
        let out = out;
        // SAFETY: Complex64 is repr(C) {re, im}; a chunk reads rows r0..r1 of
        // op(A) inside `a` and writes rows r0..r1 of y, disjoint across tasks.
        unsafe {
            matrixmultiply::zgemm(
                matrixmultiply::CGemmOption::Standard,
                matrixmultiply::CGemmOption::Standard,
                r1 - r0,
                k,
                b,
                [1.0, 0.0],
                a.as_ptr().add(r0 * rsa) as *const [f64; 2],
                rsa as isize,
                csa as isize,
                x.as_ptr() as *const [f64; 2],
                1,
                k as isize,
                [0.0, 0.0],
                out.0.add(r0) as *mut [f64; 2],
                1,
                rows as isize,
            );
        }
    });
    y
}

/// A X for dense A and a block X.
pub fn mul(a: &DMatrix<C>, x: &DMatrix<C>) -> DMatrix<C> {
    let (n, m) = a.shape();
    assert_eq!(m, x.nrows());
    gemm_rows(n, m, a.as_slice(), (1, n), x)
}

/// Aᵀ X, or Aᴴ X when `conjugate` is set.
pub fn mul_transpose(a: &DMatrix<C>, x: &DMatrix<C>, conjugate: bool) -> DMatrix<C> {
    let (n, m) = a.shape();
    assert_eq!(n, x.nrows());
    if conjugate {
        let mut y = gemm_rows(m, n, a.as_slice(), (n, 1), &x.conjugate());
        y.conjugate_mut();
        y
    } else {
        gemm_rows(m, n, a.as_slice(), (n, 1), x)
    }
}

/// 2-norm condition number from the singular values.
pub fn condition_number(a: &DMatrix<C>) -> f64 {
    let sv = a.clone().singular_values();
    let max = sv.iter().cloned().fold(0.0, f64::max);
    let min = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    max / min
}

/// L⁻¹ A L⁻ᵀ with G = L Lᵀ, the Gram-normalized form of a Galerkin matrix.
pub fn gram_normalize(gram: &GramMatrix, a: &DMatrix<C>) -> Result<DMatrix<C>> {
    let chol = gram
        .to_dense()
        .cholesky()
        .ok_or_else(|| Error::Solve("Gram matrix is not positive definite".into()))?;
    let l = chol.l().map(|v| C::new(v, 0.0));
    let left = l
        .solve_lower_triangular(a)
        .ok_or_else(|| Error::Solve("triangular solve failed".into()))?;
    let t = l
        .solve_lower_triangular(&left.transpose())
        .ok_or_else(|| Error::Solve("triangular solve failed".into()))?;
    Ok(t.transpose())
}

/// Relative Frobenius distance ‖a − b‖ / ‖b‖.
pub fn rel_diff(a: &DMatrix<C>, b: &DMatrix<C>) -> f64 {
    (a - b).norm() / b.norm()
}
