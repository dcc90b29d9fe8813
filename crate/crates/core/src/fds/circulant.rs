use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64 as C;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::formulations::{damped_wavenumber, CalderonParts, Polarization};
use crate::geometry::BoundaryMesh;
use crate::operators::{assemble_column, OperatorKind};

/// Eigenvalues below this fraction of the largest make a solve fail.
pub const SINGULAR_RATIO: f64 = 1e-14;

/// Circulant matrix A[i][j] = c[(i − j) mod n], diagonalized by the DFT.
#[derive(Clone)]
pub struct CirculantOperator {
    first_column: Vec<C>,
    eigenvalues: Vec<C>,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for CirculantOperator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CirculantOperator")
            .field("size", &self.size())
            .finish()
    }
}

fn plans(n: usize) -> (Arc<dyn Fft<f64>>, Arc<dyn Fft<f64>>) {
    let mut planner = FftPlanner::new();
    (planner.plan_fft_forward(n), planner.plan_fft_inverse(n))
}

impl CirculantOperator {
    pub fn from_first_column(first_column: Vec<C>) -> Result<Self> {
        let n = first_column.len();
        if n == 0 {
            return Err(Error::DimensionMismatch {
                expected: 1,
                got: 0,
            });
        }
        let (fwd, inv) = plans(n);
        let mut eigenvalues = first_column.clone();
        fwd.process(&mut eigenvalues);
        Ok(CirculantOperator {
            first_column,
            eigenvalues,
            fwd,
            inv,
        })
    }

    pub fn from_eigenvalues(eigenvalues: Vec<C>) -> Result<Self> {
        let n = eigenvalues.len();
        if n == 0 {
            return Err(Error::DimensionMismatch {
                expected: 1,
                got: 0,
            });
        }
        let (fwd, inv) = plans(n);
        let mut first_column = eigenvalues.clone();
        inv.process(&mut first_column);
        first_column.iter_mut().for_each(|v| *v /= n as f64);
        Ok(CirculantOperator {
            first_column,
            eigenvalues,
            fwd,
            inv,
        })
    }

    pub fn size(&self) -> usize {
        self.first_column.len()
    }

    pub fn first_column(&self) -> &[C] {
        &self.first_column
    }

    /// λₘ = Σᵢ cᵢ e^{−2πjim/n}, the eigenvalue on the Fourier vector e^{2πjim/n}.
    pub fn eigenvalues(&self) -> &[C] {
        &self.eigenvalues
    }

    fn check(&self, x: &DMatrix<C>) -> Result<()> {
        if x.nrows() != self.size() {
            return Err(Error::DimensionMismatch {
                expected: self.size(),
                got: x.nrows(),
            });
        }
        Ok(())
    }

    fn diagonal_map(&self, x: &DMatrix<C>, f: impl Fn(C, C) -> C) -> DMatrix<C> {
        let n = self.size() as f64;
        let mut y = x.clone();
        for mut col in y.column_iter_mut() {
            let s = col.as_mut_slice();
            self.fwd.process(s);
            for (v, &l) in s.iter_mut().zip(&self.eigenvalues) {
                *v = f(*v, l) / n;
            }
            self.inv.process(s);
        }
        y
    }

    pub fn apply(&self, x: &DMatrix<C>) -> Result<DMatrix<C>> {
        self.check(x)?;
        Ok(self.diagonal_map(x, |v, l| v * l))
    }

    pub fn apply_adjoint(&self, x: &DMatrix<C>) -> Result<DMatrix<C>> {
        self.check(x)?;
        Ok(self.diagonal_map(x, |v, l| v * l.conj()))
    }

    /// Smallest over largest eigenvalue magnitude.
    pub fn eigenvalue_ratio(&self) -> f64 {
        let (lo, hi) = self
            .eigenvalues
            .iter()
            .fold((f64::INFINITY, 0.0f64), |(a, b), l| {
                (a.min(l.norm()), b.max(l.norm()))
            });
        lo / hi
    }

    fn check_singular(&self) -> Result<()> {
        let max = self
            .eigenvalues
            .iter()
            .map(|l| l.norm())
            .fold(0.0, f64::max);
        let min = self
            .eigenvalues
            .iter()
            .map(|l| l.norm())
            .fold(f64::INFINITY, f64::min);
        let threshold = SINGULAR_RATIO * max;
        if !(min >= threshold) || max == 0.0 {
            return Err(Error::SingularCirculant { min, threshold });
        }
        Ok(())
    }

    /// x = IDFT(DFT(b) / λ).
    pub fn solve(&self, b: &DMatrix<C>) -> Result<DMatrix<C>> {
        self.check(b)?;
        self.check_singular()?;
        Ok(self.diagonal_map(b, |v, l| v / l))
    }

    pub fn solve_adjoint(&self, b: &DMatrix<C>) -> Result<DMatrix<C>> {
        self.check(b)?;
        self.check_singular()?;
        Ok(self.diagonal_map(b, |v, l| v / l.conj()))
    }

    pub fn to_dense(&self) -> DMatrix<C> {
        let n = self.size();
        DMatrix::from_fn(n, n, |i, j| self.first_column[(i + n - j) % n])
    }
}

/// Regular n-gon whose polygonal perimeter equals `perimeter`.
pub fn equi_perimeter_circle(n: usize, perimeter: f64) -> Result<BoundaryMesh> {
    BoundaryMesh::regular_polygon(n, perimeter / (2.0 * n as f64 * (PI / n as f64).sin()))
}

/// C_p on the equi-perimeter circle, from one column of each factor.
pub fn circulant_counterpart(
    n: usize,
    k0: f64,
    perimeter: f64,
    polarization: Polarization,
) -> Result<CirculantOperator> {
    circulant_counterpart_with(
        n,
        k0,
        damped_wavenumber(k0, perimeter / (2.0 * PI)),
        perimeter,
        polarization,
    )
}

/// As [`circulant_counterpart`] with an explicit regularizing wavenumber.
pub fn circulant_counterpart_with(
    n: usize,
    k0: f64,
    k_damped: C,
    perimeter: f64,
    polarization: Polarization,
) -> Result<CirculantOperator> {
    if !(k0 > 0.0) || !k0.is_finite() {
        return Err(Error::Domain(format!("k0 must be positive, got {k0}")));
    }
    let mesh = equi_perimeter_circle(n, perimeter)?;
    let (damped, regular) = CalderonParts::kinds(polarization);
    let dc = assemble_column(
        &mesh,
        k_damped,
        &[damped[0], damped[1], OperatorKind::Gram],
        0,
    )?;
    let rc = assemble_column(&mesh, C::new(k0, 0.0), &regular, 0)?;
    let eig = |v: &nalgebra::DVector<C>| {
        let mut s: Vec<C> = v.iter().cloned().collect();
        plans(n).0.process(&mut s);
        s
    };
    let (outer, dl_damped, gram) = (eig(&dc[0]), eig(&dc[1]), eig(&dc[2]));
    let (inner, dl) = (eig(&rc[0]), eig(&rc[1]));
    let lambda: Vec<C> = (0..n)
        .map(|m| {
            let g = gram[m];
            outer[m] * inner[m] / g + (0.5 * g - dl_damped[m]) * (0.5 * g + dl[m]) / g
        })
        .collect();
    CirculantOperator::from_eigenvalues(lambda)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vector(n: usize, seed: f64) -> DMatrix<C> {
        DMatrix::from_fn(n, 1, |i, _| {
            C::new(
                (i as f64 * 0.37 + seed).sin(),
                (i as f64 * 1.1 - seed).cos(),
            )
        })
    }

    #[test]
    fn identity_circulant_solves_trivially() {
        let mut c = vec![C::new(0.0, 0.0); 16];
        c[0] = C::new(1.0, 0.0);
        let op = CirculantOperator::from_first_column(c).unwrap();
        let b = vector(16, 0.2);
        assert!((op.solve(&b).unwrap() - &b).norm() < 1e-15 * b.norm());
    }

    #[test]
    fn constant_vector_sees_column_sum() {
        let c: Vec<C> = (0..12)
            .map(|i| C::new(i as f64, 1.0 / (i + 1) as f64))
            .collect();
        let sum: C = c.iter().sum();
        let op = CirculantOperator::from_first_column(c).unwrap();
        let ones = DMatrix::from_element(12, 1, C::new(1.0, 0.0));
        let y = op.apply(&ones).unwrap();
        assert!(y.iter().all(|v| (v - sum).norm() < 1e-13));
    }

    #[test]
    fn first_column_and_eigenvalues_round_trip() {
        let c: Vec<C> = (0..64)
            .map(|i| C::new((i as f64).cos(), (2.0 * i as f64).sin()))
            .collect();
        let a = CirculantOperator::from_first_column(c.clone()).unwrap();
        let b = CirculantOperator::from_eigenvalues(a.eigenvalues().to_vec()).unwrap();
        let err: f64 = c
            .iter()
            .zip(b.first_column())
            .map(|(x, y)| (x - y).norm_sqr())
            .sum::<f64>()
            .sqrt();
        assert!(err < 1e-12 * c.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt());
    }

    #[test]
    fn dense_matches_fft_actions() {
        let c: Vec<C> = (0..20)
            .map(|i| C::new(1.0 / (1 + i) as f64, (i as f64).sin()))
            .collect();
        let op = CirculantOperator::from_first_column(c).unwrap();
        let d = op.to_dense();
        let x = vector(20, 0.9);
        assert!((op.apply(&x).unwrap() - &d * &x).norm() < 1e-13 * x.norm());
        assert!((op.apply_adjoint(&x).unwrap() - d.adjoint() * &x).norm() < 1e-13 * x.norm());
        assert!((&d * op.solve(&x).unwrap() - &x).norm() < 1e-12 * x.norm());
        assert!((d.adjoint() * op.solve_adjoint(&x).unwrap() - &x).norm() < 1e-12 * x.norm());
    }

    #[test]
    fn singular_circulant_is_rejected() {
        let op = CirculantOperator::from_first_column(vec![C::new(1.0, 0.0); 8]).unwrap();
        assert!(matches!(
            op.solve(&vector(8, 0.0)),
            Err(Error::SingularCirculant { .. })
        ));
    }
}
