use nalgebra::Dyn;
use nalgebra::{DMatrix, LU};
use num_complex::Complex64 as C;

use super::circulant::CirculantOperator;
use super::skeleton::Skeleton;
use crate::error::{Error, Result};
use crate::linalg;

/// Largest accepted condition number of the core I + Vᵀ C⁻¹ U.
pub const MAX_CORE_CONDITION: f64 = 1e12;

/// (C + U Vᵀ)⁻¹ by the Woodbury identity with precomputed Z = C⁻¹U.
#[derive(Debug, Clone)]
pub struct WoodburyInverse {
    pub circulant: CirculantOperator,
    pub u: DMatrix<C>,
    pub v: DMatrix<C>,
    z: DMatrix<C>,
    core: LU<C, Dyn, Dyn>,
    pub core_condition: f64,
}

impl WoodburyInverse {
    pub fn new(circulant: CirculantOperator, u: DMatrix<C>, v: DMatrix<C>) -> Result<Self> {
        let n = circulant.size();
        if u.nrows() != n || v.nrows() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: u.nrows().max(v.nrows()),
            });
        }
        if u.ncols() != v.ncols() {
            return Err(Error::DimensionMismatch {
                expected: u.ncols(),
                got: v.ncols(),
            });
        }
        let r = u.ncols();
        let z = circulant.solve(&u)?;
        let core = DMatrix::identity(r, r) + v.transpose() * &z;
        let core_condition = if r == 0 {
            1.0
        } else {
            linalg::condition_number(&core)
        };
        if !(core_condition <= MAX_CORE_CONDITION) {
            return Err(Error::SingularCore(core_condition));
        }
        Ok(WoodburyInverse {
            circulant,
            u,
            v,
            z,
            core: core.lu(),
            core_condition,
        })
    }

    pub fn from_skeleton(circulant: CirculantOperator, skeleton: &Skeleton) -> Result<Self> {
        Self::new(circulant, skeleton.u.clone(), skeleton.v.clone())
    }

    pub fn size(&self) -> usize {
        self.circulant.size()
    }

    pub fn rank(&self) -> usize {
        self.u.ncols()
    }

    /// x = y − Z (I + VᵀZ)⁻¹ Vᵀ y with y = C⁻¹ b.
    pub fn solve(&self, b: &DMatrix<C>) -> Result<DMatrix<C>> {
        let y = self.circulant.solve(b)?;
        if self.rank() == 0 {
            return Ok(y);
        }
        let t = self.v.transpose() * &y;
        let w = self
            .core
            .solve(&t)
            .ok_or(Error::SingularCore(self.core_condition))?;
        Ok(y - &self.z * w)
    }

    /// (C + UVᵀ) x, for residual checks.
    pub fn apply_forward(&self, x: &DMatrix<C>) -> Result<DMatrix<C>> {
        Ok(self.circulant.apply(x)? + &self.u * (self.v.transpose() * x))
    }
}
