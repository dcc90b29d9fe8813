//! Discrete systems: the PEC CFIE and its Calderón-preconditioned form on
//! the metal boundary, and the PMCHWT transmission system on the skin.
//!
//! TM unknowns: on a PEC boundary j = H_t (total), on a penetrable boundary
//! j = -H_t and m = -E_z, with t̂ = ẑ × n̂ and n̂ the outward normal.

use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{average_curvature_radius, BoundaryMesh, Point};
use crate::linalg::{self, GramMatrix};
use crate::media::Medium;
use crate::operators::{assemble_many, OperatorKind, OperatorMatrix};
use crate::quadrature::gauss_legendre;

const J: C = C::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Polarization {
    #[serde(rename = "TM")]
    Tm,
    #[serde(rename = "TE")]
    Te,
}

impl FromStr for Polarization {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "TM" => Ok(Polarization::Tm),
            "TE" => Ok(Polarization::Te),
            _ => Err(Error::Config(format!(
                "unknown polarization '{s}' (TM or TE)"
            ))),
        }
    }
}

impl std::fmt::Display for Polarization {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Polarization::Tm => "TM",
            Polarization::Te => "TE",
        })
    }
}

/// Plane wave E_z = A exp(-j k0 d̂·r) propagating along angle `angle`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlaneWave {
    /// V/m.
    pub amplitude: f64,
    /// Radians, direction of propagation.
    pub angle: f64,
    pub polarization: Polarization,
    /// Hz.
    pub frequency: f64,
}

impl PlaneWave {
    pub fn tm(amplitude: f64, angle: f64, frequency: f64) -> Self {
        PlaneWave {
            amplitude,
            angle,
            polarization: Polarization::Tm,
            frequency,
        }
    }

    pub fn direction(&self) -> Point {
        [self.angle.cos(), self.angle.sin()]
    }

    pub fn e_z(&self, medium0: &Medium, r: Point) -> C {
        let d = self.direction();
        self.amplitude * (-J * medium0.k * (d[0] * r[0] + d[1] * r[1])).exp()
    }

    /// Tangential magnetic field H·t̂ with t̂ = ẑ × n̂.
    pub fn h_t(&self, medium0: &Medium, r: Point, n: Point) -> C {
        let d = self.direction();
        -(d[0] * n[0] + d[1] * n[1]) * self.e_z(medium0, r) / medium0.eta
    }
}

/// (λᵢ, f) for every hat on the mesh, f evaluated at points with the
/// segment's outward normal, Gauss rule of the given order per segment.
pub fn hat_projection<F: Fn(Point, Point) -> C>(
    mesh: &BoundaryMesh,
    order: usize,
    f: F,
) -> DVector<C> {
    let n = mesh.len();
    let rule = gauss_legendre(order);
    let mut out = DVector::zeros(n);
    for e in 0..n {
        let h = mesh.segment_length(e);
        let nor = mesh.normal(e);
        for (x, w) in rule.iter() {
            let v = f(mesh.point_on_segment(e, x), nor) * (w * h);
            out[e] += v * (1.0 - x);
            out[(e + 1) % n] += v * x;
        }
    }
    out
}

/// Tested incident traces: e = (λᵢ, E_z^inc), h = (λᵢ, H_t^inc).
#[derive(Debug, Clone, PartialEq)]
pub struct Rhs {
    pub e: DVector<C>,
    pub h: DVector<C>,
}

impl Rhs {
    /// PEC CFIE right side e/(jk₀η₀) + h.
    pub fn pec_combined(&self, medium0: &Medium) -> DVector<C> {
        &self.e / (J * medium0.k * medium0.eta) + &self.h
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    Pec,
    Dielectric,
}

pub const RHS_ORDER: usize = 8;

pub fn assemble_rhs(
    mesh: &BoundaryMesh,
    wave: &PlaneWave,
    medium0: &Medium,
    target: Target,
) -> Result<Rhs> {
    if wave.polarization != Polarization::Tm {
        return Err(Error::Polarization(format!(
            "{target:?} right-hand sides are implemented for TM incidence only; TE is available for rank studies"
        )));
    }
    let e = hat_projection(mesh, RHS_ORDER, |r, _| wave.e_z(medium0, r));
    let h = hat_projection(mesh, RHS_ORDER, |r, n| wave.h_t(medium0, r, n));
    Ok(Rhs { e, h })
}

/// Complexified wavenumber k₀ − j·0.4·k₀^{1/3}·a^{−2/3} of the regularizing operator.
pub fn damped_wavenumber(k0: f64, radius: f64) -> C {
    C::new(k0, -0.4 * k0.cbrt() * radius.powf(-2.0 / 3.0))
}

/// C = S + ½G + D* at k₀.
pub fn assemble_cfie(mesh: &BoundaryMesh, k0: f64) -> Result<DMatrix<C>> {
    use OperatorKind::*;
    let mut ms = assemble_many(
        mesh,
        C::new(k0, 0.0),
        &[SingleLayer, AdjointDoubleLayer, Gram],
    )?;
    let g = ms.pop().unwrap().entries;
    let dt = ms.pop().unwrap().entries;
    let s = ms.pop().unwrap().entries;
    Ok(s + g * C::new(0.5, 0.0) + dt)
}

/// Factors of the Calderón-preconditioned CFIE
///
/// C_p = A_k̃ G⁻¹ B_k + (½G − E_k̃) G⁻¹ (½G + E_k)
///
/// with (A, B, E) = (N, S, D*) for TM and (S, N, D) for TE. Applied
/// matrix-free; never formed unless `to_dense` is called.
#[derive(Debug, Clone)]
pub struct CalderonParts {
    pub polarization: Polarization,
    pub k0: f64,
    pub k_damped: C,
    pub gram: GramMatrix,
    pub outer_damped: DMatrix<C>,
    pub inner: DMatrix<C>,
    pub dl_damped: DMatrix<C>,
    pub dl: DMatrix<C>,
}

impl CalderonParts {
    pub fn kinds(polarization: Polarization) -> ([OperatorKind; 2], [OperatorKind; 2]) {
        use OperatorKind::*;
        match polarization {
            Polarization::Tm => (
                [Hypersingular, AdjointDoubleLayer],
                [SingleLayer, AdjointDoubleLayer],
            ),
            Polarization::Te => ([SingleLayer, DoubleLayer], [Hypersingular, DoubleLayer]),
        }
    }

    pub fn assemble(mesh: &BoundaryMesh, k0: f64, polarization: Polarization) -> Result<Self> {
        Self::assemble_with(
            mesh,
            k0,
            damped_wavenumber(k0, average_curvature_radius(mesh)),
            polarization,
        )
    }

    pub fn assemble_with(
        mesh: &BoundaryMesh,
        k0: f64,
        k_damped: C,
        polarization: Polarization,
    ) -> Result<Self> {
        if !(k0 > 0.0) || !k0.is_finite() {
            return Err(Error::Domain(format!("k0 must be positive, got {k0}")));
        }
        let (damped, regular) = Self::kinds(polarization);
        let mut d = assemble_many(mesh, k_damped, &damped)?;
        let dl_damped = d.pop().unwrap().entries;
        let outer_damped = d.pop().unwrap().entries;
        let mut r = assemble_many(mesh, C::new(k0, 0.0), &regular)?;
        let dl = r.pop().unwrap().entries;
        let inner = r.pop().unwrap().entries;
        Ok(CalderonParts {
            polarization,
            k0,
            k_damped,
            gram: GramMatrix::new(mesh),
            outer_damped,
            inner,
            dl_damped,
            dl,
        })
    }

    /// TM and TE parts from one pass over the mesh at each wavenumber.
    pub fn assemble_both(mesh: &BoundaryMesh, k0: f64) -> Result<[Self; 2]> {
        use OperatorKind::*;
        if !(k0 > 0.0) || !k0.is_finite() {
            return Err(Error::Domain(format!("k0 must be positive, got {k0}")));
        }
        let k_damped = damped_wavenumber(k0, average_curvature_radius(mesh));
        let all = [SingleLayer, DoubleLayer, AdjointDoubleLayer, Hypersingular];
        let take = |mats: Vec<OperatorMatrix>| -> [DMatrix<C>; 4] {
            let mut it = mats.into_iter().map(|m| m.entries);
            std::array::from_fn(|_| it.next().expect("four operators"))
        };
        let [s_d, d_d, ds_d, n_d] = take(assemble_many(mesh, k_damped, &all)?);
        let [s, d, ds, n] = take(assemble_many(mesh, C::new(k0, 0.0), &all)?);
        let gram = GramMatrix::new(mesh);
        Ok([
            CalderonParts {
                polarization: Polarization::Tm,
                k0,
                k_damped,
                gram: gram.clone(),
                outer_damped: n_d,
                inner: s,
                dl_damped: ds_d,
                dl: ds,
            },
            CalderonParts {
                polarization: Polarization::Te,
                k0,
                k_damped,
                gram,
                outer_damped: s_d,
                inner: n,
                dl_damped: d_d,
                dl: d,
            },
        ])
    }

    pub fn size(&self) -> usize {
        self.gram.len()
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

    pub fn apply(&self, x: &DMatrix<C>) -> Result<DMatrix<C>> {
        self.check(x)?;
        let half = C::new(0.5, 0.0);
        let first = self.gram.solve(&linalg::mul(&self.inner, x));
        let mut out = linalg::mul(&self.outer_damped, &first);
        let second = self
            .gram
            .solve(&(self.gram.apply(x) * half + linalg::mul(&self.dl, x)));
        out += self.gram.apply(&second) * half - linalg::mul(&self.dl_damped, &second);
        Ok(out)
    }

    fn apply_t(&self, x: &DMatrix<C>, conjugate: bool) -> Result<DMatrix<C>> {
        self.check(x)?;
        let half = C::new(0.5, 0.0);
        let first = self
            .gram
            .solve(&linalg::mul_transpose(&self.outer_damped, x, conjugate));
        let mut out = linalg::mul_transpose(&self.inner, &first, conjugate);
        let second = self.gram.solve(
            &(self.gram.apply(x) * half - linalg::mul_transpose(&self.dl_damped, x, conjugate)),
        );
        out +=
            self.gram.apply(&second) * half + linalg::mul_transpose(&self.dl, &second, conjugate);
        Ok(out)
    }

    pub fn apply_transpose(&self, x: &DMatrix<C>) -> Result<DMatrix<C>> {
        self.apply_t(x, false)
    }

    pub fn apply_adjoint(&self, x: &DMatrix<C>) -> Result<DMatrix<C>> {
        self.apply_t(x, true)
    }

    pub fn to_dense(&self) -> DMatrix<C> {
        self.apply(&DMatrix::identity(self.size(), self.size()))
            .expect("square")
    }

    /// A_k̃ G⁻¹ e + (½G − E_k̃) G⁻¹ h, the right side matching C_p x = b.
    pub fn precondition_rhs(&self, e: &DMatrix<C>, h: &DMatrix<C>) -> Result<DMatrix<C>> {
        self.check(e)?;
        self.check(h)?;
        let ge = self.gram.solve(e);
        let gh = self.gram.solve(h);
        Ok(
            linalg::mul(&self.outer_damped, &ge) + self.gram.apply(&gh) * C::new(0.5, 0.0)
                - linalg::mul(&self.dl_damped, &gh),
        )
    }

    /// Preconditioned right sides for PEC TM incidence, one column per wave.
    pub fn pec_rhs(&self, rhs: &[Rhs], medium0: &Medium) -> Result<DMatrix<C>> {
        if self.polarization != Polarization::Tm {
            return Err(Error::Polarization(
                "PEC excitation requires the TM formulation".into(),
            ));
        }
        let n = self.size();
        let scale = J * medium0.k * medium0.eta;
        let e = DMatrix::from_fn(n, rhs.len(), |i, c| rhs[c].e[i] / scale);
        let h = DMatrix::from_fn(n, rhs.len(), |i, c| rhs[c].h[i]);
        self.precondition_rhs(&e, &h)
    }
}

pub fn assemble_cfie_preconditioned(mesh: &BoundaryMesh, k0: f64) -> Result<DMatrix<C>> {
    Ok(CalderonParts::assemble(mesh, k0, Polarization::Tm)?.to_dense())
}

/// PMCHWT blocks acting on (j, m).
#[derive(Debug, Clone)]
pub struct PmchwtBlocks {
    pub p11: DMatrix<C>,
    pub p12: DMatrix<C>,
    pub p21: DMatrix<C>,
    pub p22: DMatrix<C>,
    pub medium0: Medium,
    pub medium1: Medium,
}

pub fn assemble_pmchwt(
    mesh: &BoundaryMesh,
    medium0: &Medium,
    medium1: &Medium,
) -> Result<PmchwtBlocks> {
    use OperatorKind::*;
    let kinds = [SingleLayer, DoubleLayer, AdjointDoubleLayer, Hypersingular];
    let ext = assemble_many(mesh, medium0.k, &kinds)?;
    let int = assemble_many(mesh, medium1.k, &kinds)?;
    let (a0, a1) = (J * medium0.k * medium0.eta, J * medium1.k * medium1.eta);
    Ok(PmchwtBlocks {
        p11: -(&ext[0].entries * a0 + &int[0].entries * a1),
        p12: &ext[1].entries + &int[1].entries,
        p21: -(&ext[2].entries + &int[2].entries),
        p22: -(&ext[3].entries / a0 + &int[3].entries / a1),
        medium0: *medium0,
        medium1: *medium1,
    })
}

impl PmchwtBlocks {
    pub fn size(&self) -> usize {
        self.p11.nrows()
    }

    pub fn to_dense(&self) -> DMatrix<C> {
        let n = self.size();
        let mut m = DMatrix::zeros(2 * n, 2 * n);
        m.view_mut((0, 0), (n, n)).copy_from(&self.p11);
        m.view_mut((0, n), (n, n)).copy_from(&self.p12);
        m.view_mut((n, 0), (n, n)).copy_from(&self.p21);
        m.view_mut((n, n), (n, n)).copy_from(&self.p22);
        m
    }
}

/// Power entering the boundary, ½ Re ∮ E_z H_t* ds, from PMCHWT unknowns.
pub fn absorbed_power(gram: &GramMatrix, j: &DVector<C>, m: &DVector<C>) -> f64 {
    let jc = DMatrix::from_column_slice(j.len(), 1, j.as_slice()).map(|v| v.conj());
    let gj = gram.apply(&jc);
    0.5 * m.iter().zip(gj.iter()).map(|(a, b)| a * b).sum::<C>().re
}

/// PEC boundary Γ_m with its Calderón-preconditioned CFIE.
#[derive(Debug, Clone)]
pub struct MetalBlock {
    pub mesh: BoundaryMesh,
    pub parts: CalderonParts,
    pub rhs: Vec<Rhs>,
}

/// Penetrable boundary Γ_s with its PMCHWT blocks.
#[derive(Debug, Clone)]
pub struct SkinBlock {
    pub mesh: BoundaryMesh,
    pub blocks: PmchwtBlocks,
    pub rhs: Vec<Rhs>,
}

/// Block-diagonal system: metal and skin coupling blocks are never formed.
#[derive(Debug, Clone)]
pub struct BlockSystem {
    pub medium0: Medium,
    pub waves: Vec<PlaneWave>,
    pub metal: Option<MetalBlock>,
    pub skin: Option<SkinBlock>,
}

impl BlockSystem {
    /// Assembles every present block for the given incident waves.
    pub fn assemble(
        metal: Option<&BoundaryMesh>,
        skin: Option<(&BoundaryMesh, &Medium)>,
        medium0: &Medium,
        waves: &[PlaneWave],
    ) -> Result<Self> {
        let k0 = medium0.k.re;
        let metal = match metal {
            Some(mesh) => {
                let parts = CalderonParts::assemble(mesh, k0, Polarization::Tm)?;
                let rhs = waves
                    .iter()
                    .map(|w| assemble_rhs(mesh, w, medium0, Target::Pec))
                    .collect::<Result<_>>()?;
                Some(MetalBlock {
                    mesh: mesh.clone(),
                    parts,
                    rhs,
                })
            }
            None => None,
        };
        let skin = match skin {
            Some((mesh, medium1)) => {
                let blocks = assemble_pmchwt(mesh, medium0, medium1)?;
                let rhs = waves
                    .iter()
                    .map(|w| assemble_rhs(mesh, w, medium0, Target::Dielectric))
                    .collect::<Result<_>>()?;
                Some(SkinBlock {
                    mesh: mesh.clone(),
                    blocks,
                    rhs,
                })
            }
            None => None,
        };
        Ok(BlockSystem {
            medium0: *medium0,
            waves: waves.to_vec(),
            metal,
            skin,
        })
    }
}
