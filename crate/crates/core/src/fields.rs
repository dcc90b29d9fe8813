//! Fields radiated by boundary traces, and the skin field-map scenario.
//!
//! With n̂ the outward normal and G the outgoing Green's function, the
//! scattered field outside is
//!   E^s(r) = ∫ [E ∂G₀/∂n' − G₀ ∂E/∂n'] ds'
//! and the total field inside a penetrable body is
//!   E(r) = ∫ [G₁ ∂E/∂n' − E ∂G₁/∂n'] ds',
//! both from the exterior-side traces E_z and ∂E_z/∂n = jωμ H_t.

use std::f64::consts::PI;
use std::io::Write;
use std::path::Path;

use nalgebra::DVector;
use num_complex::Complex64 as C;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fds::{solve_scenario, Method, SolveResult};
use crate::formulations::{BlockSystem, PlaneWave};
use crate::geometry::{build_mesh, BoundaryMesh, CurveSpec, Point};
use crate::media::Medium;
use crate::quadrature::gauss_legendre;
use crate::specfun::hankel2_01;

const J: C = C::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Region {
    Exterior,
    Interior,
    Excluded,
}

impl Region {
    pub fn name(self) -> &'static str {
        match self {
            Region::Exterior => "exterior",
            Region::Interior => "interior",
            Region::Excluded => "excluded",
        }
    }
}

/// Exterior-side total traces at the mesh nodes, as hat coefficients.
#[derive(Debug, Clone)]
pub struct Traces {
    pub e_z: DVector<C>,
    pub h_t: DVector<C>,
}

impl Traces {
    pub fn new(e_z: DVector<C>, h_t: DVector<C>) -> Result<Self> {
        if e_z.len() != h_t.len() {
            return Err(Error::DimensionMismatch {
                expected: e_z.len(),
                got: h_t.len(),
            });
        }
        Ok(Traces { e_z, h_t })
    }

    /// PEC boundary: E_z = 0, H_t = j.
    pub fn pec(solution: &SolveResult, column: usize) -> Result<Self> {
        let j = solution
            .j_m
            .as_ref()
            .ok_or_else(|| Error::Solve("no metal currents in the solution".into()))?;
        check_column(column, j.ncols())?;
        let h = j.column(column).into_owned();
        Ok(Traces {
            e_z: DVector::zeros(h.len()),
            h_t: h,
        })
    }

    /// Penetrable boundary: E_z = −m, H_t = −j.
    pub fn penetrable(solution: &SolveResult, column: usize) -> Result<Self> {
        let (j, m) = match (&solution.j_s, &solution.m_s) {
            (Some(j), Some(m)) => (j, m),
            _ => return Err(Error::Solve("no skin currents in the solution".into())),
        };
        check_column(column, j.ncols())?;
        Ok(Traces {
            e_z: -m.column(column).into_owned(),
            h_t: -j.column(column).into_owned(),
        })
    }

    pub fn len(&self) -> usize {
        self.e_z.len()
    }

    pub fn is_empty(&self) -> bool {
        self.e_z.is_empty()
    }
}

fn check_column(column: usize, len: usize) -> Result<()> {
    if column >= len {
        return Err(Error::IndexOutOfRange { index: column, len });
    }
    Ok(())
}

/// Field samples with region tags; excluded points carry no value.
#[derive(Debug, Clone, Default)]
pub struct FieldGrid {
    pub points: Vec<Point>,
    pub values: Vec<Option<C>>,
    pub regions: Vec<Region>,
}

pub const CSV_HEADER: &str = "x[m],y[m],region,re[V/m],im[V/m],abs[V/m]";

impl FieldGrid {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "{CSV_HEADER}")?;
        for ((p, v), r) in self.points.iter().zip(&self.values).zip(&self.regions) {
            match v {
                Some(v) => writeln!(
                    w,
                    "{:.16e},{:.16e},{},{:.16e},{:.16e},{:.16e}",
                    p[0],
                    p[1],
                    r.name(),
                    v.re,
                    v.im,
                    v.norm()
                )?,
                None => writeln!(w, "{:.16e},{:.16e},{},,,", p[0], p[1], r.name())?,
            }
        }
        Ok(())
    }

    pub fn save_csv(&self, path: &Path) -> Result<()> {
        let f = std::io::BufWriter::new(std::fs::File::create(path)?);
        self.write_csv(f)
    }

    /// Mean |value| over points of a region, if any carry a value.
    pub fn mean_magnitude(&self, region: Region, filter: impl Fn(Point) -> bool) -> Option<f64> {
        let (mut sum, mut count) = (0.0, 0usize);
        for ((p, v), r) in self.points.iter().zip(&self.values).zip(&self.regions) {
            if let (Some(v), true) = (v, *r == region && filter(*p)) {
                sum += v.norm();
                count += 1;
            }
        }
        (count > 0).then(|| sum / count as f64)
    }
}

/// Region of p: excluded within one local segment length of Γ.
pub fn classify(mesh: &BoundaryMesh, p: Point) -> Region {
    let (d, e) = mesh.distance_to_boundary(p);
    if d < mesh.segment_length(e) {
        Region::Excluded
    } else if mesh.contains(p) {
        Region::Interior
    } else {
        Region::Exterior
    }
}

fn order_for(distance: f64, length: f64) -> usize {
    let r = distance / length;
    if r >= 12.0 {
        3
    } else if r >= 5.0 {
        4
    } else if r >= 2.0 {
        6
    } else {
        10
    }
}

/// ∫ [G ∂E/∂n' − E ∂G/∂n'] ds', negated for exterior points.
fn representation(
    mesh: &BoundaryMesh,
    traces: &Traces,
    medium: &Medium,
    p: Point,
    inside: bool,
) -> C {
    let n = mesh.len();
    let k = medium.k;
    // ωμ for a nonmagnetic medium
    let omega_mu = k * medium.eta;
    let sign = if inside { 1.0 } else { -1.0 };
    let mut total = C::new(0.0, 0.0);
    for e in 0..n {
        let (i, i1) = mesh.segment(e);
        let (a, b) = (mesh.node(i), mesh.node(i1));
        let len = mesh.segment_length(e);
        let nrm = mesh.normal(e);
        let mid = [0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])];
        let dist = ((p[0] - mid[0]).hypot(p[1] - mid[1]) - 0.5 * len).max(0.0);
        let rule = gauss_legendre(order_for(dist, len));
        let mut acc = C::new(0.0, 0.0);
        for (u, w) in rule.iter() {
            let q = [a[0] + u * (b[0] - a[0]), a[1] + u * (b[1] - a[1])];
            let d = [p[0] - q[0], p[1] - q[1]];
            let r = d[0].hypot(d[1]);
            let (h0, h1) = hankel2_01(k * r);
            let g = -J / 4.0 * h0;
            // ∂G/∂n' = −F (r − r')·n'
            let dg = -(J * k / 4.0) * h1 / r * (d[0] * nrm[0] + d[1] * nrm[1]);
            let ez = traces.e_z[i] * (1.0 - u) + traces.e_z[i1] * u;
            let dn = J * omega_mu * (traces.h_t[i] * (1.0 - u) + traces.h_t[i1] * u);
            acc += w * (g * dn - ez * dg);
        }
        total += acc * len;
    }
    total * sign
}

/// Scattered field (exterior) or total field (interior, `medium` = interior
/// medium) at each point; points in the excluded band or in the other
/// region are errors.
pub fn radiate(
    mesh: &BoundaryMesh,
    traces: &Traces,
    medium: &Medium,
    points: &[Point],
    region: Region,
) -> Result<FieldGrid> {
    if traces.len() != mesh.len() {
        return Err(Error::DimensionMismatch {
            expected: mesh.len(),
            got: traces.len(),
        });
    }
    if region == Region::Excluded {
        return Err(Error::Config(
            "radiate needs the exterior or the interior region".into(),
        ));
    }
    for (index, &p) in points.iter().enumerate() {
        match classify(mesh, p) {
            Region::Excluded => return Err(Error::ExcludedPoint { index }),
            r if r != region => return Err(Error::WrongRegion { index }),
            _ => {}
        }
    }
    let inside = region == Region::Interior;
    let values = points
        .par_iter()
        .map(|&p| Some(representation(mesh, traces, medium, p, inside)))
        .collect();
    Ok(FieldGrid {
        points: points.to_vec(),
        values,
        regions: vec![region; points.len()],
    })
}

/// Classifies every point and evaluates the exterior scattered field and the
/// interior total field. A PEC body (`interior` None) has zero interior field.
pub fn field_map(
    mesh: &BoundaryMesh,
    traces: &Traces,
    exterior: &Medium,
    interior: Option<&Medium>,
    points: &[Point],
) -> Result<FieldGrid> {
    if traces.len() != mesh.len() {
        return Err(Error::DimensionMismatch {
            expected: mesh.len(),
            got: traces.len(),
        });
    }
    let (regions, values): (Vec<Region>, Vec<Option<C>>) = points
        .par_iter()
        .map(|&p| {
            let r = classify(mesh, p);
            let v = match (r, interior) {
                (Region::Excluded, _) => None,
                (Region::Exterior, _) => Some(representation(mesh, traces, exterior, p, false)),
                (Region::Interior, Some(m1)) => Some(representation(mesh, traces, m1, p, true)),
                (Region::Interior, None) => Some(C::new(0.0, 0.0)),
            };
            (r, v)
        })
        .unzip();
    Ok(FieldGrid {
        points: points.to_vec(),
        values,
        regions,
    })
}

/// nx × ny points, row-major in y, over the box `scale` times the bounding
/// box of the mesh about its center.
pub fn box_grid(mesh: &BoundaryMesh, scale: f64, nx: usize, ny: usize) -> Result<Vec<Point>> {
    if nx < 2 || ny < 2 {
        return Err(Error::Config(format!(
            "grid needs at least 2×2 points, got {nx}×{ny}"
        )));
    }
    let (lo, hi) = mesh.bounding_box();
    let c = [0.5 * (lo[0] + hi[0]), 0.5 * (lo[1] + hi[1])];
    let (wx, wy) = (0.5 * scale * (hi[0] - lo[0]), 0.5 * scale * (hi[1] - lo[1]));
    let mut pts = Vec::with_capacity(nx * ny);
    for jy in 0..ny {
        for ix in 0..nx {
            let x = c[0] - wx + 2.0 * wx * ix as f64 / (nx - 1) as f64;
            let y = c[1] - wy + 2.0 * wy * jy as f64 / (ny - 1) as f64;
            pts.push([x, y]);
        }
    }
    Ok(pts)
}

/// The skin sample illuminated by a TM plane wave.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkinScenario {
    /// m.
    pub perimeter: f64,
    pub aspect_ratio: f64,
    /// Hz.
    pub frequency: f64,
    /// Radians.
    pub angle: f64,
    /// V/m.
    pub amplitude: f64,
    /// Unknowns per interior wavelength.
    pub points_per_wavelength: f64,
    pub nx: usize,
    pub ny: usize,
    pub box_scale: f64,
}

impl Default for SkinScenario {
    fn default() -> Self {
        SkinScenario {
            perimeter: 5.85e-3,
            aspect_ratio: 1.5,
            frequency: 1e12,
            angle: -PI / 5.0,
            amplitude: 1.0,
            points_per_wavelength: 18.0,
            nx: 256,
            ny: 256,
            box_scale: 3.0,
        }
    }
}

impl SkinScenario {
    /// Element count for the requested density in the skin.
    pub fn elements(&self, skin: &Medium) -> usize {
        let lambda1 = 2.0 * PI / skin.k.re;
        ((self.points_per_wavelength * self.perimeter / lambda1).ceil() as usize).max(8)
    }
}

#[derive(Debug, Clone)]
pub struct SkinFieldMap {
    pub mesh: BoundaryMesh,
    pub medium0: Medium,
    pub medium1: Medium,
    pub wave: PlaneWave,
    pub solution: SolveResult,
    pub grid: FieldGrid,
}

pub fn field_map_skin(s: &SkinScenario) -> Result<SkinFieldMap> {
    let medium0 = Medium::vacuum(s.frequency)?;
    let medium1 = Medium::skin(s.frequency)?;
    let n = s.elements(&medium1);
    let mesh = build_mesh(&CurveSpec::ellipse(s.perimeter, s.aspect_ratio, n))?;
    let wave = PlaneWave::tm(s.amplitude, s.angle, s.frequency);
    let system = BlockSystem::assemble(None, Some((&mesh, &medium1)), &medium0, &[wave])?;
    let solution = solve_scenario(&system, &Method::Dense)?;
    let traces = Traces::penetrable(&solution, 0)?;
    let points = box_grid(&mesh, s.box_scale, s.nx, s.ny)?;
    let grid = field_map(&mesh, &traces, &medium0, Some(&medium1), &points)?;
    Ok(SkinFieldMap {
        mesh,
        medium0,
        medium1,
        wave,
        solution,
        grid,
    })
}

/// 1/e depth of |E| along the inward normal at the node facing the wave,
/// from a least-squares fit of ln|E| over depths between two local segment
/// lengths and the point where |E| has fallen by 10³ (or half the body).
pub fn interior_decay_length(
    mesh: &BoundaryMesh,
    traces: &Traces,
    interior: &Medium,
    direction: Point,
) -> Result<f64> {
    let n = mesh.len();
    let lit = (0..n)
        .min_by(|&a, &b| {
            let (pa, pb) = (mesh.node(a), mesh.node(b));
            (pa[0] * direction[0] + pa[1] * direction[1])
                .total_cmp(&(pb[0] * direction[0] + pb[1] * direction[1]))
        })
        .ok_or_else(|| Error::InvalidMesh("empty mesh".into()))?;
    let (n0, n1) = (mesh.normal((lit + n - 1) % n), mesh.normal(lit));
    let s = [-(n0[0] + n1[0]), -(n0[1] + n1[1])];
    let len = s[0].hypot(s[1]);
    let inward = [s[0] / len, s[1] / len];
    let p0 = mesh.node(lit);
    let (lo, hi) = mesh.bounding_box();
    let half = 0.25 * ((hi[0] - lo[0]).min(hi[1] - lo[1]));
    let h = mesh.max_segment_length();
    let start = 2.0 * h;
    let samples = 64;
    let depths: Vec<f64> = (0..samples)
        .map(|i| start + (half - start) * i as f64 / (samples - 1) as f64)
        .collect();
    let pts: Vec<Point> = depths
        .iter()
        .map(|&t| [p0[0] + t * inward[0], p0[1] + t * inward[1]])
        .collect();
    let grid = radiate(mesh, traces, interior, &pts, Region::Interior)?;
    let mags: Vec<f64> = grid
        .values
        .iter()
        .map(|v| v.map_or(0.0, |v| v.norm()))
        .collect();
    let floor = mags[0] * 1e-3;
    let (mut sx, mut sy, mut sxx, mut sxy, mut m) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for (t, a) in depths.iter().zip(&mags) {
        if *a <= floor {
            break;
        }
        let y = a.ln();
        sx += t;
        sy += y;
        sxx += t * t;
        sxy += t * y;
        m += 1.0;
    }
    if m < 3.0 {
        return Err(Error::Domain(
            "too few interior samples above the decay floor".into(),
        ));
    }
    let slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    if !(slope < 0.0) {
        return Err(Error::Domain(format!(
            "interior field does not decay (slope {slope})"
        )));
    }
    Ok(-1.0 / slope)
}
