//! Series solutions for a TM plane wave on a circular cylinder centred at
//! the origin, PEC or homogeneous dielectric.
//!
//! With ψ = φ − φᵢ the incident field is A Σ (−j)ⁿ Jₙ(k₀ρ) e^{jnψ}; the
//! scattered field carries bₙ Hₙ⁽²⁾(k₀ρ) and the interior field cₙ Jₙ(k₁ρ).

use std::f64::consts::PI;

use num_complex::Complex64 as C;

use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::media::Medium;
use crate::quadrature::gauss_legendre;
use crate::specfun::{bessel_j_orders, hankel2_orders, MAX_ORDER};

const J: C = C::new(0.0, 1.0);
/// Last retained term relative to the largest one.
pub const TRUNCATION_TOL: f64 = 1e-12;

/// Terms added per step when the last-term check fails.
const GROWTH: usize = 4;

/// Minimum truncation ⌈|k₀|a⌉ + 15; constructors extend it until the last
/// retained term passes [`TRUNCATION_TOL`].
pub fn default_terms(k0: C, radius: f64) -> usize {
    (k0.norm() * radius).ceil() as usize + 15
}

fn neg_j_pow(n: usize) -> C {
    match n % 4 {
        0 => C::new(1.0, 0.0),
        1 => C::new(0.0, -1.0),
        2 => C::new(-1.0, 0.0),
        _ => C::new(0.0, 1.0),
    }
}

/// Values and derivatives of Jₙ or Hₙ for n = 0..=nmax.
fn with_derivatives(vals: &[C], nmax: usize) -> (Vec<C>, Vec<C>) {
    let f: Vec<C> = vals[..=nmax].to_vec();
    let d: Vec<C> = (0..=nmax)
        .map(|n| {
            if n == 0 {
                -vals[1]
            } else {
                0.5 * (vals[n - 1] - vals[n + 1])
            }
        })
        .collect();
    (f, d)
}

fn j_and_dj(nmax: usize, z: C) -> Result<(Vec<C>, Vec<C>)> {
    Ok(with_derivatives(
        &bessel_j_orders(nmax as u32 + 1, z)?,
        nmax,
    ))
}

fn h_and_dh(nmax: usize, z: C) -> Result<(Vec<C>, Vec<C>)> {
    Ok(with_derivatives(&hankel2_orders(nmax as u32 + 1, z)?, nmax))
}

/// Σ_{n=-N}^{N} (−j)ⁿ aₙ e^{jnψ} for coefficients symmetric in n.
fn symmetric_sum(coef: &[C], psi: f64) -> C {
    coef.iter()
        .enumerate()
        .map(|(n, &a)| {
            let w = if n == 0 {
                1.0
            } else {
                2.0 * (n as f64 * psi).cos()
            };
            neg_j_pow(n) * a * w
        })
        .sum()
}

fn check_truncation(terms: &[C], what: &str) -> Result<()> {
    let max = terms.iter().map(|t| t.norm()).fold(0.0, f64::max);
    let last = terms.last().map(|t| t.norm()).unwrap_or(0.0);
    if !(last <= TRUNCATION_TOL * max) {
        return Err(Error::SeriesNotConverged(format!(
            "{what}: last of {} terms is {:.2e} of the largest",
            terms.len(),
            last / max
        )));
    }
    Ok(())
}

fn tail_small(terms: &[C]) -> bool {
    let max = terms.iter().map(|t| t.norm()).fold(0.0, f64::max);
    terms
        .last()
        .map(|t| t.norm() <= TRUNCATION_TOL * max)
        .unwrap_or(false)
}

fn check_terms(n_terms: usize, k0: C, radius: f64) -> Result<()> {
    let min = default_terms(k0, radius);
    if n_terms < min {
        return Err(Error::SeriesNotConverged(format!(
            "n_terms = {n_terms} below ⌈|k₀|a⌉ + 15 = {min}"
        )));
    }
    if n_terms + 1 >= MAX_ORDER as usize {
        return Err(Error::Domain(format!(
            "n_terms = {n_terms} beyond Bessel order limit {}",
            MAX_ORDER - 2
        )));
    }
    Ok(())
}

fn polar(p: Point) -> (f64, f64) {
    (p[0].hypot(p[1]), p[1].atan2(p[0]))
}

/// PEC cylinder: bₙ = −Jₙ(k₀a)/Hₙ(k₀a).
#[derive(Debug, Clone)]
pub struct PecSeries {
    pub radius: f64,
    pub medium0: Medium,
    pub angle: f64,
    pub amplitude: f64,
    pub n_terms: usize,
    pub scattered: Vec<C>,
    /// (2A/(πk₀aη₀)) (−j)ⁿ / Hₙ(k₀a) before the angular factor.
    current_terms: Vec<C>,
}

pub fn pec_cylinder(
    radius: f64,
    medium0: &Medium,
    n_terms: usize,
    angle: f64,
    amplitude: f64,
) -> Result<PecSeries> {
    check_terms(n_terms, medium0.k, radius)?;
    let k0 = medium0.k;
    let z = k0 * radius;
    let mut n_max = n_terms;
    loop {
        let jn = bessel_j_orders(n_max as u32, z)?;
        let hn = hankel2_orders(n_max as u32, z)?;
        let pref = 2.0 * amplitude / (PI * z * medium0.eta);
        let current_terms: Vec<C> = (0..=n_max).map(|n| pref / hn[n]).collect();
        if tail_small(&current_terms) || n_max + GROWTH >= MAX_ORDER as usize {
            check_truncation(&current_terms, "PEC surface current")?;
            let scattered: Vec<C> = (0..=n_max).map(|n| -jn[n] / hn[n]).collect();
            return Ok(PecSeries {
                radius,
                medium0: *medium0,
                angle,
                amplitude,
                n_terms: n_max,
                scattered,
                current_terms,
            });
        }
        n_max += GROWTH;
    }
}

/// Unit-amplitude PEC series; `current(φ)` gives j_z on ρ = a.
pub fn pec_cylinder_current(
    radius: f64,
    medium0: &Medium,
    n_terms: usize,
    angle: f64,
) -> Result<PecSeries> {
    pec_cylinder(radius, medium0, n_terms, angle, 1.0)
}

impl PecSeries {
    /// j_z(φ) = H_t^tot at ρ = a.
    pub fn current(&self, phi: f64) -> C {
        symmetric_sum(&self.current_terms, phi - self.angle)
    }

    pub fn scattered_field(&self, p: Point) -> Result<C> {
        let (rho, phi) = polar(p);
        let hn = hankel2_orders(self.n_terms as u32, self.medium0.k * rho)?;
        let c: Vec<C> = self.scattered.iter().zip(&hn).map(|(b, h)| b * h).collect();
        Ok(self.amplitude * symmetric_sum(&c, phi - self.angle))
    }

    /// Far-field pattern f(θ) with u_s ~ f(θ) √(2/(πk₀ρ)) e^{−j(k₀ρ − π/4)}.
    pub fn far_field(&self, theta: f64) -> C {
        self.amplitude
            * self
                .scattered
                .iter()
                .enumerate()
                .map(|(n, b)| {
                    b * if n == 0 {
                        1.0
                    } else {
                        2.0 * (n as f64 * (theta - self.angle)).cos()
                    }
                })
                .sum::<C>()
    }
}

/// Dielectric cylinder with continuous E_z and H_t at ρ = a (μ₁ = μ₀).
#[derive(Debug, Clone)]
pub struct DielectricSeries {
    pub radius: f64,
    pub medium0: Medium,
    pub medium1: Medium,
    pub angle: f64,
    pub amplitude: f64,
    pub n_terms: usize,
    pub scattered: Vec<C>,
    pub interior: Vec<C>,
    /// Jₙ(k₁a) and Jₙ'(k₁a).
    j1: Vec<C>,
    dj1: Vec<C>,
}

pub fn dielectric_cylinder(
    radius: f64,
    medium0: &Medium,
    medium1: &Medium,
    n_terms: usize,
    angle: f64,
    amplitude: f64,
) -> Result<DielectricSeries> {
    check_terms(n_terms, medium0.k, radius)?;
    let (k0, k1) = (medium0.k, medium1.k);
    let (z0, z1) = (k0 * radius, k1 * radius);
    let mut n_max = n_terms;
    loop {
        let (j0, dj0) = j_and_dj(n_max, z0)?;
        let (h0, dh0) = h_and_dh(n_max, z0)?;
        let (j1, dj1) = j_and_dj(n_max, z1)?;
        let mut scattered = Vec::with_capacity(n_max + 1);
        let mut interior = Vec::with_capacity(n_max + 1);
        for n in 0..=n_max {
            let den = k0 * dh0[n] * j1[n] - k1 * h0[n] * dj1[n];
            scattered.push((k1 * j0[n] * dj1[n] - k0 * dj0[n] * j1[n]) / den);
            interior.push(C::new(0.0, -2.0) / (PI * radius) / den);
        }
        let trace_terms: Vec<C> = interior.iter().zip(&j1).map(|(c, j)| c * j).collect();
        if tail_small(&trace_terms) || n_max + GROWTH + 1 >= MAX_ORDER as usize {
            check_truncation(&trace_terms, "dielectric E_z trace")?;
            return Ok(DielectricSeries {
                radius,
                medium0: *medium0,
                medium1: *medium1,
                angle,
                amplitude,
                n_terms: n_max,
                scattered,
                interior,
                j1,
                dj1,
            });
        }
        n_max += GROWTH;
    }
}

/// Traces and field evaluators of the dielectric-cylinder solution.
pub fn dielectric_cylinder_fields(
    radius: f64,
    medium0: &Medium,
    medium1: &Medium,
    n_terms: usize,
    angle: f64,
) -> Result<DielectricSeries> {
    dielectric_cylinder(radius, medium0, medium1, n_terms, angle, 1.0)
}

impl DielectricSeries {
    /// E_z on ρ = a.
    pub fn e_trace(&self, phi: f64) -> C {
        let c: Vec<C> = self
            .interior
            .iter()
            .zip(&self.j1)
            .map(|(c, j)| c * j)
            .collect();
        self.amplitude * symmetric_sum(&c, phi - self.angle)
    }

    /// H_t = (1/(jωμ₀)) ∂E_z/∂ρ on ρ = a.
    pub fn h_trace(&self, phi: f64) -> C {
        let k1 = self.medium1.k;
        let scale = J * self.medium0.k * self.medium0.eta;
        let c: Vec<C> = self
            .interior
            .iter()
            .zip(&self.dj1)
            .map(|(c, d)| c * k1 * d / scale)
            .collect();
        self.amplitude * symmetric_sum(&c, phi - self.angle)
    }

    /// PMCHWT unknowns (j, m) = (−H_t, −E_z) at angle φ.
    pub fn currents(&self, phi: f64) -> (C, C) {
        (-self.h_trace(phi), -self.e_trace(phi))
    }

    pub fn interior_field(&self, p: Point) -> Result<C> {
        let (rho, phi) = polar(p);
        let jn = bessel_j_orders(self.n_terms as u32, self.medium1.k * rho)?;
        let c: Vec<C> = self.interior.iter().zip(&jn).map(|(a, j)| a * j).collect();
        Ok(self.amplitude * symmetric_sum(&c, phi - self.angle))
    }

    pub fn scattered_field(&self, p: Point) -> Result<C> {
        let (rho, phi) = polar(p);
        let hn = hankel2_orders(self.n_terms as u32, self.medium0.k * rho)?;
        let c: Vec<C> = self.scattered.iter().zip(&hn).map(|(b, h)| b * h).collect();
        Ok(self.amplitude * symmetric_sum(&c, phi - self.angle))
    }

    /// Total E_z anywhere: interior series inside, incident plus scattered outside.
    pub fn total_field(&self, p: Point) -> Result<C> {
        if p[0].hypot(p[1]) < self.radius {
            return self.interior_field(p);
        }
        let d = [self.angle.cos(), self.angle.sin()];
        let inc = self.amplitude * (-J * self.medium0.k * (d[0] * p[0] + d[1] * p[1])).exp();
        Ok(inc + self.scattered_field(p)?)
    }

    pub fn far_field(&self, theta: f64) -> C {
        self.amplitude
            * self
                .scattered
                .iter()
                .enumerate()
                .map(|(n, b)| {
                    b * if n == 0 {
                        1.0
                    } else {
                        2.0 * (n as f64 * (theta - self.angle)).cos()
                    }
                })
                .sum::<C>()
    }

    fn weight(n: usize) -> f64 {
        if n == 0 {
            1.0
        } else {
            2.0
        }
    }

    /// Inward Poynting flux ½ Re ∮ E_z H_t* ds through ρ = a, per unit length.
    pub fn absorbed_power_flux(&self) -> f64 {
        let scale = J * self.medium0.k * self.medium0.eta;
        let k1 = self.medium1.k;
        let sum: f64 = (0..=self.n_terms)
            .map(|n| {
                let c = self.interior[n];
                let e = c * self.j1[n];
                let h = c * k1 * self.dj1[n] / scale;
                Self::weight(n) * (e * h.conj()).re
            })
            .sum();
        0.5 * self.amplitude * self.amplitude * 2.0 * PI * self.radius * sum
    }

    /// Ohmic loss ½ ω ε₀ (−Im ε_r) ∫∫ |E_z|² dA over the disc.
    pub fn absorbed_power_volume(&self) -> Result<f64> {
        let k1 = self.medium1.k;
        let panels = 16;
        let rule = gauss_legendre(24);
        let mut radial = vec![0.0; self.n_terms + 1];
        for p in 0..panels {
            let (r0, r1) = (
                self.radius * p as f64 / panels as f64,
                self.radius * (p + 1) as f64 / panels as f64,
            );
            for (x, w) in rule.iter() {
                let rho = r0 + x * (r1 - r0);
                let jn = bessel_j_orders(self.n_terms as u32, k1 * rho)?;
                for n in 0..=self.n_terms {
                    radial[n] += w * (r1 - r0) * rho * jn[n].norm_sqr();
                }
            }
        }
        let area: f64 = (0..=self.n_terms)
            .map(|n| Self::weight(n) * self.interior[n].norm_sqr() * radial[n])
            .sum();
        let omega_eps0 = self.medium0.k.re / self.medium0.eta.re;
        Ok(0.5
            * omega_eps0
            * (-self.medium1.eps_r.im)
            * self.amplitude
            * self.amplitude
            * 2.0
            * PI
            * area)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sign_pattern() {
        assert_eq!(neg_j_pow(0), C::new(1.0, 0.0));
        assert_eq!(neg_j_pow(3), C::new(0.0, 1.0));
        assert_eq!(neg_j_pow(6), C::new(-1.0, 0.0));
    }

    #[test]
    fn no_contrast_means_no_scattering() {
        let m0 = Medium::vacuum_with_wavenumber(4.0).unwrap();
        let s = dielectric_cylinder(1.0, &m0, &m0, 25, 0.3, 1.0).unwrap();
        assert!(s.scattered.iter().all(|b| b.norm() < 1e-13));
        assert!(s.interior.iter().all(|c| (c - 1.0).norm() < 1e-12));
    }

    #[test]
    fn too_few_terms_is_reported() {
        let m0 = Medium::vacuum_with_wavenumber(10.0).unwrap();
        assert!(matches!(
            pec_cylinder(1.0, &m0, 8, 0.0, 1.0),
            Err(Error::SeriesNotConverged(_))
        ));
    }
}
