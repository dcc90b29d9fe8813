//! Free space, PEC and the double Debye skin model (e^{+jωt} convention).

use std::f64::consts::PI;

use num_complex::Complex64 as C;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Speed of light in vacuum, m/s.
pub const C0: f64 = 299_792_458.0;
/// Vacuum permeability, H/m.
pub const MU0: f64 = 1.256_637_062_12e-6;
/// Vacuum permittivity, F/m.
pub const EPS0: f64 = 1.0 / (MU0 * C0 * C0);
/// Free-space impedance, ohms.
pub const ETA0: f64 = MU0 * C0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DebyeParams {
    pub eps_inf: f64,
    pub eps_s: f64,
    pub eps_2: f64,
    /// Seconds.
    pub tau_1: f64,
    /// Seconds.
    pub tau_2: f64,
}

impl DebyeParams {
    /// Double Debye parameters for human skin.
    pub const SKIN: DebyeParams = DebyeParams {
        eps_inf: 3.0,
        eps_s: 60.0,
        eps_2: 3.6,
        tau_1: 10e-12,
        tau_2: 0.2e-12,
    };

    pub fn validate(&self) -> Result<()> {
        let ok = self.eps_s > self.eps_2
            && self.eps_2 > self.eps_inf
            && self.eps_inf > 0.0
            && self.tau_1 > self.tau_2
            && self.tau_2 > 0.0;
        if ok {
            Ok(())
        } else {
            Err(Error::Domain(format!(
                "Debye parameters violate eps_s > eps_2 > eps_inf > 0, tau_1 > tau_2 > 0: {self:?}"
            )))
        }
    }
}

/// ε_r(ω) = ε∞ + (ε_s − ε₂)/(1 + jωτ₁) + (ε₂ − ε∞)/(1 + jωτ₂).
pub fn debye_permittivity(p: &DebyeParams, frequency: f64) -> C {
    if frequency.is_infinite() {
        return C::new(p.eps_inf, 0.0);
    }
    let w = 2.0 * PI * frequency;
    let one = C::new(1.0, 0.0);
    p.eps_inf
        + (p.eps_s - p.eps_2) / (one + C::new(0.0, w * p.tau_1))
        + (p.eps_2 - p.eps_inf) / (one + C::new(0.0, w * p.tau_2))
}

/// Homogeneous medium at a fixed frequency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Medium {
    pub eps_r: C,
    pub mu_r: f64,
    /// rad/m, Re > 0, Im <= 0.
    pub k: C,
    /// Ohms, Re > 0.
    pub eta: C,
    /// Hz.
    pub frequency: f64,
}

/// Square root on the branch with Im <= 0 (Re >= 0 for the media used here).
fn lossy_sqrt(z: C) -> C {
    let r = z.sqrt();
    if r.im > 0.0 {
        -r
    } else {
        r
    }
}

impl Medium {
    pub fn new(eps_r: C, mu_r: f64, frequency: f64) -> Result<Self> {
        if !(frequency > 0.0) || !frequency.is_finite() {
            return Err(Error::Domain(format!(
                "frequency must be positive, got {frequency}"
            )));
        }
        if eps_r.im > 0.0 {
            return Err(Error::Domain(format!(
                "Im(eps_r) must be <= 0 under e^(+jwt), got {eps_r}"
            )));
        }
        let k0 = 2.0 * PI * frequency / C0;
        let k = k0 * lossy_sqrt(eps_r * mu_r);
        let eta = ETA0 * (C::new(mu_r, 0.0) / eps_r).sqrt();
        Ok(Medium {
            eps_r,
            mu_r,
            k,
            eta,
            frequency,
        })
    }

    pub fn vacuum(frequency: f64) -> Result<Self> {
        Self::new(C::new(1.0, 0.0), 1.0, frequency)
    }

    /// Vacuum with the frequency chosen so that the wavenumber is k0.
    pub fn vacuum_with_wavenumber(k0: f64) -> Result<Self> {
        Self::vacuum(k0 * C0 / (2.0 * PI))
    }

    pub fn dielectric(eps_r: C, frequency: f64) -> Result<Self> {
        Self::new(eps_r, 1.0, frequency)
    }

    pub fn debye(params: &DebyeParams, frequency: f64) -> Result<Self> {
        params.validate()?;
        Self::new(debye_permittivity(params, frequency), 1.0, frequency)
    }

    pub fn skin(frequency: f64) -> Result<Self> {
        Self::debye(&DebyeParams::SKIN, frequency)
    }

    pub fn omega(&self) -> f64 {
        2.0 * PI * self.frequency
    }
}

/// 1/|Im k|, the 1/e decay length of the field amplitude.
pub fn penetration_length(medium: &Medium) -> Result<f64> {
    if medium.k.im == 0.0 {
        return Err(Error::Degenerate);
    }
    Ok(1.0 / medium.k.im.abs())
}

/// Run-config medium selector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum MediumSpec {
    Air,
    Pec,
    SkinDebye,
    Explicit { eps_r_re: f64, eps_r_im: f64 },
}

impl MediumSpec {
    pub fn parse(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase();
        match t.as_str() {
            "air" | "vacuum" => Ok(MediumSpec::Air),
            "pec" => Ok(MediumSpec::Pec),
            "skin_debye" | "skin" => Ok(MediumSpec::SkinDebye),
            _ => {
                let parts: Vec<_> = t.split(',').map(|p| p.trim().parse::<f64>()).collect();
                match parts.as_slice() {
                    [Ok(re), Ok(im)] => Ok(MediumSpec::Explicit {
                        eps_r_re: *re,
                        eps_r_im: *im,
                    }),
                    _ => Err(Error::Config(format!(
                        "unknown medium '{s}' (air, pec, skin_debye or 're,im')"
                    ))),
                }
            }
        }
    }

    /// Penetrable medium at the given frequency; PEC has none.
    pub fn medium(&self, frequency: f64) -> Result<Option<Medium>> {
        Ok(match *self {
            MediumSpec::Air => Some(Medium::vacuum(frequency)?),
            MediumSpec::Pec => None,
            MediumSpec::SkinDebye => Some(Medium::skin(frequency)?),
            MediumSpec::Explicit { eps_r_re, eps_r_im } => {
                Some(Medium::dielectric(C::new(eps_r_re, eps_r_im), frequency)?)
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn debye_limits() {
        let p = DebyeParams::SKIN;
        assert_eq!(debye_permittivity(&p, 0.0), C::new(60.0, 0.0));
        let hi = debye_permittivity(&p, f64::INFINITY);
        assert_eq!(hi, C::new(3.0, 0.0));
        assert!((debye_permittivity(&p, 1e18) - 3.0).norm() < 1e-3);
    }

    #[test]
    fn medium_branches() {
        let m = Medium::skin(1e12).unwrap();
        assert!(m.k.re > 0.0 && m.k.im < 0.0);
        assert!(m.eta.re > 0.0);
        let air = Medium::vacuum(1e12).unwrap();
        assert_eq!(air.k.im, 0.0);
        assert!(matches!(penetration_length(&air), Err(Error::Degenerate)));
        assert!((ETA0 - 376.730313668).abs() < 1e-6);
    }

    #[test]
    fn parse_media() {
        assert_eq!(MediumSpec::parse("air").unwrap(), MediumSpec::Air);
        assert_eq!(
            MediumSpec::parse("skin_debye").unwrap(),
            MediumSpec::SkinDebye
        );
        assert_eq!(
            MediumSpec::parse("4.0, -0.5").unwrap(),
            MediumSpec::Explicit {
                eps_r_re: 4.0,
                eps_r_im: -0.5
            }
        );
        assert!(matches!(MediumSpec::parse("water"), Err(Error::Config(_))));
    }
}
