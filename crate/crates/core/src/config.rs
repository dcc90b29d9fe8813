//! Run configuration: a flat key–value file in TOML syntax, with optional
//! `[metal]` and `[skin]` tables, patched by `key=value` overrides.
//!
//! ```text
//! geometry = "ellipse"
//! perimeter = 6.283185307179586
//! aspect_ratio = 1.5
//! k0 = [25, 50, 100, 200]
//! polarization = ["tm", "te"]
//! tolerance = 1e-6
//! seed = 7
//! ```

use std::path::{Path, PathBuf};
use std::str::FromStr;

use toml::{Table, Value};

use crate::error::{Error, Result};
use crate::formulations::Polarization;
use crate::geometry::{build_mesh, BoundaryMesh, CurveKind, CurveSpec, Point};
use crate::media::{MediumSpec, C0};

#[derive(Debug, Clone, Default)]
pub struct Config {
    table: Table,
}

fn missing(key: &str) -> Error {
    Error::Config(format!("missing key '{key}'"))
}

fn bad(key: &str, want: &str, v: &Value) -> Error {
    Error::Config(format!("key '{key}': expected {want}, got {v}"))
}

fn as_f64(key: &str, v: &Value) -> Result<f64> {
    match v {
        Value::Float(x) => Ok(*x),
        Value::Integer(i) => Ok(*i as f64),
        _ => Err(bad(key, "a number", v)),
    }
}

fn as_usize(key: &str, v: &Value) -> Result<usize> {
    match v {
        Value::Integer(i) if *i >= 0 => Ok(*i as usize),
        _ => Err(bad(key, "a non-negative integer", v)),
    }
}

fn as_str<'a>(key: &str, v: &'a Value) -> Result<&'a str> {
    v.as_str().ok_or_else(|| bad(key, "a string", v))
}

fn items(v: &Value) -> Vec<&Value> {
    match v {
        Value::Array(a) => a.iter().collect(),
        other => vec![other],
    }
}

/// Parses an override value as TOML, falling back to a bare string.
fn parse_value(text: &str) -> Value {
    match format!("v = {text}").parse::<Table>() {
        Ok(mut t) => t.remove("v").unwrap_or_else(|| Value::String(text.into())),
        Err(_) => Value::String(text.trim().into()),
    }
}

impl FromStr for Config {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let table = text
            .parse::<Table>()
            .map_err(|e| Error::Config(format!("config parse error: {e}")))?;
        Ok(Config { table })
    }
}

impl Config {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        text.parse()
    }

    /// Applies `key=value`; dotted keys address tables.
    pub fn set(&mut self, assignment: &str) -> Result<()> {
        let (key, value) = assignment
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("override '{assignment}' is not key=value")))?;
        let path: Vec<&str> = key.trim().split('.').map(str::trim).collect();
        if path.iter().any(|p| p.is_empty()) {
            return Err(Error::Config(format!("bad override key '{key}'")));
        }
        let mut table = &mut self.table;
        for part in &path[..path.len() - 1] {
            let entry = table
                .entry(part.to_string())
                .or_insert_with(|| Value::Table(Table::new()));
            table = entry
                .as_table_mut()
                .ok_or_else(|| Error::Config(format!("key '{part}' is not a table")))?;
        }
        table.insert(path[path.len() - 1].to_string(), parse_value(value));
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        let mut parts = key.split('.');
        let mut v = self.table.get(parts.next()?)?;
        for p in parts {
            v = v.as_table()?.get(p)?;
        }
        Some(v)
    }

    pub fn has(&self, key: &str) -> bool {
        self.get(key).is_some()
    }

    pub fn f64(&self, key: &str) -> Result<Option<f64>> {
        self.get(key).map(|v| as_f64(key, v)).transpose()
    }

    pub fn f64_or(&self, key: &str, default: f64) -> Result<f64> {
        Ok(self.f64(key)?.unwrap_or(default))
    }

    pub fn require_f64(&self, key: &str) -> Result<f64> {
        self.f64(key)?.ok_or_else(|| missing(key))
    }

    pub fn usize(&self, key: &str) -> Result<Option<usize>> {
        self.get(key).map(|v| as_usize(key, v)).transpose()
    }

    pub fn u64(&self, key: &str) -> Result<Option<u64>> {
        Ok(self.usize(key)?.map(|v| v as u64))
    }

    pub fn str(&self, key: &str) -> Result<Option<&str>> {
        self.get(key).map(|v| as_str(key, v)).transpose()
    }

    pub fn require_str(&self, key: &str) -> Result<&str> {
        self.str(key)?.ok_or_else(|| missing(key))
    }

    /// A scalar or an array of numbers.
    pub fn f64_list(&self, key: &str) -> Result<Option<Vec<f64>>> {
        self.get(key)
            .map(|v| items(v).into_iter().map(|x| as_f64(key, x)).collect())
            .transpose()
    }

    pub fn usize_list(&self, key: &str) -> Result<Option<Vec<usize>>> {
        self.get(key)
            .map(|v| items(v).into_iter().map(|x| as_usize(key, x)).collect())
            .transpose()
    }

    pub fn str_list(&self, key: &str) -> Result<Option<Vec<&str>>> {
        self.get(key)
            .map(|v| items(v).into_iter().map(|x| as_str(key, x)).collect())
            .transpose()
    }

    /// Seed for randomized paths; mandatory.
    pub fn seed(&self) -> Result<u64> {
        self.u64("seed")?.ok_or_else(|| missing("seed"))
    }

    pub fn polarizations(&self) -> Result<Vec<Polarization>> {
        match self.str_list("polarization")? {
            None => Ok(vec![Polarization::Tm]),
            Some(v) => v
                .iter()
                .map(|s| {
                    s.parse()
                        .map_err(|_| Error::Config(format!("key 'polarization': unknown '{s}'")))
                })
                .collect(),
        }
    }

    /// Free-space wavenumbers from `k0` or from `frequency`.
    pub fn wavenumbers(&self) -> Result<Vec<f64>> {
        let list = match (self.f64_list("k0")?, self.f64_list("frequency")?) {
            (Some(_), Some(_)) => {
                return Err(Error::Config(
                    "give either 'k0' or 'frequency', not both".into(),
                ))
            }
            (Some(k), None) => k,
            (None, Some(f)) => f
                .iter()
                .map(|f| 2.0 * std::f64::consts::PI * f / C0)
                .collect(),
            (None, None) => return Err(missing("k0")),
        };
        if list.is_empty() || list.iter().any(|k| !(k.is_finite() && *k > 0.0)) {
            return Err(Error::Config("wavenumbers must be positive".into()));
        }
        Ok(list)
    }

    /// Single frequency in Hz, from `frequency` or `k0`.
    pub fn frequency(&self) -> Result<f64> {
        let k = self.wavenumbers()?;
        if k.len() != 1 {
            return Err(Error::Config("expected a single frequency".into()));
        }
        Ok(k[0] * C0 / (2.0 * std::f64::consts::PI))
    }

    pub fn medium(&self, key: &str) -> Result<Option<MediumSpec>> {
        match self.get(key) {
            None => Ok(None),
            Some(Value::Array(a)) if a.len() == 2 => Ok(Some(MediumSpec::Explicit {
                eps_r_re: as_f64(key, &a[0])?,
                eps_r_im: as_f64(key, &a[1])?,
            })),
            Some(v) => MediumSpec::parse(as_str(key, v)?).map(Some),
        }
    }

    /// Geometry under `prefix` (`""`, `"metal."` or `"skin."`).
    pub fn geometry(&self, prefix: &str) -> Result<Geometry> {
        let key = |k: &str| format!("{prefix}{k}");
        let name = self.require_str(&key("geometry"))?;
        let shape = if name.eq_ignore_ascii_case("custom") {
            Shape::Custom(PathBuf::from(self.require_str(&key("mesh"))?))
        } else {
            Shape::Curve(
                name.parse()
                    .map_err(|e: Error| Error::Config(e.to_string()))?,
            )
        };
        let perimeter = match shape {
            Shape::Custom(_) => f64::NAN,
            Shape::Curve(_) => self.f64_or(&key("perimeter"), 2.0 * std::f64::consts::PI)?,
        };
        let center = match self.f64_list(&key("center"))? {
            None => [0.0, 0.0],
            Some(c) if c.len() == 2 => [c[0], c[1]],
            Some(_) => {
                return Err(Error::Config(format!(
                    "key '{}': expected [x, y]",
                    key("center")
                )))
            }
        };
        Ok(Geometry {
            shape,
            perimeter,
            aspect_ratio: self.f64_or(&key("aspect_ratio"), 1.5)?,
            n_elements: self.usize(&key("n_elements"))?,
            points_per_wavelength: self.f64_or(&key("points_per_wavelength"), 18.0)?,
            center,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Shape {
    Curve(CurveKind),
    Custom(PathBuf),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Geometry {
    pub shape: Shape,
    /// Meters; unused for custom meshes.
    pub perimeter: f64,
    pub aspect_ratio: f64,
    /// Overrides the density rule when set.
    pub n_elements: Option<usize>,
    pub points_per_wavelength: f64,
    pub center: Point,
}

impl Geometry {
    /// Element count for wavenumber k: `n_elements`, else
    /// ⌈points_per_wavelength · perimeter · k / 2π⌉.
    pub fn elements(&self, k: f64) -> usize {
        self.n_elements.unwrap_or_else(|| {
            ((self.points_per_wavelength * self.perimeter * k / (2.0 * std::f64::consts::PI))
                - 1e-9)
                .ceil()
                .max(8.0) as usize
        })
    }

    pub fn spec(&self, n: usize) -> Option<CurveSpec> {
        match self.shape {
            Shape::Curve(kind) => Some(CurveSpec {
                kind,
                perimeter: self.perimeter,
                aspect_ratio: if kind == CurveKind::Ellipse {
                    self.aspect_ratio
                } else {
                    1.0
                },
                n_elements: n,
            }),
            Shape::Custom(_) => None,
        }
    }

    /// Mesh with n elements (ignored for custom meshes), shifted to `center`.
    pub fn mesh_with(&self, n: usize) -> Result<BoundaryMesh> {
        let mesh = match &self.shape {
            Shape::Custom(path) => BoundaryMesh::load(path)?,
            Shape::Curve(_) => build_mesh(&self.spec(n).expect("curve"))?,
        };
        if self.center == [0.0, 0.0] {
            return Ok(mesh);
        }
        BoundaryMesh::from_nodes(
            mesh.nodes()
                .iter()
                .map(|p| [p[0] + self.center[0], p[1] + self.center[1]])
                .collect(),
        )
    }

    /// Mesh resolved for wavenumber k (the interior one for penetrable bodies).
    pub fn mesh_for(&self, k: f64) -> Result<BoundaryMesh> {
        self.mesh_with(self.elements(k))
    }
}
