//! Closed boundary curves and their polygonal meshes.
//!
//! A mesh with N nodes has N segments, segment e joining node e to node
//! e + 1 (mod N). One hat function lives on each node.

use std::collections::hash_map::DefaultHasher;
use std::f64::consts::PI;
use std::hash::{Hash, Hasher};
use std::io::{BufRead, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::gauss_legendre;

pub type Point = [f64; 2];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CurveKind {
    Circle,
    Ellipse,
    Airfoil,
}

impl std::str::FromStr for CurveKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "circle" => Ok(CurveKind::Circle),
            "ellipse" => Ok(CurveKind::Ellipse),
            "airfoil" | "joukowsky" => Ok(CurveKind::Airfoil),
            other => Err(Error::InvalidCurve(format!("unknown curve kind '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveSpec {
    pub kind: CurveKind,
    /// Meters.
    pub perimeter: f64,
    /// Major over minor semi-axis; ellipse only.
    pub aspect_ratio: f64,
    pub n_elements: usize,
}

pub const MIN_ELEMENTS: usize = 8;

/// Joukowsky source circle center (before rescaling); the circle passes through (1, 0).
pub const JOUKOWSKY_CENTER: Point = [-0.1, 0.1];

impl CurveSpec {
    pub fn circle(perimeter: f64, n_elements: usize) -> Self {
        CurveSpec {
            kind: CurveKind::Circle,
            perimeter,
            aspect_ratio: 1.0,
            n_elements,
        }
    }

    pub fn ellipse(perimeter: f64, aspect_ratio: f64, n_elements: usize) -> Self {
        CurveSpec {
            kind: CurveKind::Ellipse,
            perimeter,
            aspect_ratio,
            n_elements,
        }
    }

    pub fn airfoil(perimeter: f64, n_elements: usize) -> Self {
        CurveSpec {
            kind: CurveKind::Airfoil,
            perimeter,
            aspect_ratio: 1.0,
            n_elements,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_elements < MIN_ELEMENTS {
            return Err(Error::InvalidCurve(format!(
                "n_elements = {} is below the minimum of {MIN_ELEMENTS}",
                self.n_elements
            )));
        }
        if !(self.perimeter > 0.0 && self.perimeter.is_finite()) {
            return Err(Error::InvalidCurve(format!(
                "perimeter must be positive, got {}",
                self.perimeter
            )));
        }
        if !(self.aspect_ratio >= 1.0 && self.aspect_ratio.is_finite()) {
            return Err(Error::InvalidCurve(format!(
                "aspect ratio must be >= 1, got {}",
                self.aspect_ratio
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct BoundaryMesh {
    nodes: Vec<Point>,
    lengths: Vec<f64>,
    tangents: Vec<Point>,
    normals: Vec<Point>,
    arclength: Vec<f64>,
    perimeter: f64,
    id: u64,
}

fn sub(a: Point, b: Point) -> Point {
    [a[0] - b[0], a[1] - b[1]]
}

fn cross(a: Point, b: Point) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

fn dot(a: Point, b: Point) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

fn signed_area(nodes: &[Point]) -> f64 {
    let n = nodes.len();
    0.5 * (0..n)
        .map(|i| cross(nodes[i], nodes[(i + 1) % n]))
        .sum::<f64>()
}

impl BoundaryMesh {
    /// Builds a mesh from loop nodes; clockwise input is reversed so that
    /// node 0 is kept and the loop runs counter-clockwise.
    pub fn from_nodes(mut nodes: Vec<Point>) -> Result<Self> {
        let n = nodes.len();
        if n < 3 {
            return Err(Error::InvalidMesh(format!(
                "a closed loop needs at least 3 nodes, got {n}"
            )));
        }
        if nodes.iter().any(|p| !p[0].is_finite() || !p[1].is_finite()) {
            return Err(Error::InvalidMesh("non-finite node coordinate".into()));
        }
        if signed_area(&nodes) < 0.0 {
            nodes[1..].reverse();
        }
        let mut lengths = Vec::with_capacity(n);
        let mut tangents = Vec::with_capacity(n);
        let mut normals = Vec::with_capacity(n);
        for e in 0..n {
            let d = sub(nodes[(e + 1) % n], nodes[e]);
            let h = d[0].hypot(d[1]);
            if !(h > 0.0) {
                return Err(Error::InvalidMesh(format!("segment {e} has zero length")));
            }
            let t = [d[0] / h, d[1] / h];
            lengths.push(h);
            tangents.push(t);
            normals.push([t[1], -t[0]]);
        }
        let mut arclength = Vec::with_capacity(n + 1);
        let mut s = 0.0;
        arclength.push(0.0);
        for h in &lengths {
            s += h;
            arclength.push(s);
        }
        let mut hasher = DefaultHasher::new();
        for p in &nodes {
            p[0].to_bits().hash(&mut hasher);
            p[1].to_bits().hash(&mut hasher);
        }
        let mesh = BoundaryMesh {
            nodes,
            lengths,
            tangents,
            normals,
            arclength,
            perimeter: s,
            id: hasher.finish(),
        };
        if let Some((a, b)) = mesh.find_self_intersection() {
            return Err(Error::InvalidMesh(format!(
                "segments {a} and {b} intersect"
            )));
        }
        Ok(mesh)
    }

    /// Regular polygon with n nodes inscribed in a circle of the given radius.
    pub fn regular_polygon(n: usize, radius: f64) -> Result<Self> {
        let nodes = (0..n)
            .map(|i| {
                let t = 2.0 * PI * i as f64 / n as f64;
                [radius * t.cos(), radius * t.sin()]
            })
            .collect();
        Self::from_nodes(nodes)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[Point] {
        &self.nodes
    }

    pub fn node(&self, i: usize) -> Point {
        self.nodes[i]
    }

    /// Node indices (start, end) of segment e.
    pub fn segment(&self, e: usize) -> (usize, usize) {
        (e, (e + 1) % self.len())
    }

    pub fn segment_length(&self, e: usize) -> f64 {
        self.lengths[e]
    }

    pub fn segment_lengths(&self) -> &[f64] {
        &self.lengths
    }

    pub fn tangent(&self, e: usize) -> Point {
        self.tangents[e]
    }

    /// Outward unit normal of segment e.
    pub fn normal(&self, e: usize) -> Point {
        self.normals[e]
    }

    pub fn normals(&self) -> &[Point] {
        &self.normals
    }

    pub fn perimeter(&self) -> f64 {
        self.perimeter
    }

    /// Arclength coordinate of node i, measured from node 0.
    pub fn node_arclength(&self, i: usize) -> f64 {
        self.arclength[i]
    }

    /// Radius of the equi-perimeter circle, perimeter / 2π.
    pub fn curvature_radius_avg(&self) -> f64 {
        self.perimeter / (2.0 * PI)
    }

    /// Hash of the node coordinates; equal meshes share an id.
    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn max_segment_length(&self) -> f64 {
        self.lengths.iter().cloned().fold(0.0, f64::max)
    }

    /// Point on segment e at local parameter u in [0, 1].
    pub fn point_on_segment(&self, e: usize, u: f64) -> Point {
        let a = self.nodes[e];
        let t = self.tangents[e];
        let h = self.lengths[e];
        [a[0] + u * h * t[0], a[1] + u * h * t[1]]
    }

    /// Segment index and local parameter for the arclength coordinate s.
    pub fn locate(&self, s: f64) -> (usize, f64) {
        let s = s.rem_euclid(self.perimeter);
        let e = match self
            .arclength
            .binary_search_by(|v| v.partial_cmp(&s).unwrap())
        {
            Ok(i) => i.min(self.len() - 1),
            Err(i) => i - 1,
        };
        let u = ((s - self.arclength[e]) / self.lengths[e]).clamp(0.0, 1.0);
        (e, u)
    }

    pub fn point_at(&self, s: f64) -> Point {
        let (e, u) = self.locate(s);
        self.point_on_segment(e, u)
    }

    pub fn centroid(&self) -> Point {
        let a = signed_area(&self.nodes);
        let n = self.len();
        let mut c = [0.0, 0.0];
        for i in 0..n {
            let p = self.nodes[i];
            let q = self.nodes[(i + 1) % n];
            let w = cross(p, q);
            c[0] += (p[0] + q[0]) * w;
            c[1] += (p[1] + q[1]) * w;
        }
        [c[0] / (6.0 * a), c[1] / (6.0 * a)]
    }

    pub fn area(&self) -> f64 {
        signed_area(&self.nodes)
    }

    /// (min corner, max corner).
    pub fn bounding_box(&self) -> (Point, Point) {
        let mut lo = [f64::INFINITY; 2];
        let mut hi = [f64::NEG_INFINITY; 2];
        for p in &self.nodes {
            for d in 0..2 {
                lo[d] = lo[d].min(p[d]);
                hi[d] = hi[d].max(p[d]);
            }
        }
        (lo, hi)
    }

    /// Winding number of the loop around p.
    pub fn winding_number(&self, p: Point) -> i64 {
        let n = self.len();
        let mut total = 0.0;
        for i in 0..n {
            let a = sub(self.nodes[i], p);
            let b = sub(self.nodes[(i + 1) % n], p);
            total += cross(a, b).atan2(dot(a, b));
        }
        (total / (2.0 * PI)).round() as i64
    }

    /// Even-odd point-in-polygon test.
    pub fn contains(&self, p: Point) -> bool {
        let n = self.len();
        let mut inside = false;
        let mut j = n - 1;
        for i in 0..n {
            let (a, b) = (self.nodes[i], self.nodes[j]);
            if (a[1] > p[1]) != (b[1] > p[1]) {
                let x = (b[0] - a[0]) * (p[1] - a[1]) / (b[1] - a[1]) + a[0];
                if p[0] < x {
                    inside = !inside;
                }
            }
            j = i;
        }
        inside
    }

    /// Distance from p to the polyline and the nearest segment.
    pub fn distance_to_boundary(&self, p: Point) -> (f64, usize) {
        let mut best = (f64::INFINITY, 0);
        for e in 0..self.len() {
            let a = self.nodes[e];
            let d = sub(p, a);
            let u = (dot(d, self.tangents[e]) / self.lengths[e]).clamp(0.0, 1.0);
            let q = self.point_on_segment(e, u);
            let r = (p[0] - q[0]).hypot(p[1] - q[1]);
            if r < best.0 {
                best = (r, e);
            }
        }
        best
    }

    /// Turning angle at each node (radians, positive for left turns).
    pub fn exterior_angles(&self) -> Vec<f64> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let a = self.tangents[(i + n - 1) % n];
                let b = self.tangents[i];
                cross(a, b).atan2(dot(a, b))
            })
            .collect()
    }

    /// First pair of non-adjacent segments that intersect, if any.
    pub fn find_self_intersection(&self) -> Option<(usize, usize)> {
        let n = self.len();
        let mut order: Vec<usize> = (0..n).collect();
        let xmin = |e: usize| self.nodes[e][0].min(self.nodes[(e + 1) % n][0]);
        let xmax = |e: usize| self.nodes[e][0].max(self.nodes[(e + 1) % n][0]);
        order.sort_by(|&a, &b| xmin(a).partial_cmp(&xmin(b)).unwrap());
        let mut active: Vec<usize> = Vec::new();
        for &e in &order {
            let x0 = xmin(e);
            active.retain(|&f| xmax(f) >= x0);
            for &f in &active {
                let adjacent = (e + 1) % n == f || (f + 1) % n == e || e == f;
                if !adjacent && self.segments_intersect(e, f) {
                    return Some((e.min(f), e.max(f)));
                }
            }
            active.push(e);
        }
        None
    }

    fn segments_intersect(&self, e: usize, f: usize) -> bool {
        let n = self.len();
        let (p1, p2) = (self.nodes[e], self.nodes[(e + 1) % n]);
        let (q1, q2) = (self.nodes[f], self.nodes[(f + 1) % n]);
        let d1 = cross(sub(p2, p1), sub(q1, p1));
        let d2 = cross(sub(p2, p1), sub(q2, p1));
        let d3 = cross(sub(q2, q1), sub(p1, q1));
        let d4 = cross(sub(q2, q1), sub(p2, q1));
        (d1 * d2 <= 0.0)
            && (d3 * d4 <= 0.0)
            && !(d1 == 0.0 && d2 == 0.0 && !self.collinear_overlap(p1, p2, q1, q2))
    }

    fn collinear_overlap(&self, p1: Point, p2: Point, q1: Point, q2: Point) -> bool {
        let t = sub(p2, p1);
        let (a, b) = (dot(sub(q1, p1), t), dot(sub(q2, p1), t));
        let l = dot(t, t);
        a.max(b) >= 0.0 && a.min(b) <= l
    }

    /// Same shape scaled by s about the origin.
    pub fn scaled(&self, s: f64) -> Result<Self> {
        Self::from_nodes(self.nodes.iter().map(|p| [p[0] * s, p[1] * s]).collect())
    }

    /// Text export: `perimeter n_nodes` header then `x y` per node.
    pub fn write_text<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "{:.17e} {}", self.perimeter, self.len())?;
        for p in &self.nodes {
            writeln!(w, "{:.17e} {:.17e}", p[0], p[1])?;
        }
        Ok(())
    }

    pub fn read_text<R: BufRead>(r: R) -> Result<Self> {
        let mut lines = r.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::InvalidMesh("empty mesh file".into()))??;
        let mut it = header.split_whitespace();
        let bad = |what: &str| Error::InvalidMesh(format!("malformed {what}"));
        let _perimeter: f64 = it
            .next()
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| bad("header"))?;
        let n: usize = it
            .next()
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| bad("header"))?;
        let mut nodes = Vec::with_capacity(n);
        for line in lines {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let mut xy = line.split_whitespace().map(|v| v.parse::<f64>());
            match (xy.next(), xy.next()) {
                (Some(Ok(x)), Some(Ok(y))) => nodes.push([x, y]),
                _ => return Err(bad("node line")),
            }
        }
        if nodes.len() != n {
            return Err(Error::InvalidMesh(format!(
                "header announces {n} nodes, found {}",
                nodes.len()
            )));
        }
        Self::from_nodes(nodes)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let f = std::fs::File::create(path)?;
        self.write_text(std::io::BufWriter::new(f))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let f = std::fs::File::open(path)?;
        Self::read_text(std::io::BufReader::new(f))
    }
}

/// Radius of the equi-perimeter circle of the mesh.
pub fn average_curvature_radius(mesh: &BoundaryMesh) -> f64 {
    mesh.curvature_radius_avg()
}

/// Value of the hat function of `node_index` at arclength s.
pub fn hat_basis_eval(mesh: &BoundaryMesh, node_index: usize, arclength: f64) -> Result<f64> {
    let n = mesh.len();
    if node_index >= n {
        return Err(Error::IndexOutOfRange {
            index: node_index,
            len: n,
        });
    }
    if !(0.0..=mesh.perimeter()).contains(&arclength) {
        return Err(Error::Domain(format!(
            "arclength {arclength} outside [0, {}]",
            mesh.perimeter()
        )));
    }
    let (e, u) = mesh.locate(arclength);
    Ok(if e == node_index {
        1.0 - u
    } else if (e + 1) % n == node_index {
        u
    } else {
        0.0
    })
}

fn ellipse_speed(a: f64, b: f64, t: f64) -> f64 {
    (a * t.sin()).hypot(b * t.cos())
}

/// Perimeter of the ellipse with semi-axes a, b by the periodic trapezoidal rule.
pub fn ellipse_perimeter(a: f64, b: f64) -> f64 {
    let m = 4096;
    let dt = 2.0 * PI / m as f64;
    (0..m)
        .map(|i| ellipse_speed(a, b, i as f64 * dt))
        .sum::<f64>()
        * dt
}

/// Semi-axes (a, b) with a / b = aspect and the given perimeter (secant iteration).
pub fn ellipse_semi_axes(perimeter: f64, aspect: f64) -> (f64, f64) {
    let f = |a: f64| ellipse_perimeter(a, a / aspect) - perimeter;
    let (mut x0, mut x1) = (perimeter / (2.0 * PI), perimeter / (2.0 * PI) * 1.1);
    let (mut f0, mut f1) = (f(x0), f(x1));
    for _ in 0..50 {
        if f1 == f0 {
            break;
        }
        let x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
        x0 = x1;
        f0 = f1;
        x1 = x2;
        f1 = f(x1);
        if f1.abs() <= 1e-15 * perimeter {
            break;
        }
    }
    (x1, x1 / aspect)
}

fn ellipse_nodes(perimeter: f64, aspect: f64, n: usize) -> Vec<Point> {
    let (a, b) = ellipse_semi_axes(perimeter, aspect);
    let panels = (16 * n).max(2048);
    let dt = 2.0 * PI / panels as f64;
    let rule = gauss_legendre(12);
    let panel_len = |t0: f64, t1: f64| -> f64 {
        rule.iter()
            .map(|(x, w)| w * ellipse_speed(a, b, t0 + x * (t1 - t0)))
            .sum::<f64>()
            * (t1 - t0)
    };
    let mut cum = Vec::with_capacity(panels + 1);
    cum.push(0.0);
    for k in 0..panels {
        let s = cum[k] + panel_len(k as f64 * dt, (k + 1) as f64 * dt);
        cum.push(s);
    }
    let total = cum[panels];
    let params: Vec<f64> = (0..n)
        .map(|i| {
            let target = total * i as f64 / n as f64;
            let k = match cum.binary_search_by(|v| v.partial_cmp(&target).unwrap()) {
                Ok(k) => k.min(panels - 1),
                Err(k) => k - 1,
            };
            let t0 = k as f64 * dt;
            let mut t = t0 + dt * (target - cum[k]) / (cum[k + 1] - cum[k]);
            for _ in 0..20 {
                let g = cum[k] + panel_len(t0, t) - target;
                let dtn = g / ellipse_speed(a, b, t);
                t -= dtn;
                if dtn.abs() < 1e-15 {
                    break;
                }
            }
            t
        })
        .collect();
    equalize_chords(
        params,
        |t| [a * t.cos(), b * t.sin()],
        |t| ellipse_speed(a, b, t),
    )
    .into_iter()
    .map(|t| [a * t.cos(), b * t.sin()])
    .collect()
}

/// Moves nodes along a closed curve r(t), t ∈ [0, 2π), until all chords are
/// equal; starts from near-uniform parameters and keeps node 0 fixed.
fn equalize_chords(
    mut t: Vec<f64>,
    r: impl Fn(f64) -> Point,
    speed: impl Fn(f64) -> f64,
) -> Vec<f64> {
    let n = t.len();
    for _ in 0..100 {
        let pts: Vec<Point> = t.iter().map(|&x| r(x)).collect();
        let chords: Vec<f64> = (0..n)
            .map(|i| {
                let d = sub(pts[(i + 1) % n], pts[i]);
                d[0].hypot(d[1])
            })
            .collect();
        let mean = chords.iter().sum::<f64>() / n as f64;
        let mut cum = 0.0;
        let mut worst: f64 = 0.0;
        for i in 1..n {
            cum += chords[i - 1];
            let excess = cum - i as f64 * mean;
            worst = worst.max(excess.abs());
            t[i] -= excess / speed(t[i]);
        }
        if worst < 1e-14 * mean * n as f64 {
            break;
        }
    }
    t
}

/// n nodes with equal chords along a closed curve r(t), t ∈ [t0, t0 + 2π],
/// node 0 at r(t0): march n − 1 chords of trial length c, then bisect on c
/// until the closing chord has the same length.
fn equal_chord_nodes(r: impl Fn(f64) -> Point, t0: f64, n: usize) -> Vec<Point> {
    let dist = |p: Point, q: Point| {
        let d = sub(q, p);
        d[0].hypot(d[1])
    };
    let end = t0 + 2.0 * PI;
    let close = r(end);
    // Some(closing chord − c), or None when the loop closes early
    let march = |c: f64, pts: &mut Vec<Point>| -> Option<f64> {
        pts.clear();
        let mut t = t0;
        pts.push(r(t));
        for _ in 1..n {
            let p = r(t);
            let (mut lo, mut hi) = (t, end);
            for _ in 0..64 {
                let m = 0.5 * (lo + hi);
                if dist(p, r(m)) < c {
                    lo = m;
                } else {
                    hi = m;
                }
            }
            t = 0.5 * (lo + hi);
            if end - t < 1e-12 {
                return None;
            }
            pts.push(r(t));
        }
        Some(dist(r(t), close) - c)
    };
    let mean: f64 = (0..n)
        .map(|i| {
            dist(
                r(t0 + 2.0 * PI * i as f64 / n as f64),
                r(t0 + 2.0 * PI * (i + 1) as f64 / n as f64),
            )
        })
        .sum::<f64>()
        / n as f64;
    let (mut lo, mut hi) = (0.25 * mean, 1.5 * mean);
    let mut pts = Vec::with_capacity(n);
    for _ in 0..80 {
        let m = 0.5 * (lo + hi);
        match march(m, &mut pts) {
            Some(gap) if gap > 0.0 => lo = m,
            _ => hi = m,
        }
    }
    march(lo, &mut pts);
    pts
}

/// Joukowsky image of the source circle, parametrized by the preimage angle.
fn airfoil_point(t: f64) -> Point {
    let (mx, my) = (JOUKOWSKY_CENTER[0], JOUKOWSKY_CENTER[1]);
    let radius = (1.0 - mx).hypot(my);
    let (zx, zy) = (mx + radius * t.cos(), my + radius * t.sin());
    let r2 = zx * zx + zy * zy;
    [zx + zx / r2, zy - zy / r2]
}

fn airfoil_nodes(perimeter: f64, n: usize) -> Vec<Point> {
    let (mx, my) = (JOUKOWSKY_CENTER[0], JOUKOWSKY_CENTER[1]);
    let theta0 = (-my).atan2(1.0 - mx);
    let mut nodes = equal_chord_nodes(airfoil_point, theta0, n);
    let poly: f64 = (0..n)
        .map(|i| {
            let d = sub(nodes[(i + 1) % n], nodes[i]);
            d[0].hypot(d[1])
        })
        .sum();
    let s = perimeter / poly;
    for p in &mut nodes {
        p[0] *= s;
        p[1] *= s;
    }
    nodes
}

/// Discretizes a curve specification into a counter-clockwise polygon.
pub fn build_mesh(spec: &CurveSpec) -> Result<BoundaryMesh> {
    spec.validate()?;
    let n = spec.n_elements;
    let nodes = match spec.kind {
        CurveKind::Circle => {
            return BoundaryMesh::regular_polygon(n, spec.perimeter / (2.0 * PI));
        }
        CurveKind::Ellipse => ellipse_nodes(spec.perimeter, spec.aspect_ratio, n),
        CurveKind::Airfoil => airfoil_nodes(spec.perimeter, n),
    };
    BoundaryMesh::from_nodes(nodes).map_err(|e| match e {
        Error::InvalidMesh(m) => Error::InvalidCurve(format!("curve is not simple: {m}")),
        other => other,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_too_few_elements() {
        assert!(matches!(
            build_mesh(&CurveSpec::circle(1.0, 7)),
            Err(Error::InvalidCurve(_))
        ));
        assert!(matches!(
            build_mesh(&CurveSpec::ellipse(1.0, 0.5, 64)),
            Err(Error::InvalidCurve(_))
        ));
    }

    #[test]
    fn figure_eight_is_rejected() {
        let nodes = vec![[0.0, 0.0], [1.0, 1.0], [1.0, 0.0], [0.0, 1.0]];
        assert!(matches!(
            BoundaryMesh::from_nodes(nodes),
            Err(Error::InvalidMesh(_))
        ));
    }

    #[test]
    fn clockwise_input_is_reoriented() {
        let cw = vec![[0.0, 0.0], [0.0, 1.0], [1.0, 1.0], [1.0, 0.0]];
        let m = BoundaryMesh::from_nodes(cw).unwrap();
        assert!(m.area() > 0.0);
        assert_eq!(m.node(0), [0.0, 0.0]);
        assert_eq!(m.node(1), [1.0, 0.0]);
    }

    #[test]
    fn point_location_round_trip() {
        let m = build_mesh(&CurveSpec::ellipse(2.0 * PI, 1.5, 40)).unwrap();
        for i in 0..m.len() {
            let (e, u) = m.locate(m.node_arclength(i) + 0.3 * m.segment_length(i));
            assert_eq!(e, i);
            assert!((u - 0.3).abs() < 1e-12);
        }
    }

    #[test]
    fn ellipse_semi_axes_recover_perimeter() {
        let (a, b) = ellipse_semi_axes(2.0 * PI, 1.5);
        assert!((a / b - 1.5).abs() < 1e-12);
        assert!((ellipse_perimeter(a, b) - 2.0 * PI).abs() < 1e-12);
    }
}
