//! Galerkin matrices of the Helmholtz boundary operators on P1 hat functions.
//!
//! Kernels, with G = -(j/4) H0^(2)(kR) and F = (jk/4) H1^(2)(kR)/R:
//!
//! | kind                 | kernel                         |
//! |----------------------|--------------------------------|
//! | `SingleLayer`        | G                              |
//! | `DoubleLayer`        | ∂G/∂n' = -F (r - r')·n'        |
//! | `AdjointDoubleLayer` | ∂G/∂n  =  F (r - r')·n         |
//! | `Hypersingular`      | Maue form of -∂²G/∂n∂n'        |
//!
//! Self pairs use a log-weighted rule in the difference variable, touching
//! pairs a Duffy split, and separated pairs Gauss rules whose order follows
//! from the distance-to-length ratio and the phase change along the segment.

use std::io::{Read, Write};
use std::path::Path;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{BoundaryMesh, Point};
use crate::linalg::GramMatrix;
use crate::quadrature::{gauss_legendre, log_gauss};
use crate::specfun::{grad_log_split, green_and_grad, green_log_split};

const ZERO: C = C::new(0.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OperatorKind {
    SingleLayer,
    DoubleLayer,
    AdjointDoubleLayer,
    Hypersingular,
    Gram,
}

impl OperatorKind {
    pub fn tag(self) -> u32 {
        match self {
            OperatorKind::SingleLayer => 1,
            OperatorKind::DoubleLayer => 2,
            OperatorKind::AdjointDoubleLayer => 3,
            OperatorKind::Hypersingular => 4,
            OperatorKind::Gram => 5,
        }
    }

    pub fn from_tag(tag: u32) -> Option<Self> {
        Some(match tag {
            1 => OperatorKind::SingleLayer,
            2 => OperatorKind::DoubleLayer,
            3 => OperatorKind::AdjointDoubleLayer,
            4 => OperatorKind::Hypersingular,
            5 => OperatorKind::Gram,
            _ => return None,
        })
    }
}

/// Dense Galerkin matrix, rows indexed by test hats, columns by trial hats.
#[derive(Debug, Clone)]
pub struct OperatorMatrix {
    pub kind: OperatorKind,
    pub wavenumber: C,
    pub entries: DMatrix<C>,
    pub mesh_id: u64,
}

impl OperatorMatrix {
    pub fn size(&self) -> usize {
        self.entries.nrows()
    }

    pub fn matvec(&self, x: &DVector<C>) -> Result<DVector<C>> {
        if x.len() != self.size() {
            return Err(Error::DimensionMismatch {
                expected: self.size(),
                got: x.len(),
            });
        }
        Ok(&self.entries * x)
    }

    /// Little-endian dump: u32 N, u32 kind tag, f32 Re k, f32 Im k, then the
    /// entries row-major as (f64 re, f64 im).
    pub fn write_binary<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(&(self.size() as u32).to_le_bytes())?;
        w.write_all(&self.kind.tag().to_le_bytes())?;
        w.write_all(&(self.wavenumber.re as f32).to_le_bytes())?;
        w.write_all(&(self.wavenumber.im as f32).to_le_bytes())?;
        let mut buf = Vec::with_capacity(self.entries.len() * 16);
        for v in self.entries.transpose().iter() {
            buf.extend_from_slice(&v.re.to_le_bytes());
            buf.extend_from_slice(&v.im.to_le_bytes());
        }
        w.write_all(&buf)?;
        Ok(())
    }

    pub fn read_binary<R: Read>(mut r: R) -> Result<Self> {
        let mut head = [0u8; 16];
        r.read_exact(&mut head)?;
        let word = |i: usize| [head[i], head[i + 1], head[i + 2], head[i + 3]];
        let n = u32::from_le_bytes(word(0)) as usize;
        let kind = OperatorKind::from_tag(u32::from_le_bytes(word(4)))
            .ok_or_else(|| Error::Config("unknown operator tag in dump".into()))?;
        let k = C::new(
            f32::from_le_bytes(word(8)) as f64,
            f32::from_le_bytes(word(12)) as f64,
        );
        let mut body = vec![0u8; n * n * 16];
        r.read_exact(&mut body)?;
        let vals: Vec<C> = body
            .chunks_exact(16)
            .map(|c| {
                let re = f64::from_le_bytes(c[..8].try_into().unwrap());
                let im = f64::from_le_bytes(c[8..].try_into().unwrap());
                C::new(re, im)
            })
            .collect();
        Ok(OperatorMatrix {
            kind,
            wavenumber: k,
            entries: DMatrix::from_row_slice(n, n, &vals),
            mesh_id: 0,
        })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        self.write_binary(std::io::BufWriter::new(std::fs::File::create(path)?))
    }
}

/// Local 2x2 blocks of one test/trial segment pair, indexed [test hat][trial hat].
#[derive(Debug, Clone, Copy)]
struct Block {
    s: [[C; 2]; 2],
    d: [[C; 2]; 2],
    dt: [[C; 2]; 2],
    n: [[C; 2]; 2],
}

impl Default for Block {
    fn default() -> Self {
        Block {
            s: [[ZERO; 2]; 2],
            d: [[ZERO; 2]; 2],
            dt: [[ZERO; 2]; 2],
            n: [[ZERO; 2]; 2],
        }
    }
}

impl Block {
    fn get(&self, kind: OperatorKind) -> &[[C; 2]; 2] {
        match kind {
            OperatorKind::SingleLayer => &self.s,
            OperatorKind::DoubleLayer => &self.d,
            OperatorKind::AdjointDoubleLayer => &self.dt,
            OperatorKind::Hypersingular => &self.n,
            OperatorKind::Gram => unreachable!("Gram entries are exact"),
        }
    }

    /// Entry (a, b) of the block for the swapped pair (trial as test).
    fn mirrored(&self, kind: OperatorKind, a: usize, b: usize) -> C {
        match kind {
            OperatorKind::SingleLayer => self.s[b][a],
            OperatorKind::Hypersingular => self.n[b][a],
            OperatorKind::DoubleLayer => self.dt[b][a],
            OperatorKind::AdjointDoubleLayer => self.d[b][a],
            OperatorKind::Gram => unreachable!(),
        }
    }

    fn max_abs(&self, kind: OperatorKind) -> f64 {
        self.get(kind)
            .iter()
            .flatten()
            .map(|v| v.norm())
            .fold(0.0, f64::max)
    }

    fn max_diff(&self, other: &Block, kind: OperatorKind) -> f64 {
        let (a, b) = (self.get(kind), other.get(kind));
        (0..4)
            .map(|i| (a[i / 2][i % 2] - b[i / 2][i % 2]).norm())
            .fold(0.0, f64::max)
    }

    /// Adds one weighted node pair. `g`, `f` are the (possibly split) kernel
    /// values, `rn_f` = (r - r')·n', `rn_e` = (r - r')·n.
    #[inline(always)]
    #[allow(clippy::too_many_arguments)]
    fn add(
        &mut self,
        w: f64,
        g: C,
        f: C,
        pe: [f64; 2],
        pf: [f64; 2],
        rn_e: f64,
        rn_f: f64,
        curl: [[f64; 2]; 2],
        k2nn: C,
    ) {
        let gw = g * w;
        let dk = -f * (w * rn_f);
        let dtk = f * (w * rn_e);
        for a in 0..2 {
            for b in 0..2 {
                let pp = pe[a] * pf[b];
                self.s[a][b] += gw * pp;
                self.d[a][b] += dk * pp;
                self.dt[a][b] += dtk * pp;
                self.n[a][b] += gw * (curl[a][b] - k2nn * pp);
            }
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Seg {
    a: Point,
    t: Point,
    n: Point,
    h: f64,
}

/// Part [u0, u1] of a segment in its local parameter.
#[derive(Debug, Clone, Copy)]
struct Piece {
    seg: usize,
    u0: f64,
    u1: f64,
}

#[inline]
fn dot(a: Point, b: Point) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

fn point_segment_distance(p: Point, a: Point, b: Point) -> f64 {
    let ab = [b[0] - a[0], b[1] - a[1]];
    let ap = [p[0] - a[0], p[1] - a[1]];
    let t = (dot(ap, ab) / dot(ab, ab)).clamp(0.0, 1.0);
    let d = [ap[0] - t * ab[0], ap[1] - t * ab[1]];
    dot(d, d).sqrt()
}

/// Orders are capped here; subdivision keeps separated pairs below it.
pub const MAX_PAIR_ORDER: usize = 32;
pub const MIN_PAIR_ORDER: usize = 6;
const MAX_SUBDIVISION_DEPTH: u32 = 12;
/// ln(1e10) digits target for separated pairs.
const FAR_TARGET_LN: f64 = 23.0;
const FAR_TARGET: f64 = 1e-10;
const NEAR_ORDER: usize = 8;
const NEAR_ORDER_REFINED: usize = 16;
/// Relative self-check tolerance between regular and doubled orders.
pub const SELF_CHECK_TOL: f64 = 1e-8;

/// Gauss-Legendre error constant on [-1, 1]: 2^(2n+1) (n!)^4 / ((2n+1) ((2n)!)^3).
fn gauss_error_constant(n: usize) -> f64 {
    let lnf = |m: usize| (1..=m).map(|i| (i as f64).ln()).sum::<f64>();
    let ln = (2 * n + 1) as f64 * std::f64::consts::LN_2 + 4.0 * lnf(n)
        - ((2 * n + 1) as f64).ln()
        - 3.0 * lnf(2 * n);
    ln.exp()
}

/// Gauss order for a segment at distance `ratio`·h from the singularity with
/// phase change `kh` along it.
pub fn far_order(ratio: f64, kh: f64) -> usize {
    let z = 1.0 + 2.0 * ratio.max(0.0);
    let rho = z + (z * z - 1.0).sqrt();
    let geometric = if rho > 1.0 {
        (FAR_TARGET_LN / (2.0 * rho.ln())).ceil() as usize
    } else {
        MAX_PAIR_ORDER
    };
    let alpha = 0.5 * kh;
    let mut osc = 2;
    while osc < MAX_PAIR_ORDER {
        let m = osc as i32;
        let deriv = alpha.powi(2 * m) + osc as f64 * alpha.powi(2 * m - 1);
        if 0.5 * gauss_error_constant(osc) * deriv <= FAR_TARGET {
            break;
        }
        osc += 1;
    }
    geometric.max(osc).clamp(MIN_PAIR_ORDER, MAX_PAIR_ORDER)
}

struct Assembler {
    k: C,
    k2: C,
    segs: Vec<Seg>,
}

impl Assembler {
    fn new(mesh: &BoundaryMesh, k: C) -> Self {
        let segs = (0..mesh.len())
            .map(|e| Seg {
                a: mesh.node(e),
                t: mesh.tangent(e),
                n: mesh.normal(e),
                h: mesh.segment_length(e),
            })
            .collect();
        Assembler { k, k2: k * k, segs }
    }

    fn len(&self) -> usize {
        self.segs.len()
    }

    fn curl(&self, e: usize, f: usize) -> [[f64; 2]; 2] {
        let (he, hf) = (self.segs[e].h, self.segs[f].h);
        let de = [-1.0 / he, 1.0 / he];
        let df = [-1.0 / hf, 1.0 / hf];
        [
            [de[0] * df[0], de[0] * df[1]],
            [de[1] * df[0], de[1] * df[1]],
        ]
    }

    fn block(&self, e: usize, f: usize, refine: bool) -> Block {
        let n = self.len();
        if e == f {
            self.self_block(e, refine)
        } else if (f + 1) % n == e {
            self.touching_block(e, f, false, refine)
        } else if (e + 1) % n == f {
            self.touching_block(e, f, true, refine)
        } else {
            let mut b = Block::default();
            self.separated(
                Piece {
                    seg: e,
                    u0: 0.0,
                    u1: 1.0,
                },
                Piece {
                    seg: f,
                    u0: 0.0,
                    u1: 1.0,
                },
                0,
                refine,
                &mut b,
            );
            b
        }
    }

    fn self_block(&self, e: usize, refine: bool) -> Block {
        let sg = self.segs[e];
        let h = sg.h;
        let k = self.k;
        let curl = self.curl(e, e);
        let k2nn = self.k2;
        let order = if refine {
            NEAR_ORDER_REFINED
        } else {
            NEAR_ORDER
        };
        let gl = gauss_legendre(order);
        let lnh = h.ln();
        let mut out = Block::default();
        // smooth remainder L ln h + M
        for (x, wx) in gl.iter() {
            for (y, wy) in gl.iter() {
                let r = h * (x - y).abs();
                let (l, m) = green_log_split(k, r);
                out.add(
                    h * h * wx * wy,
                    l * lnh + m,
                    ZERO,
                    [1.0 - x, x],
                    [1.0 - y, y],
                    0.0,
                    0.0,
                    curl,
                    k2nn,
                );
            }
        }
        // L ln|u - u'|: w = |u - u'| with the other variable integrated exactly
        let lg = log_gauss(order);
        let g2 = gauss_legendre(2);
        for (w, ww) in lg.iter() {
            let (l, _) = green_log_split(k, h * w);
            let span = 1.0 - w;
            for (t, wt) in g2.iter() {
                let tau = t * span;
                for (u, v) in [(tau + w, tau), (tau, tau + w)] {
                    out.add(
                        -h * h * ww * wt * span,
                        l,
                        ZERO,
                        [1.0 - u, u],
                        [1.0 - v, v],
                        0.0,
                        0.0,
                        curl,
                        k2nn,
                    );
                }
            }
        }
        out
    }

    /// Segments sharing one node. `corner_at_end_of_e`: the shared node is the
    /// end of e and the start of f; otherwise the start of e and the end of f.
    fn touching_block(&self, e: usize, f: usize, corner_at_end_of_e: bool, refine: bool) -> Block {
        let (se, sf) = (self.segs[e], self.segs[f]);
        let (he, hf) = (se.h, sf.h);
        let k = self.k;
        let curl = self.curl(e, f);
        let k2nn = self.k2 * dot(se.n, sf.n);
        // directions pointing away from the corner
        let (ue, uf, sign_e, sign_f) = if corner_at_end_of_e {
            ([-se.t[0], -se.t[1]], sf.t, -1.0, 1.0)
        } else {
            (se.t, [-sf.t[0], -sf.t[1]], 1.0, -1.0)
        };
        let sigma_e = |x: f64| if sign_e > 0.0 { x } else { 1.0 - x };
        let sigma_f = |y: f64| if sign_f > 0.0 { y } else { 1.0 - y };
        let order = if refine {
            NEAR_ORDER_REFINED
        } else {
            NEAR_ORDER
        };
        let gl = gauss_legendre(order);
        let lg = log_gauss(order);
        let mut out = Block::default();
        let cos = dot(ue, uf);
        for tri in 0..2 {
            // tri 0: x = ρ, y = ρv; tri 1: y = ρ, x = ρv
            let (ca, cb) = if tri == 0 { (he, hf) } else { (hf, he) };
            // q(v) vanishes at v = (ca/cb) e^{±iθ}; grade toward its nearest real point
            let (re, im) = (ca / cb * cos, ca / cb * (1.0 - cos * cos).max(0.0).sqrt());
            let center = re.clamp(0.0, 1.0);
            let panels = v_panels(center, (re - center).hypot(im));
            for (v0, v1) in panels {
                for (vn, wvn) in gl.iter() {
                    let v = v0 + (v1 - v0) * vn;
                    let wv = wvn * (v1 - v0);
                    let (xe, yf) = if tri == 0 { (1.0, v) } else { (v, 1.0) };
                    let q = [
                        xe * he * ue[0] - yf * hf * uf[0],
                        xe * he * ue[1] - yf * hf * uf[1],
                    ];
                    let qn = dot(q, q).sqrt();
                    let lnq = qn.ln();
                    let qne = dot(q, se.n);
                    let qnf = dot(q, sf.n);
                    let node = |rho: f64, w: f64, log_part: bool, out: &mut Block| {
                        let r = rho * qn;
                        let (l, m) = green_log_split(k, r);
                        let (l1, m1) = grad_log_split(k, r);
                        let (g, fk) = if log_part {
                            (l, l1)
                        } else {
                            (l * lnq + m, l1 * lnq + m1)
                        };
                        let (x, y) = (rho * xe, rho * yf);
                        let (a, b) = (sigma_e(x), sigma_f(y));
                        out.add(
                            w * he * hf * rho,
                            g,
                            fk,
                            [1.0 - a, a],
                            [1.0 - b, b],
                            rho * qne,
                            rho * qnf,
                            curl,
                            k2nn,
                        );
                    };
                    for (rho, wr) in gl.iter() {
                        node(rho, wr * wv, false, &mut out);
                    }
                    for (rho, wr) in lg.iter() {
                        node(rho, -wr * wv, true, &mut out);
                    }
                }
            }
        }
        out
    }

    fn piece_point(&self, p: &Piece, u: f64) -> Point {
        let s = &self.segs[p.seg];
        [s.a[0] + u * s.h * s.t[0], s.a[1] + u * s.h * s.t[1]]
    }

    fn piece_distance(&self, p: &Piece, q: &Piece) -> f64 {
        let (a0, a1) = (self.piece_point(p, p.u0), self.piece_point(p, p.u1));
        let (b0, b1) = (self.piece_point(q, q.u0), self.piece_point(q, q.u1));
        point_segment_distance(a0, b0, b1)
            .min(point_segment_distance(a1, b0, b1))
            .min(point_segment_distance(b0, a0, a1))
            .min(point_segment_distance(b1, a0, a1))
    }

    fn separated(&self, pe: Piece, pf: Piece, depth: u32, refine: bool, out: &mut Block) {
        let (se, sf) = (self.segs[pe.seg], self.segs[pf.seg]);
        let le = se.h * (pe.u1 - pe.u0);
        let lf = sf.h * (pf.u1 - pf.u0);
        let d = self.piece_distance(&pe, &pf);
        if depth < MAX_SUBDIVISION_DEPTH && d < le.max(lf) {
            let split = |p: Piece| {
                let mid = 0.5 * (p.u0 + p.u1);
                (Piece { u1: mid, ..p }, Piece { u0: mid, ..p })
            };
            if le >= lf {
                let (a, b) = split(pe);
                self.separated(a, pf, depth + 1, refine, out);
                self.separated(b, pf, depth + 1, refine, out);
            } else {
                let (a, b) = split(pf);
                self.separated(pe, a, depth + 1, refine, out);
                self.separated(pe, b, depth + 1, refine, out);
            }
            return;
        }
        let kabs = self.k.norm();
        let scale = if refine { 2 } else { 1 };
        let ne = (far_order(d / le, kabs * le) * scale).min(2 * MAX_PAIR_ORDER);
        let nf = (far_order(d / lf, kabs * lf) * scale).min(2 * MAX_PAIR_ORDER);
        let (ge, gf) = (gauss_legendre(ne), gauss_legendre(nf));
        let curl = self.curl(pe.seg, pf.seg);
        let k2nn = self.k2 * dot(se.n, sf.n);
        let jac = le * lf;
        for (x, wx) in ge.iter() {
            let ue = pe.u0 + x * (pe.u1 - pe.u0);
            let r = self.piece_point(&pe, ue);
            for (y, wy) in gf.iter() {
                let uf = pf.u0 + y * (pf.u1 - pf.u0);
                let rp = self.piece_point(&pf, uf);
                let rv = [r[0] - rp[0], r[1] - rp[1]];
                let dist = dot(rv, rv).sqrt();
                let (g, fk) = green_and_grad(self.k, dist);
                out.add(
                    jac * wx * wy,
                    g,
                    fk,
                    [1.0 - ue, ue],
                    [1.0 - uf, uf],
                    dot(rv, se.n),
                    dot(rv, sf.n),
                    curl,
                    k2nn,
                );
            }
        }
    }

    fn is_separated(&self, e: usize, f: usize) -> bool {
        let n = self.len();
        e != f && (f + 1) % n != e && (e + 1) % n != f
    }

    /// Integrals of the absolute integrand, the scale against which
    /// cancelling separated pairs are judged.
    fn magnitude(&self, e: usize, f: usize) -> Magnitude {
        let (se, sf) = (self.segs[e], self.segs[f]);
        let rule = gauss_legendre(3);
        let mut m = Magnitude::default();
        for (x, wx) in rule.iter() {
            let r = [se.a[0] + x * se.h * se.t[0], se.a[1] + x * se.h * se.t[1]];
            for (y, wy) in rule.iter() {
                let rp = [sf.a[0] + y * sf.h * sf.t[0], sf.a[1] + y * sf.h * sf.t[1]];
                let rv = [r[0] - rp[0], r[1] - rp[1]];
                let dist = dot(rv, rv).sqrt();
                let (g, fk) = green_and_grad(self.k, dist);
                let w = wx * wy * se.h * sf.h;
                m.single += w * g.norm();
                m.double += w * fk.norm() * dist;
            }
        }
        m.hyper = m.single * (1.0 / (se.h * sf.h) + self.k2.norm());
        m
    }

    /// Compares sampled blocks against doubled orders.
    fn self_check(&self, kinds: &[OperatorKind]) -> Result<()> {
        let n = self.len();
        let offsets = [0, 1, n - 1, 2, 3, 5, n / 4, n / 2];
        let anchors = [0, n / 3, (2 * n) / 3];
        let self_ref = self.block(0, 0, true);
        let touch_ref = self.block(1, 0, true);
        for &f in &anchors {
            for &o in &offsets {
                let e = (f + o) % n;
                let coarse = self.block(e, f, false);
                let fine = self.block(e, f, true);
                let magnitude = self.is_separated(e, f).then(|| self.magnitude(e, f));
                for &kind in kinds {
                    let reference = match kind {
                        OperatorKind::DoubleLayer | OperatorKind::AdjointDoubleLayer => {
                            touch_ref.max_abs(kind)
                        }
                        _ => self_ref.max_abs(kind),
                    };
                    let scale = fine
                        .max_abs(kind)
                        .max(1e-6 * reference)
                        .max(magnitude.map_or(0.0, |m| m.get(kind)));
                    if scale == 0.0 {
                        continue;
                    }
                    let err = coarse.max_diff(&fine, kind) / scale;
                    if !(err <= SELF_CHECK_TOL) {
                        return Err(Error::Assembly(format!(
                            "{kind:?} pair ({e}, {f}) changes by {err:.2e} relative under doubled quadrature orders"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Default, Clone, Copy)]
struct Magnitude {
    single: f64,
    double: f64,
    hyper: f64,
}

impl Magnitude {
    fn get(&self, kind: OperatorKind) -> f64 {
        match kind {
            OperatorKind::SingleLayer => self.single,
            OperatorKind::DoubleLayer | OperatorKind::AdjointDoubleLayer => self.double,
            _ => self.hyper,
        }
    }
}

/// Panels on [0, 1] refined by factors of two toward `center`, for an
/// integrand singular at distance `width` from it.
fn v_panels(center: f64, width: f64) -> Vec<(f64, f64)> {
    if width >= 1.0 {
        return vec![(0.0, 1.0)];
    }
    let mut cuts = vec![0.0, 1.0, center];
    let mut d = width.max(1e-12);
    while d < 1.0 {
        cuts.extend(
            [center - d, center + d]
                .into_iter()
                .filter(|c| *c > 0.0 && *c < 1.0),
        );
        d *= 2.0;
    }
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    cuts.dedup();
    cuts.windows(2)
        .filter(|w| w[1] > w[0])
        .map(|w| (w[0], w[1]))
        .collect()
}

fn check_wavenumber(k: C) -> Result<()> {
    if !k.re.is_finite() || !k.im.is_finite() || k.norm() == 0.0 {
        return Err(Error::Domain(format!(
            "wavenumber must be finite and nonzero, got {k}"
        )));
    }
    if k.im > 0.0 {
        return Err(Error::Domain(format!(
            "Im k must be <= 0 under e^(+jwt), got {k}"
        )));
    }
    Ok(())
}

const SCATTER_CHUNK: usize = 32;

/// Assembles several operators at one wavenumber sharing kernel evaluations.
pub fn assemble_many(
    mesh: &BoundaryMesh,
    k: C,
    kinds: &[OperatorKind],
) -> Result<Vec<OperatorMatrix>> {
    let dense: Vec<OperatorKind> = kinds
        .iter()
        .copied()
        .filter(|&q| q != OperatorKind::Gram)
        .collect();
    let n = mesh.len();
    let mut mats: Vec<DMatrix<C>> = Vec::new();
    if !dense.is_empty() {
        check_wavenumber(k)?;
        let asm = Assembler::new(mesh, k);
        asm.self_check(&dense)?;
        mats = dense.iter().map(|_| DMatrix::zeros(n, n)).collect();
        let mut f0 = 0;
        while f0 < n {
            let f1 = (f0 + SCATTER_CHUNK).min(n);
            let rows: Vec<Vec<Block>> = (f0..f1)
                .into_par_iter()
                .map(|f| (f..n).map(|e| asm.block(e, f, false)).collect())
                .collect();
            for (f, blocks) in (f0..f1).zip(&rows) {
                for (off, blk) in blocks.iter().enumerate() {
                    let e = f + off;
                    for (mat, &kind) in mats.iter_mut().zip(&dense) {
                        let b = blk.get(kind);
                        for a in 0..2 {
                            for c in 0..2 {
                                mat[((e + a) % n, (f + c) % n)] += b[a][c];
                                if e != f {
                                    mat[((f + a) % n, (e + c) % n)] += blk.mirrored(kind, a, c);
                                }
                            }
                        }
                    }
                }
            }
            f0 = f1;
        }
    }
    let mut dense_iter = mats.into_iter();
    let id = mesh.id();
    Ok(kinds
        .iter()
        .map(|&kind| {
            let entries = if kind == OperatorKind::Gram {
                GramMatrix::new(mesh).to_dense_complex()
            } else {
                dense_iter.next().unwrap()
            };
            OperatorMatrix {
                kind,
                wavenumber: k,
                entries,
                mesh_id: id,
            }
        })
        .collect())
}

pub fn assemble(mesh: &BoundaryMesh, k: C, kind: OperatorKind) -> Result<OperatorMatrix> {
    Ok(assemble_many(mesh, k, &[kind])?.remove(0))
}

/// One column (trial hat `col`) of each requested operator.
pub fn assemble_column(
    mesh: &BoundaryMesh,
    k: C,
    kinds: &[OperatorKind],
    col: usize,
) -> Result<Vec<DVector<C>>> {
    let n = mesh.len();
    if col >= n {
        return Err(Error::IndexOutOfRange { index: col, len: n });
    }
    let dense: Vec<OperatorKind> = kinds
        .iter()
        .copied()
        .filter(|&q| q != OperatorKind::Gram)
        .collect();
    let mut cols: Vec<DVector<C>> = kinds.iter().map(|_| DVector::zeros(n)).collect();
    if !dense.is_empty() {
        check_wavenumber(k)?;
        let asm = Assembler::new(mesh, k);
        asm.self_check(&dense)?;
        // trial segments carrying hat `col`: col - 1 (local 1) and col (local 0)
        for (f, b) in [((col + n - 1) % n, 1), (col, 0)] {
            let blocks: Vec<Block> = (0..n)
                .into_par_iter()
                .map(|e| asm.block(e, f, false))
                .collect();
            for (e, blk) in blocks.iter().enumerate() {
                for (out, &kind) in cols.iter_mut().zip(kinds) {
                    if kind == OperatorKind::Gram {
                        continue;
                    }
                    let m = blk.get(kind);
                    out[e] += m[0][b];
                    out[(e + 1) % n] += m[1][b];
                }
            }
        }
    }
    let gram = GramMatrix::new(mesh);
    for (out, &kind) in cols.iter_mut().zip(kinds) {
        if kind == OperatorKind::Gram {
            out[col] = C::new(gram.diagonal()[col], 0.0);
            out[(col + 1) % n] += gram.upper()[col];
            out[(col + n - 1) % n] += gram.upper()[(col + n - 1) % n];
        }
    }
    Ok(cols)
}
