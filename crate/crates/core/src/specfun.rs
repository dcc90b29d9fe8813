//! Bessel and Hankel functions of integer order and complex argument.
//!
//! J is computed by Miller's backward recurrence normalized with the
//! Jacobi-Anger sum. Y for |z| <= 20 comes from the Neumann series over the
//! same J sequence; beyond that both kinds of Hankel function come from the
//! large-argument expansion, with the left half plane reached by analytic
//! continuation. Higher orders of Y and H use upward recurrence.
//!
//! Below the real axis H^(2) is exponentially small next to J and jY; where
//! it cannot come from the asymptotic expansion (|z| <= 20) its relative
//! accuracy degrades like 1e-16 * exp(2|Im z|).

use num_complex::Complex64 as C;
use std::f64::consts::{FRAC_PI_4, PI};

use crate::error::{Error, Result};

pub const MAX_ORDER: u32 = 200;
pub const MAX_ABS_ARG: f64 = 1.0e4;

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const ASYMPTOTIC_RADIUS: f64 = 20.0;
const SMALL_SERIES_RADIUS: f64 = 4.0;
const J: C = C::new(0.0, 1.0);

fn check_args(order: u32, z: C) -> Result<()> {
    if order > MAX_ORDER {
        return Err(Error::Domain(format!("order {order} exceeds {MAX_ORDER}")));
    }
    if !z.re.is_finite() || !z.im.is_finite() || z.norm() >= MAX_ABS_ARG {
        return Err(Error::Domain(format!(
            "|z| = {} outside [0, {MAX_ABS_ARG})",
            z.norm()
        )));
    }
    Ok(())
}

fn check_nonzero(z: C) -> Result<()> {
    if z == C::new(0.0, 0.0) {
        return Err(Error::Singularity(
            "Y and H have a logarithmic singularity at z = 0".into(),
        ));
    }
    Ok(())
}

fn finite(values: Vec<C>, what: &str, z: C) -> Result<Vec<C>> {
    if values.iter().all(|v| v.re.is_finite() && v.im.is_finite()) {
        Ok(values)
    } else {
        Err(Error::Domain(format!(
            "{what}({z}) overflows double precision"
        )))
    }
}

/// J_0..J_m (and beyond, up to the recurrence start) by Miller's algorithm.
fn miller_j(z: C, m: usize) -> Vec<C> {
    let r = z.norm();
    if r < 1e-3 {
        return series_j(z, m);
    }
    let start = m.max(r.ceil() as usize) + (15.0 * r.cbrt()).ceil() as usize + 20;
    let mut f = vec![C::new(0.0, 0.0); start + 2];
    f[start] = C::new(1e-30, 0.0);
    let two_over_z = 2.0 / z;
    for n in (1..=start).rev() {
        f[n - 1] = two_over_z * (n as f64) * f[n] - f[n + 1];
        if f[n - 1].norm() > 1e100 {
            for v in &mut f[n - 1..=start] {
                *v *= 1e-100;
            }
        }
    }
    // e^{iz} = J0 + 2 sum i^n J_n (use -i when Im z > 0 to avoid cancellation)
    let unit = if z.im <= 0.0 { J } else { -J };
    let mut sum = f[0];
    let mut p = C::new(1.0, 0.0);
    for v in &f[1..=start] {
        p *= unit;
        sum += 2.0 * p * v;
    }
    let s = sum.re.abs().max(sum.im.abs());
    let scale = ((unit * z).exp() / s) / (sum / s);
    f.truncate(start + 1);
    for v in &mut f {
        *v *= scale;
        if z.im == 0.0 && z.re > 0.0 {
            v.im = 0.0;
        }
    }
    f
}

/// Ascending series for |z| < 1e-3, where Miller's growth factors overflow.
fn series_j(z: C, m: usize) -> Vec<C> {
    let q = -(z * z) / 4.0;
    let h = z / 2.0;
    let mut lead = C::new(1.0, 0.0);
    let top = m.max(9);
    let mut out = Vec::with_capacity(top + 1);
    for n in 0..=top {
        if n > 0 {
            lead *= h / n as f64;
        }
        let mut t = lead;
        let mut s = lead;
        for k in 1..8 {
            t *= q / (k as f64 * (n + k) as f64);
            s += t;
        }
        out.push(s);
    }
    out
}

/// Y0, Y1 from the Neumann series; `js` must come from `miller_j`.
fn neumann_y01(z: C, js: &[C]) -> (C, C) {
    let lg = (z / 2.0).ln() + EULER_GAMMA;
    let mut s0 = C::new(0.0, 0.0);
    let mut s1 = C::new(0.0, 0.0);
    let mut k = 1;
    while 2 * k + 1 < js.len() {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        s0 += sign * js[2 * k] / k as f64;
        s1 += sign * (js[2 * k - 1] - js[2 * k + 1]) / k as f64;
        k += 1;
    }
    let y0 = (2.0 / PI) * lg * js[0] - (4.0 / PI) * s0;
    let y1 = -(2.0 / PI) * js[0] / z + (2.0 / PI) * lg * js[1] + (2.0 / PI) * s1;
    (y0, y1)
}

/// Large-argument expansion of H0^(2), H1^(2) for Re z >= 0, |z| > 20.
fn hankel2_01_asymptotic(z: C) -> (C, C) {
    let w = 1.0 / z;
    let mut t0 = C::new(1.0, 0.0);
    let mut t1 = C::new(1.0, 0.0);
    let mut s0 = t0;
    let mut s1 = t1;
    let kmax = (2.0 * z.norm()) as usize;
    for k in 1..kmax {
        let odd = ((2 * k - 1) * (2 * k - 1)) as f64;
        let c = -J * w / (8.0 * k as f64);
        t0 *= c * (-odd);
        t1 *= c * (4.0 - odd);
        s0 += t0;
        s1 += t1;
        if t0.norm() < 1e-17 * s0.norm() && t1.norm() < 1e-17 * s1.norm() {
            break;
        }
    }
    let pre = (2.0 / (PI * z)).sqrt() * (-J * (z - FRAC_PI_4)).exp();
    (pre * s0, pre * J * s1)
}

/// Y0, Y1 for Re z >= 0 (any modulus).
fn y01_right(z: C) -> (C, C) {
    if z.norm() <= ASYMPTOTIC_RADIUS {
        let js = miller_j(z, 1);
        neumann_y01(z, &js)
    } else {
        let (h0, h1) = hankel2_01_asymptotic(z);
        let (g0, g1) = hankel2_01_asymptotic(z.conj());
        let (e0, e1) = (g0.conj(), g1.conj());
        ((e0 - h0) / (2.0 * J), (e1 - h1) / (2.0 * J))
    }
}

/// Continuation sign for z = -w with Re w > 0.
fn reflection_sign(z: C) -> f64 {
    if z.im >= 0.0 {
        1.0
    } else {
        -1.0
    }
}

fn y01(z: C) -> (C, C) {
    if z.norm() <= ASYMPTOTIC_RADIUS || z.re >= 0.0 {
        return y01_right(z);
    }
    // Y_n(-w) = (-1)^n [Y_n(w) + 2 j m J_n(w)]
    let w = -z;
    let m = reflection_sign(z);
    let jw = miller_j(w, 1);
    let (yw0, yw1) = y01_right(w);
    (yw0 + 2.0 * J * m * jw[0], -(yw1 + 2.0 * J * m * jw[1]))
}

fn h2_01(z: C) -> (C, C) {
    if z.norm() <= ASYMPTOTIC_RADIUS {
        let js = miller_j(z, 1);
        let (y0, y1) = neumann_y01(z, &js);
        return (js[0] - J * y0, js[1] - J * y1);
    }
    if z.re >= 0.0 {
        return hankel2_01_asymptotic(z);
    }
    // H2_n(-w) = (-1)^n [H2_n(w) + 2 m J_n(w)]
    let w = -z;
    let m = reflection_sign(z);
    let jw = miller_j(w, 1);
    let (h0, h1) = hankel2_01_asymptotic(w);
    (h0 + 2.0 * m * jw[0], -(h1 + 2.0 * m * jw[1]))
}

/// Upward recurrence C_{n+1} = (2n/z) C_n - C_{n-1}.
fn recur_up(c0: C, c1: C, nmax: usize, z: C) -> Vec<C> {
    let mut v = Vec::with_capacity(nmax + 1);
    v.push(c0);
    if nmax >= 1 {
        v.push(c1);
    }
    let two_over_z = 2.0 / z;
    for n in 1..nmax {
        let next = two_over_z * (n as f64) * v[n] - v[n - 1];
        v.push(next);
    }
    v
}

fn j_seq_unchecked(nmax: usize, z: C) -> Vec<C> {
    let mut js = miller_j(z, nmax);
    js.truncate(nmax + 1);
    js
}

fn y_seq_unchecked(nmax: usize, z: C) -> Vec<C> {
    let (y0, y1) = y01(z);
    if nmax <= 1 {
        return vec![y0, y1][..=nmax].to_vec();
    }
    // Where J decreases (I-like behaviour off the axis, or n > |z|) the
    // Wronskian J_{n+1} Y_n - J_n Y_{n+1} = 2/(pi z) damps errors; elsewhere
    // the three-term recurrence is the stable choice.
    let js = miller_j(z, nmax);
    let w = 2.0 / (PI * z);
    let two_over_z = 2.0 / z;
    let mut ys = Vec::with_capacity(nmax + 1);
    ys.push(y0);
    ys.push(y1);
    for n in 1..nmax {
        let wronskian =
            js[n + 1].norm() <= js[n].norm() && (js[n] * ys[n]).norm() >= 0.1 * w.norm();
        let next = if wronskian {
            (js[n + 1] * ys[n] - w) / js[n]
        } else {
            two_over_z * (n as f64) * ys[n] - ys[n - 1]
        };
        ys.push(next);
    }
    ys
}

fn h2_seq_unchecked(nmax: usize, z: C) -> Vec<C> {
    let (h0, h1) = h2_01(z);
    if z.im < 0.0 || nmax <= 1 {
        // below the axis H2 grows with n and the recurrence is stable
        return recur_up(h0, h1, nmax, z);
    }
    let js = miller_j(z, nmax);
    let ys = y_seq_unchecked(nmax, z);
    (0..=nmax).map(|n| js[n] - J * ys[n]).collect()
}

/// Bessel function of the first kind J_n(z).
pub fn bessel_j(order: u32, z: C) -> Result<C> {
    Ok(bessel_j_orders(order, z)?[order as usize])
}

/// Bessel function of the second kind Y_n(z), principal branch.
pub fn bessel_y(order: u32, z: C) -> Result<C> {
    Ok(bessel_y_orders(order, z)?[order as usize])
}

/// Hankel function of the second kind H_n^(2)(z) = J_n(z) - j Y_n(z).
pub fn hankel2(order: u32, z: C) -> Result<C> {
    Ok(hankel2_orders(order, z)?[order as usize])
}

/// Hankel function of the first kind H_n^(1)(z) = J_n(z) + j Y_n(z).
pub fn hankel1(order: u32, z: C) -> Result<C> {
    Ok(hankel2(order, z.conj())?.conj())
}

/// J_0(z) .. J_nmax(z).
pub fn bessel_j_orders(nmax: u32, z: C) -> Result<Vec<C>> {
    check_args(nmax, z)?;
    finite(j_seq_unchecked(nmax as usize, z), "J", z)
}

/// Y_0(z) .. Y_nmax(z).
pub fn bessel_y_orders(nmax: u32, z: C) -> Result<Vec<C>> {
    check_args(nmax, z)?;
    check_nonzero(z)?;
    finite(y_seq_unchecked(nmax as usize, z), "Y", z)
}

/// H^(2)_0(z) .. H^(2)_nmax(z).
pub fn hankel2_orders(nmax: u32, z: C) -> Result<Vec<C>> {
    check_args(nmax, z)?;
    check_nonzero(z)?;
    finite(h2_seq_unchecked(nmax as usize, z), "H2", z)
}

/// (H0^(2)(z), H1^(2)(z)) without argument checks, for kernel evaluation.
#[inline]
pub(crate) fn hankel2_01(z: C) -> (C, C) {
    h2_01(z)
}

/// Power series for J0, J1 and the regular parts of Y0, Y1:
/// Y0 = (2/pi) J0 ln(x/2) + y0s, Y1 = (2/pi) J1 ln(x/2) + y1s.
/// Accurate for |x| <= 4; `y1s` carries the -2/(pi x) pole.
fn small_series(x: C) -> (C, C, C, C) {
    let q = -(x * x) / 4.0;
    let mut t0 = C::new(1.0, 0.0);
    let mut t1 = C::new(1.0, 0.0);
    let mut j0 = t0;
    let mut j1 = t1;
    let mut y0 = t0 * EULER_GAMMA;
    let mut y1 = t1 * (-2.0 * EULER_GAMMA + 1.0);
    let mut harmonic = 0.0;
    for m in 0..60 {
        let mf = m as f64;
        t0 *= q / ((mf + 1.0) * (mf + 1.0));
        t1 *= q / ((mf + 1.0) * (mf + 2.0));
        harmonic += 1.0 / (mf + 1.0);
        let next_harmonic = harmonic + 1.0 / (mf + 2.0);
        j0 += t0;
        j1 += t1;
        y0 += t0 * (EULER_GAMMA - harmonic);
        y1 += t1 * (-2.0 * EULER_GAMMA + harmonic + next_harmonic);
        if t0.norm() < 1e-18 && t1.norm() < 1e-18 {
            break;
        }
    }
    let h = x / 2.0;
    let j1 = h * j1;
    let y0s = (2.0 / PI) * y0;
    let y1s = -2.0 / (PI * x) - h * y1 / PI;
    (j0, j1, y0s, y1s)
}

/// Splits G_k(r) = -(j/4) H0^(2)(kr) as L ln r + M with L, M smooth in r.
#[inline]
pub(crate) fn green_log_split(k: C, r: f64) -> (C, C) {
    let x = k * r;
    if x.norm() <= SMALL_SERIES_RADIUS {
        let (j0, _, y0s, _) = small_series(x);
        let l = -j0 / (2.0 * PI);
        let m = -0.25 * J * j0 - j0 * (k / 2.0).ln() / (2.0 * PI) - 0.25 * y0s;
        (l, m)
    } else {
        let (h0, _) = hankel2_01(x);
        let j0 = miller_j(x, 0)[0];
        let l = -j0 / (2.0 * PI);
        (l, -0.25 * J * h0 - l * r.ln())
    }
}

/// Splits F(r) = (jk/4) H1^(2)(kr) / r as L1 ln r + M1.
#[inline]
pub(crate) fn grad_log_split(k: C, r: f64) -> (C, C) {
    let x = k * r;
    if x.norm() <= SMALL_SERIES_RADIUS {
        let (_, j1, _, y1s) = small_series(x);
        let l = k * j1 / (2.0 * PI * r);
        let m = (0.25 * J * k * j1 + k * j1 * (k / 2.0).ln() / (2.0 * PI) + 0.25 * k * y1s) / r;
        (l, m)
    } else {
        let (_, h1) = hankel2_01(x);
        let j1 = miller_j(x, 1)[1];
        let l = k * j1 / (2.0 * PI * r);
        (l, 0.25 * J * k * h1 / r - l * r.ln())
    }
}

/// Green's function G_k(r) = -(j/4) H0^(2)(kr) and F(r) = (jk/4) H1^(2)(kr)/r,
/// with grad_r G = F (r - r').
#[inline]
pub(crate) fn green_and_grad(k: C, r: f64) -> (C, C) {
    let (h0, h1) = hankel2_01(k * r);
    (-0.25 * J * h0, 0.25 * J * k * h1 / r)
}
