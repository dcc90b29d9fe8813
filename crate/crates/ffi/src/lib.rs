//! C interface to the solver.
//!
//! Objects are opaque handles created by `thz_*_new`/solve calls and
//! released with the matching `_free`. Every fallible call returns a
//! [`ThzStatus`]; on failure [`thz_last_error`] holds a message for the
//! calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use num_complex::Complex64 as C;
use thzbem::fds::{solve_scenario, Method, SolveResult};
use thzbem::formulations::{BlockSystem, PlaneWave};
use thzbem::geometry::{build_mesh, BoundaryMesh, CurveKind, CurveSpec};
use thzbem::media::{penetration_length, Medium};
use thzbem::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThzStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Geometry = 3,
    Compression = 4,
    Solver = 5,
    Memory = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThzCurve {
    Circle = 0,
    Ellipse = 1,
    Airfoil = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThzUnknown {
    /// Metal surface current j = H_t [A/m].
    MetalJ = 0,
    /// Skin electric unknown j = −H_t [A/m].
    SkinJ = 1,
    /// Skin magnetic unknown m = −E_z [V/m].
    SkinM = 2,
}

/// Boundary mesh.
pub struct ThzMesh(BoundaryMesh);

/// Solved scenario for a single incident wave.
pub struct ThzSolution(SolveResult);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> ThzStatus {
    match e {
        Error::Domain(_) | Error::Config(_) | Error::Polarization(_) => ThzStatus::InvalidArgument,
        Error::InvalidCurve(_) | Error::InvalidMesh(_) | Error::Degenerate => ThzStatus::Geometry,
        Error::CompressionIneffective { .. } => ThzStatus::Compression,
        Error::MemoryCap { .. } => ThzStatus::Memory,
        _ => ThzStatus::Solver,
    }
}

fn guard(f: impl FnOnce() -> Result<(), (ThzStatus, String)>) -> ThzStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => ThzStatus::Ok,
        Ok(Err((s, msg))) => {
            set_error(msg);
            s
        }
        Err(_) => {
            set_error("internal panic".into());
            ThzStatus::Panic
        }
    }
}

fn lift<T>(r: thzbem::Result<T>) -> Result<T, (ThzStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null(what: &str) -> (ThzStatus, String) {
    (ThzStatus::NullPointer, format!("{what} is null"))
}

/// Message of the last failed call on this thread; empty if none. The
/// pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn thz_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Builds a closed curve mesh with `n` elements. `aspect_ratio` applies to
/// ellipses only.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for a handle.
#[no_mangle]
pub unsafe extern "C" fn thz_mesh_curve(
    curve: ThzCurve,
    perimeter: f64,
    aspect_ratio: f64,
    n: usize,
    out: *mut *mut ThzMesh,
) -> ThzStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let kind = match curve {
            ThzCurve::Circle => CurveKind::Circle,
            ThzCurve::Ellipse => CurveKind::Ellipse,
            ThzCurve::Airfoil => CurveKind::Airfoil,
        };
        let spec = CurveSpec {
            kind,
            perimeter,
            aspect_ratio: if kind == CurveKind::Ellipse {
                aspect_ratio
            } else {
                1.0
            },
            n_elements: n,
        };
        let mesh = lift(build_mesh(&spec))?;
        *out = Box::into_raw(Box::new(ThzMesh(mesh)));
        Ok(())
    })
}

/// Mesh from `n` counter-clockwise nodes given as interleaved x, y pairs.
///
/// # Safety
/// `xy` must point to `2 * n` readable doubles and `out` to writable storage.
#[no_mangle]
pub unsafe extern "C" fn thz_mesh_from_nodes(
    xy: *const f64,
    n: usize,
    out: *mut *mut ThzMesh,
) -> ThzStatus {
    guard(|| {
        if xy.is_null() {
            return Err(null("xy"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let v = std::slice::from_raw_parts(xy, 2 * n);
        let nodes = v.chunks_exact(2).map(|p| [p[0], p[1]]).collect();
        let mesh = lift(BoundaryMesh::from_nodes(nodes))?;
        *out = Box::into_raw(Box::new(ThzMesh(mesh)));
        Ok(())
    })
}

/// Number of nodes, 0 for a null handle.
///
/// # Safety
/// `mesh` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn thz_mesh_len(mesh: *const ThzMesh) -> usize {
    mesh.as_ref().map_or(0, |m| m.0.len())
}

/// Polygonal perimeter in meters, NaN for a null handle.
///
/// # Safety
/// `mesh` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn thz_mesh_perimeter(mesh: *const ThzMesh) -> f64 {
    mesh.as_ref().map_or(f64::NAN, |m| m.0.perimeter())
}

/// # Safety
/// `mesh` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn thz_mesh_free(mesh: *mut ThzMesh) {
    if !mesh.is_null() {
        drop(Box::from_raw(mesh));
    }
}

/// Solves the PEC problem for a TM plane wave in vacuum at wavenumber
/// `k0`. `tolerance > 0` selects the fast direct solver with the given
/// skeleton tolerance and seed; `tolerance == 0` selects dense LU.
///
/// # Safety
/// `mesh` must be a live handle and `out` writable storage for a handle.
#[no_mangle]
pub unsafe extern "C" fn thz_pec_solve(
    mesh: *const ThzMesh,
    k0: f64,
    angle: f64,
    amplitude: f64,
    tolerance: f64,
    seed: u64,
    out: *mut *mut ThzSolution,
) -> ThzStatus {
    guard(|| {
        let mesh = mesh.as_ref().ok_or_else(|| null("mesh"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let method = if tolerance > 0.0 {
            Method::Fds { tolerance, seed }
        } else if tolerance == 0.0 {
            Method::Dense
        } else {
            return Err((ThzStatus::InvalidArgument, "tolerance must be >= 0".into()));
        };
        let m0 = lift(Medium::vacuum_with_wavenumber(k0))?;
        let wave = PlaneWave::tm(amplitude, angle, m0.frequency);
        let sys = lift(BlockSystem::assemble(Some(&mesh.0), None, &m0, &[wave]))?;
        let sol = lift(solve_scenario(&sys, &method))?;
        *out = Box::into_raw(Box::new(ThzSolution(sol)));
        Ok(())
    })
}

/// Solves the penetrable (PMCHWT) problem for a TM plane wave at
/// `frequency` in Hz, relative permittivity `eps_re + j eps_im` inside.
///
/// # Safety
/// `mesh` must be a live handle and `out` writable storage for a handle.
#[no_mangle]
pub unsafe extern "C" fn thz_penetrable_solve(
    mesh: *const ThzMesh,
    frequency: f64,
    eps_re: f64,
    eps_im: f64,
    angle: f64,
    amplitude: f64,
    out: *mut *mut ThzSolution,
) -> ThzStatus {
    guard(|| {
        let mesh = mesh.as_ref().ok_or_else(|| null("mesh"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let m0 = lift(Medium::vacuum(frequency))?;
        let m1 = lift(Medium::dielectric(C::new(eps_re, eps_im), frequency))?;
        let wave = PlaneWave::tm(amplitude, angle, frequency);
        let sys = lift(BlockSystem::assemble(
            None,
            Some((&mesh.0, &m1)),
            &m0,
            &[wave],
        ))?;
        let sol = lift(solve_scenario(&sys, &Method::Dense))?;
        *out = Box::into_raw(Box::new(ThzSolution(sol)));
        Ok(())
    })
}

/// Copies one unknown into `re`/`im`, each of length `len` equal to the
/// mesh size.
///
/// # Safety
/// `solution` must be a live handle; `re` and `im` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn thz_solution_unknown(
    solution: *const ThzSolution,
    which: ThzUnknown,
    re: *mut f64,
    im: *mut f64,
    len: usize,
) -> ThzStatus {
    guard(|| {
        let s = &solution.as_ref().ok_or_else(|| null("solution"))?.0;
        if re.is_null() || im.is_null() {
            return Err(null("output buffer"));
        }
        let v = match which {
            ThzUnknown::MetalJ => s.j_m.as_ref(),
            ThzUnknown::SkinJ => s.j_s.as_ref(),
            ThzUnknown::SkinM => s.m_s.as_ref(),
        }
        .ok_or((
            ThzStatus::InvalidArgument,
            format!("{which:?} not present in this solution"),
        ))?;
        if v.nrows() != len {
            return Err((
                ThzStatus::InvalidArgument,
                format!("buffer length {len}, unknown length {}", v.nrows()),
            ));
        }
        let (re, im) = (
            std::slice::from_raw_parts_mut(re, len),
            std::slice::from_raw_parts_mut(im, len),
        );
        for i in 0..len {
            re[i] = v[(i, 0)].re;
            im[i] = v[(i, 0)].im;
        }
        Ok(())
    })
}

/// Skeleton rank of the metal block; 0 for dense or absent.
///
/// # Safety
/// `solution` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn thz_solution_rank(solution: *const ThzSolution) -> usize {
    solution
        .as_ref()
        .and_then(|s| s.0.report.metal.as_ref())
        .map_or(0, |m| m.rank)
}

/// Largest relative residual over the solved blocks; NaN for null.
///
/// # Safety
/// `solution` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn thz_solution_residual(solution: *const ThzSolution) -> f64 {
    solution.as_ref().map_or(f64::NAN, |s| {
        let r = &s.0.report;
        let m = r.metal.as_ref().map_or(0.0, |m| m.residual);
        let k = r.skin.as_ref().map_or(0.0, |k| k.residual);
        m.max(k)
    })
}

/// # Safety
/// `solution` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn thz_solution_free(solution: *mut ThzSolution) {
    if !solution.is_null() {
        drop(Box::from_raw(solution));
    }
}

/// 1/|Im k| of the double-Debye skin model at `frequency`, in meters.
///
/// # Safety
/// `out` must point to a writable double.
#[no_mangle]
pub unsafe extern "C" fn thz_skin_penetration_length(frequency: f64, out: *mut f64) -> ThzStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let m = lift(Medium::skin(frequency))?;
        *out = lift(penetration_length(&m))?;
        Ok(())
    })
}
