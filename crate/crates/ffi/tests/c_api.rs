use std::f64::consts::PI;
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use thzbem::analytic::{default_terms, pec_cylinder};
use thzbem::media::Medium;
use thzbem_ffi::*;

#[test]
fn pec_circle_through_the_c_abi_matches_series() {
    unsafe {
        let mut mesh = ptr::null_mut();
        assert_eq!(
            thz_mesh_curve(ThzCurve::Circle, 2.0 * PI, 1.0, 180, &mut mesh),
            ThzStatus::Ok
        );
        let n = thz_mesh_len(mesh);
        let mut sol = ptr::null_mut();
        assert_eq!(
            thz_pec_solve(mesh, 10.0, 0.3, 1.0, 1e-8, 7, &mut sol),
            ThzStatus::Ok
        );
        assert!(thz_solution_residual(sol) < 1e-6);
        let (mut re, mut im) = (vec![0.0; n], vec![0.0; n]);
        assert_eq!(
            thz_solution_unknown(sol, ThzUnknown::MetalJ, re.as_mut_ptr(), im.as_mut_ptr(), n),
            ThzStatus::Ok
        );
        assert_eq!(
            thz_solution_unknown(sol, ThzUnknown::SkinM, re.as_mut_ptr(), im.as_mut_ptr(), n),
            ThzStatus::InvalidArgument
        );
        let m0 = Medium::vacuum_with_wavenumber(10.0).unwrap();
        let series = pec_cylinder(1.0, &m0, default_terms(m0.k, 1.0), 0.3, 1.0).unwrap();
        let (mut num, mut den) = (0.0, 0.0);
        for i in 0..n {
            let phi = 2.0 * PI * i as f64 / n as f64;
            let e = series.current(phi);
            num += (re[i] - e.re).powi(2) + (im[i] - e.im).powi(2);
            den += e.norm_sqr();
        }
        assert!((num / den).sqrt() < 2e-2, "{}", (num / den).sqrt());
        thz_solution_free(sol);
        thz_mesh_free(mesh);
    }
}

#[test]
fn penetrable_solve_and_wrong_buffer_length() {
    unsafe {
        let mut mesh = ptr::null_mut();
        assert_eq!(
            thz_mesh_curve(ThzCurve::Ellipse, 2e-3, 1.5, 96, &mut mesh),
            ThzStatus::Ok
        );
        let mut sol = ptr::null_mut();
        assert_eq!(
            thz_penetrable_solve(mesh, 2e11, 4.0, -1.0, 0.0, 1.0, &mut sol),
            ThzStatus::Ok
        );
        assert!(thz_solution_residual(sol) < 1e-10);
        assert_eq!(thz_solution_rank(sol), 0);
        let mut buf = vec![0.0; 10];
        let mut buf2 = vec![0.0; 10];
        assert_eq!(
            thz_solution_unknown(
                sol,
                ThzUnknown::SkinJ,
                buf.as_mut_ptr(),
                buf2.as_mut_ptr(),
                10
            ),
            ThzStatus::InvalidArgument
        );
        let msg = std::ffi::CStr::from_ptr(thz_last_error()).to_string_lossy();
        assert!(msg.contains("96"), "{msg}");
        thz_solution_free(sol);
        thz_mesh_free(mesh);
    }
}

fn header_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include")
}

#[test]
fn header_declares_every_export() {
    let h = std::fs::read_to_string(header_dir().join("thzbem.h")).unwrap();
    for sym in [
        "thz_last_error",
        "thz_mesh_curve",
        "thz_mesh_from_nodes",
        "thz_mesh_len",
        "thz_mesh_perimeter",
        "thz_mesh_free",
        "thz_pec_solve",
        "thz_penetrable_solve",
        "thz_solution_unknown",
        "thz_solution_rank",
        "thz_solution_residual",
        "thz_solution_free",
        "thz_skin_penetration_length",
        "typedef struct ThzMesh ThzMesh",
        "THZ_STATUS_OK = 0",
    ] {
        assert!(h.contains(sym), "{sym}");
    }
}

const C_PROGRAM: &str = r#"
#include <math.h>
#include <stdio.h>
#include "thzbem.h"

int main(void) {
    ThzMesh *mesh = NULL;
    if (thz_mesh_curve(THZ_CURVE_ELLIPSE, -1.0, 1.5, 32, &mesh) != THZ_STATUS_GEOMETRY) return 1;
    if (thz_last_error()[0] == '\0') return 2;
    if (thz_mesh_curve(THZ_CURVE_CIRCLE, 6.283185307179586, 1.0, 64, &mesh) != THZ_STATUS_OK) return 3;
    ThzSolution *sol = NULL;
    if (thz_pec_solve(mesh, 3.0, 0.0, 1.0, 0.0, 0, &sol) != THZ_STATUS_OK) return 4;
    double re[64], im[64];
    if (thz_solution_unknown(sol, THZ_UNKNOWN_METAL_J, re, im, 64) != THZ_STATUS_OK) return 5;
    if (!(thz_solution_residual(sol) < 1e-10)) return 6;
    double l = 0.0;
    if (thz_skin_penetration_length(1e12, &l) != THZ_STATUS_OK || !(l > 1e-4)) return 7;
    thz_solution_free(sol);
    thz_mesh_free(mesh);
    printf("%.6e\n", hypot(re[0], im[0]));
    return 0;
}
"#;

/// Compiles a C client against the header and links the static library
/// built beside this test binary.
#[test]
fn c_client_compiles_and_links() {
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().unwrap().parent().unwrap();
    let lib = profile_dir.join("libthzbem_ffi.a");
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("client.c");
    std::fs::write(&src, C_PROGRAM).unwrap();
    let bin = dir.path().join("client");
    let mut cmd = Command::new("cc");
    cmd.arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(header_dir())
        .arg(&src);
    if !lib.exists() {
        let status = cmd.arg("-fsyntax-only").status().expect("cc");
        assert!(status.success());
        eprintln!("static library not built; checked header syntax only");
        return;
    }
    let status = cmd
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .expect("cc");
    assert!(status.success());
    let out = Command::new(&bin).output().unwrap();
    assert!(out.status.success(), "client exit {:?}", out.status.code());
    let v: f64 = String::from_utf8_lossy(&out.stdout).trim().parse().unwrap();
    assert!(v.is_finite() && v > 0.0);
}
