use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C;
use proptest::prelude::*;
use thzbem::geometry::{build_mesh, BoundaryMesh, CurveSpec};
use thzbem::linalg::GramMatrix;
use thzbem::operators::{assemble, assemble_many, OperatorKind, OperatorMatrix};

use OperatorKind::*;

// Unit circle, k = 5: continuous eigenvalues on e^{inφ} (mpmath, 30 digits).
//   S: -(jπ/2) J_n H_n,  D = D*: -(jπk/4)(J_n' H_n + J_n H_n'),  N: (jπk²/2) J_n' H_n'
#[rustfmt::skip]
const CIRCLE_K5: [(i32, f64, f64, f64, f64, f64, f64); 7] = [
    (0, -0.08606665472237152, -0.0495438793300092, 0.29375430985272233, 0.45692106742003985, -1.9021118686561158, 4.213978894579829),
    (1, 0.07608447474624463, -0.16855915578319314, -0.36983878459896696, -0.2883619116368467, 1.4880732736075988, 0.4933140041933435),
    (2, -0.02689244918653681, -0.00340597346811373, 0.4997081577182852, 0.12661470278988102, -0.01084903452912229, 4.706813811866898),
    (3, -0.08382213572360663, -0.20907586067595507, -0.30202664892053893, 0.49380093230175676, -1.894247885372273, 1.166272184429788),
    (4, 0.11808034229532188, -0.24043042097295697, -0.42176112743156846, -0.1593068304377941, 0.6107498503627681, 0.1055551378292126),
    (5, 0.1861049858325972, -0.10711948919576685, -0.03644243255012997, -0.2668174074751995, 1.336191762930583, 0.6645992196777577),
    (6, 0.14723428833542584, -0.02697649499279736, 0.08356163170056079, -0.1069210685468506, 1.6505493146671306, 0.4237805875912592),
];

fn fourier_mode(n_nodes: usize, mode: i32) -> DVector<C> {
    DVector::from_fn(n_nodes, |m, _| {
        C::from_polar(1.0, mode as f64 * 2.0 * PI * m as f64 / n_nodes as f64)
    })
}

/// Rayleigh quotient of M against the Gram matrix on a Fourier mode.
fn mode_ratio(m: &OperatorMatrix, gram: &DMatrix<C>, mode: i32) -> C {
    let v = fourier_mode(m.size(), mode);
    let num = v.adjoint() * (&m.entries * &v);
    let den = v.adjoint() * (gram * &v);
    num[(0, 0)] / den[(0, 0)]
}

fn circle_errors(n: usize) -> Vec<[f64; 3]> {
    let mesh = BoundaryMesh::regular_polygon(n, 1.0).unwrap();
    let mats = assemble_many(
        &mesh,
        C::new(5.0, 0.0),
        &[SingleLayer, DoubleLayer, Hypersingular, Gram],
    )
    .unwrap();
    let gram = &mats[3].entries;
    CIRCLE_K5
        .iter()
        .map(|&(mode, sr, si, dr, di, nr, ni)| {
            let exact = [C::new(sr, si), C::new(dr, di), C::new(nr, ni)];
            let mut out = [0.0; 3];
            for q in 0..3 {
                out[q] = (mode_ratio(&mats[q], gram, mode) - exact[q]).norm() / exact[q].norm();
            }
            out
        })
        .collect()
}

#[test]
fn circle_spectra_converge_at_second_order() {
    let coarse = circle_errors(96);
    let fine = circle_errors(192);
    for (i, (c, f)) in coarse.iter().zip(&fine).enumerate() {
        for q in 0..3 {
            assert!(f[q] < 5e-3, "mode {i} operator {q}: {}", f[q]);
            assert!(
                c[q] / f[q] > 3.5,
                "mode {i} operator {q}: ratio {}",
                c[q] / f[q]
            );
        }
    }
}

#[test]
fn regular_polygon_matrices_are_circulant() {
    let mesh = BoundaryMesh::regular_polygon(40, 0.7).unwrap();
    for m in assemble_many(
        &mesh,
        C::new(9.0, -0.3),
        &[SingleLayer, DoubleLayer, Hypersingular],
    )
    .unwrap()
    {
        let e = &m.entries;
        let scale = e.norm() / 40.0;
        for i in 0..40 {
            for j in 0..40 {
                assert!((e[(i, j)] - e[((i + 1) % 40, (j + 1) % 40)]).norm() < 1e-9 * scale);
            }
        }
    }
}

#[test]
fn laplace_limit_double_layer_of_constant_is_minus_half() {
    // Gauss: ∫ ∂G/∂n' dS' = -1/2 on the boundary when k -> 0, exactly on the polygon.
    for spec in [
        CurveSpec::ellipse(2.0, 2.0, 60),
        CurveSpec::airfoil(2.0, 80),
    ] {
        let mesh = build_mesh(&spec).unwrap();
        let ms = assemble_many(&mesh, C::new(1e-7, 0.0), &[DoubleLayer, Gram]).unwrap();
        let ones = DVector::from_element(mesh.len(), C::new(1.0, 0.0));
        let lhs = &ms[0].entries * &ones;
        let rhs = &ms[1].entries * &ones * C::new(-0.5, 0.0);
        let err = (&lhs - &rhs).norm() / rhs.norm();
        assert!(err < 1e-9, "{:?}: {err}", spec.kind);
    }
}

#[test]
fn symmetries() {
    let mesh = build_mesh(&CurveSpec::airfoil(2.5, 70)).unwrap();
    let ms = assemble_many(
        &mesh,
        C::new(11.0, -2.0),
        &[SingleLayer, DoubleLayer, AdjointDoubleLayer, Hypersingular],
    )
    .unwrap();
    let (s, d, dt, n) = (
        &ms[0].entries,
        &ms[1].entries,
        &ms[2].entries,
        &ms[3].entries,
    );
    assert!((s - s.transpose()).norm() < 1e-14 * s.norm());
    assert!((n - n.transpose()).norm() < 1e-14 * n.norm());
    assert!((dt - d.transpose()).norm() < 1e-14 * d.norm());
}

/// Residual of S G⁻¹ N = G/4 - D G⁻¹ D on low Fourier modes in arclength.
fn calderon_residual(n: usize) -> f64 {
    let mesh = build_mesh(&CurveSpec::ellipse(2.0 * PI, 1.5, n)).unwrap();
    let ms = assemble_many(
        &mesh,
        C::new(4.0, 0.0),
        &[SingleLayer, DoubleLayer, Hypersingular, Gram],
    )
    .unwrap();
    let gram = GramMatrix::new(&mesh);
    let (s, d, w, g) = (
        &ms[0].entries,
        &ms[1].entries,
        &ms[2].entries,
        &ms[3].entries,
    );
    let p = mesh.perimeter();
    let modes = DMatrix::from_fn(n, 4, |i, m| {
        let s = mesh.node_arclength(i);
        C::from_polar(1.0, 2.0 * PI * (m as f64 - 1.5).round() * s / p)
    });
    let lhs = s * gram.solve(&(w * &modes));
    let rhs = g * &modes * C::new(0.25, 0.0) - d * gram.solve(&(d * &modes));
    (&lhs - &rhs).norm() / rhs.norm()
}

#[test]
fn calderon_identity_holds_under_refinement() {
    let coarse = calderon_residual(64);
    let fine = calderon_residual(128);
    assert!(fine < 0.5 * coarse, "{coarse} -> {fine}");
    assert!(fine < 1e-2, "{fine}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn single_layer_is_complex_symmetric(aspect in 1.0f64..3.0, kr in 0.5f64..20.0, ki in -3.0f64..0.0) {
        let mesh = build_mesh(&CurveSpec::ellipse(2.0, aspect, 32)).unwrap();
        let s = assemble(&mesh, C::new(kr, ki), SingleLayer).unwrap().entries;
        prop_assert!((&s - s.transpose()).norm() <= 1e-14 * s.norm());
    }

    #[test]
    fn reciprocal_matrix_under_scaling(scale in 0.3f64..3.0) {
        // S_k on the scaled curve equals scale^2 S_{k·scale} on the original.
        let mesh = build_mesh(&CurveSpec::airfoil(1.0, 30)).unwrap();
        let big = mesh.scaled(scale).unwrap();
        let k = C::new(7.0, -0.4);
        let a = assemble(&big, k, SingleLayer).unwrap().entries;
        let b = assemble(&mesh, k * scale, SingleLayer).unwrap().entries * C::new(scale * scale, 0.0);
        prop_assert!((&a - &b).norm() <= 1e-9 * b.norm());
    }
}
