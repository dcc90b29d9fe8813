use num_complex::Complex64 as C;
use thzbem::media::{debye_permittivity, penetration_length, DebyeParams, Medium, C0, EPS0, MU0};
use thzbem::Error;

// Direct 40-digit evaluation of the double Debye formula at 1 THz.
const EPS_1THZ: (f64, f64) = (3.2469186510947258617, -1.1897455601596758808);

#[test]
fn skin_permittivity_at_one_terahertz() {
    let e = debye_permittivity(&DebyeParams::SKIN, 1e12);
    assert!((e.re - EPS_1THZ.0).abs() < 1e-13);
    assert!((e.im - EPS_1THZ.1).abs() < 1e-13);
    assert!(e.im < 0.0);
}

#[test]
fn penetration_length_by_construction() {
    let f = 3.0e11;
    let k0 = 2.0 * std::f64::consts::PI * f / C0;
    // k = k0 (1 - 0.5j) * 2  <=>  eps_r = 4 (1 - 0.5j)^2
    let target = k0 * C::new(1.0, -0.5) * 2.0;
    let m = Medium::dielectric(target * target / (k0 * k0), f).unwrap();
    assert!((m.k - target).norm() < 1e-12 * target.norm());
    let l = penetration_length(&m).unwrap();
    assert!((l - 1.0 / target.im.abs()).abs() < 1e-12 * l);
    assert!((1.0 / (MU0 * EPS0).sqrt() - C0).abs() < 1e-6);
    assert!(matches!(
        penetration_length(&Medium::vacuum(f).unwrap()),
        Err(Error::Degenerate)
    ));
}

#[test]
fn loss_is_negative_at_all_positive_frequencies() {
    for i in 0..200 {
        let f = 10f64.powf(6.0 + 9.0 * i as f64 / 199.0);
        assert!(debye_permittivity(&DebyeParams::SKIN, f).im < 0.0);
    }
}

#[test]
fn each_debye_term_has_one_loss_peak() {
    let p = DebyeParams::SKIN;
    let single = |de: f64, tau: f64| DebyeParams {
        eps_inf: 1.0,
        eps_s: 1.0 + de,
        eps_2: 1.0 + de * 1e-9,
        tau_1: tau,
        tau_2: tau * 1e-9,
    };
    for params in [
        single(p.eps_s - p.eps_2, p.tau_1),
        single(p.eps_2 - p.eps_inf, p.tau_2),
    ] {
        let losses: Vec<f64> = (0..400)
            .map(|i| -debye_permittivity(&params, 10f64.powf(8.0 + 8.0 * i as f64 / 399.0)).im)
            .collect();
        let maxima = losses
            .windows(3)
            .filter(|w| w[1] > w[0] && w[1] > w[2])
            .count();
        assert_eq!(maxima, 1);
    }
}

#[test]
fn invalid_debye_parameters_rejected() {
    let bad = DebyeParams {
        eps_2: 70.0,
        ..DebyeParams::SKIN
    };
    assert!(Medium::debye(&bad, 1e12).is_err());
}
