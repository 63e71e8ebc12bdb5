mod support;

use std::f64::consts::PI;

use accel_entanglement::bogoliubov::*;
use accel_entanglement::curves::linspace;

#[test]
fn gamma_oracle_matches_known_values() {
    // Gamma(5) = 24, Gamma(1/2) = sqrt(pi), |Gamma(i)|^2 = pi / sinh(pi)
    assert!((support::gamma_modulus(5.0, 0.0) - 24.0).abs() < 1e-12);
    assert!((support::gamma_modulus(0.5, 0.0) - PI.sqrt()).abs() < 1e-13);
    let expected = (PI / PI.sinh()).sqrt();
    assert!((support::gamma_modulus(0.0, 1.0) - expected).abs() < 1e-13);
}

#[test]
fn unitarity_on_grid() {
    for mu2 in linspace(0.01, 5.0, 100) {
        let s = scalar_coefficients(mu2).unwrap();
        let f = fermion_coefficients(mu2).unwrap();
        assert!((s.alpha_mod.powi(2) - s.beta_mod.powi(2) - 1.0).abs() < 1e-12, "mu2={mu2}");
        assert!((f.alpha_mod.powi(2) + f.beta_mod.powi(2) - 1.0).abs() < 1e-12, "mu2={mu2}");
    }
}

#[test]
fn gamma_form_against_stirling_oracle() {
    for mu2 in linspace(0.01, 5.0, 100) {
        let s = scalar_coefficients(mu2).unwrap();
        let alpha = (2.0 * PI).sqrt() * (-0.5 * PI * mu2).exp() / support::gamma_modulus(0.5, mu2);
        assert!((s.alpha_mod - alpha).abs() < 1e-8 * alpha, "scalar mu2={mu2}");

        let f = fermion_coefficients(mu2).unwrap();
        let alpha_f = (2.0 * PI / mu2).sqrt() * (-0.5 * PI * mu2).exp() / support::gamma_modulus(0.0, mu2);
        assert!((f.alpha_mod - alpha_f).abs() < 1e-8, "fermion mu2={mu2}");
    }
}

#[test]
fn squeezing_monotone_in_acceleration() {
    let accels = linspace(0.05, 20.0, 200);
    for stats in [Statistics::Scalar, Statistics::Fermion] {
        let rs: Vec<f64> = accels.iter().map(|&a| r_from_acceleration(1.0, a, stats).unwrap()).collect();
        assert!(rs.windows(2).all(|w| w[1] > w[0]));
    }
    assert!(r_from_acceleration(1.0, 1e6, Statistics::Scalar).unwrap() <= SCALAR_R_MAX);
    assert!(r_from_acceleration(1.0, 1e6, Statistics::Fermion).unwrap() <= FERMION_R_MAX);
}

#[test]
fn field_config_matches_acceleration_route() {
    let cfg = FieldConfig::from_acceleration(2.0, 0.7).unwrap();
    let mu2 = mu_squared(&cfg);
    assert!((mu2 - 2.0 / (2.0 * 0.7)).abs() < 1e-15);
    let r = scalar_coefficients(mu2).unwrap().r;
    assert!((r - r_from_acceleration(2.0, 0.7, Statistics::Scalar).unwrap()).abs() < 1e-14);
    let rf = fermion_coefficients(mu2).unwrap().r_f;
    assert!((rf - r_from_acceleration(2.0, 0.7, Statistics::Fermion).unwrap()).abs() < 1e-14);
}

#[test]
fn spectra_relations() {
    for &(m, a) in &[(1.0, 0.3), (1.0, 1.0), (0.5, 4.0), (3.0, 10.0)] {
        let s = spectra(m, a, m).unwrap();
        assert!((s.sinh2_r - (-PI * m / a).exp()).abs() < 1e-14);
        assert!((s.accelerated - s.sinh2_r).abs() < 1e-14);
        assert!((s.unruh - s.accelerated).abs() > 1e-3 * s.accelerated);
    }
}

#[test]
fn rejects_bad_inputs() {
    assert!(scalar_coefficients(-1.0).is_err());
    assert!(fermion_coefficients(f64::NAN).is_err());
    assert!(FieldConfig::new(0.0, 1.0).is_err());
    assert!(r_from_acceleration(1.0, -2.0, Statistics::Scalar).is_err());
    assert!(spectra(1.0, 1.0, 0.0).is_err());
}
