//! Density of states against frozen high-precision quadrature values.

use decaykit::dos::{
    build_dos, build_dos_with, constant_ff_pole_set, constant_ff_residues, normalize_dos,
    BuildOptions, DimensionlessResonance, FormFactor, Pole, PoleSet, Residues,
};
use decaykit::Error;
use num_complex::Complex64;
use serde_json::Value;

fn oracle() -> Value {
    serde_json::from_str(include_str!("data/physics_oracle.json")).unwrap()
}

fn build(x: f64, nu: f64, b: f64) -> decaykit::dos::DensityOfStates {
    let set = PoleSet::narrow(vec![Pole::dimensionless(x).unwrap()]).unwrap();
    build_dos_with(
        &set,
        nu,
        FormFactor::Exponential { b },
        BuildOptions::unchecked(),
    )
    .unwrap()
}

#[test]
fn normalization_and_values_match_oracle() {
    for c in oracle()["density_cases"].as_array().unwrap() {
        let (x, nu, b) = (
            c["x"].as_f64().unwrap(),
            c["nu"].as_f64().unwrap(),
            c["b_s"].as_f64().unwrap(),
        );
        let dos = build(x, nu, b);
        let n = c["norm"].as_f64().unwrap();
        assert!(
            (dos.normalization() - n).abs() < 1e-12 * n,
            "x = {x}: {} vs {n}",
            dos.normalization()
        );
        let r1 = c["rho_at_1"].as_f64().unwrap();
        assert!((dos.density_near(0, 0.0) - r1).abs() < 1e-12 * r1.abs());
        let r3 = c["rho_at_3"].as_f64().unwrap();
        assert!((dos.density(3.0) - r3).abs() < 1e-11 * r3.abs().max(1e-3));
        let rep = normalize_dos(&dos).unwrap();
        assert!((rep.closed_form - rep.quadrature).abs() < 1e-9 * n);
    }
}

#[test]
fn narrow_mode_gamma_is_minus_i() {
    let dos = DimensionlessResonance::new(0.1, 0.5, 1.0)
        .density()
        .unwrap();
    let g = dos.gamma(0) * dos.normalization();
    assert!((g - Complex64::new(0.0, -1.0)).norm() < 1e-15);
}

#[test]
fn real_axis_pairing_is_real() {
    let dos = DimensionlessResonance::new(0.1, 0.5, 1.0)
        .density()
        .unwrap();
    for e in [0.01, 0.3, 0.97, 1.0, 1.4, 5.0, 20.0] {
        let v = dos.density_complex(Complex64::new(e, 0.0)).unwrap();
        assert!(v.im.abs() <= 1e-14 * v.re.abs(), "E = {e}: {v}");
        assert!((v.re - dos.density(e)).abs() < 1e-13 * v.re.abs().max(1e-12));
    }
}

#[test]
fn gaussian_rejected() {
    let set = PoleSet::narrow(vec![Pole::dimensionless(0.1).unwrap()]).unwrap();
    let r = build_dos(&set, 0.5, FormFactor::Gaussian { a: 1.0 });
    assert_eq!(r.unwrap_err(), Error::GaussianRejected);
    let r = build_dos(&set, 0.5, FormFactor::Gaussian { a: 1e-6 });
    assert_eq!(r.unwrap_err(), Error::GaussianRejected);
}

#[test]
fn nu_ranges() {
    let set = PoleSet::narrow(vec![Pole::dimensionless(0.1).unwrap()]).unwrap();
    assert!(matches!(
        build_dos(&set, 1.5, FormFactor::Exponential { b: 1.0 }),
        Err(Error::NuOutOfRange { .. })
    ));
    assert!(build_dos(&set, 1.0, FormFactor::Exponential { b: 1.0 }).is_ok());
    assert_eq!(
        build_dos(&set, 0.5, FormFactor::Constant).unwrap_err(),
        Error::SingleResonanceConstantFF
    );
}

#[test]
fn narrow_mode_width_limit() {
    let set = PoleSet::narrow(vec![Pole::dimensionless(0.2).unwrap()]).unwrap();
    assert!(matches!(
        build_dos(&set, 0.5, FormFactor::Exponential { b: 1.0 }),
        Err(Error::NarrowModeInvalid { .. })
    ));
}

#[test]
fn wrong_residue_sign_is_negative() {
    // γ = +i flips the peak
    let set = PoleSet::new(
        vec![Pole::dimensionless(0.1).unwrap()],
        Residues::Explicit(vec![
            Complex64::new(0.0, -0.5) * (-Complex64::new(1.0, -0.1)).exp(),
        ]),
    )
    .unwrap();
    let r = build_dos(&set, 0.5, FormFactor::Exponential { b: 1.0 });
    assert!(
        matches!(
            r,
            Err(Error::NegativeDensity { .. }) | Err(Error::NonfiniteResult(_))
        ),
        "{r:?}"
    );
}

#[test]
fn threshold_behaviour() {
    let dos = DimensionlessResonance::new(0.1, 0.5, 1.0)
        .density()
        .unwrap();
    let e = 1e-10;
    let ratio = dos.density(e) / e.powf(0.5);
    assert!((ratio - dos.beta0()).abs() < 1e-8 * dos.beta0().abs());
}

#[test]
fn bounded_on_imaginary_axis() {
    let dos = DimensionlessResonance::new(0.1, 0.5, 1.0)
        .density()
        .unwrap();
    let mut max = 0.0f64;
    for k in 0..400 {
        let y = 1e-4 * 1.05f64.powi(k);
        let v = dos.density_complex(Complex64::new(0.0, -y)).unwrap();
        max = max.max(v.norm());
    }
    assert!(max < 10.0);
}

#[test]
fn constant_form_factor_single_pole_residue() {
    let o: serde_json::Value =
        serde_json::from_str(include_str!("data/physics_oracle.json")).unwrap();
    let want = o["constant_ff_residue_nu0.5_z1-0.1i"].as_array().unwrap();
    let want = Complex64::new(want[0].as_f64().unwrap(), want[1].as_f64().unwrap());
    let r = constant_ff_residues(Pole::new(1.0, 0.2).unwrap(), 0.5).unwrap();
    assert!((r.residue - want).norm() < 1e-14, "{} vs {want}", r.residue);
    assert!(r.sum_rule.abs() < 1e-15 && r.decay_rule.abs() < 1e-15);
    assert!(r.moment_conditions[1].abs() > 1e-3);
    assert!(!r.consistent);
    // vanishing width: R → −1/(2πi)
    let r = constant_ff_residues(Pole::new(1.0, 2e-9).unwrap(), 0.5).unwrap();
    let limit = -1.0 / Complex64::new(0.0, 2.0 * std::f64::consts::PI);
    assert!((r.residue - limit).norm() < 1e-8);
}

#[test]
fn constant_form_factor_multi_pole_conditions() {
    let poles = vec![
        Pole::new(1.0, 0.2).unwrap(),
        Pole::new(2.5, 0.3).unwrap(),
        Pole::new(4.0, 0.5).unwrap(),
    ];
    let set = constant_ff_pole_set(poles, 0.4).unwrap();
    let dos = build_dos_with(&set, 0.4, FormFactor::Constant, BuildOptions::unchecked()).unwrap();
    let (a, b) = dos.constant_ff_residuals();
    assert!(a.abs() < 1e-12 && b.abs() < 1e-12);
    assert!((dos.normalization() - 1.0).abs() < 1e-12);
    let q = dos.normalization_quadrature().unwrap();
    assert!((q - 1.0).abs() < 1e-8, "{q}");
}
