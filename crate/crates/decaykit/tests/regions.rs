//! Critical times, regions and the piecewise decay law.

use std::f64::consts::PI;

use decaykit::dos::{
    build_dos_with, BuildOptions, DensityOfStates, DimensionlessResonance, FormFactor, Pole,
    PoleSet, Residues,
};
use decaykit::regions::{
    be8, critical_time_first_oscillation, critical_time_intersection, eta_ratio,
    exponential_probability_sum, intersection_function, intersection_maximum, m_minimum,
    modulating_i, modulation_envelope, multi_pole_modulation, n_cl_solve, region_boundaries,
    table1, transition_constant, transition_constant_formula, variance_critical_time,
    PiecewiseModel, Region, TABLE1_X,
};
use decaykit::survival::{amplitude_closed_form, exponential_amplitude, nonexponential_amplitude};
use decaykit::Error;
use num_complex::Complex64;
use proptest::prelude::*;

fn narrow(x: f64, nu: f64, b: f64) -> DensityOfStates {
    DimensionlessResonance::new(x, nu, b)
        .density_with(BuildOptions::unchecked())
        .unwrap()
}

#[test]
fn table_rows_at_the_ends() {
    let rows = table1(2.0, 0.5, &TABLE1_X).unwrap();
    let first = &rows[0];
    assert!((first.tau_g / 4.824e-12 - 1.0).abs() < 5e-3);
    assert!((first.tau_cs.unwrap() / 1.988e-6 - 1.0).abs() < 1e-3);
    assert!((first.n_g - 0.384).abs() < 1e-3);
    let last = &rows[11];
    assert!((last.tau_g - 0.639).abs() < 1e-3);
    assert!((last.n_g - 0.509).abs() < 1e-3);
    let mid = &rows[10];
    assert!((mid.tau_cs.unwrap() - 0.206).abs() < 1e-3);
    for w in rows.windows(2) {
        assert!(w[1].tau_g > w[0].tau_g);
    }
    for r in &rows {
        assert_eq!(r.tau_osc, 4.0 * PI * r.x_d);
        if r.x_d <= 1e-2 {
            assert!((0.38..=0.40).contains(&r.n_g), "{}", r.n_g);
        }
    }
}

#[test]
fn no_intersection_for_unit_slope() {
    for r in table1(1.0, 0.5, &[1e-6, 1e-3, 1e-2, 1e-1]).unwrap() {
        assert!(r.tau_cs.is_none() && r.n_cs.is_none(), "x = {}", r.x_d);
    }
}

#[test]
fn intersection_tangency_and_trivia() {
    let alpha = 0.7;
    let (tp, fp) = intersection_maximum(alpha);
    assert_eq!(critical_time_intersection(alpha, fp).unwrap(), vec![tp]);
    assert!(critical_time_intersection(alpha, fp * 1.01)
        .unwrap()
        .is_empty());
    assert_eq!(intersection_function(alpha, 0.0), 1.0);
    assert_eq!(intersection_function(alpha, alpha), 0.0);
    assert!((critical_time_first_oscillation(0.1) - 1.257).abs() < 1e-3);
    assert!((critical_time_first_oscillation(1e-4) - 1.257e-3).abs() < 1e-6);
    assert_eq!(variance_critical_time(1.0, 1.0, 0.5).unwrap().0, 1.0);
    assert!(matches!(
        variance_critical_time(-1.0, 1.0, 1.0),
        Err(Error::NegativeVariance(_))
    ));
}

proptest! {
    #[test]
    fn intersection_root_count(log_alpha in -6.0f64..1.5, u in 0.0f64..1.0) {
        let alpha = 10f64.powf(log_alpha);
        let (_, fp) = intersection_maximum(alpha);
        let r2 = 1.2 * fp * u + 1e-9;
        let roots = critical_time_intersection(alpha, r2).unwrap();
        let expected = if r2 > fp { 0 } else if r2 < 1.0 { 1 } else { 2 };
        prop_assert_eq!(roots.len(), expected);
        for r in roots {
            prop_assert!((0.0..=alpha).contains(&r));
            let g = |t: f64| intersection_function(alpha, t) - r2;
            let d = 1e-12 * r.max(1.0);
            if r > d && r + d < alpha {
                prop_assert!(g(r - d) * g(r + d) <= 0.0);
            }
            // residual up to the conditioning of f at the root
            let slope = (r * r.exp() * (2.0 / alpha + 1.0)).max(1.0);
            prop_assert!(g(r).abs() < 1e-12 * r2.max(1.0) + 8.0 * f64::EPSILON * slope);
        }
    }
}

#[test]
fn n_cl_matches_direct_crossing() {
    let dos = narrow(0.1, 0.5, 1.0);
    let c = transition_constant(&dos).unwrap();
    let (small, n_cl) = n_cl_solve(&c, 0.1, 0.5).unwrap();
    assert!(small < 1.0);
    let residual = |n: f64| n.powf(3.0) * (-4.0 * PI * 0.1 * n).exp() - 1.0 / c.modulus().powi(2);
    assert!(residual(n_cl).abs() < 1e-10);
    // |A_e| = |A_ne| from the amplitudes themselves
    let gap = |n: f64| {
        let t = 2.0 * PI * n;
        exponential_amplitude(&dos, t).norm().ln()
            - nonexponential_amplitude(&dos, t).unwrap().norm().ln()
    };
    let (mut lo, mut hi) = (5.0, 30.0);
    for _ in 0..50 {
        let mid = 0.5 * (lo + hi);
        if gap(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    assert!((lo / n_cl - 1.0).abs() < 0.02, "{lo} vs {n_cl}");
}

#[test]
fn narrower_resonances_cross_later() {
    let mut prev = f64::INFINITY;
    for x in [1e-3, 1e-2, 0.1] {
        let dos = narrow(x, 0.5, 1.0);
        let (_, n_cl) = n_cl_solve(&transition_constant(&dos).unwrap(), x, 0.5).unwrap();
        assert!(n_cl < prev);
        prev = n_cl;
    }
}

#[test]
fn ratio_from_constant_matches_amplitudes() {
    let dos = narrow(0.1, 0.5, 1.0);
    let c = transition_constant(&dos).unwrap();
    let n: f64 = 5.0;
    let t = 2.0 * PI * n;
    let direct =
        (nonexponential_amplitude(&dos, t).unwrap() / exponential_amplitude(&dos, t)).norm();
    let formula = (2.0 * PI * 0.1 * n).exp() / (c.modulus() * n.powf(1.5));
    assert!(
        (direct / formula - 1.0).abs() < 0.05,
        "{direct} vs {formula}"
    );
    let xi = Complex64::new(1.0, -0.1);
    let g0 = 1.0;
    let a = transition_constant_formula(0.5, xi, Complex64::new(0.1, 0.3), -Complex64::i(), g0)
        .unwrap();
    let b = transition_constant_formula(0.5, xi, Complex64::new(0.2, 0.6), -Complex64::i(), g0)
        .unwrap();
    assert!((b.modulus() / a.modulus() - 2.0).abs() < 1e-14);
}

#[test]
fn eta_and_envelope_properties() {
    let (x, nu) = (0.1, 0.5);
    let dos = narrow(x, nu, 1.0);
    let c = transition_constant(&dos).unwrap();
    let (_, n_cl) = n_cl_solve(&c, x, nu).unwrap();
    let peak = m_minimum(x, nu);
    let h = 1e-5 * peak;
    let slope = (eta_ratio(peak + h, &c, x, nu) - eta_ratio(peak - h, &c, x, nu)) / (2.0 * h);
    assert!(slope.abs() < 1e-8 * eta_ratio(peak, &c, x, nu));
    assert!((eta_ratio(n_cl, &c, x, nu) - 1.0).abs() < 1e-12);
    assert!((modulation_envelope(n_cl, &c, x, nu) - 1.0).abs() < 1e-12);
    for k in 1..400 {
        let n = 1.0 + 0.1 * k as f64;
        let eta = eta_ratio(n, &c, x, nu);
        if n < n_cl {
            assert!(eta > 1.0 / eta);
        } else {
            assert!(eta < 1.0 / eta);
        }
        let i = modulating_i(n, &c, x, nu);
        assert!((0.0..=2.0).contains(&i));
        let m = modulation_envelope(n, &c, x, nu);
        assert!(m > 0.0 && m <= 1.0);
    }
    let deepest = (0..1000)
        .map(|k| modulating_i(n_cl - 0.5 + k as f64 / 1000.0, &c, x, nu))
        .fold(f64::INFINITY, f64::min);
    assert!(deepest < 0.15);
}

#[test]
fn boundaries_for_reference_resonance() {
    let dos = narrow(0.1, 0.5, 1.0);
    let r = region_boundaries(&dos).unwrap();
    assert!((r.n_min_m - 2.387).abs() < 1e-3);
    assert!((4.0 * PI * 0.1 * r.n_min_m - 3.0).abs() < 1e-12);
    let (lo, hi) = (r.intervals[1].0, r.intervals[1].1.unwrap());
    assert!((0.5 * (lo + hi) - r.n_cl).abs() < 1e-9);
    assert_eq!(r.intervals[0], (1.0, Some(r.n_min_m)));
    assert_eq!(r.intervals[2], (hi, None));
    assert!(r.n_cl > r.n_min_m);
    assert!(r.tau_cs_intersection.is_empty());
}

#[test]
fn small_time_formula_tracks_full_probability() {
    for x in [1e-3, 1e-2] {
        let dos = narrow(x, 0.5, 1.0);
        let model = PiecewiseModel::new(&dos).unwrap();
        let mut sum = 0.0;
        for k in 1..50 {
            let n = k as f64 / 50.0;
            let full = amplitude_closed_form(&dos, 2.0 * PI * n)
                .unwrap()
                .norm_sqr();
            let (region, p) = model.probability(n).unwrap();
            assert_eq!(region, Region::SmallTime);
            sum += (p / full - 1.0).powi(2);
        }
        assert!((sum / 49.0).sqrt() < 0.02);
    }
}

#[test]
fn piecewise_law_tracks_full_probability() {
    let dos = narrow(0.1, 0.5, 1.0);
    let model = PiecewiseModel::new(&dos).unwrap();
    let [(a, Some(b)), (_, Some(c)), _] = model.report.intervals else {
        panic!()
    };
    for (region, lo, hi) in [
        (Region::Intermediate, a, b),
        (Region::Transition, b, c),
        (Region::Large, c, 2.0 * c),
    ] {
        let mut sum = 0.0;
        let count = 60;
        for k in 1..count {
            let n = lo + (hi - lo) * k as f64 / count as f64;
            let full = amplitude_closed_form(&dos, 2.0 * PI * n)
                .unwrap()
                .norm_sqr();
            let (r, p) = model.probability(n).unwrap();
            assert_eq!(r, region);
            sum += (p / full - 1.0).powi(2);
        }
        let rms = (sum / (count - 1) as f64).sqrt();
        assert!(rms < 0.05, "{region:?}: {rms}");
    }
}

#[test]
fn seams_agree_within_envelope() {
    let dos = narrow(0.1, 0.5, 1.0);
    let m = PiecewiseModel::new(&dos).unwrap();
    let r = &m.report;
    let b = r.intervals[1].0;
    let c = r.intervals[2].0;
    assert!((m.intermediate(b) / m.transition(b) - 1.0).abs() < 0.1);
    assert!((m.transition(c) / m.large(c) - 1.0).abs() < 0.1);
}

fn two_poles(residues: Option<Vec<Complex64>>) -> DensityOfStates {
    let poles = vec![Pole::new(1.0, 0.02).unwrap(), Pole::new(1.1, 0.06).unwrap()];
    let set = match residues {
        Some(r) => PoleSet::new(poles, Residues::Explicit(r)).unwrap(),
        None => PoleSet::narrow(poles).unwrap(),
    };
    build_dos_with(
        &set,
        0.5,
        FormFactor::Exponential { b: 1.0 },
        BuildOptions::unchecked(),
    )
    .unwrap()
}

#[test]
fn nearest_pole_modulation() {
    let r = Complex64::new(0.03, 0.1);
    let dos = two_poles(Some(vec![r, r]));
    let m0 = multi_pole_modulation(&dos, 0.0).unwrap();
    assert!((m0.frequency - 5.0).abs() < 1e-12);
    assert!((m0.damping - 1.0).abs() < 1e-12);
    for tau in [0.0, 0.3, 1.0, 2.5] {
        let m = multi_pole_modulation(&dos, tau).unwrap();
        let expected = 1.0 + 2.0 * (5.0 * tau).cos() * (-tau).exp();
        assert!((m.nearest - expected).abs() < 1e-12);
        assert_eq!(m.nearest, m.dominant_terms);
    }
    assert!((multi_pole_modulation(&dos, 40.0).unwrap().full - 1.0).abs() < 1e-12);
    assert!(matches!(
        multi_pole_modulation(&narrow(0.1, 0.5, 1.0), 1.0),
        Err(Error::SinglePole)
    ));
}

#[test]
fn pairwise_sum_equals_exponential_probability() {
    let dos = two_poles(None);
    for tau in [0.0, 0.2, 1.3, 4.0, 9.0] {
        let t = tau / dos.dominant().omega;
        let direct = exponential_amplitude(&dos, t).norm_sqr();
        let sum = exponential_probability_sum(&dos, tau);
        assert!(
            (sum - direct).abs() < 1e-12 * direct.max(1e-300),
            "tau = {tau}"
        );
    }
}

#[test]
fn beryllium_preset() {
    let r = be8(1.0, 0.5).unwrap();
    assert!((r.x_s / 3e-5 - 1.0).abs() < 0.02);
    assert!((r.b_per_mev / 10.83 - 1.0).abs() < 5e-3);
    assert_eq!(r.negative_variance.len(), 1);
    let (lo, hi) = r.negative_variance[0];
    assert!((hi / 0.5 - 1.0).abs() < 0.05);
    assert!((lo / 4.8e-11).log10().abs() < 1.0);
    // power law after roughly 1.5e5 oscillations
    let dos = DimensionlessResonance::new(r.x_s, 0.5, 1.0)
        .density()
        .unwrap();
    let n_cl = region_boundaries(&dos).unwrap().n_cl;
    assert!((n_cl / 1.5e5 - 1.0).abs() < 0.1, "{n_cl}");
}
