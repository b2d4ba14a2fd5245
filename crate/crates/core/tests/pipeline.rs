mod common;

use common::{angle, certainty, crossed};
use cst_core::stats::circular_diff;
use cst_core::{
    cst_extract, cst_order, planar_wave, white_noise, Boundary, CstParams, ScalarField, WaveSpec,
};
use proptest::prelude::*;

const SWEEP: [f64; 7] = [0.0, 15.0, 30.0, 45.0, 60.0, 90.0, 120.0];

fn wave(lambda: f64, theta: f64) -> ScalarField {
    planar_wave(&WaveSpec::new(lambda, theta), 128, 128).unwrap()
}

#[test]
fn planar_wave_at_30_degrees() {
    let m = cst_order(&wave(8.0, 30.0), 1, &CstParams::default()).unwrap();
    assert!(circular_diff(angle(&m), 60.0, 360.0).abs() < 1.0);
    assert!(certainty(&m) >= 0.99);
}

#[test]
fn saturation_on_planar_waves() {
    let p = CstParams::default();
    for lambda in [6.0, 8.0, 12.0] {
        for theta in [0.0, 20.0, 75.0] {
            let c = certainty(&cst_order(&wave(lambda, theta), 1, &p).unwrap());
            assert!(c >= 0.99, "lambda={lambda} theta={theta}: {c}");
        }
    }
}

#[test]
fn double_angle_equivariance() {
    let p = CstParams::default();
    for theta in SWEEP {
        let a = angle(&cst_order(&wave(8.0, theta), 1, &p).unwrap());
        let err = circular_diff(a, 2.0 * theta, 360.0);
        assert!(err.abs() < 1.0, "theta={theta}: angle {a}");
    }
}

#[test]
fn pi_periodicity() {
    let p = CstParams::default();
    for theta in [10.0, 37.0] {
        let a = cst_order(&wave(8.0, theta), 1, &p).unwrap();
        let b = cst_order(&wave(8.0, theta + 180.0), 1, &p).unwrap();
        let scale = a.inn().max();
        for (x, y) in a.i2n0().data().iter().zip(b.i2n0().data()) {
            assert!((x - y).norm() <= 1e-10 * scale.max(1.0));
        }
    }
}

#[test]
fn gamma_changes_magnitude_not_angle() {
    let f = wave(8.0, 30.0);
    let reference = angle(&cst_order(&f, 1, &CstParams::default()).unwrap());
    for gamma in [0.0, 0.5, 1.0, 2.0, 3.0] {
        let m = cst_order(&f, 1, &CstParams::default().with_gamma(gamma)).unwrap();
        assert!(
            circular_diff(angle(&m), reference, 360.0).abs() < 0.5,
            "gamma={gamma}"
        );
    }
}

#[test]
fn two_folded_selectivity() {
    let f = crossed(&[0.0, 90.0], 8.0, 128);
    let maps = cst_extract(&f, &CstParams::default().with_orders([1, 2])).unwrap();
    assert!(certainty(&maps[0]) <= 0.2, "n=1: {}", certainty(&maps[0]));
    assert!(certainty(&maps[1]) >= 0.9, "n=2: {}", certainty(&maps[1]));
}

#[test]
fn four_angle_equivariance_on_crossed_pattern() {
    // sigma1 = 1.0: at 0.6 the order-2 kernel is too coarsely sampled to be isotropic.
    let p = CstParams::default().with_orders([2]).with_sigmas(1.0, 4.0);
    for theta in SWEEP {
        let m = cst_order(&crossed(&[theta, theta + 90.0], 8.0, 128), 2, &p).unwrap();
        let err = circular_diff(angle(&m), 4.0 * theta, 360.0);
        assert!(err.abs() < 2.0, "theta={theta}: err {err}");
    }
}

#[test]
fn three_folded_pattern_saturates_order_three() {
    let p = CstParams::default()
        .with_orders([1, 3])
        .with_sigmas(1.0, 4.0);
    let maps = cst_extract(&crossed(&[0.0, 60.0, 120.0], 8.0, 128), &p).unwrap();
    assert!(certainty(&maps[0]) <= 0.2);
    assert!(certainty(&maps[1]) >= 0.8, "n=3: {}", certainty(&maps[1]));
}

#[test]
fn bound_holds_on_noise_for_all_orders_and_boundaries() {
    for (seed, b) in [
        (1, Boundary::Reflect),
        (2, Boundary::Replicate),
        (3, Boundary::Zero),
    ] {
        let f = white_noise(96, 96, seed).unwrap();
        let p = CstParams::default().with_orders([1, 2, 3]).with_boundary(b);
        for m in cst_extract(&f, &p).unwrap() {
            assert_eq!(m.bound_violations(), 0, "seed {seed} order {}", m.order());
            assert!(m.inn().min() >= 0.0);
        }
    }
}

#[test]
fn small_sigma_still_produces_finite_maps() {
    let f = white_noise(32, 32, 4).unwrap();
    let p = CstParams::default().with_sigmas(0.2, 1.0);
    let m = cst_order(&f, 1, &p).unwrap();
    assert!(m.inn().data().iter().all(|v| v.is_finite()));
    assert_eq!(m.bound_violations(), 0);
}

#[test]
fn kernel_larger_than_image_is_rejected() {
    let f = white_noise(12, 12, 1).unwrap();
    assert!(matches!(
        cst_order(&f, 1, &CstParams::default()),
        Err(cst_core::CstError::KernelTooLarge { .. })
    ));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn bound_holds_for_arbitrary_inputs(
        data in prop::collection::vec(-1e3f64..1e3, 40 * 40),
        gamma in 0.0f64..3.0,
        n in 1u32..=3,
    ) {
        let f = ScalarField::new(40, 40, data).unwrap();
        let p = CstParams::default().with_orders([n]).with_gamma(gamma).with_sigmas(0.8, 2.5);
        let m = cst_order(&f, n, &p).unwrap();
        prop_assert_eq!(m.bound_violations(), 0);
        prop_assert!(m.i2n0().data().iter().all(|c| c.re.is_finite() && c.im.is_finite()));
    }
}
