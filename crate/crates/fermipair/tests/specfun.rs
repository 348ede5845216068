//! Behavior of the trap function, its closed form, and the pole lattice,
//! pinned against values frozen from an independent high-precision run.

use fermipair::specfun::{
    enumerate_poles, eval_f, f_spherical_closed_form, gamma_fn, FArgs,
};
use fermipair::Error;

fn rel_err(got: f64, want: f64) -> f64 {
    (got - want).abs() / want.abs().max(1e-300)
}

#[test]
fn gamma_matches_classical_identities() {
    assert!(rel_err(gamma_fn(0.5).unwrap(), std::f64::consts::PI.sqrt()) < 1e-12);
    assert!(rel_err(gamma_fn(1.0).unwrap(), 1.0) < 1e-13);
    assert!(rel_err(gamma_fn(5.0).unwrap(), 24.0) < 1e-13);
}

#[test]
fn gamma_matches_frozen_high_precision_values() {
    assert!(rel_err(gamma_fn(4.2).unwrap(), 7.756_689_535_793_177_6) < 1e-12);
    assert!(rel_err(gamma_fn(-2.5).unwrap(), -0.945_308_720_482_941_88) < 1e-12);
    assert!(rel_err(gamma_fn(19.5).unwrap(), 2.772_432_298_633_371_8e16) < 1e-12);
    assert!(rel_err(gamma_fn(-19.5).unwrap(), 5.811_045_977_502_236_5e-18) < 1e-12);
}

#[test]
fn gamma_rejects_nonpositive_integers() {
    for z in [0.0, -1.0, -7.0] {
        assert!(matches!(gamma_fn(z), Err(Error::GammaPole(_))), "z = {z}");
    }
}

#[test]
fn f_hits_the_exact_spherical_anchors() {
    let f = eval_f(&FArgs::new(1.0, 1.0).unwrap()).unwrap();
    assert!((f + 2.0).abs() < 1e-8, "F(1,1) = {f}");
    let f = eval_f(&FArgs::new(2.0, 1.0).unwrap()).unwrap();
    assert!((f + 4.0).abs() < 1e-8, "F(2,1) = {f}");
}

#[test]
fn f_matches_frozen_values_off_the_spherical_axis() {
    let cases = [
        (0.7, 1.2, -0.684_095_698_155_302_65),
        (2.5, 20.0, 10.867_922_522_733_076),
        (0.04, 0.05, 2.002_163_469_760_680_6),
        (-0.3, 1.2, -3.452_794_380_790_971_1),
        (-1.02, 1.2, -24.243_853_053_725_488),
    ];
    for (u, eta, want) in cases {
        let got = eval_f(&FArgs::new(u, eta).unwrap()).unwrap();
        assert!(rel_err(got, want) < 1e-8, "F({u},{eta}) = {got}, want {want}");
    }
}

#[test]
fn continuation_below_zero_matches_the_closed_form() {
    for x in [0.25, 0.9, 1.3, 2.75, -0.3] {
        let closed = f_spherical_closed_form(x).unwrap();
        let continued = eval_f(&FArgs::new(-x, 1.0).unwrap()).unwrap();
        assert!(
            rel_err(continued, closed) < 1e-8,
            "x = {x}: continued {continued} vs closed {closed}"
        );
    }
}

#[test]
fn closed_form_grid_agreement_within_one_part_per_million() {
    // 200 points in (-2, 3), keeping 0.05 away from the poles at 0, 1, 2.
    let mut checked = 0;
    for i in 0..200 {
        let x = -2.0 + 5.0 * (i as f64 + 0.5) / 200.0;
        if [0.0, 1.0, 2.0].iter().any(|p| (x - p).abs() < 0.05) {
            continue;
        }
        let closed = f_spherical_closed_form(x).unwrap();
        let got = eval_f(&FArgs::new(-x, 1.0).unwrap()).unwrap();
        assert!(
            (got - closed).abs() / (1.0 + closed.abs()) < 1e-6,
            "x = {x}: {got} vs {closed}"
        );
        checked += 1;
    }
    assert!(checked > 180);
}

#[test]
fn f_diverges_like_eta_over_u_at_small_u() {
    let u = 1e-5;
    let f = eval_f(&FArgs::new(u, 1.0).unwrap()).unwrap();
    assert!((f * u - 1.0).abs() < 1e-3, "u*F = {}", f * u);
}

#[test]
fn f_is_strictly_decreasing_in_u_between_poles() {
    // Between the poles at u = -1 and u = 0, and on u > 0.
    for (lo, hi) in [(-0.95, -0.05), (0.05, 2.0)] {
        let mut prev = f64::INFINITY;
        for i in 0..40 {
            let u = lo + (hi - lo) * i as f64 / 39.0;
            let f = eval_f(&FArgs::new(u, 1.0).unwrap()).unwrap();
            assert!(f < prev, "F not decreasing at u = {u}");
            prev = f;
        }
    }
}

#[test]
fn f_rejects_arguments_inside_the_exclusion_radius() {
    let args = FArgs::new(-1.0 + 1e-9, 1.0).unwrap();
    assert!(matches!(eval_f(&args), Err(Error::NearPole { .. })));
    let args = FArgs::new(1e-9, 1.0).unwrap();
    assert!(matches!(eval_f(&args), Err(Error::NearPole { .. })));
    // Lowering the radius admits the same point.
    let args = FArgs::with_exclusion(-1.0 + 1e-7, 1.0, 1e-8).unwrap();
    assert!(eval_f(&args).is_ok());
}

#[test]
fn residue_constant_matches_from_both_sides_of_a_pole() {
    // (u - u*) * F tends to the same finite constant from both sides.
    let pole = -1.0;
    let eps = 1e-4;
    let below = eval_f(&FArgs::new(pole - eps, 1.0).unwrap()).unwrap();
    let above = eval_f(&FArgs::new(pole + eps, 1.0).unwrap()).unwrap();
    let c_below = -eps * below;
    let c_above = eps * above;
    assert!(c_below * c_above > 0.0, "sides disagree in sign");
    assert!(
        (c_below - c_above).abs() / c_above.abs() < 0.01,
        "{c_below} vs {c_above}"
    );
}

#[test]
fn closed_form_anchors_and_zeros() {
    assert!((f_spherical_closed_form(-1.0).unwrap() + 2.0).abs() < 1e-12);
    for x in [-0.5, 0.5, 1.5, 7.5] {
        assert_eq!(f_spherical_closed_form(x).unwrap(), 0.0, "x = {x}");
    }
    assert!(matches!(
        f_spherical_closed_form(0.0),
        Err(Error::GammaPole(_))
    ));
    assert!(rel_err(
        f_spherical_closed_form(-0.3).unwrap(),
        1.821_777_235_184_868_8
    ) < 1e-12);
    assert!(rel_err(
        f_spherical_closed_form(0.25).unwrap(),
        -3.594_420_704_206_776_6
    ) < 1e-12);
    assert!(rel_err(
        f_spherical_closed_form(0.9).unwrap(),
        14.090_952_680_268_494
    ) < 1e-12);
}

#[test]
fn pole_lattice_for_rational_aspect_ratios() {
    let lat = enumerate_poles(5.0 / 6.0, 2.0).unwrap();
    let want = [0.0, 5.0 / 6.0, 1.0, 5.0 / 3.0, 11.0 / 6.0, 2.0];
    assert_eq!(lat.len(), want.len());
    for (got, want) in lat.values().iter().zip(want) {
        assert!((got - want).abs() < 1e-9, "{got} vs {want}");
    }
    assert!(lat.multiplicities().iter().all(|&m| m == 1));
}

#[test]
fn pole_lattice_merges_degenerate_levels() {
    let lat = enumerate_poles(1.0, 2.0).unwrap();
    assert_eq!(lat.values(), &[0.0, 1.0, 2.0]);
    assert_eq!(lat.multiplicities(), &[1, 2, 3]);
    assert_eq!(lat.values()[0], 0.0);
}

#[test]
fn pole_lattice_quasi_one_dimensional_spacing() {
    let lat = enumerate_poles(0.05, 0.3).unwrap();
    assert_eq!(lat.len(), 7);
    for (i, v) in lat.values().iter().enumerate() {
        assert!((v - 0.05 * i as f64).abs() < 1e-9);
    }
}

#[test]
fn pole_lattice_is_deterministic() {
    let a = enumerate_poles(7.0 / 6.0, 9.0).unwrap();
    let b = enumerate_poles(7.0 / 6.0, 9.0).unwrap();
    assert_eq!(a, b);
}
