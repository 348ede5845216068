//! Branch solving, tracing, molecular fraction, and the Feshbach map,
//! pinned against frozen single-channel values and cross-route checks.

use fermipair::spectrum::{
    feshbach_map, molecular_fraction, molecular_fraction_grid, quantization_residual,
    solve_branch_point, trace_branch, FeshbachParams, TrapParams,
};
use fermipair::Error;

fn grid(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let n = ((hi - lo) / step).round() as usize;
    (0..=n).map(|i| lo + step * i as f64).collect()
}

#[test]
fn residual_vanishes_at_the_spherical_unitarity_energies() {
    let p = TrapParams::new(1.0, 0.0, 0.0).unwrap();
    for x in [-0.5, 0.5] {
        let r = quantization_residual(x, &p).unwrap();
        assert!(r.abs() < 1e-9, "residual({x}) = {r}");
    }
}

#[test]
fn unitarity_roots_in_a_spherical_trap() {
    let p = TrapParams::new(1.0, 0.0, 0.0).unwrap();
    let b1 = solve_branch_point(1, &p).unwrap();
    assert!((b1.x - 0.5).abs() < 1e-6, "branch 1 x = {}", b1.x);
    let b0 = solve_branch_point(0, &p).unwrap();
    assert!((b0.x + 0.5).abs() < 1e-6, "branch 0 x = {}", b0.x);
}

#[test]
fn single_channel_roots_match_frozen_values() {
    // Solved independently from the Gamma-ratio form of the condition.
    let cases = [
        (-1.0, 1, 0.310_306_598_111_361_02),
        (1.0, 1, 0.669_482_580_812_990_47),
        (-1.0, 0, -1.199_643_222_527_103_8),
        (2.0, 2, 1.732_445_229_249_780_2),
    ];
    for (inv_as, branch, want) in cases {
        let p = TrapParams::new(1.0, inv_as, 0.0).unwrap();
        let got = solve_branch_point(branch, &p).unwrap().x;
        assert!(
            (got - want).abs() < 1e-8,
            "inv_as = {inv_as}, branch {branch}: {got} vs {want}"
        );
    }
}

#[test]
fn single_channel_reduction_matches_the_gamma_ratio_condition() {
    // For lambda = 1, r0 = 0: pick x, map it to inv_as through the closed
    // form, re-solve, and require the original x back to 1e-8.
    use fermipair::specfun::f_spherical_closed_form;
    let xs = [-2.7, -1.6, -0.8, -0.2, 0.3, 0.7, 1.2, 1.8, 2.3, 2.9];
    for x in xs {
        let inv_as =
            f_spherical_closed_form(x).unwrap() / (2.0 * std::f64::consts::PI).sqrt();
        let branch = [0.0, 1.0, 2.0].iter().filter(|&&pole| pole < x).count();
        let p = TrapParams::new(1.0, inv_as, 0.0).unwrap();
        let got = solve_branch_point(branch, &p).unwrap().x;
        assert!((got - x).abs() < 1e-8, "x = {x}: re-solved {got}");
    }
}

#[test]
fn traced_branches_stay_in_their_pole_intervals_and_increase() {
    let base = TrapParams::new(5.0 / 6.0, 0.0, 0.04).unwrap();
    let g = grid(-10.0, 10.0, 0.5);
    let b1 = trace_branch(1, &g, &base).unwrap();
    let b2 = trace_branch(2, &g, &base).unwrap();
    for w in b1.points.windows(2) {
        assert!(w[1].x > w[0].x, "branch 1 not increasing at {}", w[1].inv_as);
    }
    for pt in &b1.points {
        assert!(pt.x > 0.0 && pt.x < 5.0 / 6.0, "branch 1 escaped: {}", pt.x);
    }
    for pt in &b2.points {
        assert!(pt.x > 5.0 / 6.0 && pt.x < 1.0, "branch 2 escaped: {}", pt.x);
    }
}

#[test]
fn branch_one_approaches_its_upper_pole_in_the_strong_attraction_limit() {
    let p = TrapParams::new(5.0 / 6.0, 200.0, 0.04).unwrap();
    let x = solve_branch_point(1, &p).unwrap().x;
    let gap = 5.0 / 6.0 - x;
    assert!(gap > 0.0 && gap < 1e-3, "gap = {gap}");
}

#[test]
fn molecular_fraction_is_zero_without_channel_coupling() {
    let base = TrapParams::new(1.0, 0.0, 0.0).unwrap();
    let b = trace_branch(1, &grid(-2.0, 2.0, 1.0), &base).unwrap();
    for i in 0..b.points.len() {
        assert_eq!(molecular_fraction(&b, i).unwrap(), 0.0);
        assert_eq!(b.points[i].beta2, 0.0);
    }
}

#[test]
fn molecular_fraction_stays_small_and_branch_two_is_smaller() {
    let base = TrapParams::new(5.0 / 6.0, 0.0, 0.04).unwrap();
    let g = grid(-10.0, 10.0, 0.5);
    let b1 = trace_branch(1, &g, &base).unwrap();
    let b2 = trace_branch(2, &g, &base).unwrap();
    for (p1, p2) in b1.points.iter().zip(&b2.points) {
        assert!(p1.beta2 < 0.01, "branch 1 beta2 = {} at {}", p1.beta2, p1.inv_as);
        // The higher branch's energy depends more weakly on inv_as, so its
        // fraction is smaller wherever the fractions are non-negligible.
        // Deep on the molecular side both are ~1e-4 and the ordering can
        // flip within that noise floor, hence the absolute slack.
        assert!(
            p2.beta2 <= p1.beta2 + 1e-5,
            "branch 2 larger at {}: {} vs {}",
            p1.inv_as,
            p2.beta2,
            p1.beta2
        );
    }
    let max1 = b1.points.iter().map(|p| p.beta2).fold(0.0, f64::max);
    let max2 = b2.points.iter().map(|p| p.beta2).fold(0.0, f64::max);
    assert!(max2 < max1, "sweep maxima out of order: {max2} vs {max1}");
}

#[test]
fn implicit_and_grid_fraction_routes_agree_on_interior_points() {
    let base = TrapParams::new(5.0 / 6.0, 0.0, 0.04).unwrap();
    let b = trace_branch(1, &grid(-2.0, 2.0, 0.1), &base).unwrap();
    for i in 1..b.points.len() - 1 {
        let implicit = molecular_fraction(&b, i).unwrap();
        let gridded = molecular_fraction_grid(&b, i).unwrap();
        assert!(
            (implicit - gridded).abs() < 1e-4,
            "i = {i}: {implicit} vs {gridded}"
        );
    }
}

#[test]
fn two_channel_unitarity_reference_point() {
    // Cross-language reference solved with an independent implementation.
    let p = TrapParams::new(1.0, 0.0, 0.04).unwrap();
    let b1 = solve_branch_point(1, &p).unwrap();
    assert!((b1.x - 0.484_084_355_519).abs() < 1e-7, "x = {}", b1.x);
    assert!((b1.beta2 - 0.007_993_935).abs() < 1e-6, "beta2 = {}", b1.beta2);
    let b0 = solve_branch_point(0, &p).unwrap();
    assert!((b0.x + 0.516_048_188_714).abs() < 1e-7, "x = {}", b0.x);
    assert!((b0.beta2 - 0.016_393_858).abs() < 1e-6, "beta2 = {}", b0.beta2);
}

#[test]
fn feshbach_map_limits_and_signs() {
    let fp = FeshbachParams {
        a_bg: -1.0e-9,
        b0: 0.02,
        delta: 0.01,
        mu: 1.0e-26,
        mass: 1.0e-26,
    };
    // Far from resonance the background value survives.
    let (a_s, _) = feshbach_map(1.0e6, &fp).unwrap();
    assert!((a_s / fp.a_bg - 1.0).abs() < 1e-7);
    // Zero crossing one width above resonance.
    let (a_s, _) = feshbach_map(fp.b0 + fp.delta, &fp).unwrap();
    assert!(a_s.abs() < 1e-20);
    // r0 carries the sign opposite to mu * a_bg * delta, independent of B.
    let (_, r0_a) = feshbach_map(0.05, &fp).unwrap();
    let (_, r0_b) = feshbach_map(0.08, &fp).unwrap();
    assert_eq!(r0_a, r0_b);
    assert!(r0_a * (fp.mu * fp.a_bg * fp.delta) < 0.0);
    assert!(matches!(feshbach_map(fp.b0, &fp), Err(Error::ResonanceField)));
}

#[test]
fn broad_resonance_guard_flags_large_effective_range() {
    assert!(TrapParams::new(1.0, 0.0, 0.04)
        .unwrap()
        .within_broad_resonance_limit());
    assert!(!TrapParams::new(1.0, 0.0, 0.2)
        .unwrap()
        .within_broad_resonance_limit());
}

#[test]
fn trace_rejects_unsorted_grids_and_reports_grid_context() {
    let base = TrapParams::new(1.0, 0.0, 0.04).unwrap();
    assert!(matches!(
        trace_branch(1, &[0.0, -1.0], &base),
        Err(Error::InvalidParameter(_))
    ));
}
