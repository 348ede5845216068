//! Self-contained acceptance checks, runnable from the CLI's validate mode
//! and from the test suite.
//!
//! Each check is independent, deterministic, and returns a pass/fail
//! verdict with a short numeric detail line. Details never embed measured
//! durations, so validate-mode output stays byte-identical across runs;
//! checks with a runtime budget only note when the budget is exceeded.

use std::time::Instant;

use nalgebra::DMatrix;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::entangle::converge_entropy;
use crate::error::Result;
use crate::pairstate::{assemble_amplitude, beamsplitter_coeffs, relative_expansion};
use crate::runner;
use crate::spectrum::{molecular_fraction, solve_branch_point, trace_branch, TrapParams};
use crate::specfun::{eval_f, f_spherical_closed_form, FArgs};
use crate::toymodel::{toy_curve_point, toy_saturation_entropy};

/// Verdict of one acceptance check.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    fn from_outcome(name: &'static str, outcome: Result<(bool, String)>) -> CheckResult {
        match outcome {
            Ok((passed, detail)) => CheckResult { name, passed, detail },
            Err(e) => CheckResult {
                name,
                passed: false,
                detail: format!("error: {e}"),
            },
        }
    }
}

/// Runs every acceptance check in a fixed order.
pub fn run_all() -> Vec<CheckResult> {
    vec![
        check_special_function_anchors(),
        check_unitarity_roots(),
        check_spectrum_monotonicity(),
        check_molecular_fraction_bound(),
        check_branch1_saturation(),
        check_branch2_saturation(),
        check_entropy_curve_shape(),
        check_geometry_ordering(),
        check_toy_model(),
        check_oracle_equivalence(),
        check_determinism(),
    ]
}

const SATURATION_INV_AS: f64 = 40.0;
const FULL_SCHEDULE: &[usize] = &[8, 12, 16, 20];
const SWEEP_SCHEDULE: &[usize] = &[8, 12, 16];
const ENTROPY_TOL: f64 = 1e-3;

/// Two-mode axial limit entropy, (3/2) ln 2.
const S_Z_PAIR: f64 = 1.0397207708399179;
/// Two degenerate transverse modes, ln 4.
const S_TWO_MODES: f64 = 1.3862943611198906;
/// Spherical first level, ln(2 sqrt 6).
const S_SPHERICAL_L1: f64 = 1.5890269151739727;

/// Spherical second level: 55 ln2/24 + 7 ln3/8 - ln5/24.
fn spherical_l2_entropy() -> f64 {
    55.0 * 2.0f64.ln() / 24.0 + 7.0 * 3.0f64.ln() / 8.0 - 5.0f64.ln() / 24.0
}

fn saturation_entropy(lambda: f64, branch: usize) -> Result<f64> {
    let p = TrapParams::new(lambda, SATURATION_INV_AS, 0.04)?;
    Ok(converge_entropy(branch, &p, FULL_SCHEDULE, ENTROPY_TOL)?.best())
}

pub fn check_special_function_anchors() -> CheckResult {
    let name = "special_function_anchors";
    let started = Instant::now();
    let outcome = (|| {
        let f11 = eval_f(&FArgs::new(1.0, 1.0)?)?;
        let f21 = eval_f(&FArgs::new(2.0, 1.0)?)?;
        let anchor_err = (f11 + 2.0).abs().max((f21 + 4.0).abs());

        let mut max_rel = 0.0f64;
        for i in 0..200 {
            let x = -2.0 + 5.0 * (i as f64 + 0.5) / 200.0;
            let closed = f_spherical_closed_form(x)?;
            let integral = eval_f(&FArgs::new(-x, 1.0)?)?;
            max_rel = max_rel.max((integral - closed).abs() / closed.abs());
        }
        let in_budget = started.elapsed().as_secs_f64() < 5.0;
        let passed = anchor_err <= 1e-8 && max_rel <= 1e-6 && in_budget;
        let mut detail = format!(
            "anchor error {anchor_err:.2e} (tol 1e-8), max closed-form deviation \
             {max_rel:.2e} on 200 points (tol 1e-6)"
        );
        if !in_budget {
            detail.push_str("; runtime budget of 5 s exceeded");
        }
        Ok((passed, detail))
    })();
    CheckResult::from_outcome(name, outcome)
}

pub fn check_unitarity_roots() -> CheckResult {
    let name = "unitarity_roots";
    let outcome = (|| {
        let p = TrapParams::new(1.0, 0.0, 0.0)?;
        let x0 = solve_branch_point(0, &p)?.x;
        let x1 = solve_branch_point(1, &p)?.x;
        let err = (x0 + 0.5).abs().max((x1 - 0.5).abs());
        Ok((
            err <= 1e-6,
            format!("roots {x0:.9} and {x1:.9}, worst deviation {err:.2e} (tol 1e-6)"),
        ))
    })();
    CheckResult::from_outcome(name, outcome)
}

pub fn check_spectrum_monotonicity() -> CheckResult {
    let name = "spectrum_monotonicity";
    let started = Instant::now();
    let outcome = (|| {
        let grid: Vec<f64> = (0..=40).map(|i| -10.0 + 0.5 * i as f64).collect();
        let mut traced = 0;
        let mut violations = 0;
        for &lambda in &[5.0 / 6.0, 1.0, 7.0 / 6.0, 1.0 / 20.0, 20.0] {
            for &r0_ratio in &[0.0, 0.04] {
                let base = TrapParams::new(lambda, 0.0, r0_ratio)?;
                for branch in 0..=2 {
                    let b = trace_branch(branch, &grid, &base)?;
                    traced += 1;
                    let increasing =
                        b.points.windows(2).all(|w| w[1].x > w[0].x);
                    if !increasing {
                        violations += 1;
                    }
                }
            }
        }
        let in_budget = started.elapsed().as_secs_f64() < 60.0;
        let mut detail = format!(
            "{traced} branches traced on 41-point grids, {violations} monotonicity violations"
        );
        if !in_budget {
            detail.push_str("; runtime budget of 60 s exceeded");
        }
        Ok((violations == 0 && in_budget, detail))
    })();
    CheckResult::from_outcome(name, outcome)
}

pub fn check_molecular_fraction_bound() -> CheckResult {
    let name = "molecular_fraction_bound";
    let outcome = (|| {
        let grid: Vec<f64> = (0..=80).map(|i| -10.0 + 0.25 * i as f64).collect();
        let base = TrapParams::new(5.0 / 6.0, 0.0, 0.04)?;
        let mut max_beta2 = 0.0f64;
        for branch in [1, 2] {
            let b = trace_branch(branch, &grid, &base)?;
            for i in 0..b.points.len() {
                max_beta2 = max_beta2.max(molecular_fraction(&b, i)?);
            }
        }
        Ok((
            max_beta2 < 0.01,
            format!("max closed-channel fraction {max_beta2:.6} (bound 0.01, strict)"),
        ))
    })();
    CheckResult::from_outcome(name, outcome)
}

pub fn check_branch1_saturation() -> CheckResult {
    let name = "branch1_saturation_entropies";
    let outcome = (|| {
        let cases = [
            (5.0 / 6.0, S_Z_PAIR, "5/6"),
            (7.0 / 6.0, S_TWO_MODES, "7/6"),
            (1.0, S_SPHERICAL_L1, "1"),
        ];
        let mut worst = 0.0f64;
        let mut parts = Vec::new();
        for (lambda, target, label) in cases {
            let s = saturation_entropy(lambda, 1)?;
            let rel = (s - target).abs() / target;
            worst = worst.max(rel);
            parts.push(format!("lambda={label}: {s:.5} vs {target:.5}"));
        }
        Ok((
            worst <= 0.02,
            format!("{}; worst relative deviation {worst:.4} (tol 0.02)", parts.join(", ")),
        ))
    })();
    CheckResult::from_outcome(name, outcome)
}

pub fn check_branch2_saturation() -> CheckResult {
    let name = "branch2_saturation_entropies";
    let outcome = (|| {
        let s76 = saturation_entropy(7.0 / 6.0, 2)?;
        let rel76 = (s76 - S_Z_PAIR).abs() / S_Z_PAIR;
        let target = spherical_l2_entropy();
        let s1 = saturation_entropy(1.0, 2)?;
        let rel1 = (s1 - target).abs() / target;
        Ok((
            rel76 <= 0.02 && rel1 <= 0.03,
            format!(
                "lambda=7/6: {s76:.5} vs {S_Z_PAIR:.5} (rel {rel76:.4}, tol 0.02); \
                 lambda=1: {s1:.5} vs {target:.5} (rel {rel1:.4}, tol 0.03)"
            ),
        ))
    })();
    CheckResult::from_outcome(name, outcome)
}

pub fn check_entropy_curve_shape() -> CheckResult {
    let name = "entropy_curve_shape";
    let outcome = (|| {
        let mut values = Vec::new();
        for i in 0..=10 {
            let inv_as = -10.0 + 5.0 * i as f64;
            let p = TrapParams::new(5.0 / 6.0, inv_as, 0.04)?;
            let s = converge_entropy(1, &p, SWEEP_SCHEDULE, ENTROPY_TOL)?.best();
            values.push(s);
        }
        let first = values[0];
        let last = *values.last().expect("nonempty sweep");
        let interior_max = values[1..values.len() - 1]
            .iter()
            .cloned()
            .fold(f64::MIN, f64::max);
        Ok((
            interior_max > first && interior_max > last,
            format!(
                "endpoints {first:.4} and {last:.4}, interior maximum {interior_max:.4}"
            ),
        ))
    })();
    CheckResult::from_outcome(name, outcome)
}

pub fn check_geometry_ordering() -> CheckResult {
    let name = "geometry_ordering";
    let outcome = (|| {
        let sphere = saturation_entropy(1.0, 1)?;
        let pancake = saturation_entropy(7.0 / 6.0, 1)?;
        let cigar = saturation_entropy(5.0 / 6.0, 1)?;
        let quasi1d = (saturation_entropy(1.0 / 20.0, 1)?, saturation_entropy(1.0 / 20.0, 2)?);
        let quasi2d = (saturation_entropy(20.0, 1)?, saturation_entropy(20.0, 2)?);
        let branch1_order = sphere > pancake && pancake > cigar;
        let dimensional = quasi1d.0 < quasi2d.0 && quasi1d.1 < quasi2d.1;
        let branch2_above = quasi1d.1 > quasi1d.0 && quasi2d.1 > quasi2d.0;
        Ok((
            branch1_order && dimensional && branch2_above,
            format!(
                "branch 1: lambda=1 {sphere:.4} > 7/6 {pancake:.4} > 5/6 {cigar:.4}; \
                 lambda=1/20 ({:.4}, {:.4}) below lambda=20 ({:.4}, {:.4}) branch-wise",
                quasi1d.0, quasi1d.1, quasi2d.0, quasi2d.1
            ),
        ))
    })();
    CheckResult::from_outcome(name, outcome)
}

pub fn check_toy_model() -> CheckResult {
    let name = "toy_model";
    let outcome = (|| {
        let at_zero = toy_curve_point(0.0)?;
        let sat = toy_curve_point(1e4)?;
        let sat_err = (sat - toy_saturation_entropy()).abs();
        let mut monotone = true;
        let mut prev = f64::MIN;
        for i in 0..50 {
            let s = toy_curve_point(0.2 * i as f64)?;
            if s <= prev {
                monotone = false;
            }
            prev = s;
        }
        Ok((
            at_zero == 0.0 && sat_err <= 1e-3 && monotone,
            format!(
                "entropy(0) = {at_zero}, saturation deviation {sat_err:.2e} (tol 1e-3), \
                 monotone on 50 points: {monotone}"
            ),
        ))
    })();
    CheckResult::from_outcome(name, outcome)
}

pub fn check_oracle_equivalence() -> CheckResult {
    let name = "oracle_equivalence";
    let outcome = (|| {
        // Randomized but seeded: the same 20 branch points every run.
        let mut rng = StdRng::seed_from_u64(0x5EED_CAFE);
        let mut max_weight_dev = 0.0f64;
        let mut compared = 0;
        while compared < 20 {
            let lambda = rng.gen_range(0.4..2.5);
            let r0_ratio = rng.gen_range(0.0..0.08);
            let inv_as = rng.gen_range(-5.0..5.0);
            let branch = rng.gen_range(0..3usize);
            let k = 2 * rng.gen_range(2..5usize);
            let p = TrapParams::new(lambda, inv_as, r0_ratio)?;
            let x = solve_branch_point(branch, &p)?.x;
            let rel = relative_expansion(x, lambda, k)?;
            let amp = assemble_amplitude(&rel)?;
            let spec = crate::entangle::schmidt(&amp)?;

            let (dense, dim) = amp.to_dense();
            let svd = DMatrix::from_row_slice(dim, dim, &dense).svd(false, false);
            let mut weights: Vec<f64> =
                svd.singular_values.iter().map(|s| s * s).collect();
            weights.sort_unstable_by(|a, b| b.total_cmp(a));
            for (i, &k2) in spec.kappa2.iter().enumerate() {
                max_weight_dev = max_weight_dev.max((k2 - weights[i]).abs());
            }
            for &w in &weights[spec.kappa2.len()..] {
                max_weight_dev = max_weight_dev.max(w);
            }
            compared += 1;
        }

        let mut max_overlap_dev = 0.0f64;
        for k in (0..=12).step_by(2) {
            for (a, b, t) in beamsplitter_coeffs(k)? {
                let q = oracle::beamsplitter_overlap(k, a, b);
                max_overlap_dev = max_overlap_dev.max((t - q).abs());
            }
        }

        Ok((
            max_weight_dev <= 1e-9 && max_overlap_dev <= 1e-10,
            format!(
                "blocked vs dense weights: max deviation {max_weight_dev:.2e} on \
                 {compared} random branch points (tol 1e-9); coefficients vs quadrature: \
                 max deviation {max_overlap_dev:.2e} (tol 1e-10)"
            ),
        ))
    })();
    CheckResult::from_outcome(name, outcome)
}

pub fn check_determinism() -> CheckResult {
    let name = "determinism";
    let outcome = (|| {
        let configs = [
            "mode = spectrum\nlambda = 5/6\nlo = -2\nhi = 2\nstep = 1\nbranches = 0,1\n",
            "mode = entanglement\nlo = -1\nhi = 1\nstep = 1\nk_schedule = 4,8\n",
            "mode = toy\nlo = 0\nhi = 5\nstep = 1\nformat = json\n",
        ];
        let mut identical = true;
        for text in configs {
            let config = crate::config::parse_config(text)?;
            let first = runner::execute(&config)?.rendered;
            let second = runner::execute(&config)?.rendered;
            if first != second {
                identical = false;
            }
        }
        Ok((
            identical,
            format!(
                "{} configs re-run byte-identically: {identical}",
                configs.len()
            ),
        ))
    })();
    CheckResult::from_outcome(name, outcome)
}

/// Small independent numerical oracles used by the equivalence check.
pub mod oracle {
    use nalgebra::{DMatrix, SymmetricEigen};

    /// Nodes and weights of the n-point Gauss-Hermite rule for weight
    /// exp(-x^2), from the eigendecomposition of the Jacobi matrix.
    pub fn gauss_hermite(n: usize) -> (Vec<f64>, Vec<f64>) {
        let mut jacobi = DMatrix::<f64>::zeros(n, n);
        for i in 1..n {
            let b = (i as f64 / 2.0).sqrt();
            jacobi[(i, i - 1)] = b;
            jacobi[(i - 1, i)] = b;
        }
        let eig = SymmetricEigen::new(jacobi);
        let mut pairs: Vec<(f64, f64)> = (0..n)
            .map(|j| {
                let node = eig.eigenvalues[j];
                let first = eig.eigenvectors[(0, j)];
                (node, std::f64::consts::PI.sqrt() * first * first)
            })
            .collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        pairs.into_iter().unzip()
    }

    /// Oscillator eigenfunction at x with its Gaussian stripped:
    /// H_k(x) / sqrt(2^k k! sqrt(pi)), by the normalized recurrence.
    pub fn hermite_normalized(k: usize, x: f64) -> f64 {
        let mut prev = std::f64::consts::PI.powf(-0.25);
        if k == 0 {
            return prev;
        }
        let mut curr = 2.0f64.sqrt() * x * prev;
        for j in 1..k {
            let next = x * (2.0 / (j as f64 + 1.0)).sqrt() * curr
                - (j as f64 / (j as f64 + 1.0)).sqrt() * prev;
            prev = curr;
            curr = next;
        }
        curr
    }

    /// Overlap of the product state |a>|b> with (center-of-mass ground) x
    /// (relative mode k), via tensor Gauss-Hermite quadrature. The four
    /// Gaussians combine into exactly the quadrature weight, leaving a
    /// polynomial integrand the rule integrates exactly.
    pub fn beamsplitter_overlap(k: usize, a: usize, b: usize) -> f64 {
        let n = k + 8;
        let (nodes, weights) = gauss_hermite(n);
        let inv_sqrt2 = 1.0 / 2.0f64.sqrt();
        let mut total = 0.0;
        for (i, &x1) in nodes.iter().enumerate() {
            for (j, &x2) in nodes.iter().enumerate() {
                let com = (x1 + x2) * inv_sqrt2;
                let rel = (x1 - x2) * inv_sqrt2;
                total += weights[i]
                    * weights[j]
                    * hermite_normalized(a, x1)
                    * hermite_normalized(b, x2)
                    * hermite_normalized(0, com)
                    * hermite_normalized(k, rel);
            }
        }
        total
    }
}
