//! Regularized trap function F(u, eta) and its supporting pieces.
//!
//! - `gamma_fn`: real Gamma function, Lanczos approximation.
//! - `eval_f`: the regularized integral F(u, eta), analytically continued to
//!   u < 0 between poles.
//! - `f_spherical_closed_form`: Gamma-ratio closed form valid at eta = 1.
//! - `enumerate_poles`: lattice of noninteracting relative energies
//!   x = p + q*lambda that bound the root-search intervals.
//!
//! F is evaluated by splitting the integral at t = 1. On (0, 1] the
//! t^{-3/2} counterterm is folded into the integrand analytically (see
//! `integrand_head`) and the result integrated by adaptive Gauss-Kronrod
//! quadrature. On [1, inf) the integrand is expanded into a double
//! exponential series and integrated termwise; the counterterm tail
//! contributes the exact constant -2. The termwise series converges for any
//! u away from the poles u = -(p + q*eta), which is what extends F below
//! u = 0.

use crate::error::{Error, Result};

/// Default distance below which arguments are rejected as too close to a
/// pole of F.
pub const DEFAULT_POLE_EXCLUSION: f64 = 1e-6;

/// Poles of F closer than this (in x) are treated as one degenerate level.
pub const POLE_MERGE_TOL: f64 = 1e-9;

/// Absolute tolerance of the adaptive quadrature on the head integral.
const QUAD_ABS_TOL: f64 = 1e-10;

/// Maximum number of quadrature subintervals before giving up.
const QUAD_MAX_SEGMENTS: usize = 256;

/// Relative term tolerance of the tail series.
const SERIES_REL_TOL: f64 = 1e-14;

/// Hard caps on the tail series indices.
const SERIES_P_CAP: usize = 500;
const SERIES_Q_CAP: usize = 200_000;

/// Lanczos coefficients, g = 7, 9 terms.
const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Real Gamma function.
///
/// Accurate to about 1e-13 relative on |z| <= 20. Negative arguments go
/// through the reflection formula.
pub fn gamma_fn(z: f64) -> Result<f64> {
    if z <= 0.0 && z == z.round() {
        return Err(Error::GammaPole(z));
    }
    if z < 0.5 {
        // Reflection: Gamma(z) Gamma(1 - z) = pi / sin(pi z).
        let s = (std::f64::consts::PI * z).sin();
        return Ok(std::f64::consts::PI / (s * gamma_fn(1.0 - z)?));
    }
    let zm = z - 1.0;
    let mut acc = LANCZOS_COEF[0];
    for (i, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        acc += c / (zm + i as f64);
    }
    let t = zm + LANCZOS_G + 0.5;
    Ok((2.0 * std::f64::consts::PI).sqrt() * t.powf(zm + 0.5) * (-t).exp() * acc)
}

/// Arguments of the trap function, with the pole exclusion radius in force
/// for this evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FArgs {
    pub u: f64,
    pub eta: f64,
    pub pole_exclusion: f64,
}

impl FArgs {
    /// Arguments with the default pole exclusion radius.
    pub fn new(u: f64, eta: f64) -> Result<Self> {
        Self::with_exclusion(u, eta, DEFAULT_POLE_EXCLUSION)
    }

    /// Arguments with an explicit exclusion radius, for callers that must
    /// approach a pole more closely than the default allows.
    pub fn with_exclusion(u: f64, eta: f64, pole_exclusion: f64) -> Result<Self> {
        if !(eta > 0.0) || !eta.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "eta must be positive and finite, got {eta}"
            )));
        }
        if !u.is_finite() {
            return Err(Error::InvalidParameter(format!("u must be finite, got {u}")));
        }
        if !(pole_exclusion > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "pole exclusion radius must be positive, got {pole_exclusion}"
            )));
        }
        Ok(FArgs { u, eta, pole_exclusion })
    }
}

/// Distance from u to the nearest pole -(p + q*eta) of F, together with that
/// pole's location.
fn nearest_pole(u: f64, eta: f64) -> (f64, f64) {
    if u > 0.0 {
        // All poles sit at u <= 0.
        return (u, 0.0);
    }
    let mut best = (f64::INFINITY, 0.0);
    let p_max = (-u).ceil() as i64 + 1;
    for p in 0..=p_max {
        let q_guess = ((-u - p as f64) / eta).round() as i64;
        for q in (q_guess - 1)..=(q_guess + 1) {
            if q < 0 {
                continue;
            }
            let pole = -(p as f64 + q as f64 * eta);
            let d = (u - pole).abs();
            if d < best.0 {
                best = (d, pole);
            }
        }
    }
    best
}

/// log((1 - e^{-t}) / t), stable down to t = 0 where it vanishes.
fn ln_phi(t: f64) -> f64 {
    if t < 1e-4 {
        // phi(t) = 1 - t/2 + t^2/6 - t^3/24 + O(t^4)
        (-t / 2.0 + t * t / 6.0 - t * t * t / 24.0).ln_1p()
    } else {
        (-(-t).exp_m1()).ln() - t.ln()
    }
}

/// Head integrand after the substitution t = s^2: the original integrand
/// minus its t^{-3/2} counterterm, which cancels analytically into
/// 2*expm1(-u t + ln rho)/s^2 with rho = [phi(t)]^{-1/2} [phi(eta t)]^{-1}.
/// Bounded on [0, 1] with limit 2*(1/4 + eta/2 - u) at s = 0.
fn integrand_head(s: f64, u: f64, eta: f64) -> f64 {
    let t = s * s;
    if t < 1e-12 {
        return 2.0 * (0.25 + eta / 2.0 - u);
    }
    let ln_rho = -0.5 * ln_phi(t) - ln_phi(eta * t);
    2.0 * (-u * t + ln_rho).exp_m1() / t
}

/// Gauss-Kronrod 7-15 abscissae (nonnegative half) and weights.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_69,
    0.279_705_391_489_276_67,
    0.381_830_050_505_118_94,
    0.417_959_183_673_469_4,
];

/// One Gauss-Kronrod 7-15 panel: returns (integral, error estimate).
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut ik = WGK[7] * fc;
    let mut ig = WG[3] * fc;
    for (j, &x) in XGK.iter().enumerate().take(7) {
        let dx = half * x;
        let pair = f(center - dx) + f(center + dx);
        ik += WGK[j] * pair;
        if j % 2 == 1 {
            ig += WG[(j - 1) / 2] * pair;
        }
    }
    (ik * half, (ik - ig).abs() * half)
}

/// Adaptive quadrature over [a, b] to an absolute tolerance.
fn adaptive_quad<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, abs_tol: f64) -> Result<f64> {
    let mut segments = vec![(a, b, gk15(f, a, b))];
    loop {
        let total_err: f64 = segments.iter().map(|s| s.2 .1).sum();
        if total_err <= abs_tol {
            return Ok(segments.iter().map(|s| s.2 .0).sum());
        }
        if segments.len() >= QUAD_MAX_SEGMENTS {
            return Err(Error::QuadratureStalled { err_est: total_err });
        }
        let worst = segments
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .2 .1.total_cmp(&y.1 .2 .1))
            .map(|(i, _)| i)
            .unwrap();
        let (lo, hi, _) = segments.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        segments.push((lo, mid, gk15(f, lo, mid)));
        segments.push((mid, hi, gk15(f, mid, hi)));
    }
}

/// Tail of F over [1, inf): termwise integration of the double exponential
/// expansion, Sum_{p,q} c_p eta e^{-(u+p+q eta)} / (u+p+q eta) with
/// c_p = binom(2p, p)/4^p. Individually negative denominators are what
/// continue F below u = 0.
fn tail_series(u: f64, eta: f64) -> Result<f64> {
    let mut sum = 0.0f64;
    let mut cp = 1.0f64;
    let mut p = 0usize;
    loop {
        if p > 0 {
            cp *= (2.0 * p as f64 - 1.0) / (2.0 * p as f64);
        }
        let mut inner = 0.0;
        let mut q = 0usize;
        loop {
            let d = u + p as f64 + q as f64 * eta;
            let term = eta * (-d).exp() / d;
            inner += term;
            q += 1;
            if d > 0.0 && term.abs() <= SERIES_REL_TOL * (1.0 + inner.abs() + sum.abs()) {
                break;
            }
            if q >= SERIES_Q_CAP {
                return Err(Error::SeriesCap { u, eta });
            }
        }
        sum += cp * inner;
        p += 1;
        if u + p as f64 > 0.0 && (cp * inner).abs() <= SERIES_REL_TOL * (1.0 + sum.abs()) {
            break;
        }
        if p >= SERIES_P_CAP {
            return Err(Error::SeriesCap { u, eta });
        }
    }
    Ok(sum)
}

/// The regularized trap function F(u, eta).
///
/// Defined for u > 0 by the regularized integral and continued to u < 0
/// between the poles u = -(p + q*eta). Relative accuracy is about 1e-10
/// away from poles; it degrades with continuation depth and the evaluation
/// is rejected below u = -45 where cancellation consumes all precision.
pub fn eval_f(args: &FArgs) -> Result<f64> {
    let FArgs { u, eta, pole_exclusion } = *args;
    let (dist, pole) = nearest_pole(u, eta);
    if dist < pole_exclusion {
        return Err(Error::NearPole { u, pole, radius: pole_exclusion });
    }
    if u < -45.0 {
        return Err(Error::InvalidParameter(format!(
            "continuation depth u = {u} loses all precision to cancellation"
        )));
    }
    let head = adaptive_quad(&|s| integrand_head(s, u, eta), 0.0, 1.0, QUAD_ABS_TOL)?;
    let tail = tail_series(u, eta)?;
    // The -2 is the counterterm tail, integral of t^{-3/2} over [1, inf).
    Ok(head + tail - 2.0)
}

/// Closed form of F at eta = 1 as a function of x = -u:
/// F(-x, 1) = -2 sqrt(pi) Gamma(-x) / Gamma(-x - 1/2).
///
/// Returns 0 exactly at half-integer x where the denominator Gamma has a
/// pole, and an error at non-negative integer x where F itself has a pole.
pub fn f_spherical_closed_form(x: f64) -> Result<f64> {
    let num_arg = -x;
    let den_arg = -x - 0.5;
    if den_arg <= 0.0 && den_arg == den_arg.round() {
        return Ok(0.0);
    }
    if num_arg <= 0.0 && num_arg == num_arg.round() {
        return Err(Error::GammaPole(num_arg));
    }
    Ok(-2.0 * std::f64::consts::PI.sqrt() * gamma_fn(num_arg)? / gamma_fn(den_arg)?)
}

/// Lattice of noninteracting relative energies x = p + q*lambda, p,q >= 0,
/// up to a cutoff: the poles of the quantization condition in x, with
/// degenerate levels merged and counted.
#[derive(Debug, Clone, PartialEq)]
pub struct PoleLattice {
    values: Vec<f64>,
    multiplicities: Vec<usize>,
}

impl PoleLattice {
    /// Sorted, merged pole positions.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Number of (p, q) pairs collapsing onto each pole.
    pub fn multiplicities(&self) -> &[usize] {
        &self.multiplicities
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Open interval (pole_{branch-1}, pole_branch) confining the given
    /// branch's root. Branch 0 has no lower pole; `None` if the lattice is
    /// too short.
    pub fn branch_interval(&self, branch: usize) -> Option<(f64, f64)> {
        if branch == 0 || branch >= self.values.len() {
            return None;
        }
        Some((self.values[branch - 1], self.values[branch]))
    }
}

/// Enumerates the pole lattice up to x_max.
pub fn enumerate_poles(lambda: f64, x_max: f64) -> Result<PoleLattice> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "lambda must be positive and finite, got {lambda}"
        )));
    }
    if !(x_max > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "x_max must be positive, got {x_max}"
        )));
    }
    let mut raw = Vec::new();
    let mut p = 0.0f64;
    while p <= x_max + POLE_MERGE_TOL {
        let mut q = 0.0f64;
        loop {
            let x = p + q * lambda;
            if x > x_max + POLE_MERGE_TOL {
                break;
            }
            raw.push(x);
            q += 1.0;
        }
        p += 1.0;
    }
    raw.sort_by(f64::total_cmp);
    let mut values = Vec::new();
    let mut multiplicities = Vec::new();
    for x in raw {
        match values.last() {
            Some(&leader) if x - leader <= POLE_MERGE_TOL => {
                *multiplicities.last_mut().unwrap() += 1;
            }
            _ => {
                values.push(x);
                multiplicities.push(1);
            }
        }
    }
    Ok(PoleLattice { values, multiplicities })
}
