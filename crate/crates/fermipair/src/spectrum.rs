//! Energy branches of the trapped pair.
//!
//! - `quantization_residual`: the transcendental condition whose roots are
//!   the dimensionless energies x = E/(2 hbar omega_perp) - 1 - lambda/2.
//! - `solve_branch_point`: the unique root confined to one pole interval.
//! - `trace_branch`: a sweep over the inverse scattering length, seeded
//!   point to point.
//! - `molecular_fraction`: closed-channel weight beta^2, by implicit
//!   differentiation (with a grid-difference cross-check route).
//! - `feshbach_map`: experimental resonance parameters to (a_s, r0).
//!
//! The sweep variable is inv_as = -d_perp/a_s throughout, so the condition
//! is evaluated with d_perp/a_s = -inv_as. Between consecutive poles the
//! residual runs from -inf to +inf and is strictly increasing, which is
//! what makes the per-interval root unique.

use crate::error::{Error, Result};
use crate::specfun::{
    enumerate_poles, eval_f, FArgs, PoleLattice, DEFAULT_POLE_EXCLUSION,
};

/// Solver stops once the bracket is narrower than this.
const ROOT_X_TOL: f64 = 1e-10;

/// Number of uniform probes when scanning an interval for sign changes.
const SCAN_PROBES: usize = 64;

/// Branches are only solved below this energy.
const X_MAX_SUPPORTED: f64 = 12.0;

/// Reduced Planck constant, J s.
pub const HBAR: f64 = 1.054_571_817e-34;

/// Trap aspect ratio and dimensionless interaction parameters; the
/// coordinate system for every sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrapParams {
    /// Aspect ratio omega_z / omega_perp.
    pub lambda: f64,
    /// Sweep variable -d_perp/a_s.
    pub inv_as: f64,
    /// Effective-range ratio |r0|/d_perp.
    pub r0_ratio: f64,
}

impl TrapParams {
    pub fn new(lambda: f64, inv_as: f64, r0_ratio: f64) -> Result<Self> {
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "lambda must be positive and finite, got {lambda}"
            )));
        }
        if !inv_as.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "inv_as must be finite, got {inv_as}"
            )));
        }
        if !(r0_ratio >= 0.0) || !r0_ratio.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "r0_ratio must be non-negative and finite, got {r0_ratio}"
            )));
        }
        Ok(TrapParams { lambda, inv_as, r0_ratio })
    }

    /// Same trap, different sweep position.
    pub fn at_inv_as(&self, inv_as: f64) -> TrapParams {
        TrapParams { inv_as, ..*self }
    }

    /// False outside the broad-resonance regime |r0| << d_perp, where the
    /// model's accuracy degrades. Callers should warn, not fail.
    pub fn within_broad_resonance_limit(&self) -> bool {
        self.r0_ratio <= 0.1
    }
}

/// One solved energy on a branch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchPoint {
    pub inv_as: f64,
    /// Dimensionless energy.
    pub x: f64,
    /// Closed-channel molecular fraction.
    pub beta2: f64,
}

/// A branch traced over a sweep, with the trap it belongs to.
#[derive(Debug, Clone, PartialEq)]
pub struct Branch {
    pub branch_index: usize,
    pub lambda: f64,
    pub r0_ratio: f64,
    pub points: Vec<BranchPoint>,
}

/// Experimental Feshbach resonance parameters (SI units).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeshbachParams {
    /// Background scattering length, m.
    pub a_bg: f64,
    /// Resonance position, T.
    pub b0: f64,
    /// Resonance width, T.
    pub delta: f64,
    /// Magnetic-moment difference between channels, J/T.
    pub mu: f64,
    /// Atomic mass, kg.
    pub mass: f64,
}

/// The trap function as seen from the energy variable:
/// Ftilde(x) = (lambda/sqrt(pi)) F(-x/lambda, 1/lambda).
fn trap_term(x: f64, lambda: f64) -> Result<f64> {
    let args = FArgs::new(-x / lambda, 1.0 / lambda)?;
    Ok(lambda / std::f64::consts::PI.sqrt() * eval_f(&args)?)
}

/// Left side minus right side of the quantization condition:
/// sqrt(2 lambda) [d_perp/a_s + r0_ratio (x + 1 + lambda/2)] + Ftilde(x),
/// with d_perp/a_s = -inv_as.
pub fn quantization_residual(x: f64, p: &TrapParams) -> Result<f64> {
    let channel =
        (2.0 * p.lambda).sqrt() * (-p.inv_as + p.r0_ratio * (x + 1.0 + p.lambda / 2.0));
    Ok(channel + trap_term(x, p.lambda)?)
}

/// Pole lattice tall enough to bound the requested branch.
fn lattice_for_branch(branch_index: usize, lambda: f64) -> Result<PoleLattice> {
    let mut x_max = (branch_index as f64 + 1.0) * lambda.min(1.0) + lambda.max(1.0);
    loop {
        let lattice = enumerate_poles(lambda, x_max)?;
        if lattice.len() > branch_index {
            return Ok(lattice);
        }
        x_max *= 2.0;
    }
}

/// Margin kept between search endpoints and the bounding poles, in x. Must
/// clear the evaluator's own exclusion radius (which lives in u = -x/lambda).
fn edge_margin(lambda: f64, width: f64) -> f64 {
    (2.0 * lambda * DEFAULT_POLE_EXCLUSION).max(1e-7 * width)
}

/// Scans [a, b] with uniform probes; returns the single sign-change bracket.
fn scan_for_bracket(
    branch_index: usize,
    p: &TrapParams,
    a: f64,
    b: f64,
) -> Result<(f64, f64, f64, f64)> {
    let mut brackets = Vec::new();
    let mut prev: Option<(f64, f64)> = None;
    for i in 0..SCAN_PROBES {
        let x = a + (b - a) * i as f64 / (SCAN_PROBES - 1) as f64;
        let f = quantization_residual(x, p)?;
        if let Some((xp, fp)) = prev {
            if fp == 0.0 || fp * f < 0.0 {
                brackets.push((xp, fp, x, f));
            }
        }
        prev = Some((x, f));
    }
    match brackets.len() {
        0 => Err(Error::NoRoot { branch: branch_index, lo: a, hi: b }),
        1 => Ok(brackets[0]),
        n => Err(Error::MultipleRoots { branch: branch_index, count: n }),
    }
}

/// Bisects the bracket to `ROOT_X_TOL`, then takes one guarded secant step.
fn refine_root(p: &TrapParams, bracket: (f64, f64, f64, f64)) -> Result<f64> {
    let (mut a, mut fa, mut b, mut fb) = bracket;
    if fa == 0.0 {
        return Ok(a);
    }
    while b - a > ROOT_X_TOL {
        let m = 0.5 * (a + b);
        let fm = quantization_residual(m, p)?;
        if fm == 0.0 {
            return Ok(m);
        }
        if fa * fm < 0.0 {
            b = m;
            fb = fm;
        } else {
            a = m;
            fa = fm;
        }
    }
    // Derivative-free polish: one secant step, kept inside the bracket.
    let secant = b - fb * (b - a) / (fb - fa);
    if secant.is_finite() && secant > a && secant < b {
        Ok(secant)
    } else {
        Ok(0.5 * (a + b))
    }
}

/// Root search window for a branch: the bounding poles pulled in by the edge
/// margin. Branch 0 is unbounded below; `floor` seeds or expands its lower
/// edge.
fn branch_window(
    branch_index: usize,
    p: &TrapParams,
    lattice: &PoleLattice,
    floor: Option<f64>,
) -> Result<(f64, f64)> {
    if branch_index == 0 {
        let hi_pole = lattice.values()[0];
        let b = hi_pole - edge_margin(p.lambda, 1.0);
        if let Some(f) = floor {
            return Ok((f, b));
        }
        // Expand downward until the residual goes negative.
        let mut width = 1.0;
        loop {
            let a = b - width;
            if quantization_residual(a, p)? < 0.0 {
                return Ok((a, b));
            }
            width *= 2.0;
            if width > 16_384.0 {
                return Err(Error::NoRoot { branch: 0, lo: a, hi: b });
            }
        }
    } else {
        let (lo, hi) = lattice.branch_interval(branch_index).ok_or_else(|| {
            Error::InvalidParameter(format!("lattice too short for branch {branch_index}"))
        })?;
        if lo >= X_MAX_SUPPORTED {
            return Err(Error::InvalidParameter(format!(
                "branch {branch_index} lies above the supported energy range x < {X_MAX_SUPPORTED}"
            )));
        }
        let m = edge_margin(p.lambda, hi - lo);
        let a = floor.map_or(lo + m, |f| f.max(lo + m));
        Ok((a, hi - m))
    }
}

fn solve_in_window(branch_index: usize, p: &TrapParams, a: f64, b: f64) -> Result<f64> {
    let bracket = scan_for_bracket(branch_index, p, a, b)?;
    refine_root(p, bracket)
}

/// Solves the quantization condition on one branch: the unique root between
/// the branch's bounding poles (below the first pole for branch 0).
pub fn solve_branch_point(branch_index: usize, p: &TrapParams) -> Result<BranchPoint> {
    let lattice = lattice_for_branch(branch_index, p.lambda)?;
    let (a, b) = branch_window(branch_index, p, &lattice, None)?;
    let x = solve_in_window(branch_index, p, a, b)?;
    let beta2 = beta2_implicit(x, p)?;
    Ok(BranchPoint { inv_as: p.inv_as, x, beta2 })
}

/// Traces a branch across a sorted inv_as grid. Each point's search window
/// starts at the previous root (x grows with inv_as), which keeps the scan
/// on the correct root and makes the deep-bound expansion a one-off.
pub fn trace_branch(
    branch_index: usize,
    inv_as_grid: &[f64],
    base: &TrapParams,
) -> Result<Branch> {
    if inv_as_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter(
            "inv_as grid must be strictly increasing".into(),
        ));
    }
    let lattice = lattice_for_branch(branch_index, base.lambda)?;
    let mut points = Vec::with_capacity(inv_as_grid.len());
    let mut prev_root: Option<f64> = None;
    for &inv_as in inv_as_grid {
        let p = base.at_inv_as(inv_as);
        let floor = prev_root.map(|x| x - 1e-6);
        let (a, b) = branch_window(branch_index, &p, &lattice, floor)
            .map_err(|e| e.at_grid_point(inv_as))?;
        let x = solve_in_window(branch_index, &p, a, b)
            .map_err(|e| e.at_grid_point(inv_as))?;
        let beta2 = beta2_implicit(x, &p).map_err(|e| e.at_grid_point(inv_as))?;
        points.push(BranchPoint { inv_as, x, beta2 });
        prev_root = Some(x);
    }
    Ok(Branch {
        branch_index,
        lambda: base.lambda,
        r0_ratio: base.r0_ratio,
        points,
    })
}

/// beta^2 at a solved energy by implicit differentiation of the
/// quantization condition:
/// beta^2 = r0_ratio sqrt(2 lambda) / (sqrt(2 lambda) r0_ratio + Ftilde'(x)).
fn beta2_implicit(x: f64, p: &TrapParams) -> Result<f64> {
    if p.r0_ratio == 0.0 {
        return Ok(0.0);
    }
    let lattice = enumerate_poles(p.lambda, (x.abs() + 2.0) * 2.0)?;
    let pole_dist = lattice
        .values()
        .iter()
        .map(|v| (x - v).abs())
        .fold(f64::INFINITY, f64::min);
    let h = (1e-5 * x.abs().max(1.0)).min(0.25 * pole_dist);
    let fp = (trap_term(x + h, p.lambda)? - trap_term(x - h, p.lambda)?) / (2.0 * h);
    let root_lambda = (2.0 * p.lambda).sqrt();
    let beta2 = p.r0_ratio * root_lambda / (root_lambda * p.r0_ratio + fp);
    // Ftilde' > 0 between poles, so this is non-negative up to rounding.
    Ok(beta2.clamp(0.0, 1.0))
}

/// Molecular fraction at one traced point, by implicit differentiation.
pub fn molecular_fraction(branch: &Branch, at_index: usize) -> Result<f64> {
    let pt = branch.points.get(at_index).ok_or_else(|| {
        Error::InvalidParameter(format!("point index {at_index} out of range"))
    })?;
    let p = TrapParams::new(branch.lambda, pt.inv_as, branch.r0_ratio)?;
    beta2_implicit(pt.x, &p)
}

/// Molecular fraction by differencing x over the traced grid: the
/// cross-check route. Centered on interior points, one-sided second order
/// at the endpoints.
pub fn molecular_fraction_grid(branch: &Branch, at_index: usize) -> Result<f64> {
    let pts = &branch.points;
    if pts.len() < 3 {
        return Err(Error::InvalidParameter(
            "grid differencing needs at least three points".into(),
        ));
    }
    if at_index >= pts.len() {
        return Err(Error::InvalidParameter(format!(
            "point index {at_index} out of range"
        )));
    }
    // Three-point Lagrange derivative at t = pts[j].inv_as, j = mid of the
    // stencil for interior points, an end of it otherwise.
    let stencil = if at_index == 0 {
        [0, 1, 2]
    } else if at_index == pts.len() - 1 {
        [pts.len() - 3, pts.len() - 2, pts.len() - 1]
    } else {
        [at_index - 1, at_index, at_index + 1]
    };
    let [t0, t1, t2] = stencil.map(|i| pts[i].inv_as);
    let [f0, f1, f2] = stencil.map(|i| pts[i].x);
    let t = pts[at_index].inv_as;
    let dxdi = f0 * (2.0 * t - t1 - t2) / ((t0 - t1) * (t0 - t2))
        + f1 * (2.0 * t - t0 - t2) / ((t1 - t0) * (t1 - t2))
        + f2 * (2.0 * t - t0 - t1) / ((t2 - t0) * (t2 - t1));
    Ok((branch.r0_ratio * dxdi).max(0.0))
}

/// Scattering length and effective range at field B:
/// a_s = a_bg (1 - Delta/(B - B0)), r0 = -2 hbar^2 / (m mu a_bg Delta).
pub fn feshbach_map(b_field: f64, fp: &FeshbachParams) -> Result<(f64, f64)> {
    if fp.delta == 0.0 || fp.mu == 0.0 {
        return Err(Error::InvalidParameter(
            "resonance width and moment difference must be nonzero".into(),
        ));
    }
    if b_field == fp.b0 {
        return Err(Error::ResonanceField);
    }
    let a_s = fp.a_bg * (1.0 - fp.delta / (b_field - fp.b0));
    let r0 = -2.0 * HBAR * HBAR / (fp.mass * fp.mu * fp.a_bg * fp.delta);
    Ok((a_s, r0))
}
