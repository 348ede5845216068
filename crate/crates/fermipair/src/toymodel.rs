//! Three-level two-atom toy Hamiltonian and its ground-state entanglement.
//!
//! Each atom keeps its motional ground state and one excited state; double
//! excitation is dropped. The interaction couples |00> to the symmetric
//! single-excitation combination, and the antisymmetric combination
//! decouples, so the ground state lives in an exact 2x2 subspace. The
//! resulting entanglement curve depends on the couplings only through the
//! ratio g / (omega - delta) and provides a closed-form cross-check of the
//! Schmidt-entropy machinery.

use crate::entangle;
use crate::error::{Error, Result};

/// Couplings of the truncated two-atom Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToyParams {
    /// Single-atom excitation energy.
    pub omega: f64,
    /// Energy shift of the doubly unexcited state.
    pub delta: f64,
    /// Interaction strength promoting one atom.
    pub g: f64,
}

impl ToyParams {
    pub fn new(omega: f64, delta: f64, g: f64) -> Result<Self> {
        if !(omega > 0.0) || !omega.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "omega must be positive and finite, got {omega}"
            )));
        }
        if !(delta < omega) || !delta.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "delta must be finite and below omega, got {delta}"
            )));
        }
        if !(g >= 0.0) || !g.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "g must be nonnegative and finite, got {g}"
            )));
        }
        Ok(ToyParams { omega, delta, g })
    }

    /// Canonical parameters for a given coupling ratio g / (omega - delta):
    /// unit gap, zero shift.
    pub fn from_ratio(ratio: f64) -> Result<Self> {
        ToyParams::new(1.0, 0.0, ratio)
    }

    /// The combination the entanglement actually depends on.
    pub fn coupling_ratio(&self) -> f64 {
        self.g / (self.omega - self.delta)
    }
}

/// Ground state of the symmetric 2x2 subspace spanned by |00> and
/// (|10> + |01>)/sqrt(2): returns the normalized amplitude pair
/// (a00, a_sym) with a00 > 0.
pub fn toy_ground_state(p: &ToyParams) -> (f64, f64) {
    // Subspace matrix [[delta, sqrt(2) g], [sqrt(2) g, omega]]. The
    // lowest eigenvalue is (delta + omega)/2 - sqrt(h^2 + 2 g^2) with
    // h = (omega - delta)/2; the amplitude ratio is written without the
    // cancellation-prone h - sqrt(...) difference.
    let h = 0.5 * (p.omega - p.delta);
    let s = (h * h + 2.0 * p.g * p.g).sqrt();
    let t = -2.0f64.sqrt() * p.g / (h + s);
    let a00 = 1.0 / (1.0 + t * t).sqrt();
    (a00, a00 * t)
}

/// Von Neumann entropy of one atom's reduced state for the amplitude pair
/// (a00, a_sym). The reduced-state eigenvalues are those of M M^T with
/// M = [[a00, a_sym/sqrt(2)], [a_sym/sqrt(2), 0]].
pub fn toy_entropy(a00: f64, a_sym: f64) -> Result<f64> {
    let tr = a00 * a00 + a_sym * a_sym;
    let det = a_sym.powi(4) / 4.0;
    let half_gap = (tr * tr / 4.0 - det).max(0.0).sqrt();
    let weights = [0.5 * tr + half_gap, 0.5 * tr - half_gap];
    entangle::entropy(&weights)
}

/// Ground-state entanglement entropy at a coupling ratio g / (omega - delta).
pub fn toy_curve_point(ratio: f64) -> Result<f64> {
    let p = ToyParams::from_ratio(ratio)?;
    let (a00, a_sym) = toy_ground_state(&p);
    toy_entropy(a00, a_sym)
}

/// Entanglement at saturation (infinite coupling ratio):
/// 2 ln 2 - (sqrt(3)/2) ln(2 + sqrt(3)).
pub fn toy_saturation_entropy() -> f64 {
    let sqrt3 = 3.0f64.sqrt();
    2.0 * std::f64::consts::LN_2 - 0.5 * sqrt3 * (2.0 + sqrt3).ln()
}
