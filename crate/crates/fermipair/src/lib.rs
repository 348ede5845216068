//! Energy spectrum and spatial pair entanglement of two spin-1/2 fermions
//! in a cylindrical harmonic trap, swept across a Feshbach resonance.
//!
//! The crate is organized around one pipeline:
//!
//! 1. [`specfun`] evaluates the regularized trap function F(u, eta) whose
//!    poles are the noninteracting relative energies.
//! 2. [`spectrum`] solves the transcendental quantization condition for the
//!    dimensionless pair energy x on each adiabatic branch and computes the
//!    closed-channel molecular fraction.
//! 3. [`pairstate`] expands the open-channel wavefunction over even
//!    relative oscillator modes and rotates it into the single-particle
//!    product basis, blocked by parity sector.
//! 4. [`entangle`] Schmidt-decomposes that amplitude and reports spatial
//!    and total von Neumann entropies, with a truncation-convergence ramp.
//! 5. [`toymodel`] is an exactly solvable three-level cross-check of the
//!    entropy machinery.
//!
//! [`config`], [`runner`], and [`output`] back the `fermipair` command-line
//! binary; [`validate`] bundles the self-check suite the binary exposes as
//! its `validate` mode.

pub mod config;
pub mod entangle;
pub mod error;
pub mod output;
pub mod pairstate;
pub mod runner;
pub mod specfun;
pub mod spectrum;
pub mod toymodel;
pub mod validate;

pub use error::{Error, Result};

/// Kahan summation, used wherever a norm or weight total is compared
/// against 1 at tolerances tighter than naive accumulation error.
pub(crate) fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut c = 0.0;
    for v in values {
        let y = v - c;
        let t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
    sum
}

/// Version string recorded in output file headers.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
