//! Schmidt decomposition of the two-atom amplitude and entanglement
//! entropies.
//!
//! The amplitude matrix is real symmetric, so its Schmidt weights are the
//! squared eigenvalues; the parity-sector blocking turns one large
//! eigenproblem into eight small ones whose spectra are pooled. The spatial
//! von Neumann entropy comes from the pooled weights, and the spin-singlet
//! factor adds a constant ln 2 on top. Truncation convergence is driven by
//! a cap schedule with early stopping and a 1/K tail extrapolation.

use nalgebra::DMatrix;

use crate::compensated_sum;
use crate::error::{Error, Result};
use crate::pairstate::{assemble_amplitude, relative_expansion_anisotropic, AmplitudeMatrix};
use crate::spectrum::{solve_branch_point, TrapParams};

/// Default truncation schedule for convergence ramps.
pub const DEFAULT_K_SCHEDULE: [usize; 4] = [8, 12, 16, 20];

/// Default convergence tolerance on successive entropies.
pub const DEFAULT_ENTROPY_TOL: f64 = 1e-3;

/// Hard ceiling on the axial truncation; keeps cigar-trap sector sizes
/// within reach of the dense eigensolver.
pub const AXIAL_CAP_MAX: usize = 60;

const SYMMETRY_TOL: f64 = 1e-10;
const WEIGHT_SUM_TOL: f64 = 1e-10;
const ENTROPY_SUM_TOL: f64 = 1e-8;
const WEIGHT_FLOOR: f64 = 1e-16;

/// Pooled Schmidt weights of one amplitude with the derived entropies.
#[derive(Debug, Clone, PartialEq)]
pub struct SchmidtSpectrum {
    /// Schmidt weights in descending order, summing to one.
    pub kappa2: Vec<f64>,
    /// Spatial entanglement entropy in nats.
    pub spatial_entropy: f64,
    /// Spatial entropy plus the spin-singlet ln 2.
    pub total_entropy: f64,
}

/// Entropy values along a truncation schedule.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    /// (K, spatial entropy) pairs in increasing K.
    pub entropies: Vec<(usize, f64)>,
    /// Tail estimate from the last two values, fitting the residual as
    /// proportional to 1/K.
    pub extrapolated: f64,
    /// Whether the last two raw entropies differ by less than `tolerance`.
    pub converged: bool,
    pub tolerance: f64,
}

impl ConvergenceReport {
    /// Best available spatial entropy: the extrapolated value once two
    /// truncations exist, otherwise the single raw value.
    pub fn best(&self) -> f64 {
        if self.entropies.len() >= 2 {
            self.extrapolated
        } else {
            self.entropies[0].1
        }
    }

    /// Largest truncation actually evaluated.
    pub fn last_k(&self) -> usize {
        self.entropies.last().expect("report holds at least one entry").0
    }
}

/// Axial truncation paired with a transverse cap: even ceiling of
/// K_perp / lambda, clamped to [2, AXIAL_CAP_MAX]. Cigar traps (lambda < 1)
/// get extra axial modes because axial quanta are cheap; pancake traps get
/// fewer but always at least one excited pair.
pub fn axial_cap(k_perp: usize, lambda: f64) -> usize {
    let raw = (k_perp as f64 / lambda / 2.0).ceil() as usize * 2;
    raw.clamp(2, AXIAL_CAP_MAX)
}

/// Schmidt decomposition of a symmetric amplitude: per-sector eigenvalues,
/// squared and pooled across sectors.
pub fn schmidt(amp: &AmplitudeMatrix) -> Result<SchmidtSpectrum> {
    let asym = amp.max_asymmetry();
    if asym > SYMMETRY_TOL {
        return Err(Error::NotSymmetric { max_asym: asym });
    }
    let mut kappa2 = Vec::new();
    for sector in amp.sectors() {
        let n = sector.dim();
        if n == 0 {
            continue;
        }
        let block = DMatrix::from_row_slice(n, n, &sector.data);
        for ev in block.symmetric_eigenvalues().iter() {
            kappa2.push(ev * ev);
        }
    }
    kappa2.sort_unstable_by(|a, b| b.total_cmp(a));
    // Numerical zeros carry no weight and would bloat the spectrum with
    // one entry per unused basis pair.
    kappa2.retain(|&w| w >= WEIGHT_FLOOR);
    let sum = compensated_sum(kappa2.iter().copied());
    if (sum - 1.0).abs() > WEIGHT_SUM_TOL {
        return Err(Error::NotNormalized { sum, tol: WEIGHT_SUM_TOL });
    }
    let spatial_entropy = entropy(&kappa2)?;
    Ok(SchmidtSpectrum {
        kappa2,
        spatial_entropy,
        total_entropy: total_entropy(spatial_entropy),
    })
}

/// Von Neumann entropy -sum kappa^2 ln kappa^2 in nats. Weights below
/// 1e-16 contribute zero.
pub fn entropy(kappa2: &[f64]) -> Result<f64> {
    let sum = compensated_sum(kappa2.iter().copied());
    if (sum - 1.0).abs() > ENTROPY_SUM_TOL {
        return Err(Error::NotNormalized { sum, tol: ENTROPY_SUM_TOL });
    }
    let s: f64 = kappa2
        .iter()
        .filter(|&&w| w >= WEIGHT_FLOOR)
        .map(|&w| -w * w.ln())
        .sum();
    // A pure state sums to -0.0; clamp so downstream formatting shows 0.
    Ok(s.max(0.0))
}

/// Adds the spin-singlet contribution to a spatial entropy.
pub fn total_entropy(spatial: f64) -> f64 {
    spatial + std::f64::consts::LN_2
}

/// Full pipeline for one branch point: energy root, relative expansion at
/// truncation K (axial cap scaled by the aspect ratio), particle-basis
/// assembly, Schmidt decomposition.
pub fn branch_entanglement(
    branch_index: usize,
    p: &TrapParams,
    k: usize,
) -> Result<SchmidtSpectrum> {
    if k == 0 || k % 2 == 1 {
        return Err(Error::InvalidParameter(format!(
            "truncation must be a positive even integer, got {k}"
        )));
    }
    let point = solve_branch_point(branch_index, p)?;
    let rel =
        relative_expansion_anisotropic(point.x, p.lambda, k, axial_cap(k, p.lambda))?;
    let amp = assemble_amplitude(&rel)?;
    schmidt(&amp)
}

/// Runs `branch_entanglement` along an increasing truncation schedule,
/// stopping once two consecutive entropies agree within `tol`, and
/// extrapolates the tail.
pub fn converge_entropy(
    branch_index: usize,
    p: &TrapParams,
    k_schedule: &[usize],
    tol: f64,
) -> Result<ConvergenceReport> {
    if k_schedule.is_empty() {
        return Err(Error::InvalidParameter(
            "truncation schedule must be nonempty".into(),
        ));
    }
    if !k_schedule.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::InvalidParameter(
            "truncation schedule must be strictly increasing".into(),
        ));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let mut entropies: Vec<(usize, f64)> = Vec::with_capacity(k_schedule.len());
    let mut converged = false;
    for &k in k_schedule {
        let s = branch_entanglement(branch_index, p, k)?.spatial_entropy;
        entropies.push((k, s));
        if entropies.len() >= 2 {
            let prev = entropies[entropies.len() - 2].1;
            if (s - prev).abs() < tol {
                converged = true;
                break;
            }
        }
    }
    let extrapolated = match entropies[..] {
        [(_, s)] => s,
        [.., (k1, s1), (k2, s2)] => {
            // With residual c/K, the limit is s2 + (s2 - s1) k1/(k2 - k1).
            s2 + (s2 - s1) * k1 as f64 / (k2 - k1) as f64
        }
        [] => unreachable!("schedule is nonempty"),
    };
    Ok(ConvergenceReport { entropies, extrapolated, converged, tolerance: tol })
}
