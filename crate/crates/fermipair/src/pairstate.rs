//! Open-channel two-atom amplitude in the single-particle product basis.
//!
//! The eigenstate's spatial part lives in (center of mass) x (relative
//! motion) with the center of mass in its ground state. The contact
//! coupling populates only even relative modes, weighted by the mode value
//! at the origin over the energy denominator. A per-direction "beamsplitter"
//! basis change (r = (r1 - r2)/sqrt(2), R = (r1 + r2)/sqrt(2) share one
//! oscillator length) then rotates the state onto particle-1 x particle-2
//! products. Because every relative index is even, the resulting amplitude
//! only connects particle modes of equal parity in each direction, and the
//! matrix is stored in the eight parity-sector blocks.

use crate::compensated_sum;
use crate::error::{Error, Result};

/// Denominators smaller than this mean the energy sits on a noninteracting
/// level and the expansion is ill-defined.
const RESONANT_DENOM_TOL: f64 = 1e-9;

/// Value of the k-th 1D oscillator eigenfunction at the origin, unit
/// oscillator length: pi^{-1/4} (-1)^{k/2} sqrt(k!) / (2^{k/2} (k/2)!).
/// Evaluated by the ratio recurrence to stay exact for large k.
pub fn mode_amplitude_at_origin(k: usize) -> Result<f64> {
    if k % 2 == 1 {
        return Err(Error::OddMode(k));
    }
    let mut v = std::f64::consts::PI.powf(-0.25);
    let mut j = 0;
    while j < k {
        // phi_{j+2}(0) / phi_j(0) = -sqrt((j+1)/(j+2))
        v *= -((j as f64 + 1.0) / (j as f64 + 2.0)).sqrt();
        j += 2;
    }
    Ok(v)
}

/// Expansion of (center-of-mass ground) x (relative mode k) over particle
/// modes |a>_1 |b>_2 in one direction: entries (a, b, T) with a + b = k and
/// T = (-1)^b sqrt(binom(k, a)) 2^{-k/2}.
pub fn beamsplitter_coeffs(k: usize) -> Result<Vec<(usize, usize, f64)>> {
    if k % 2 == 1 {
        return Err(Error::OddMode(k));
    }
    Ok(beamsplitter_row(k))
}

/// Beamsplitter row without the parity guard, for internal assembly.
fn beamsplitter_row(k: usize) -> Vec<(usize, usize, f64)> {
    let scale = 0.5f64.powi(k as i32 / 2) * if k % 2 == 1 { 0.5f64.sqrt() } else { 1.0 };
    // binom(k, a) computed up to the middle and mirrored, so the row is
    // exactly palindromic and the assembled matrix exactly symmetric.
    let mut binom = vec![1.0f64; k + 1];
    for a in 0..k / 2 {
        binom[a + 1] = binom[a] * (k - a) as f64 / (a as f64 + 1.0);
    }
    for a in k / 2 + 1..=k {
        binom[a] = binom[k - a];
    }
    let mut out = Vec::with_capacity(k + 1);
    for (a, c) in binom.iter().enumerate() {
        let b = k - a;
        let sign = if b % 2 == 0 { 1.0 } else { -1.0 };
        out.push((a, b, sign * c.sqrt() * scale));
    }
    out
}

/// Truncated relative-motion expansion c_k over even mode triples.
#[derive(Debug, Clone, PartialEq)]
pub struct RelativeExpansion {
    lambda: f64,
    x: f64,
    k_perp: usize,
    k_z: usize,
    /// Dense over even triples, index = (kx/2, ky/2, kz/2) row-major.
    coeffs: Vec<f64>,
}

impl RelativeExpansion {
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    /// Per-direction truncation in the two transverse directions.
    pub fn k_perp(&self) -> usize {
        self.k_perp
    }

    /// Axial truncation; may exceed k_perp for cigar-shaped traps.
    pub fn k_z(&self) -> usize {
        self.k_z
    }

    /// Coefficient of the (kx, ky, kz) relative mode; zero for odd or
    /// out-of-range indices.
    pub fn coeff(&self, kx: usize, ky: usize, kz: usize) -> f64 {
        if kx % 2 == 1 || ky % 2 == 1 || kz % 2 == 1 {
            return 0.0;
        }
        if kx > self.k_perp || ky > self.k_perp || kz > self.k_z {
            return 0.0;
        }
        let np = self.k_perp / 2 + 1;
        let nz = self.k_z / 2 + 1;
        self.coeffs[(kx / 2 * np + ky / 2) * nz + kz / 2]
    }

    /// Builds an expansion from an explicit sparse coefficient list,
    /// normalizing to unit square sum. Handy for assembling analytic
    /// limit states without solving for an energy first.
    pub fn from_coefficients(
        lambda: f64,
        x: f64,
        k_perp: usize,
        k_z: usize,
        entries: &[((usize, usize, usize), f64)],
    ) -> Result<RelativeExpansion> {
        if k_perp % 2 == 1 || k_z % 2 == 1 {
            return Err(Error::OddMode(k_perp.max(k_z)));
        }
        let np = k_perp / 2 + 1;
        let nz = k_z / 2 + 1;
        let mut coeffs = vec![0.0; np * np * nz];
        for &((kx, ky, kz), c) in entries {
            if kx % 2 == 1 || ky % 2 == 1 || kz % 2 == 1 {
                return Err(Error::OddMode(kx.max(ky).max(kz)));
            }
            if kx > k_perp || ky > k_perp || kz > k_z {
                return Err(Error::InvalidParameter(format!(
                    "mode ({kx},{ky},{kz}) exceeds caps ({k_perp},{k_perp},{k_z})"
                )));
            }
            coeffs[(kx / 2 * np + ky / 2) * nz + kz / 2] += c;
        }
        let norm2 = compensated_sum(coeffs.iter().map(|c| c * c));
        if norm2 <= 0.0 || !norm2.is_finite() {
            return Err(Error::NotNormalized { sum: norm2, tol: 0.0 });
        }
        let inv_norm = 1.0 / norm2.sqrt();
        for c in &mut coeffs {
            *c *= inv_norm;
        }
        Ok(RelativeExpansion { lambda, x, k_perp, k_z, coeffs })
    }

    /// Iterates (kx, ky, kz, c) over all stored even triples.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, usize, f64)> + '_ {
        let np = self.k_perp / 2 + 1;
        let nz = self.k_z / 2 + 1;
        self.coeffs.iter().enumerate().map(move |(i, &c)| {
            let kz = (i % nz) * 2;
            let ky = (i / nz % np) * 2;
            let kx = (i / nz / np) * 2;
            (kx, ky, kz, c)
        })
    }
}

/// Relative expansion with a common per-direction cap K.
pub fn relative_expansion(x: f64, lambda: f64, k: usize) -> Result<RelativeExpansion> {
    relative_expansion_anisotropic(x, lambda, k, k)
}

/// Relative expansion with separate transverse and axial caps:
/// c_k proportional to phi_{kx}(0) phi_{ky}(0) phi_{kz}(0) divided by
/// (x - (kx + ky)/2 - lambda kz/2), normalized to unit square sum.
pub fn relative_expansion_anisotropic(
    x: f64,
    lambda: f64,
    k_perp: usize,
    k_z: usize,
) -> Result<RelativeExpansion> {
    if k_perp % 2 == 1 || k_z % 2 == 1 {
        return Err(Error::OddMode(k_perp.max(k_z)));
    }
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "lambda must be positive and finite, got {lambda}"
        )));
    }
    let np = k_perp / 2 + 1;
    let nz = k_z / 2 + 1;
    let phi_perp: Vec<f64> = (0..np)
        .map(|i| mode_amplitude_at_origin(2 * i))
        .collect::<Result<_>>()?;
    let phi_z: Vec<f64> = (0..nz)
        .map(|i| mode_amplitude_at_origin(2 * i))
        .collect::<Result<_>>()?;
    let mut coeffs = vec![0.0; np * np * nz];
    for ix in 0..np {
        for iy in 0..np {
            for iz in 0..nz {
                let level = (ix + iy) as f64 + lambda * iz as f64;
                let denom = x - level;
                if denom.abs() < RESONANT_DENOM_TOL {
                    return Err(Error::ResonantDenominator { x, level });
                }
                coeffs[(ix * np + iy) * nz + iz] = phi_perp[ix] * phi_perp[iy] * phi_z[iz] / denom;
            }
        }
    }
    let norm2 = compensated_sum(coeffs.iter().map(|c| c * c));
    let inv_norm = 1.0 / norm2.sqrt();
    for c in &mut coeffs {
        *c *= inv_norm;
    }
    Ok(RelativeExpansion { lambda, x, k_perp, k_z, coeffs })
}

/// One parity-sector block of the two-atom amplitude.
#[derive(Debug, Clone, PartialEq)]
pub struct ParitySector {
    /// Per-direction parity (0 = even, 1 = odd) shared by both particles.
    pub parity: [usize; 3],
    /// Particle mode triples indexing this block's rows and columns.
    pub modes: Vec<[usize; 3]>,
    /// Dense symmetric block, row-major, dimension modes.len().
    pub data: Vec<f64>,
}

impl ParitySector {
    pub fn dim(&self) -> usize {
        self.modes.len()
    }
}

/// Symmetric two-atom amplitude eta_{m1, m2}, stored by parity sector.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeMatrix {
    k_perp: usize,
    k_z: usize,
    sectors: Vec<ParitySector>,
}

impl AmplitudeMatrix {
    pub fn k_perp(&self) -> usize {
        self.k_perp
    }

    pub fn k_z(&self) -> usize {
        self.k_z
    }

    /// The eight parity-sector blocks.
    pub fn sectors(&self) -> &[ParitySector] {
        &self.sectors
    }

    /// Single amplitude entry; zero when the particles' parities differ in
    /// any direction.
    pub fn entry(&self, m1: [usize; 3], m2: [usize; 3]) -> f64 {
        if (0..3).any(|d| (m1[d] + m2[d]) % 2 == 1) {
            return 0.0;
        }
        let caps = [self.k_perp, self.k_perp, self.k_z];
        if (0..3).any(|d| m1[d] > caps[d] || m2[d] > caps[d]) {
            return 0.0;
        }
        let parity = [m1[0] % 2, m1[1] % 2, m1[2] % 2];
        let sector = &self.sectors[Self::sector_slot(parity)];
        let pos = |m: [usize; 3]| {
            let sizes = Self::sector_sizes(parity, self.k_perp, self.k_z);
            ((m[0] - parity[0]) / 2 * sizes[1] + (m[1] - parity[1]) / 2) * sizes[2]
                + (m[2] - parity[2]) / 2
        };
        sector.data[pos(m1) * sector.dim() + pos(m2)]
    }

    /// Squared Frobenius norm summed over all blocks.
    pub fn total_norm(&self) -> f64 {
        compensated_sum(self.sectors.iter().flat_map(|s| s.data.iter()).map(|v| v * v))
    }

    /// Largest |eta_{m1,m2} - eta_{m2,m1}| over all blocks.
    pub fn max_asymmetry(&self) -> f64 {
        let mut worst = 0.0f64;
        for s in &self.sectors {
            let n = s.dim();
            for i in 0..n {
                for j in 0..i {
                    worst = worst.max((s.data[i * n + j] - s.data[j * n + i]).abs());
                }
            }
        }
        worst
    }

    /// Unblocked dense matrix over all particle triples (row = m1,
    /// col = m2, z fastest), for brute-force cross-checks.
    pub fn to_dense(&self) -> (Vec<f64>, usize) {
        let np = self.k_perp + 1;
        let nz = self.k_z + 1;
        let dim = np * np * nz;
        let flat = |m: [usize; 3]| (m[0] * np + m[1]) * nz + m[2];
        let mut out = vec![0.0; dim * dim];
        for s in &self.sectors {
            let n = s.dim();
            for (i, &m1) in s.modes.iter().enumerate() {
                for (j, &m2) in s.modes.iter().enumerate() {
                    out[flat(m1) * dim + flat(m2)] = s.data[i * n + j];
                }
            }
        }
        (out, dim)
    }

    fn sector_slot(parity: [usize; 3]) -> usize {
        parity[0] * 4 + parity[1] * 2 + parity[2]
    }

    /// Per-direction index counts of one sector.
    fn sector_sizes(parity: [usize; 3], k_perp: usize, k_z: usize) -> [usize; 3] {
        let count = |p: usize, cap: usize| {
            if p == 0 {
                cap / 2 + 1
            } else {
                cap.div_ceil(2)
            }
        };
        [
            count(parity[0], k_perp),
            count(parity[1], k_perp),
            count(parity[2], k_z),
        ]
    }
}

/// Rotates a normalized relative expansion into the particle-particle
/// basis: eta_{m1,m2} = sum_k c_k prod_d T^{(k_d)}_{m1_d, m2_d}.
pub fn assemble_amplitude(rel: &RelativeExpansion) -> Result<AmplitudeMatrix> {
    let (k_perp, k_z) = (rel.k_perp(), rel.k_z());
    let mut sectors: Vec<ParitySector> = Vec::with_capacity(8);
    for slot in 0..8 {
        let parity = [slot / 4, slot / 2 % 2, slot % 2];
        let sizes = AmplitudeMatrix::sector_sizes(parity, k_perp, k_z);
        let caps = [k_perp, k_perp, k_z];
        let mut modes = Vec::with_capacity(sizes.iter().product());
        for i in 0..sizes[0] {
            for j in 0..sizes[1] {
                for l in 0..sizes[2] {
                    modes.push([
                        parity[0] + 2 * i,
                        parity[1] + 2 * j,
                        parity[2] + 2 * l,
                    ]);
                }
            }
        }
        debug_assert!(modes.iter().all(|m| (0..3).all(|d| m[d] <= caps[d])));
        let dim = modes.len();
        sectors.push(ParitySector { parity, modes, data: vec![0.0; dim * dim] });
    }

    let rows_perp: Vec<Vec<(usize, usize, f64)>> = (0..=k_perp / 2)
        .map(|i| beamsplitter_row(2 * i))
        .collect();
    let rows_z: Vec<Vec<(usize, usize, f64)>> = (0..=k_z / 2)
        .map(|i| beamsplitter_row(2 * i))
        .collect();

    for (kx, ky, kz, c) in rel.iter() {
        if c == 0.0 {
            continue;
        }
        for &(ax, bx, tx) in &rows_perp[kx / 2] {
            for &(ay, by, ty) in &rows_perp[ky / 2] {
                let cxy = c * tx * ty;
                for &(az, bz, tz) in &rows_z[kz / 2] {
                    let parity = [ax % 2, ay % 2, az % 2];
                    let sizes = AmplitudeMatrix::sector_sizes(parity, k_perp, k_z);
                    let sector = &mut sectors[AmplitudeMatrix::sector_slot(parity)];
                    let r = ((ax / 2) * sizes[1] + ay / 2) * sizes[2] + az / 2;
                    let q = ((bx / 2) * sizes[1] + by / 2) * sizes[2] + bz / 2;
                    let dim = sector.dim();
                    sector.data[r * dim + q] += cxy * tz;
                }
            }
        }
    }

    let amp = AmplitudeMatrix { k_perp, k_z, sectors };
    let norm = amp.total_norm();
    if (norm - 1.0).abs() > 1e-12 {
        return Err(Error::NotNormalized { sum: norm, tol: 1e-12 });
    }
    Ok(amp)
}
