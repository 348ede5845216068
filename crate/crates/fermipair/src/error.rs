//! Crate-wide error type.

/// Errors produced by the numerical pipeline.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Gamma function evaluated at a non-positive integer.
    #[error("gamma function pole at z = {0}")]
    GammaPole(f64),

    /// Argument of the trap function closer to a pole than the exclusion radius.
    #[error("argument u = {u} within {radius} of the pole at u = {pole}")]
    NearPole { u: f64, pole: f64, radius: f64 },

    /// Termwise tail series hit its hard cap before meeting the tolerance.
    #[error("tail series for F(u = {u}, eta = {eta}) did not converge under the term cap")]
    SeriesCap { u: f64, eta: f64 },

    /// Quadrature failed to reach the requested tolerance.
    #[error("adaptive quadrature stalled at error estimate {err_est:e}")]
    QuadratureStalled { err_est: f64 },

    /// Invalid parameter value for a domain type.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// No sign change found in the branch interval.
    #[error("no root found for branch {branch} in ({lo}, {hi})")]
    NoRoot { branch: usize, lo: f64, hi: f64 },

    /// More than one sign change found in the branch interval.
    #[error("{count} sign changes for branch {branch}; single-root assumption violated")]
    MultipleRoots { branch: usize, count: usize },

    /// Energy sits on a noninteracting lattice level, so an expansion
    /// denominator vanishes.
    #[error("energy x = {x} within 1e-9 of the noninteracting level {level}")]
    ResonantDenominator { x: f64, level: f64 },

    /// Operation requires an even mode index.
    #[error("mode index {0} is odd; only even modes couple at the origin")]
    OddMode(usize),

    /// Amplitude matrix fails the symmetry requirement.
    #[error("amplitude matrix asymmetry {max_asym:e} exceeds 1e-10")]
    NotSymmetric { max_asym: f64 },

    /// Schmidt weights do not sum to one.
    #[error("weights sum to {sum}, expected 1 within {tol:e}")]
    NotNormalized { sum: f64, tol: f64 },

    /// Magnetic field exactly on resonance.
    #[error("field B equals the resonance position B0; scattering length diverges")]
    ResonanceField,

    /// Configuration file problem, with the offending line.
    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },

    /// A sweep failed at a specific grid value.
    #[error("at inv_as = {inv_as}: {source}")]
    AtGridPoint {
        inv_as: f64,
        #[source]
        source: Box<Error>,
    },

    /// File I/O while reading config or writing output.
    #[error("i/o on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// Attaches the sweep grid value at which the failure occurred.
    pub fn at_grid_point(self, inv_as: f64) -> Error {
        Error::AtGridPoint {
            inv_as,
            source: Box::new(self),
        }
    }
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
