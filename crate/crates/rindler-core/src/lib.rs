//! Numerical laboratory for the response of smoothly switched, uniformly
//! accelerated particle detectors.
//!
//! A two-level probe on a Rindler trajectory of proper acceleration `a`,
//! coupled to the Minkowski vacuum through a smooth compactly supported
//! switching window χ, has leading-order transition rate governed by the
//! response functional
//!
//! ```text
//! F(E) = ∫∫ dτ′ dτ″ χ(τ′) χ(τ″) e^{−iE(τ′−τ″)} W(τ′−τ″),
//! ```
//!
//! with `W` the Wightman function pulled back to the worldline. For the
//! adiabatically stretched window χ(τ/λ) the same quantity has the
//! frequency-domain form
//!
//! ```text
//! F_λ(E)/λ = (2π)^{−2} ∫ dω |χ̂(ω)|² G(E + ω/λ),   G(ω) = ω/(e^{2πω/a} − 1),
//! ```
//!
//! whose kernel `G` is Planckian at the Unruh temperature `T = a/(2π)`.
//! The crate evaluates both forms independently, estimates effective
//! temperatures through the detailed-balance ratio `F(−E)/F(E)`, and scans
//! energy grids to decide whether a switching family is polynomially
//! asymptotically thermal.
//!
//! Modules, bottom-up:
//!
//! - [`quad`] — Gauss–Kronrod adaptive quadrature (real, complex, and
//!   log-space variants), Richardson/Neville extrapolation, and a three-point
//!   Filon rule for cosine-oscillatory panels.
//! - [`switching`] — the window catalog: bump-product windows, plateau
//!   windows with fixed tails, and adiabatic rescaling.
//! - [`spectral`] — Fourier transforms of the catalog windows (rotated-contour
//!   evaluation at high frequency), spectral norms, autocorrelation, and
//!   decay-envelope fitting.
//! - [`response`] — the Planck kernel, the Rindler Wightman function, and the
//!   frequency-domain / time-domain response evaluations.
//! - [`thermality`] — detailed-balance temperature estimation, polynomial
//!   scaling schedules, asymptotic deviation bounds, and scan verdicts.

pub mod quad;
pub mod response;
pub mod spectral;
pub mod switching;
pub mod thermality;

use thiserror::Error;

/// Errors shared across the numerical modules.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A constructor or operation received a parameter outside its domain.
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// Adaptive quadrature stalled before reaching the requested tolerance.
    #[error("quadrature did not converge: best estimate {best:e}, achieved error {achieved:e}, requested {requested:e}")]
    QuadratureNonConvergent {
        best: f64,
        achieved: f64,
        requested: f64,
    },

    /// The ε → 0 extrapolation of the time-domain response failed to
    /// contract (successive corrections stopped decreasing).
    #[error("extrapolation not converging: corrections {previous:e} then {latest:e}")]
    ExtrapolationNotConverging { previous: f64, latest: f64 },

    /// The envelope model did not fit the sampled transform decay.
    #[error("envelope fit residual {achieved:.3} exceeds threshold {threshold:.3} (log units)")]
    EnvelopeFitResidual { achieved: f64, threshold: f64 },

    /// Truncation of an infinite integral could not be certified because no
    /// decay envelope is available for the window.
    #[error("truncation not certifiable: {0}")]
    TruncationNotCertifiable(String),

    /// Detailed-balance temperature is undefined (a response was zero or
    /// non-finite in log space).
    #[error("undefined temperature: {0}")]
    UndefinedTemperature(String),

    /// A scan grid violated its preconditions.
    #[error("grid too short: {0}")]
    GridTooShort(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
