//! Error type shared by all modules of the crate.

use thiserror::Error;

/// Crate-wide error enumeration.
///
/// Contract violations (dimension mismatches, out-of-range component
/// indices) are programming errors and panic instead; everything that can
/// legitimately fail on valid-looking input is reported through this type.
#[derive(Debug, Error)]
pub enum Error {
    /// Input outside the mathematical domain of an operation
    /// (non-timelike velocity, superluminal circular speed, bad window, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// A specification string (worldline, force, config) failed to parse.
    #[error("parse error: {0}")]
    Parse(String),

    /// Field point too close to the worldline: the retarded distance is
    /// below the degeneracy cutoff and the retarded frame is ill-defined.
    #[error("degenerate field point: retarded distance {r:.3e} below cutoff {cutoff:.3e}")]
    DegeneratePoint { r: f64, cutoff: f64 },

    /// The retarded-time bracketing search did not enclose a root.
    #[error("retarded-time search failed: no sign change in window [{lo:.6e}, {hi:.6e}]")]
    SearchFailure { lo: f64, hi: f64 },

    /// An iterative routine stopped without reaching its precision target.
    #[error("precision target not met: requested {requested:.3e}, achieved {achieved:.3e}")]
    Precision { requested: f64, achieved: f64 },

    /// Least-squares system too ill-conditioned to trust.
    #[error("ill-conditioned fit: {0}")]
    Conditioning(String),

    /// Constraint projection asked to repair a state too far from the
    /// constraint manifold.
    #[error("projection failure: constraint violation {violation:.3e} exceeds limit {limit:.3e}")]
    ProjectionFailure { violation: f64, limit: f64 },

    /// Equation-of-motion setup with a vanishing leading coefficient and an
    /// inconsistent lower-order system.
    #[error("degenerate system: {0}")]
    DegenerateSystem(String),
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
