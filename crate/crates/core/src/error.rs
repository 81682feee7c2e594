//! Error type shared across the crate.

use crate::oracle::ConvergenceReport;

/// Unified error type for all fallible operations in this crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Model parameters outside their domain (ξ ≤ 0, negative ξ̃, non-finite input).
    #[error("invalid model parameters: {0}")]
    InvalidParams(String),

    /// A quantity that is singular at ξ̃ = ξ was requested inside the critical window.
    #[error("critical point singularity: {0}")]
    CriticalPointSingularity(String),

    /// Too few grid points for a fit.
    #[error("insufficient grid: {0}")]
    InsufficientGrid(String),

    /// A one-sided grid was required but the points straddle (or touch) the critical ratio.
    #[error("mixed-side grid: {0}")]
    MixedSides(String),

    /// The requested state does not fit the Fock cutoff within tolerance.
    #[error("truncation leakage {leakage:.3e} exceeds threshold {threshold:.3e}")]
    TruncationLeakage { leakage: f64, threshold: f64 },

    /// The dense eigensolver failed to converge.
    #[error("eigensolver failure: {0}")]
    SolverFailure(String),

    /// An operator handed to the Hermitian eigensolver is not Hermitian.
    #[error("non-Hermitian input (defect {0:.3e})")]
    NonHermitianInput(f64),

    /// Cutoff escalation hit the ceiling before the tracked levels settled.
    /// Carries the partial report so callers can see how far it got.
    #[error("cutoff ceiling N = {max} reached; best achieved tolerance {achieved:.3e}")]
    CutoffCeiling {
        max: usize,
        achieved: f64,
        report: ConvergenceReport,
    },

    /// A state vector that should be normalized is not.
    #[error("state is not normalized (|norm - 1| = {0:.3e})")]
    UnnormalizedState(f64),

    /// A coefficient series cannot reach the requested tail mass within the cap.
    #[error("coefficient tail too heavy: {0}")]
    TailTooHeavy(String),

    /// Reduced-state weights are negative or do not sum to one.
    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    /// No truncated eigenvector matches the analytic state to the required overlap.
    #[error("eigenstate match failed: best eigenspace overlap {overlap:.6} is below {required}")]
    EigenstateMatch { overlap: f64, required: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
