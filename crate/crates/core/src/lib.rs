//! Exact solution of a planar relativistic (Dirac-oscillator-type) fermion in
//! a constant magnetic field, together with a truncated-Fock-space
//! exact-diagonalization oracle that independently verifies every closed-form
//! quantity: spectra, the chirality order parameter ⟨L_z⟩, canonical
//! fluctuations, chiral Mandel statistics, and entanglement entropies across
//! the chirality quantum phase transition at ξ̃ = ξ.
//!
//! Everything is deterministic and unit-normalized: energies in mc², action
//! in ħ, lengths in the family widths Δ = √(ħ/mω) and Δ̃ = √(ħ/mω̃).

pub mod entanglement;
pub mod error;
pub mod fock;
pub mod observables;
pub mod oracle;
pub mod params;
pub mod spectrum;
pub mod su11;

pub use error::{Error, Result};
pub use fock::{ChiralMode, Direction, FockBasis, OperatorMatrix, Spin};
pub use observables::{MandelQ, ObservableRecord, Source};
pub use oracle::{ConvergenceReport, CutoffPolicy, MatchedState, OracleRun, SpectrumResult};
pub use params::{
    derive_couplings, derive_couplings_with, DerivedCouplings, Family, ModelParams, RegimeLabel,
    DEFAULT_CRITICAL_WINDOW,
};
pub use spectrum::{Branch, GapFit, Side, StateLabel};
pub use su11::{EigenstateDescriptor, Su11CoherentState};
