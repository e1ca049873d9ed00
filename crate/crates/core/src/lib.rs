//! Exact state-vector simulator for photonic logical qubits that are
//! immune to rotations of the receiver's frame about the propagation axis.
//!
//! One logical qubit lives in the joint polarization ⊗ first-order
//! transverse-mode state of a single photon; the protected levels
//! `(|Hv⟩ − |Vh⟩)/√2` and `(|Hh⟩ + |Vv⟩)/√2` are pointwise invariant under
//! the collective rotation that a misaligned receiver applies to both
//! degrees of freedom at once. On top of the exact one- and two-photon
//! Fock engine the crate provides the optical gate set, down-conversion
//! sources of entangled logical states, the beam-splitter partial
//! Bell-state analyzer, and alignment-free protocol runs (key
//! distribution, nonlocality tests, dense coding, teleportation) in both
//! exact-probability and seeded Monte Carlo modes.

pub mod bsm;
pub mod elements;
pub mod error;
pub mod fock;
pub mod logical;
pub mod protocols;
pub mod sources;
pub mod verify;

pub use error::{Error, Result};

/// Version stamp embedded in every report.
pub const ARTIFACT_VERSION: &str = env!("CARGO_PKG_VERSION");
