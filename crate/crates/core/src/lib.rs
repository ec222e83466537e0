//! Coarse-grained (partial secular) Markovian master equations.
//!
//! Starting from the half-Fourier bath matrices `Ω(ω)`, the crate assembles
//! the dissipation matrix `γ^(Δt)` and Lamb shift for a coarse-graining time
//! `Δt`, certifies complete positivity (exact eigenvalue test, closed-form
//! two-gap threshold, and sufficient critical times from matrix dilution),
//! and integrates the resulting dynamics.
//!
//! Modules:
//! - [`spectral`]: levels, gaps and eigenoperators of `H_S`
//! - [`bath`]: occupations, decay rates, principal values, `Ω(ω)`
//! - [`generator`]: `γ`, `η`, `H_LS`, the Liouvillian and commutator audits
//! - [`positivity`]: `Λ_min`, dipole thresholds, critical coarse-graining times
//! - [`dynamics`]: trajectories, Choi states, analytic oracles, steady states
//! - [`dipole`]: the qubit / oscillator dipole-coupling presets

pub mod bath;
pub mod dipole;
pub mod dynamics;
pub mod error;
pub mod generator;
pub mod linalg;
pub mod positivity;
pub mod spectral;

pub use error::{Error, Result};
