//! Quantum coherence, measurement-induced average coherence, and the
//! classical-correlation bound chain on bipartite states.
//!
//! The crate computes, for a bipartite density matrix `ρ_AB`:
//!
//! - relative-entropy coherence `C(ρ) = S(ρ*) − S(ρ)` and total (basis-free)
//!   coherence `C^T(ρ) = log₂ d − S(ρ)`;
//! - Bob's measurement-induced average coherence (MIAC) and average total
//!   coherence (MIATC) under a local measurement on Alice's side, and the
//!   extra amounts gained over the unmeasured reduced state;
//! - the classical correlation `J(B|{Ω_i^A})` by numerical minimization of the
//!   average conditional entropy over Alice's rank-one projective
//!   measurements, plus quantum mutual information and discord;
//! - batch audits of the inequality chain
//!   `ΔC^P ≤ ΔC^T ≤ J` on random states and measurements.
//!
//! All entropies are base 2 (bits). Matrices are dense complex doubles; the
//! intended scale is a handful of qubits per side.

#![forbid(unsafe_code)]

pub mod audit;
pub mod cli;
pub mod coherence;
pub mod correlations;
pub mod measurement;
pub mod miac;
pub mod qmatrix;

pub use qmatrix::{BipartiteState, CMat, DensityMatrix, Error, Spectrum, Subsystem};
