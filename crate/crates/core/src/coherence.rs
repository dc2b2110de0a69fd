//! Relative-entropy coherence in the fixed computational basis, and the
//! basis-free (total) coherence.

use crate::qmatrix::{dephase, von_neumann_entropy, DensityMatrix, Error};

/// Both coherence measures of a state, in bits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherenceValue {
    /// `C(ρ) = S(ρ*) − S(ρ)`, relative to the computational basis.
    pub basis_dependent: f64,
    /// `C^T(ρ) = log₂ d − S(ρ)`, the maximum over all bases.
    pub basis_free: f64,
}

fn clamp_roundoff(x: f64) -> f64 {
    if x < 0.0 && x > -1e-9 {
        0.0
    } else {
        x
    }
}

/// Relative-entropy coherence `C(ρ) = S(ρ*) − S(ρ)`.
pub fn rel_ent_coherence(rho: &DensityMatrix) -> Result<f64, Error> {
    let s_star = von_neumann_entropy(&dephase(rho))?;
    let s = von_neumann_entropy(rho)?;
    Ok(clamp_roundoff(s_star - s))
}

/// Total (basis-free) coherence `C^T(ρ) = log₂ d − S(ρ)`.
pub fn total_coherence(rho: &DensityMatrix) -> Result<f64, Error> {
    let d = rho.dim() as f64;
    Ok(clamp_roundoff(d.log2() - von_neumann_entropy(rho)?))
}

pub fn coherence_pair(rho: &DensityMatrix) -> Result<CoherenceValue, Error> {
    Ok(CoherenceValue {
        basis_dependent: rel_ent_coherence(rho)?,
        basis_free: total_coherence(rho)?,
    })
}
