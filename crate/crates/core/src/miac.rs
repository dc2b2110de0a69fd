//! Measurement-induced average coherence (MIAC), its total-coherence
//! counterpart (MIATC), the extra amounts over the unmeasured reduced state,
//! and their maxima over Alice's rank-one projective measurements.

use crate::coherence::{rel_ent_coherence, total_coherence};
use crate::correlations::{classical_correlation, minimize_over_angles};
use crate::measurement::{measure_a, qubit_projector_pair, Measurement};
use crate::qmatrix::{partial_trace, von_neumann_entropy, BipartiteState, Error, Subsystem};

/// How the measurement of a [`BoundReport`] was specified.
#[derive(Debug, Clone, PartialEq)]
pub enum MeasurementParams {
    /// Bloch angles of a rank-one qubit projector pair.
    Angles { theta: f64, phi: f64 },
    /// Anything else (POVM, higher-dimensional basis, ...).
    Descriptor(String),
}

/// Every quantity of the bound chain for one state/measurement pair.
#[derive(Debug, Clone)]
pub struct BoundReport {
    /// `C(ρ_B)` and `C^T(ρ_B)` of the unmeasured reduced state.
    pub c_b: f64,
    pub ct_b: f64,
    pub miac: f64,
    pub miatc: f64,
    pub extra_miac: f64,
    pub extra_miatc: f64,
    /// Classical correlation, optimizer seeded with this report's
    /// measurement so `J ≥ extra` can only fail for a genuine reason.
    pub j_classical: f64,
    pub measurement_params: MeasurementParams,
}

/// `Σ_i p_i C(ρ_i^B)`: Bob's average coherence after Alice's measurement.
pub fn miac(s: &BipartiteState, m: &Measurement) -> Result<f64, Error> {
    measure_a(s, m)?.average(rel_ent_coherence)
}

/// `log₂ d_B − Σ_i p_i S(ρ_i^B)`: Bob's average total coherence.
pub fn miatc(s: &BipartiteState, m: &Measurement) -> Result<f64, Error> {
    let avg_entropy = measure_a(s, m)?.average(von_neumann_entropy)?;
    Ok((s.dim_b() as f64).log2() - avg_entropy)
}

pub fn extra_miac(s: &BipartiteState, m: &Measurement) -> Result<f64, Error> {
    let c_b = rel_ent_coherence(&partial_trace(s, Subsystem::B))?;
    Ok(miac(s, m)? - c_b)
}

pub fn extra_miatc(s: &BipartiteState, m: &Measurement) -> Result<f64, Error> {
    let ct_b = total_coherence(&partial_trace(s, Subsystem::B))?;
    Ok(miatc(s, m)? - ct_b)
}

/// Full report for one state/measurement pair, with `j_classical` seeded by
/// the measurement under test.
pub fn bound_report(s: &BipartiteState, m: &Measurement) -> Result<BoundReport, Error> {
    let rho_b = partial_trace(s, Subsystem::B);
    let c_b = rel_ent_coherence(&rho_b)?;
    let ct_b = total_coherence(&rho_b)?;
    let miac_v = miac(s, m)?;
    let miatc_v = miatc(s, m)?;
    let j = classical_correlation(s, std::slice::from_ref(m))?.classical_correlation;
    let params = match m.bloch_angles() {
        Some((theta, phi)) => MeasurementParams::Angles { theta, phi },
        None => MeasurementParams::Descriptor(format!(
            "{:?} with {} outcomes on dim {}",
            m.kind(),
            m.operators().len(),
            m.dim()
        )),
    };
    Ok(BoundReport {
        c_b,
        ct_b,
        miac: miac_v,
        miatc: miatc_v,
        extra_miac: miac_v - c_b,
        extra_miatc: miatc_v - ct_b,
        j_classical: j,
        measurement_params: params,
    })
}

fn maximize_extra<F>(s: &BipartiteState, objective: F) -> Result<BoundReport, Error>
where
    F: Fn(&BipartiteState, &Measurement) -> Result<f64, Error>,
{
    if s.dim_a() != 2 {
        return Err(Error::UnsupportedDimension(s.dim_a()));
    }
    // Same grid + Nelder-Mead machinery as the classical correlation, with
    // the objective negated. Constants shared for comparability.
    let mut trace = Vec::new();
    let ((theta, phi), _) = minimize_over_angles(
        |t, p| -objective(s, &qubit_projector_pair(t, p)).expect("valid qubit measurement"),
        &[],
        &mut trace,
    );
    let argmax = qubit_projector_pair(theta, phi);
    bound_report(s, &argmax)
}

/// Maximize the extra MIAC over rank-one projective qubit measurements.
pub fn max_extra_miac(s: &BipartiteState) -> Result<BoundReport, Error> {
    maximize_extra(s, extra_miac)
}

/// Maximize the extra MIATC over rank-one projective qubit measurements.
pub fn max_extra_miatc(s: &BipartiteState) -> Result<BoundReport, Error> {
    maximize_extra(s, extra_miatc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::fixtures;
    use std::f64::consts::PI;

    #[test]
    fn cc_state_miac_values() {
        let s = fixtures::example1();
        let comp = qubit_projector_pair(0.0, 0.0);
        let pm = qubit_projector_pair(PI / 2.0, 0.0);
        assert!((miac(&s, &comp).unwrap() - 1.0).abs() < 1e-12);
        assert!((miatc(&s, &comp).unwrap() - 1.0).abs() < 1e-12);
        assert!(miac(&s, &pm).unwrap().abs() < 1e-12);
        assert!(extra_miac(&s, &pm).unwrap().abs() < 1e-12);
        assert!(extra_miatc(&s, &pm).unwrap().abs() < 1e-12);
    }

    #[test]
    fn qc_state_extra_values() {
        // oracle: 1 + (1/4)log₂(1/3) + (1/2)log₂(2/3) = 0.31127812445913283
        let s = fixtures::example3();
        let comp = qubit_projector_pair(0.0, 0.0);
        assert!((miac(&s, &comp).unwrap() - 0.31127812445913283).abs() < 1e-12);
        assert!((extra_miac(&s, &comp).unwrap() - 0.31127812445913283).abs() < 1e-12);
        assert!((extra_miatc(&s, &comp).unwrap() - 0.31127812445913283).abs() < 1e-12);
    }

    #[test]
    fn qc_state_null_measurement() {
        // cot 2θ' = cos φ with φ = π/2 gives θ' = π/4, i.e. Bloch θ = π/2
        let s = fixtures::example3();
        let m = qubit_projector_pair(PI / 2.0, PI / 2.0);
        assert!(extra_miac(&s, &m).unwrap().abs() < 1e-9);
        assert!(extra_miatc(&s, &m).unwrap().abs() < 1e-9);
    }

    #[test]
    fn cq_state_extra_values() {
        // oracles: extra_miatc = J = 0.6008760366928562,
        // extra_miac = J + 1/2 + (1/4)log₂(1/4) + (3/4)log₂(3/4) = 0.28959791223372344
        let s = fixtures::example2();
        let comp = qubit_projector_pair(0.0, 0.0);
        assert!((extra_miatc(&s, &comp).unwrap() - 0.6008760366928562).abs() < 1e-12);
        assert!((extra_miac(&s, &comp).unwrap() - 0.28959791223372344).abs() < 1e-12);
        let pm = qubit_projector_pair(PI / 2.0, 0.0);
        assert!(extra_miac(&s, &pm).unwrap().abs() < 1e-12);
        assert!(extra_miatc(&s, &pm).unwrap().abs() < 1e-12);
        // MIATC at {|±⟩} equals C^T(ρ_B): no extra
        assert!((miatc(&s, &pm).unwrap() - 0.39912396330714384).abs() < 1e-12);
    }

    #[test]
    fn pure_state_miatc_is_log_dim() {
        let bell = crate::correlations::bell_diagonal_state(
            crate::correlations::BellDiagonalParams::new(1.0, -1.0, 1.0).unwrap(),
        )
        .unwrap();
        let m = qubit_projector_pair(1.0, 2.0);
        assert!((miatc(&bell, &m).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn max_extra_on_product_state_is_zero() {
        let s = fixtures::product_state_example();
        let r1 = max_extra_miac(&s).unwrap();
        let r2 = max_extra_miatc(&s).unwrap();
        assert!(r1.extra_miac.abs() < 1e-6);
        assert!(r2.extra_miatc.abs() < 1e-6);
    }

    #[test]
    fn max_extra_miac_of_cc_state_is_one() {
        let r = max_extra_miac(&fixtures::example1()).unwrap();
        assert!((r.extra_miac - 1.0).abs() < 1e-6);
        assert!(r.j_classical >= r.extra_miac - 1e-6);
    }

    #[test]
    fn block_diagonal_state_has_no_extra_miac_but_extra_miatc() {
        // ρ = ½|0⟩⟨0|⊗diag(¾,¼) + ½|1⟩⟨1|⊗diag(¼,¾)
        let s = fixtures::block_diagonal_example();
        let r = max_extra_miac(&s).unwrap();
        assert!(r.extra_miac.abs() < 1e-5, "extra_miac = {}", r.extra_miac);
        let rt = max_extra_miatc(&s).unwrap();
        assert!(rt.extra_miatc > 1e-3, "extra_miatc = {}", rt.extra_miatc);
    }
}
