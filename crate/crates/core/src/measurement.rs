//! Local measurements on subsystem A and the conditional ensembles they
//! induce on B, including Bloch-parameterized qubit projectors and the
//! Fourier-rotated measurement that saturates the classical-correlation
//! bound on the pure Schmidt family.

use num_complex::Complex64;

use crate::qmatrix::{
    c, hermiticity_defect, identity, max_abs, partial_trace_raw, tensor, BipartiteState, CMat,
    DensityMatrix, Error, Subsystem,
};

/// Outcomes below this probability are flagged and excluded from averages.
pub const PROB_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeasurementKind {
    Projective,
    Povm,
}

/// An ordered set of measurement operators on subsystem A.
#[derive(Debug, Clone)]
pub struct Measurement {
    operators: Vec<CMat>,
    kind: MeasurementKind,
}

impl Measurement {
    /// A projective measurement: Hermitian, mutually orthogonal, complete.
    pub fn projective(operators: Vec<CMat>) -> Result<Self, Error> {
        let m = Self {
            operators,
            kind: MeasurementKind::Projective,
        };
        m.check_completeness()?;
        let mut defect = 0.0f64;
        for (i, a) in m.operators.iter().enumerate() {
            defect = defect.max(hermiticity_defect(a));
            for (j, b) in m.operators.iter().enumerate() {
                let prod = a * b;
                let expect = if i == j { a.clone() } else { CMat::zeros(a.nrows(), a.ncols()) };
                defect = defect.max(max_abs(&(prod - expect)));
            }
        }
        if defect > 1e-9 {
            return Err(Error::NotProjective(defect));
        }
        Ok(m)
    }

    /// A general POVM given by its Kraus operators `M_i` (Σ M†M = I).
    pub fn povm(operators: Vec<CMat>) -> Result<Self, Error> {
        let m = Self {
            operators,
            kind: MeasurementKind::Povm,
        };
        m.check_completeness()?;
        Ok(m)
    }

    fn check_completeness(&self) -> Result<(), Error> {
        let dim = self.operators[0].nrows();
        let mut sum = CMat::zeros(dim, dim);
        for op in &self.operators {
            if op.nrows() != dim || op.ncols() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: op.nrows(),
                });
            }
            sum += op.adjoint() * op;
        }
        let defect = max_abs(&(sum - identity(dim)));
        if defect > 1e-9 {
            return Err(Error::IncompleteMeasurement(defect));
        }
        Ok(())
    }

    pub fn operators(&self) -> &[CMat] {
        &self.operators
    }

    pub fn kind(&self) -> MeasurementKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.operators[0].nrows()
    }

    /// Bloch angles (θ, φ) of the first operator, when this is a two-outcome
    /// rank-one projective qubit measurement. Used to seed optimizers.
    pub fn bloch_angles(&self) -> Option<(f64, f64)> {
        if self.kind != MeasurementKind::Projective || self.dim() != 2 || self.operators.len() != 2
        {
            return None;
        }
        let p = &self.operators[0];
        // P = (I + n·σ)/2 for a rank-one projector
        let nz = 2.0 * p[(0, 0)].re - 1.0;
        let nx = 2.0 * p[(0, 1)].re;
        let ny = -2.0 * p[(0, 1)].im;
        let theta = nz.clamp(-1.0, 1.0).acos();
        let phi = ny.atan2(nx).rem_euclid(std::f64::consts::TAU);
        Some((theta, phi))
    }
}

/// Probabilities and Bob's conditional states after Alice's measurement.
/// Outcomes with negligible probability carry `None` and contribute nothing
/// to averages.
#[derive(Debug, Clone)]
pub struct ConditionalEnsemble {
    pub probs: Vec<f64>,
    pub states: Vec<Option<DensityMatrix>>,
}

impl ConditionalEnsemble {
    /// `Σ_i p_i f(ρ_i^B)` over the non-negligible outcomes.
    pub fn average<F>(&self, mut f: F) -> Result<f64, Error>
    where
        F: FnMut(&DensityMatrix) -> Result<f64, Error>,
    {
        let mut total = 0.0;
        for (p, st) in self.probs.iter().zip(&self.states) {
            if let Some(rho) = st {
                total += p * f(rho)?;
            }
        }
        Ok(total)
    }
}

/// Rank-one qubit projector pair onto `|ψ(θ,φ)⟩ = cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩`
/// and its orthogonal complement.
pub fn qubit_projector_pair(theta: f64, phi: f64) -> Measurement {
    let psi = [
        c((theta / 2.0).cos(), 0.0),
        Complex64::from_polar((theta / 2.0).sin(), phi),
    ];
    let mut p = CMat::zeros(2, 2);
    for i in 0..2 {
        for j in 0..2 {
            p[(i, j)] = psi[i] * psi[j].conj();
        }
    }
    let q = identity(2) - &p;
    Measurement::projective(vec![p, q]).expect("projector pair is complete by construction")
}

/// Apply a measurement on subsystem A: `p_i = Tr[(M_i⊗I)ρ(M_i†⊗I)]`,
/// `ρ_i^B = Tr_A[(M_i⊗I)ρ(M_i†⊗I)]/p_i`.
pub fn measure_a(s: &BipartiteState, m: &Measurement) -> Result<ConditionalEnsemble, Error> {
    if m.dim() != s.dim_a() {
        return Err(Error::DimensionMismatch {
            expected: s.dim_a(),
            got: m.dim(),
        });
    }
    let id_b = identity(s.dim_b());
    let mut probs = Vec::with_capacity(m.operators().len());
    let mut states = Vec::with_capacity(m.operators().len());
    for op in m.operators() {
        let k = tensor(op, &id_b);
        let post = &k * s.rho().matrix() * k.adjoint();
        let reduced = partial_trace_raw(&post, s.dim_a(), s.dim_b(), Subsystem::B);
        let p: f64 = (0..s.dim_b()).map(|i| reduced[(i, i)].re).sum();
        if p < PROB_FLOOR {
            probs.push(p.max(0.0));
            states.push(None);
        } else {
            probs.push(p);
            states.push(Some(DensityMatrix::new_unchecked(
                reduced.map(|z| z / c(p, 0.0)),
            )));
        }
    }
    Ok(ConditionalEnsemble { probs, states })
}

/// Discrete Fourier matrix `(U_F)_{ω j} = e^{2πi jω/N}/√N`.
pub fn fourier_matrix(dim: usize) -> CMat {
    let n = dim as f64;
    CMat::from_fn(dim, dim, |w, j| {
        Complex64::from_polar(1.0 / n.sqrt(), std::f64::consts::TAU * (j * w) as f64 / n)
    })
}

/// Projective measurement with outcome-ω projector `U_A U_F† |ω⟩⟨ω| U_F U_A†`.
///
/// Measuring this on the pure Schmidt state prepared through `U_A` gives Bob
/// a uniform ensemble of pure states whose dephased forms all coincide,
/// which makes the average coherence reach `S(ρ_B)` exactly.
pub fn fourier_measurement(dim: usize, u_a: &CMat) -> Result<Measurement, Error> {
    if u_a.nrows() != dim || u_a.ncols() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: u_a.nrows(),
        });
    }
    let defect = max_abs(&(u_a.adjoint() * u_a - identity(dim)));
    if defect > 1e-9 {
        return Err(Error::NotUnitary(defect));
    }
    let basis_change = u_a * fourier_matrix(dim).adjoint();
    let ops = (0..dim)
        .map(|w| {
            let col = basis_change.column(w);
            &col * col.adjoint()
        })
        .collect();
    Measurement::projective(ops)
}
