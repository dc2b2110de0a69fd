//! Dense complex linear algebra for small Hermitian operators: construction,
//! tensor product, partial trace, spectral decomposition, entropies, dephasing.

use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

/// Dense square complex matrix, the universal carrier for operators and states.
pub type CMat = DMatrix<Complex64>;

/// Hermiticity / trace tolerance for density-matrix validation.
pub const HERM_TOL: f64 = 1e-10;
/// Eigenvalues in `[-EIG_CLAMP, 0)` are clamped to 0 before entropies;
/// anything more negative is an error (Jacobi round-off only).
pub const EIG_CLAMP: f64 = 1e-10;
/// Eigenvalues below this are treated as exact zeros of the spectrum.
pub const ZERO_EIG: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square: {0}x{1}")]
    NotSquare(usize, usize),
    #[error("not Hermitian (max |M - M†| = {0:.3e})")]
    NotHermitian(f64),
    #[error("trace is not 1 (got {0:.17})")]
    InvalidTrace(f64),
    #[error("not positive semidefinite (min eigenvalue {0:.3e})")]
    NotPositive(f64),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("bipartite dimensions {dim_a}x{dim_b} do not factor matrix of dim {dim}")]
    BadFactorization { dim_a: usize, dim_b: usize, dim: usize },
    #[error("matrix is not unitary (max |U†U - I| = {0:.3e})")]
    NotUnitary(f64),
    #[error("measurement is not complete (max |ΣM†M - I| = {0:.3e})")]
    IncompleteMeasurement(f64),
    #[error("operators are not orthogonal projectors (max defect {0:.3e})")]
    NotProjective(f64),
    #[error("Bell-diagonal parameters outside the physical tetrahedron (min eigenvalue {0:.3e})")]
    UnphysicalBellParams(f64),
    #[error("subsystem A has dimension {0}; optimization needs dim 2 or a configured sampling budget")]
    UnsupportedDimension(usize),
    #[error("state file: {0}")]
    StateFile(String),
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Max entry magnitude, used as the matrix norm throughout.
pub fn max_abs(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn hermiticity_defect(m: &CMat) -> f64 {
    max_abs(&(m - m.adjoint()))
}

/// Which half of a bipartite state to keep under the partial trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// A validated density matrix: Hermitian, unit trace, positive semidefinite.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: CMat,
}

impl DensityMatrix {
    pub fn new(mat: CMat) -> Result<Self, Error> {
        if !mat.is_square() {
            return Err(Error::NotSquare(mat.nrows(), mat.ncols()));
        }
        let herm = hermiticity_defect(&mat);
        if herm > HERM_TOL {
            return Err(Error::NotHermitian(herm));
        }
        let tr = trace(&mat);
        if (tr.re - 1.0).abs() > HERM_TOL || tr.im.abs() > HERM_TOL {
            return Err(Error::InvalidTrace(tr.re));
        }
        let spec = hermitian_eig(&mat)?;
        let min_eig = spec.eigenvalues[0];
        if min_eig < -EIG_CLAMP {
            return Err(Error::NotPositive(min_eig));
        }
        Ok(Self { mat })
    }

    /// Skips validation. For internal hot paths that construct states which
    /// are positive by construction (conditional states, partial traces).
    pub(crate) fn new_unchecked(mat: CMat) -> Self {
        Self { mat }
    }

    pub fn matrix(&self) -> &CMat {
        &self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn into_matrix(self) -> CMat {
        self.mat
    }

    /// Rank-one projector |ψ⟩⟨ψ| onto a (normalized) pure state vector.
    pub fn pure(psi: &[Complex64]) -> Result<Self, Error> {
        let n = psi.len();
        let norm2: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        let mut mat = CMat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                mat[(i, j)] = psi[i] * psi[j].conj() / norm2;
            }
        }
        Self::new(mat)
    }
}

/// Density matrix on `H_A ⊗ H_B` with declared local dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteState {
    rho: DensityMatrix,
    dim_a: usize,
    dim_b: usize,
}

impl BipartiteState {
    pub fn new(rho: DensityMatrix, dim_a: usize, dim_b: usize) -> Result<Self, Error> {
        if rho.dim() != dim_a * dim_b {
            return Err(Error::BadFactorization {
                dim_a,
                dim_b,
                dim: rho.dim(),
            });
        }
        Ok(Self { rho, dim_a, dim_b })
    }

    pub fn rho(&self) -> &DensityMatrix {
        &self.rho
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }
}

/// Spectral decomposition of a Hermitian matrix; eigenvalues ascending,
/// eigenvectors as matching columns.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: CMat,
}

pub fn trace(m: &CMat) -> Complex64 {
    (0..m.nrows()).map(|i| m[(i, i)]).sum()
}

pub fn identity(dim: usize) -> CMat {
    CMat::identity(dim, dim)
}

/// Kronecker product `a ⊗ b`.
pub fn tensor(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

/// Partial trace of a raw (not necessarily normalized) operator on A⊗B.
pub fn partial_trace_raw(m: &CMat, dim_a: usize, dim_b: usize, keep: Subsystem) -> CMat {
    debug_assert_eq!(m.nrows(), dim_a * dim_b);
    match keep {
        Subsystem::B => {
            let mut out = CMat::zeros(dim_b, dim_b);
            for a in 0..dim_a {
                for i in 0..dim_b {
                    for j in 0..dim_b {
                        out[(i, j)] += m[(a * dim_b + i, a * dim_b + j)];
                    }
                }
            }
            out
        }
        Subsystem::A => {
            let mut out = CMat::zeros(dim_a, dim_a);
            for b in 0..dim_b {
                for i in 0..dim_a {
                    for j in 0..dim_a {
                        out[(i, j)] += m[(i * dim_b + b, j * dim_b + b)];
                    }
                }
            }
            out
        }
    }
}

/// Reduced state of one subsystem.
pub fn partial_trace(s: &BipartiteState, keep: Subsystem) -> DensityMatrix {
    let m = partial_trace_raw(s.rho().matrix(), s.dim_a(), s.dim_b(), keep);
    DensityMatrix::new_unchecked(m)
}

/// Hermitian eigendecomposition with ascending eigenvalues.
pub fn hermitian_eig(m: &CMat) -> Result<Spectrum, Error> {
    if !m.is_square() {
        return Err(Error::NotSquare(m.nrows(), m.ncols()));
    }
    let herm = hermiticity_defect(m);
    if herm > HERM_TOL {
        return Err(Error::NotHermitian(herm));
    }
    // Symmetrize first so round-off in the input cannot leak into complex
    // eigenvalues.
    let sym = (m + m.adjoint()).scale(0.5);
    let eig = sym.symmetric_eigen();
    let n = m.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut eigenvectors = CMat::zeros(n, n);
    for (col, &i) in order.iter().enumerate() {
        eigenvectors.set_column(col, &eig.eigenvectors.column(i));
    }
    Ok(Spectrum {
        eigenvalues,
        eigenvectors,
    })
}

/// Eigenvalues of a density matrix, clamped against round-off negatives.
fn clamped_spectrum(rho: &DensityMatrix) -> Result<Vec<f64>, Error> {
    let spec = hermitian_eig(rho.matrix())?;
    let mut out = Vec::with_capacity(spec.eigenvalues.len());
    for lam in spec.eigenvalues {
        if lam < -EIG_CLAMP {
            return Err(Error::NotPositive(lam));
        }
        out.push(lam.max(0.0));
    }
    Ok(out)
}

fn entropy_of_eigs(eigs: &[f64]) -> f64 {
    eigs.iter()
        .filter(|&&l| l > ZERO_EIG)
        .map(|&l| -l * l.log2())
        .sum()
}

/// Von Neumann entropy `S(ρ) = −Tr ρ log₂ ρ`, in bits.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64, Error> {
    Ok(entropy_of_eigs(&clamped_spectrum(rho)?))
}

/// Quantum relative entropy `S(ρ‖σ) = Tr ρ log₂ ρ − Tr ρ log₂ σ`, in bits.
///
/// Returns `Ok(f64::INFINITY)` when the support of `ρ` is not contained in
/// the support of `σ` — distinct from the `Err` path, which is reserved for
/// invalid inputs.
pub fn relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64, Error> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            got: sigma.dim(),
        });
    }
    let rho_eigs = clamped_spectrum(rho)?;
    let tr_rho_log_rho: f64 = rho_eigs
        .iter()
        .filter(|&&l| l > ZERO_EIG)
        .map(|&l| l * l.log2())
        .sum();
    let sigma_spec = hermitian_eig(sigma.matrix())?;
    let mut tr_rho_log_sigma = 0.0;
    for (k, &mu) in sigma_spec.eigenvalues.iter().enumerate() {
        let v = sigma_spec.eigenvectors.column(k);
        // ⟨v|ρ|v⟩
        let overlap = (v.adjoint() * rho.matrix() * v)[(0, 0)].re;
        if mu < ZERO_EIG {
            if overlap > 1e-10 {
                return Ok(f64::INFINITY);
            }
        } else {
            tr_rho_log_sigma += overlap * mu.log2();
        }
    }
    Ok(tr_rho_log_rho - tr_rho_log_sigma)
}

/// Delete all off-diagonal entries (dephasing in the computational basis).
pub fn dephase(rho: &DensityMatrix) -> DensityMatrix {
    let n = rho.dim();
    let mut out = CMat::zeros(n, n);
    for i in 0..n {
        out[(i, i)] = c(rho.matrix()[(i, i)].re, 0.0);
    }
    DensityMatrix::new_unchecked(out)
}

/// Pauli matrices σ_x, σ_y, σ_z.
pub fn pauli() -> [CMat; 3] {
    let sx = CMat::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)]);
    let sy = CMat::from_row_slice(2, 2, &[c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)]);
    let sz = CMat::from_row_slice(2, 2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)]);
    [sx, sy, sz]
}
