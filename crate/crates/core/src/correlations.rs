//! Classical correlation `J(B|{Ω_i^A})` by numerical minimization of the
//! average conditional entropy over Alice's rank-one projective measurements,
//! quantum mutual information, quantum discord, and the Bell-diagonal
//! closed forms.

use std::f64::consts::{PI, TAU};

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::measurement::{measure_a, qubit_projector_pair, Measurement};
use crate::qmatrix::{
    c, identity, partial_trace, pauli, tensor, von_neumann_entropy, BipartiteState,
    CMat, DensityMatrix, Error, Subsystem,
};

/// Grid resolution of the coarse (θ, φ) scan.
pub const GRID_POINTS: usize = 24;
/// Nelder-Mead stops once the simplex diameter falls below this.
pub const SIMPLEX_TOL: f64 = 1e-7;
const NM_MAX_ITERS: usize = 2000;

/// Result of the classical-correlation optimization.
#[derive(Debug, Clone)]
pub struct CorrelationReport {
    pub mutual_information: f64,
    pub classical_correlation: f64,
    pub discord: f64,
    pub optimal_measurement: Measurement,
    /// (theta, phi, objective value) evaluations accepted by the refiner.
    pub optimizer_trace: Vec<(f64, f64, f64)>,
}

/// Bloch correlation coefficients of a Bell-diagonal two-qubit state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BellDiagonalParams {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
}

impl BellDiagonalParams {
    pub fn new(c1: f64, c2: f64, c3: f64) -> Result<Self, Error> {
        let p = Self { c1, c2, c3 };
        let min = p
            .eigenvalues()
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        if min < -1e-12 {
            return Err(Error::UnphysicalBellParams(min));
        }
        Ok(p)
    }

    /// The four eigenvalues `(1 ± c1 ± c2 ± c3)/4` (even number of minus signs
    /// excluded by the Bell-basis structure).
    pub fn eigenvalues(&self) -> [f64; 4] {
        let Self { c1, c2, c3 } = *self;
        [
            (1.0 - c1 - c2 - c3) / 4.0,
            (1.0 - c1 + c2 + c3) / 4.0,
            (1.0 + c1 - c2 + c3) / 4.0,
            (1.0 + c1 + c2 - c3) / 4.0,
        ]
    }

    fn c_max(&self) -> f64 {
        self.c1.abs().max(self.c2.abs()).max(self.c3.abs())
    }
}

/// Quantum mutual information `I = S(ρ_A) + S(ρ_B) − S(ρ_AB)`.
pub fn mutual_information(s: &BipartiteState) -> Result<f64, Error> {
    let sa = von_neumann_entropy(&partial_trace(s, Subsystem::A))?;
    let sb = von_neumann_entropy(&partial_trace(s, Subsystem::B))?;
    let sab = von_neumann_entropy(s.rho())?;
    Ok(sa + sb - sab)
}

/// `S(B|{Ω_i^A}) = Σ_i q_i S(ϱ_i^B)` over the non-negligible outcomes.
pub fn conditional_entropy_after(s: &BipartiteState, m: &Measurement) -> Result<f64, Error> {
    measure_a(s, m)?.average(von_neumann_entropy)
}

struct Objective<'a> {
    state: &'a BipartiteState,
}

impl Objective<'_> {
    fn eval(&self, theta: f64, phi: f64) -> f64 {
        conditional_entropy_after(self.state, &qubit_projector_pair(theta, phi))
            .expect("qubit measurement on validated state")
    }
}

/// Minimize `f(θ, φ)` by a coarse grid scan over `[0,π]×[0,2π)` plus the
/// given seed points, followed by Nelder-Mead refinement of the best three
/// candidates. Deterministic: grid points are ranked by value with ties
/// broken by evaluation order.
pub(crate) fn minimize_over_angles<F>(
    f: F,
    seeds: &[(f64, f64)],
    trace: &mut Vec<(f64, f64, f64)>,
) -> ((f64, f64), f64)
where
    F: Fn(f64, f64) -> f64,
{
    let mut candidates: Vec<(f64, f64, f64)> = Vec::new();
    for i in 0..GRID_POINTS {
        let theta = PI * i as f64 / (GRID_POINTS - 1) as f64;
        for j in 0..GRID_POINTS {
            let phi = TAU * j as f64 / GRID_POINTS as f64;
            candidates.push((theta, phi, f(theta, phi)));
        }
    }
    for &(theta, phi) in seeds {
        candidates.push((theta, phi, f(theta, phi)));
    }
    candidates.sort_by(|a, b| a.2.total_cmp(&b.2));

    let mut simplex: Vec<([f64; 2], f64)> = candidates
        .iter()
        .take(3)
        .map(|&(t, p, v)| ([t, p], v))
        .collect();
    // Guard against a degenerate (collinear) starting simplex.
    let area = {
        let (a, b, c0) = (simplex[0].0, simplex[1].0, simplex[2].0);
        ((b[0] - a[0]) * (c0[1] - a[1]) - (b[1] - a[1]) * (c0[0] - a[0])).abs()
    };
    if area < 1e-6 {
        let h = PI / (2 * GRID_POINTS) as f64;
        let base = simplex[0].0;
        simplex[1] = ([base[0] + h, base[1]], f(base[0] + h, base[1]));
        simplex[2] = ([base[0], base[1] + h], f(base[0], base[1] + h));
    }

    let (best, value) = nelder_mead(&f, simplex, trace);
    ((best[0], best[1]), value)
}

fn diameter(simplex: &[([f64; 2], f64)]) -> f64 {
    let mut d = 0.0f64;
    for i in 0..simplex.len() {
        for j in (i + 1)..simplex.len() {
            let dx = simplex[i].0[0] - simplex[j].0[0];
            let dy = simplex[i].0[1] - simplex[j].0[1];
            d = d.max(dx.hypot(dy));
        }
    }
    d
}

/// Standard Nelder-Mead in two dimensions (reflection 1, expansion 2,
/// contraction 1/2, shrink 1/2), run until the simplex diameter drops
/// below `SIMPLEX_TOL`.
fn nelder_mead<F>(
    f: &F,
    mut simplex: Vec<([f64; 2], f64)>,
    trace: &mut Vec<(f64, f64, f64)>,
) -> ([f64; 2], f64)
where
    F: Fn(f64, f64) -> f64,
{
    let eval = |x: [f64; 2]| f(x[0], x[1]);
    for _ in 0..NM_MAX_ITERS {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        if diameter(&simplex) < SIMPLEX_TOL {
            break;
        }
        let best = simplex[0];
        let worst = simplex[2];
        let centroid = [
            (simplex[0].0[0] + simplex[1].0[0]) / 2.0,
            (simplex[0].0[1] + simplex[1].0[1]) / 2.0,
        ];
        let reflect = [
            centroid[0] + (centroid[0] - worst.0[0]),
            centroid[1] + (centroid[1] - worst.0[1]),
        ];
        let fr = eval(reflect);
        if fr < best.1 {
            let expand = [
                centroid[0] + 2.0 * (centroid[0] - worst.0[0]),
                centroid[1] + 2.0 * (centroid[1] - worst.0[1]),
            ];
            let fe = eval(expand);
            simplex[2] = if fe < fr { (expand, fe) } else { (reflect, fr) };
        } else if fr < simplex[1].1 {
            simplex[2] = (reflect, fr);
        } else {
            let contract = if fr < worst.1 {
                [
                    centroid[0] + 0.5 * (reflect[0] - centroid[0]),
                    centroid[1] + 0.5 * (reflect[1] - centroid[1]),
                ]
            } else {
                [
                    centroid[0] + 0.5 * (worst.0[0] - centroid[0]),
                    centroid[1] + 0.5 * (worst.0[1] - centroid[1]),
                ]
            };
            let fc = eval(contract);
            if fc < worst.1.min(fr) {
                simplex[2] = (contract, fc);
            } else {
                // shrink toward the best vertex
                for k in 1..3 {
                    let x = [
                        best.0[0] + 0.5 * (simplex[k].0[0] - best.0[0]),
                        best.0[1] + 0.5 * (simplex[k].0[1] - best.0[1]),
                    ];
                    simplex[k] = (x, eval(x));
                }
            }
        }
        let cur = simplex.iter().min_by(|a, b| a.1.total_cmp(&b.1)).unwrap();
        trace.push((cur.0[0], cur.0[1], cur.1));
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    (simplex[0].0, simplex[0].1)
}

/// Classical correlation `J = S(ρ_B) − min_Ω Σ q_i S(ϱ_i^B)`, minimized over
/// rank-one projective measurements on A. Caller-provided seed measurements
/// are always evaluated, so `J ≥ S(ρ_B) − S(B|seed)` holds by construction.
pub fn classical_correlation(
    s: &BipartiteState,
    seeds: &[Measurement],
) -> Result<CorrelationReport, Error> {
    if s.dim_a() != 2 {
        return Err(Error::UnsupportedDimension(s.dim_a()));
    }
    let s_b = von_neumann_entropy(&partial_trace(s, Subsystem::B))?;
    let obj = Objective { state: s };

    let mut seed_angles: Vec<(f64, f64)> = Vec::new();
    let mut best_seed: Option<(f64, Measurement)> = None;
    for m in seeds {
        if let Some(angles) = m.bloch_angles() {
            seed_angles.push(angles);
        }
        // POVM or multi-outcome seeds are still scored directly.
        let v = conditional_entropy_after(s, m)?;
        if best_seed.as_ref().map_or(true, |(bv, _)| v < *bv) {
            best_seed = Some((v, m.clone()));
        }
    }

    let mut trace = Vec::new();
    let ((theta, phi), min_ent) =
        minimize_over_angles(|t, p| obj.eval(t, p), &seed_angles, &mut trace);

    let (min_ent, optimal) = match best_seed {
        Some((v, m)) if v < min_ent => (v, m),
        _ => (min_ent, qubit_projector_pair(theta, phi)),
    };

    let mi = mutual_information(s)?;
    let j = (s_b - min_ent).max(0.0);
    Ok(CorrelationReport {
        mutual_information: mi,
        classical_correlation: j,
        discord: mi - j,
        optimal_measurement: optimal,
        optimizer_trace: trace,
    })
}

/// Heuristic lower bound on `J` for `dim_a > 2`: sample `budget` Haar-random
/// rank-one projective bases and keep the best.
pub fn classical_correlation_sampled(
    s: &BipartiteState,
    seeds: &[Measurement],
    budget: usize,
    rng_seed: u64,
) -> Result<CorrelationReport, Error> {
    let s_b = von_neumann_entropy(&partial_trace(s, Subsystem::B))?;
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut best: Option<(f64, Measurement)> = None;
    let consider = |v: f64, m: Measurement, best: &mut Option<(f64, Measurement)>| {
        if best.as_ref().map_or(true, |(bv, _)| v < *bv) {
            *best = Some((v, m));
        }
    };
    for m in seeds {
        consider(conditional_entropy_after(s, m)?, m.clone(), &mut best);
    }
    for _ in 0..budget {
        let u = haar_unitary(s.dim_a(), &mut rng);
        let ops = (0..s.dim_a())
            .map(|k| {
                let col = u.column(k);
                &col * col.adjoint()
            })
            .collect();
        let m = Measurement::projective(ops)?;
        consider(conditional_entropy_after(s, &m)?, m, &mut best);
    }
    let (min_ent, optimal) = best.expect("budget or seeds nonempty");
    let mi = mutual_information(s)?;
    let j = (s_b - min_ent).max(0.0);
    Ok(CorrelationReport {
        mutual_information: mi,
        classical_correlation: j,
        discord: mi - j,
        optimal_measurement: optimal,
        optimizer_trace: Vec::new(),
    })
}

/// Haar-random unitary via QR of a complex Ginibre matrix.
pub fn haar_unitary<R: Rng>(dim: usize, rng: &mut R) -> CMat {
    let g = CMat::from_fn(dim, dim, |_, _| {
        c(gauss(rng), gauss(rng))
    });
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    // fix the phase convention so the distribution is Haar
    for k in 0..dim {
        let d = r[(k, k)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { c(1., 0.) };
        for i in 0..dim {
            q[(i, k)] *= phase.conj();
        }
    }
    q
}

fn gauss<R: Rng>(rng: &mut R) -> f64 {
    // Box-Muller
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen::<f64>();
    (-2.0 * u1.ln()).sqrt() * (TAU * u2).cos()
}

/// Quantum discord `D_A = I − J`.
pub fn quantum_discord(s: &BipartiteState) -> Result<f64, Error> {
    let report = classical_correlation(s, &[])?;
    Ok(report.discord)
}

/// The Bell-diagonal state `(I⊗I + Σ c_j σ_j⊗σ_j)/4`.
pub fn bell_diagonal_state(p: BellDiagonalParams) -> Result<BipartiteState, Error> {
    let min = p.eigenvalues().into_iter().fold(f64::INFINITY, f64::min);
    if min < -1e-12 {
        return Err(Error::UnphysicalBellParams(min));
    }
    let [sx, sy, sz] = pauli();
    let mut m = tensor(&identity(2), &identity(2));
    m += tensor(&sx, &sx).map(|z| z * c(p.c1, 0.0));
    m += tensor(&sy, &sy).map(|z| z * c(p.c2, 0.0));
    m += tensor(&sz, &sz).map(|z| z * c(p.c3, 0.0));
    let rho = DensityMatrix::new(m.scale(0.25))?;
    BipartiteState::new(rho, 2, 2)
}

fn xlog2x(x: f64) -> f64 {
    if x > 0.0 {
        x * x.log2()
    } else {
        0.0
    }
}

/// Closed-form classical correlation `Σ± ((1±c)/2) log₂(1±c)`,
/// `c = max{|c1|,|c2|,|c3|}`.
pub fn bell_diagonal_classical_correlation(p: BellDiagonalParams) -> Result<f64, Error> {
    let p = BellDiagonalParams::new(p.c1, p.c2, p.c3)?;
    let cm = p.c_max();
    Ok(((1.0 + cm) / 2.0) * (1.0 + cm).log2() + ((1.0 - cm) / 2.0) * (1.0 - cm).log2())
}

/// Closed-form quantum discord of the Bell-diagonal state.
pub fn bell_diagonal_discord(p: BellDiagonalParams) -> Result<f64, Error> {
    let p = BellDiagonalParams::new(p.c1, p.c2, p.c3)?;
    // Σ λ log₂(4λ) over the four Bell eigenvalues, minus J.
    let quarter_sum: f64 = p.eigenvalues().iter().map(|&l| xlog2x(4.0 * l) / 4.0).sum();
    Ok(quarter_sum - bell_diagonal_classical_correlation(p)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::fixtures;
    use crate::qmatrix::{hermitian_eig, max_abs};

    #[test]
    fn mutual_information_of_product_state_is_zero() {
        let s = fixtures::product_state_example();
        assert!(mutual_information(&s).unwrap().abs() < 1e-9);
    }

    #[test]
    fn mutual_information_of_cc_state_is_one() {
        assert!((mutual_information(&fixtures::example1()).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn mutual_information_of_bell_state_is_two() {
        let s = bell_diagonal_state(BellDiagonalParams::new(1.0, -1.0, 1.0).unwrap()).unwrap();
        assert!((mutual_information(&s).unwrap() - 2.0).abs() < 1e-9);
    }

    #[test]
    fn conditional_entropy_cc_state() {
        let s = fixtures::example1();
        let comp = qubit_projector_pair(0.0, 0.0);
        let pm = qubit_projector_pair(PI / 2.0, 0.0);
        assert!(conditional_entropy_after(&s, &comp).unwrap().abs() < 1e-12);
        assert!((conditional_entropy_after(&s, &pm).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn conditional_entropy_qc_state_computational() {
        // oracle: (3/4) h(1/3) = 0.6887218755408672
        let s = fixtures::example3();
        let v = conditional_entropy_after(&s, &qubit_projector_pair(0.0, 0.0)).unwrap();
        assert!((v - 0.6887218755408672).abs() < 1e-12);
    }

    #[test]
    fn classical_correlation_of_product_state_is_zero() {
        let report = classical_correlation(&fixtures::product_state_example(), &[]).unwrap();
        assert!(report.classical_correlation.abs() < 1e-9);
        assert!(report.discord.abs() < 1e-6);
    }

    #[test]
    fn classical_correlation_qc_state() {
        // oracle: 1 + Σ± ((2±√2)/4) log₂((2±√2)/4) = 0.39912396330714384
        let report = classical_correlation(&fixtures::example3(), &[]).unwrap();
        assert!((report.classical_correlation - 0.39912396330714384).abs() < 1e-6);
    }

    #[test]
    fn classical_correlation_bell_diagonal_vs_closed_form() {
        let p = BellDiagonalParams::new(0.45, 0.33, 0.22).unwrap();
        let s = bell_diagonal_state(p).unwrap();
        let report = classical_correlation(&s, &[]).unwrap();
        let closed = bell_diagonal_classical_correlation(p).unwrap();
        // oracle value of the closed form
        assert!((closed - 0.15145182170538415).abs() < 1e-12);
        assert!((report.classical_correlation - closed).abs() < 1e-4);
        let d_closed = bell_diagonal_discord(p).unwrap();
        assert!((d_closed - 0.2780126538988027).abs() < 1e-12);
        assert!((report.discord - d_closed).abs() < 1e-4);
    }

    #[test]
    fn discord_of_cq_state_is_zero() {
        assert!(quantum_discord(&fixtures::example2()).unwrap().abs() < 1e-6);
    }

    #[test]
    fn bell_diagonal_state_limits() {
        let flat = bell_diagonal_state(BellDiagonalParams::new(0., 0., 0.).unwrap()).unwrap();
        assert!(max_abs(&(flat.rho().matrix() - identity(4).scale(0.25))) < 1e-15);
        let bell = bell_diagonal_state(BellDiagonalParams::new(1., -1., 1.).unwrap()).unwrap();
        assert!(von_neumann_entropy(bell.rho()).unwrap() < 1e-9);
    }

    #[test]
    fn bell_diagonal_eigenvalues() {
        // oracle: (1±c1±c2±c3)/4 sign patterns → {0, 0.275, 0.335, 0.39}
        let p = BellDiagonalParams::new(0.45, 0.33, 0.22).unwrap();
        let s = bell_diagonal_state(p).unwrap();
        let spec = hermitian_eig(s.rho().matrix()).unwrap();
        let mut expect = p.eigenvalues();
        expect.sort_by(f64::total_cmp);
        for (got, want) in spec.eigenvalues.iter().zip(expect) {
            assert!((got - want).abs() < 1e-12, "got {got}, want {want}");
        }
    }

    #[test]
    fn bell_diagonal_rejects_unphysical() {
        assert!(BellDiagonalParams::new(1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn bell_diagonal_closed_forms_at_origin() {
        let p = BellDiagonalParams::new(0., 0., 0.).unwrap();
        assert_eq!(bell_diagonal_classical_correlation(p).unwrap(), 0.0);
        assert!(bell_diagonal_discord(p).unwrap().abs() < 1e-12);
    }

    #[test]
    fn seeded_optimizer_never_below_seed() {
        let s = fixtures::example2();
        let seed = qubit_projector_pair(1.1, 2.3);
        let report = classical_correlation(&s, &[seed.clone()]).unwrap();
        let s_b = von_neumann_entropy(&partial_trace(&s, Subsystem::B)).unwrap();
        let j_seed = s_b - conditional_entropy_after(&s, &seed).unwrap();
        assert!(report.classical_correlation >= j_seed - 1e-9);
    }
}
