//! Property suites: spectral-decomposition contracts, ensemble mixture
//! consistency, coherence convexity and bounds, and determinism of the audit
//! under parallelism.

use proptest::prelude::*;

use cohbound::audit::{audit_theorems, random_mixed, random_pure, trial_rng, AuditConfig};
use cohbound::coherence::{rel_ent_coherence, total_coherence};
use cohbound::correlations::{
    classical_correlation, conditional_entropy_after, haar_unitary, mutual_information,
};
use cohbound::measurement::{measure_a, qubit_projector_pair};
use cohbound::qmatrix::{
    c, dephase, hermitian_eig, identity, max_abs, partial_trace, relative_entropy, tensor,
    von_neumann_entropy, BipartiteState, CMat, DensityMatrix, Subsystem,
};
use rand::Rng;

fn random_hermitian<R: Rng>(dim: usize, rng: &mut R) -> CMat {
    let g = CMat::from_fn(dim, dim, |_, _| {
        c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    });
    (&g + g.adjoint()).scale(0.5)
}

#[test]
fn spectrum_reconstruction_and_unitarity_1000_trials() {
    let mut rng = trial_rng(0xABCD, 0);
    for trial in 0..1000 {
        let dim = rng.gen_range(2..=8);
        let m = random_hermitian(dim, &mut rng);
        let spec = hermitian_eig(&m).unwrap();
        let diag = CMat::from_fn(dim, dim, |i, j| {
            if i == j {
                c(spec.eigenvalues[i], 0.0)
            } else {
                c(0., 0.)
            }
        });
        let recon = &spec.eigenvectors * diag * spec.eigenvectors.adjoint();
        assert!(
            max_abs(&(recon - &m)) <= 1e-9,
            "reconstruction failed at trial {trial} dim {dim}"
        );
        let unit = spec.eigenvectors.adjoint() * &spec.eigenvectors - identity(dim);
        assert!(max_abs(&unit) <= 1e-9, "unitarity failed at trial {trial}");
        for w in spec.eigenvalues.windows(2) {
            assert!(w[0] <= w[1], "eigenvalues not ascending at trial {trial}");
        }
    }
}

#[test]
fn tensor_partial_trace_adjunction() {
    let mut rng = trial_rng(0xBEEF, 0);
    for _ in 0..200 {
        let a = random_mixed(1, 2, &mut rng).rho().clone();
        let b = random_mixed(1, 2, &mut rng).rho().clone();
        let joint = DensityMatrix::new(tensor(a.matrix(), b.matrix())).unwrap();
        let s = BipartiteState::new(joint, 2, 2).unwrap();
        let back = partial_trace(&s, Subsystem::A);
        assert!(max_abs(&(back.matrix() - a.matrix())) <= 1e-12);
        // entropy additivity
        let s_joint = von_neumann_entropy(s.rho()).unwrap();
        let s_a = von_neumann_entropy(&a).unwrap();
        let s_b = von_neumann_entropy(&b).unwrap();
        assert!((s_joint - s_a - s_b).abs() <= 1e-9);
    }
}

#[test]
fn relative_entropy_to_dephased_equals_coherence() {
    let mut rng = trial_rng(0xCAFE, 0);
    for _ in 0..200 {
        let rho = random_mixed(1, 3, &mut rng).rho().clone();
        let star = dephase(&rho);
        let lhs = relative_entropy(&rho, &star).unwrap();
        let rhs = von_neumann_entropy(&star).unwrap() - von_neumann_entropy(&rho).unwrap();
        assert!((lhs - rhs).abs() <= 1e-9);
    }
}

#[test]
fn mixture_consistency_1000_trials() {
    let mut rng = trial_rng(0xD00D, 0);
    for trial in 0..1000 {
        let s = random_mixed(2, 2, &mut rng);
        let theta = rng.gen_range(0.0..std::f64::consts::PI);
        let phi = rng.gen_range(0.0..std::f64::consts::TAU);
        let e = measure_a(&s, &qubit_projector_pair(theta, phi)).unwrap();
        let total: f64 = e.probs.iter().sum();
        assert!((total - 1.0).abs() <= 1e-9, "probs sum {total} at {trial}");
        let mut mixture = CMat::zeros(2, 2);
        for (p, st) in e.probs.iter().zip(&e.states) {
            if let Some(rho) = st {
                mixture += rho.matrix().scale(*p);
            }
        }
        let rho_b = partial_trace(&s, Subsystem::B);
        assert!(
            max_abs(&(mixture - rho_b.matrix())) <= 1e-9,
            "mixture inconsistent at trial {trial}"
        );
    }
}

#[test]
fn pure_state_conditionals_are_pure() {
    let mut rng = trial_rng(0xFEED, 0);
    for _ in 0..200 {
        let s = random_pure(2, 2, &mut rng);
        let theta = rng.gen_range(0.0..std::f64::consts::PI);
        let phi = rng.gen_range(0.0..std::f64::consts::TAU);
        let e = measure_a(&s, &qubit_projector_pair(theta, phi)).unwrap();
        for (p, st) in e.probs.iter().zip(&e.states) {
            if *p > 1e-9 {
                let rho = st.as_ref().unwrap();
                assert!(von_neumann_entropy(rho).unwrap() <= 1e-7);
            }
        }
    }
}

#[test]
fn coherence_convexity_1000_trials() {
    let mut rng = trial_rng(0xF00D, 0);
    for _ in 0..1000 {
        let a = random_mixed(1, 2, &mut rng).rho().clone();
        let b = random_mixed(1, 2, &mut rng).rho().clone();
        let p: f64 = rng.gen_range(0.0..1.0);
        let mix = DensityMatrix::new(a.matrix().scale(p) + b.matrix().scale(1.0 - p)).unwrap();
        let lhs = rel_ent_coherence(&mix).unwrap();
        let rhs = p * rel_ent_coherence(&a).unwrap() + (1.0 - p) * rel_ent_coherence(&b).unwrap();
        assert!(lhs <= rhs + 1e-9, "convexity violated: {lhs} > {rhs}");
    }
}

#[test]
fn coherence_zero_iff_diagonal() {
    let mut rng = trial_rng(0x1CED, 0);
    for _ in 0..200 {
        // random diagonal state: zero coherence
        let mut probs: Vec<f64> = (0..3).map(|_| rng.gen_range(0.01..1.0)).collect();
        let total: f64 = probs.iter().sum();
        probs.iter_mut().for_each(|p| *p /= total);
        let diag = DensityMatrix::new(CMat::from_fn(3, 3, |i, j| {
            if i == j {
                c(probs[i], 0.0)
            } else {
                c(0., 0.)
            }
        }))
        .unwrap();
        assert!(rel_ent_coherence(&diag).unwrap() <= 1e-9);
        // generic off-diagonal state: nonzero coherence
        let rho = random_mixed(1, 3, &mut rng).rho().clone();
        let off = max_abs(&(rho.matrix() - dephase(&rho).matrix()));
        if off > 1e-3 {
            assert!(rel_ent_coherence(&rho).unwrap() > 1e-9);
        }
    }
}

#[test]
fn total_coherence_unitary_invariance() {
    let mut rng = trial_rng(0x5EED, 0);
    for _ in 0..200 {
        let rho = random_mixed(1, 3, &mut rng).rho().clone();
        let u = haar_unitary(3, &mut rng);
        let rotated = DensityMatrix::new(&u * rho.matrix() * u.adjoint()).unwrap();
        let ct0 = total_coherence(&rho).unwrap();
        let ct1 = total_coherence(&rotated).unwrap();
        assert!((ct0 - ct1).abs() <= 1e-9);
        assert!(ct1 >= rel_ent_coherence(&rotated).unwrap() - 1e-9);
    }
}

#[test]
fn corollary2_precondition_gives_discord_s_a() {
    // Pure entangled states satisfy S(ρ_B) − S(ρ_A) = S(ρ_AB) = 0, so the
    // discord must equal S(ρ_A).
    let mut rng = trial_rng(0xACE, 0);
    for _ in 0..20 {
        let s = random_pure(2, 2, &mut rng);
        let s_a = von_neumann_entropy(&partial_trace(&s, Subsystem::A)).unwrap();
        let s_b = von_neumann_entropy(&partial_trace(&s, Subsystem::B)).unwrap();
        let s_ab = von_neumann_entropy(s.rho()).unwrap();
        if (s_b - s_a - s_ab).abs() <= 1e-9 {
            let report = classical_correlation(&s, &[]).unwrap();
            assert!(
                (report.discord - s_a).abs() <= 1e-5,
                "discord {} vs S_A {}",
                report.discord,
                s_a
            );
        }
    }
}

#[test]
fn determinism_under_parallelism() {
    // Same seed must give bit-identical gaps regardless of thread schedule.
    let config = AuditConfig {
        n_states: 12,
        n_measurements: 2,
        ..Default::default()
    };
    let baseline = audit_theorems(&config).unwrap();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let serial = pool.install(|| audit_theorems(&config)).unwrap();
    assert_eq!(baseline.max_gap.to_bits(), serial.max_gap.to_bits());
    assert_eq!(baseline.violations.len(), serial.violations.len());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn prop_mutual_information_nonnegative(seed in 0u64..1_000_000) {
        let mut rng = trial_rng(seed, 0);
        let s = random_mixed(2, 2, &mut rng);
        prop_assert!(mutual_information(&s).unwrap() >= -1e-9);
    }

    #[test]
    fn prop_classical_correlation_at_least_seed(
        seed in 0u64..1_000_000,
        theta in 0.0..std::f64::consts::PI,
        phi in 0.0..std::f64::consts::TAU,
    ) {
        let mut rng = trial_rng(seed, 1);
        let s = random_mixed(2, 2, &mut rng);
        let m = qubit_projector_pair(theta, phi);
        let report = classical_correlation(&s, std::slice::from_ref(&m)).unwrap();
        let s_b = von_neumann_entropy(&partial_trace(&s, Subsystem::B)).unwrap();
        let j_seed = s_b - conditional_entropy_after(&s, &m).unwrap();
        prop_assert!(report.classical_correlation >= j_seed - 1e-9);
        prop_assert!(report.discord >= -1e-6);
    }

    #[test]
    fn prop_state_file_round_trip(seed in 0u64..1_000_000) {
        let mut rng = trial_rng(seed, 2);
        let s = random_mixed(2, 2, &mut rng);
        let file = cohbound::cli::StateFile::from_state(&s);
        let text = serde_json::to_string(&file).unwrap();
        let back: cohbound::cli::StateFile = serde_json::from_str(&text).unwrap();
        let restored = back.into_state().unwrap();
        prop_assert!(max_abs(&(restored.rho().matrix() - s.rho().matrix())) == 0.0);
    }
}
