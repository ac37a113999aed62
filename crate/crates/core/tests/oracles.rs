mod common;

use approx::assert_abs_diff_eq;
use common::*;
use qcorr::families::{brun_state, named_pure, sample_brun, separable_discordant, BrunParams, NamedState};
use qcorr::measures::{concurrence_2q, discord, geometric_discord, geometric_discord_pure, tangle_pure, vn_entropy};
use qcorr::qstate::{
    derive_seed, partial_trace, random_density, random_haar_pure, rng_from_seed, KrausChannel, random_unitary,
    apply_local_channel,
};

#[test]
fn concurrence_matches_wootters_oracle() {
    for i in 0..300 {
        let rho = random_density(&[2, 2], 1 + (i % 4) as usize, derive_seed(11, i)).unwrap();
        let lib = concurrence_2q(&rho).unwrap();
        let oracle = concurrence_oracle(rho.matrix());
        assert_abs_diff_eq!(lib, oracle, epsilon = 1e-8);
    }
    for i in 0..100 {
        let psi = random_haar_pure(&[2, 2], derive_seed(24, i)).unwrap();
        let a = psi.amplitudes();
        let pure = 2.0 * (a[0] * a[3] - a[1] * a[2]).norm();
        assert_abs_diff_eq!(concurrence_2q(&psi.density()).unwrap(), pure, epsilon = 1e-9);
    }
    let bell = named_pure(NamedState::Bell).unwrap().density();
    assert_abs_diff_eq!(concurrence_oracle(bell.matrix()), 1.0, epsilon = 1e-12);
    let w_ab = partial_trace(&named_pure(NamedState::W).unwrap().density(), &["A", "B"]).unwrap();
    assert_abs_diff_eq!(concurrence_oracle(w_ab.matrix()), 2.0 / 3.0, epsilon = 1e-12);
}

#[test]
fn discord_matches_grid_oracle() {
    for i in 0..12 {
        let rho = random_density(&[2, 2], 1 + (i % 4) as usize, derive_seed(12, i)).unwrap();
        let lib = discord(&rho, "A", &["B"]).unwrap().value;
        let oracle = discord_grid(rho.matrix());
        assert!(lib <= oracle + 1e-9, "optimizer above grid: {lib} vs {oracle}");
        assert_abs_diff_eq!(lib, oracle, epsilon = 1e-6);
    }
    let rho = separable_discordant().state(["A", "B"]);
    assert_abs_diff_eq!(discord(&rho, "A", &["B"]).unwrap().value, discord_grid(rho.matrix()), epsilon = 1e-6);
}

#[test]
fn discord_of_tripartite_split_matches_grid_oracle() {
    for i in 0..4 {
        let rho = random_density(&[2, 2, 2], 2, derive_seed(13, i)).unwrap();
        let lib = discord(&rho, "A", &["B", "C"]).unwrap().value;
        assert_abs_diff_eq!(lib, discord_grid(rho.matrix()), epsilon = 1e-6);
    }
}

#[test]
fn geometric_discord_matches_cq_brute_force() {
    for i in 0..6 {
        let rho = random_density(&[2, 2], 1 + (i % 4) as usize, derive_seed(14, i)).unwrap();
        let lib = geometric_discord(&rho, "A").unwrap().value;
        let oracle = cq_distance_brute_force(rho.matrix(), i);
        assert!(lib <= oracle + 1e-9, "{lib} vs {oracle}");
        assert_abs_diff_eq!(lib, oracle, epsilon = 1e-6);
    }
    let rho = separable_discordant().state(["A", "C"]);
    assert_abs_diff_eq!(cq_distance_brute_force(rho.matrix(), 0), 1.0 / 16.0, epsilon = 1e-8);
}

#[test]
fn geometric_discord_qutrit_side_matches_brute_force() {
    let rho = random_density(&[2, 3], 3, 99).unwrap();
    let lib = geometric_discord(&rho, "A").unwrap().value;
    assert_abs_diff_eq!(lib, cq_distance_brute_force(rho.matrix(), 5), epsilon = 1e-6);
}

#[test]
fn pure_formula_matches_schmidt_oracle() {
    for i in 0..40 {
        let psi = random_haar_pure(&[2, 2 + (i % 3) as usize], derive_seed(15, i)).unwrap();
        let p = schmidt_p(&psi);
        assert_abs_diff_eq!(geometric_discord_pure(&psi, "A").unwrap(), 2.0 * p * (1.0 - p), epsilon = 1e-12);
    }
}

#[test]
fn tangle_matches_determinant_oracle() {
    for i in 0..100 {
        let psi = random_haar_pure(&[2, 2, 2], derive_seed(16, i)).unwrap();
        let m = first_qubit_marginal(&psi.projector());
        let det = (m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)]).re;
        assert_abs_diff_eq!(tangle_pure(&psi, "A").unwrap(), 4.0 * det, epsilon = 1e-12);
    }
}

#[test]
fn brun_marginal_spectrum_is_p() {
    for i in 0..200 {
        let params = sample_brun(derive_seed(17, i));
        let psi = brun_state(&params).unwrap();
        let mut ev = hermitian_eigenvalues(&first_qubit_marginal(&psi.projector()));
        ev.sort_by(f64::total_cmp);
        let mut expected = [params.p, 1.0 - params.p];
        expected.sort_by(f64::total_cmp);
        assert_abs_diff_eq!(ev[0], expected[0], epsilon = 1e-12);
        assert_abs_diff_eq!(ev[1], expected[1], epsilon = 1e-12);
    }
}

#[test]
fn proof_bound_matches_amplitude_oracle() {
    for i in 0..200 {
        let params = sample_brun(derive_seed(18, i));
        let psi = brun_state(&params).unwrap();
        let bound = qcorr::monogamy::proof_bound_rhs(&params).unwrap();
        assert_abs_diff_eq!(bound.rhs_numeric, marginal_coherence_sq(&psi), epsilon = 1e-13);
    }
    let gamma_zero = BrunParams::with_gamma(0.25, 0.6, 0.0).unwrap();
    assert_abs_diff_eq!(marginal_coherence_sq(&brun_state(&gamma_zero).unwrap()), 2.0 * 0.25 * 0.75, epsilon = 1e-14);
}

#[test]
fn haar_mean_reduced_purity() {
    let n = 10_000;
    let mean: f64 = (0..n)
        .map(|i| {
            let psi = random_haar_pure(&[2, 2], derive_seed(19, i)).unwrap();
            let m = first_qubit_marginal(&psi.projector());
            (&m * &m).trace().re
        })
        .sum::<f64>()
        / n as f64;
    // (d_A + d_B) / (d_A d_B + 1) for Haar-random states
    assert_abs_diff_eq!(mean, 0.8, epsilon = 0.01);
}

#[test]
fn brun_p_is_uniform_on_average() {
    let n = 10_000;
    let mean = (0..n).map(|i| sample_brun(derive_seed(20, i)).p).sum::<f64>() / n as f64;
    assert_abs_diff_eq!(mean, 0.5, epsilon = 0.02);
}

#[test]
fn entropy_matches_oracle() {
    for i in 0..50 {
        let rho = random_density(&[2, 3], 1 + (i % 6) as usize, derive_seed(21, i)).unwrap();
        assert_abs_diff_eq!(vn_entropy(&rho), entropy(rho.matrix()), epsilon = 1e-10);
    }
}

#[test]
fn local_unitary_on_measured_side_keeps_concurrence() {
    let mut rng = rng_from_seed(22);
    for i in 0..50 {
        let rho = random_density(&[2, 2], 2, derive_seed(23, i)).unwrap();
        let u = KrausChannel::new(vec![random_unitary(2, &mut rng)]).unwrap();
        let rotated = apply_local_channel(&rho, &u, "A").unwrap();
        assert_abs_diff_eq!(concurrence_2q(&rotated).unwrap(), concurrence_2q(&rho).unwrap(), epsilon = 1e-9);
    }
}
