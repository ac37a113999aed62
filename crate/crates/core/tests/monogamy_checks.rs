mod common;

use approx::assert_abs_diff_eq;
use common::*;
use qcorr::families::{named_pure, NamedState};
use qcorr::monogamy::{
    channel_increase, channel_monotonicity_check, channel_trial, deficit, deficit_with, pure_maximality_check,
    Measure, Verdict,
};
use qcorr::optimize::OptimizerConfig;
use qcorr::qstate::{apply_local_channel, derive_seed, random_density, ComplexMatrix, KrausChannel};

const GDISCORD_WITNESS_TRIAL: u64 = 129;
const GDISCORD_WITNESS_SEED: u64 = 13483549420341488436;
const GDISCORD_MAX_INCREASE: f64 = 3.593_561_166_592_04e-3;

#[test]
fn discord_is_maximal_on_pure_states() {
    let check = pure_maximality_check(Measure::Discord, 500, 500, 41).unwrap();
    assert!(check.asserted);
    assert_eq!(check.pass, Some(true));
    assert!(check.max_pure >= 1.0 - 1e-5, "{}", check.max_pure);
    assert!(check.max_mixed < check.max_pure);
}

#[test]
fn gdiscord_maximality_is_only_reported() {
    let check = pure_maximality_check(Measure::GeometricDiscord, 50, 50, 41).unwrap();
    assert!(!check.asserted);
    assert_eq!(check.pass, None);
    assert_abs_diff_eq!(check.max_pure, 0.5, epsilon = 1e-9);
}

#[test]
fn discord_does_not_grow_under_unmeasured_channels() {
    let check = channel_monotonicity_check(Measure::Discord, 200, 37).unwrap();
    assert!(check.max_increase <= 1e-4, "{}", check.max_increase);
}

#[test]
fn gdiscord_grows_under_some_unmeasured_channel() {
    let check = channel_monotonicity_check(Measure::GeometricDiscord, 1000, 31).unwrap();
    assert!(check.max_increase > 1e-4);
    assert_eq!(check.witness.trial, GDISCORD_WITNESS_TRIAL);
    assert_eq!(check.witness.seed, GDISCORD_WITNESS_SEED);
    assert_eq!(check.witness.seed, derive_seed(31, GDISCORD_WITNESS_TRIAL));
    assert_abs_diff_eq!(check.max_increase, GDISCORD_MAX_INCREASE, epsilon = 1e-9);

    let replay = channel_trial(Measure::GeometricDiscord, GDISCORD_WITNESS_SEED).unwrap();
    assert_eq!(replay.after - replay.before, check.max_increase);

    let w = &check.witness;
    let after_state = apply_local_channel(&w.state, &w.channel, "B").unwrap();
    let before = cq_distance_brute_force(w.state.matrix(), 1);
    let after = cq_distance_brute_force(after_state.matrix(), 2);
    assert_abs_diff_eq!(before, w.before, epsilon = 1e-6);
    assert_abs_diff_eq!(after, w.after, epsilon = 1e-6);
    assert!(after - before > 1e-4);
}

#[test]
fn identity_channel_changes_nothing() {
    let identity = KrausChannel::new(vec![ComplexMatrix::identity(2, 2)]).unwrap();
    for i in 0..5 {
        let rho = random_density(&[2, 2], 3, derive_seed(43, i)).unwrap();
        for measure in [Measure::GeometricDiscord, Measure::Discord, Measure::SquaredConcurrence] {
            let (before, after) = channel_increase(measure, &rho, &identity).unwrap();
            assert_abs_diff_eq!(before, after, epsilon = 1e-12);
        }
    }
}

#[test]
fn other_heads_are_supported() {
    let cfg = OptimizerConfig::default();
    let rho = random_density(&[2, 2, 2], 2, 47).unwrap();
    for head in ["A", "B", "C"] {
        for measure in [Measure::GeometricDiscord, Measure::Discord] {
            let report = deficit_with(&rho, measure, Some(head), &cfg).unwrap();
            assert_eq!(report.head, head);
            assert!(report.deficit.is_finite());
        }
    }
    let ghz = named_pure(NamedState::Ghz).unwrap().density();
    let from_b = deficit_with(&ghz, Measure::SquaredConcurrence, Some("B"), &cfg).unwrap();
    assert_abs_diff_eq!(from_b.deficit, 1.0, epsilon = 1e-9);
    assert_eq!(from_b.verdict, Verdict::Satisfied);
    assert!(deficit_with(&ghz, Measure::Discord, Some("D"), &cfg).is_err());
}

#[test]
fn w_state_saturates_concurrence_monogamy() {
    let w = named_pure(NamedState::W).unwrap().density();
    let report = deficit(&w, Measure::SquaredConcurrence).unwrap();
    assert_abs_diff_eq!(report.q_a_bc, 8.0 / 9.0, epsilon = 1e-9);
    assert_abs_diff_eq!(report.deficit, 0.0, epsilon = 1e-9);
    assert_eq!(report.verdict, Verdict::Satisfied);
}
