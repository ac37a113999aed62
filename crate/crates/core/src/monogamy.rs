//! Monogamy deficits and the checks built on them: the pure three-qubit sweep
//! for geometric discord, violation certificates from separable states,
//! symmetric-extension counting, pure-state maximality and channel
//! monotonicity searches.

use crate::families::{
    brun_state, sample_brun, sigma_extension, symmetric_extension, theorem1_extension, BrunParams, FamilyError,
    SeparableDecomposition,
};
use crate::measures::{
    concurrence_2q, discord_with, geometric_discord_with, MeasureError, MeasureResult,
};
use crate::optimize::{OptimizerConfig, OPTIMIZER_TOL};
use crate::qstate::{
    apply_local_channel, dephase, derive_seed, hs_norm_sq, partial_trace, random_density_with,
    random_haar_pure_with, rng_from_seed, ComplexMatrix, DensityMatrix, KrausChannel, PureState, QubitBasis,
    StateError,
};
use crate::families::{named_pure, NamedState};
use rand::Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

/// Base tolerance of a monogamy verdict before optimizer slack is added.
pub const DEFICIT_BASE_TOL: f64 = 1e-6;
/// A measure must exceed this multiple of its tolerance on the input for a
/// certificate or extension count to be meaningful.
pub const NONZERO_FACTOR: f64 = 10.0;
/// Theorem-3 sweep passes iff every deficit is at least this.
pub const THEOREM3_FLOOR: f64 = -1e-6;
/// Largest register on which discord is evaluated inside `extension_check`.
pub const DISCORD_EXTENSION_MAX_DIM: usize = 256;
/// Description of the Brun-parameter sampling measure, recorded in reports.
pub const BRUN_SAMPLING: &str = "p, a, f uniform on [0,1]; g uniform on the disk of radius sqrt(1-f^2)";

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MonogamyError {
    #[error("unsupported measure for this input: {0}")]
    UnsupportedMeasure(String),
    #[error("measure value {value:e} on the separable input does not exceed {threshold:e}")]
    MeasureVanishesOnInput { value: f64, threshold: f64 },
    #[error("proof chain violated (implementation bug): {0}")]
    ChainViolated(String),
    #[error("expected a tripartite state, found labels {0:?}")]
    NotTripartite(Vec<String>),
    #[error("register too large for this measure: dimension {dim} exceeds {limit}")]
    TooLarge { dim: usize, limit: usize },
    #[error(transparent)]
    Measure(#[from] MeasureError),
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    State(#[from] StateError),
}

pub type Result<T> = std::result::Result<T, MonogamyError>;

/// Bipartite correlation measures with the head party on the measured side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Measure {
    GeometricDiscord,
    Discord,
    SquaredConcurrence,
}

impl Measure {
    pub fn id(&self) -> &'static str {
        match self {
            Self::GeometricDiscord => "gdiscord",
            Self::Discord => "discord",
            Self::SquaredConcurrence => "concurrence2",
        }
    }

    pub fn uses_optimizer(&self) -> bool {
        !matches!(self, Self::SquaredConcurrence)
    }

    /// Deficit tolerance: base plus twice the optimizer slack when one is used.
    pub fn tolerance(&self) -> f64 {
        if self.uses_optimizer() {
            DEFICIT_BASE_TOL + 2.0 * OPTIMIZER_TOL
        } else {
            DEFICIT_BASE_TOL
        }
    }

    /// `Q^{head | rest}` with `rest` all other subsystems of `rho`.
    pub fn evaluate(&self, rho: &DensityMatrix, head: &str, cfg: &OptimizerConfig) -> Result<MeasureResult> {
        match self {
            Self::GeometricDiscord => Ok(geometric_discord_with(rho, head, cfg)?),
            Self::Discord => {
                let rest: Vec<&str> = rho.labels().iter().map(String::as_str).filter(|l| *l != head).collect();
                Ok(discord_with(rho, head, &rest, cfg)?)
            }
            Self::SquaredConcurrence => {
                let value = if rho.dims() == [2, 2] {
                    let c = concurrence_2q(rho)?;
                    c * c
                } else if rho.subsystem_dim(head)? == 2 && rho.purity() > 1.0 - 1e-9 {
                    // pure state: 4 det rho_head
                    let m = partial_trace(rho, &[head])?.into_matrix();
                    (4.0 * (m[(0, 0)].re * m[(1, 1)].re - m[(0, 1)].norm_sqr())).clamp(0.0, 1.0)
                } else {
                    return Err(MonogamyError::UnsupportedMeasure(format!(
                        "squared concurrence needs two qubits or a pure state with a qubit head (dims {:?})",
                        rho.dims()
                    )));
                };
                Ok(MeasureResult::exact(value))
            }
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Measure {
    type Err = MonogamyError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "gdiscord" | "geometric_discord" => Ok(Self::GeometricDiscord),
            "discord" => Ok(Self::Discord),
            "concurrence2" | "squared_concurrence" | "tangle" => Ok(Self::SquaredConcurrence),
            _ => Err(MonogamyError::UnsupportedMeasure(s.to_string())),
        }
    }
}

impl Serialize for Measure {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.id())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Satisfied,
    Violated,
    Inconclusive,
}

/// `Q^{A|BC} >= Q^{A|B} + Q^{A|C}` evaluated at a tolerance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonogamyReport {
    pub q_a_bc: f64,
    pub q_a_b: f64,
    pub q_a_c: f64,
    pub deficit: f64,
    pub measure_name: Measure,
    /// Label of the party on the measured side of every split.
    pub head: String,
    pub tolerance: f64,
    pub converged: bool,
    pub verdict: Verdict,
}

impl MonogamyReport {
    fn new(measure: Measure, head: &str, parts: [MeasureResult; 3]) -> Self {
        let [abc, ab, ac] = parts;
        let deficit = abc.value - ab.value - ac.value;
        let tolerance = measure.tolerance();
        let converged = parts.iter().all(|r| r.converged);
        Self {
            q_a_bc: abc.value,
            q_a_b: ab.value,
            q_a_c: ac.value,
            deficit,
            measure_name: measure,
            head: head.to_string(),
            tolerance,
            converged,
            verdict: verdict(deficit, tolerance, converged),
        }
    }

    /// Same values judged at another tolerance.
    pub fn with_tolerance(self, tolerance: f64) -> Self {
        Self { tolerance, verdict: verdict(self.deficit, tolerance, self.converged), ..self }
    }
}

fn verdict(deficit: f64, tolerance: f64, converged: bool) -> Verdict {
    if deficit < -tolerance {
        Verdict::Violated
    } else if converged {
        Verdict::Satisfied
    } else {
        Verdict::Inconclusive
    }
}

/// Monogamy deficit of a tripartite state with its first subsystem as head.
pub fn deficit(state: &DensityMatrix, measure: Measure) -> Result<MonogamyReport> {
    deficit_with(state, measure, None, &OptimizerConfig::default())
}

/// As [`deficit`], optionally choosing another head party.
pub fn deficit_with(
    state: &DensityMatrix,
    measure: Measure,
    head: Option<&str>,
    cfg: &OptimizerConfig,
) -> Result<MonogamyReport> {
    let labels = state.labels();
    if labels.len() != 3 {
        return Err(MonogamyError::NotTripartite(labels.to_vec()));
    }
    let head = head.unwrap_or(&labels[0]);
    state.position(head)?;
    let others: Vec<&str> = labels.iter().map(String::as_str).filter(|l| *l != head).collect();
    let full = measure.evaluate(state, head, cfg)?;
    let first = measure.evaluate(&partial_trace(state, &[head, others[0]])?, head, cfg)?;
    let second = measure.evaluate(&partial_trace(state, &[head, others[1]])?, head, cfg)?;
    Ok(MonogamyReport::new(measure, head, [full, first, second]))
}

/// Geometric-discord monogamy report for one parameter point.
pub fn theorem3_report(params: &BrunParams) -> Result<MonogamyReport> {
    deficit(&brun_state(params)?.density(), Measure::GeometricDiscord)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BrunSample {
    pub index: u64,
    pub seed: u64,
    pub params: BrunParams,
    pub report: MonogamyReport,
}

/// Geometric-discord reports for `samples` seeded parameter draws; sample
/// `i` uses `derive_seed(seed, i)`.
pub fn scan_brun(samples: u64, seed: u64) -> Result<Vec<BrunSample>> {
    (0..samples)
        .into_par_iter()
        .map(|index| {
            let sample_seed = derive_seed(seed, index);
            let params = sample_brun(sample_seed);
            let report = theorem3_report(&params)?;
            Ok(BrunSample { index, seed: sample_seed, params, report })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
    pub below: u64,
    pub above: u64,
}

impl Histogram {
    pub fn new(edges: Vec<f64>, values: impl IntoIterator<Item = f64>) -> Self {
        let mut counts = vec![0; edges.len() - 1];
        let (mut below, mut above) = (0, 0);
        for v in values {
            if v < edges[0] {
                below += 1;
            } else if v >= edges[edges.len() - 1] {
                above += 1;
            } else {
                let bin = edges.windows(2).position(|w| v >= w[0] && v < w[1]).unwrap();
                counts[bin] += 1;
            }
        }
        Self { edges, counts, below, above }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Theorem3Summary {
    pub samples: u64,
    pub seed: u64,
    pub sampling: &'static str,
    pub min_deficit: f64,
    pub argmin: BrunSample,
    pub violated_count: u64,
    pub inconclusive_count: u64,
    pub histogram: Histogram,
    pub floor: f64,
    pub pass: bool,
}

/// Samples parameter points and checks the geometric-discord deficit.
pub fn verify_theorem3(samples: u64, seed: u64) -> Result<Theorem3Summary> {
    let scan = scan_brun(samples.max(1), seed)?;
    Ok(summarize_theorem3(scan, seed))
}

pub fn summarize_theorem3(scan: Vec<BrunSample>, seed: u64) -> Theorem3Summary {
    let argmin = scan
        .iter()
        .min_by(|a, b| a.report.deficit.total_cmp(&b.report.deficit).then(a.index.cmp(&b.index)))
        .expect("at least one sample")
        .clone();
    let edges: Vec<f64> = (0..=12).map(|k| -0.05 + 0.05 * k as f64).collect();
    let histogram = Histogram::new(edges, scan.iter().map(|s| s.report.deficit));
    let count = |v: Verdict| scan.iter().filter(|s| s.report.verdict == v).count() as u64;
    let min_deficit = argmin.report.deficit;
    Theorem3Summary {
        samples: scan.len() as u64,
        seed,
        sampling: BRUN_SAMPLING,
        min_deficit,
        violated_count: count(Verdict::Violated),
        inconclusive_count: count(Verdict::Inconclusive),
        argmin,
        histogram,
        floor: THEOREM3_FLOOR,
        pass: min_deficit >= THEOREM3_FLOOR,
    }
}

/// `c = 1 + [4a^2(1 - a^2) - 1] gamma^2`.
pub fn c_coefficient(params: &BrunParams) -> f64 {
    let a2 = params.a * params.a;
    1.0 + (4.0 * a2 * (1.0 - a2) - 1.0) * params.gamma * params.gamma
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProofBound {
    /// `2(1-p)p`, the geometric discord of the full pure state.
    pub lhs: f64,
    /// `|rho_AB - sigma_AB|^2 + |rho_AC - sigma_AC|^2` for the
    /// computational-basis dephasing `sigma` of the state.
    pub rhs_numeric: f64,
    /// `2c(1-p)p`.
    pub rhs_closed: f64,
    pub c: f64,
}

/// Both sides of the bound used to prove pure-state monogamy.
pub fn proof_bound_rhs(params: &BrunParams) -> Result<ProofBound> {
    let rho = brun_state(params)?.density();
    let sigma = dephase(&rho, &QubitBasis::COMPUTATIONAL, "A")?;
    let mut rhs_numeric = 0.0;
    for pair in [["A", "B"], ["A", "C"]] {
        let r = partial_trace(&rho, &pair)?;
        let s = partial_trace(&sigma, &pair)?;
        rhs_numeric += hs_norm_sq(r.matrix(), s.matrix())?;
    }
    let p = params.p;
    let c = c_coefficient(params);
    Ok(ProofBound { lhs: 2.0 * (1.0 - p) * p, rhs_numeric, rhs_closed: 2.0 * c * (1.0 - p) * p, c })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainCheck {
    /// `Q^{A|B}(sigma_AB)`.
    pub q_sigma_ab: f64,
    /// `Q^{A|BC}(rho_ABC)`.
    pub q_rho_abc: f64,
    /// Largest entrywise difference between the AB marginals of `rho` and `sigma`.
    pub marginal_residual: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ViolationCertificate {
    pub decomposition: SeparableDecomposition,
    pub state: DensityMatrix,
    /// `Q^{A|C}` of the separable input.
    pub q_separable: f64,
    pub report: MonogamyReport,
    pub chain: ChainCheck,
}

fn max_entry_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    a.iter().zip(b.iter()).fold(0.0, |m, (x, y)| m.max((x - y).norm()))
}

fn require_nonzero(value: f64, measure: Measure) -> Result<()> {
    let threshold = NONZERO_FACTOR * measure.tolerance();
    if value > threshold {
        Ok(())
    } else {
        Err(MonogamyError::MeasureVanishesOnInput { value, threshold })
    }
}

/// Builds the classical-register extension of a separable state with
/// nonzero correlations and certifies that `measure` violates monogamy on it.
pub fn theorem1_certificate(dec: &SeparableDecomposition, measure: Measure) -> Result<ViolationCertificate> {
    let cfg = OptimizerConfig::default();
    let q_separable = measure.evaluate(&dec.state(["A", "C"]), "A", &cfg)?.value;
    require_nonzero(q_separable, measure)?;

    let rho = theorem1_extension(dec)?;
    let sigma = sigma_extension(dec)?;
    let rho_ab = partial_trace(&rho, &["A", "B"])?;
    let sigma_ab = partial_trace(&sigma, &["A", "B"])?;
    let marginal_residual = max_entry_diff(rho_ab.matrix(), sigma_ab.matrix());

    let report = deficit_with(&rho, measure, Some("A"), &cfg)?;
    let q_sigma_ab = measure.evaluate(&sigma_ab, "A", &cfg)?.value;
    let tol = measure.tolerance();
    let chain = ChainCheck {
        q_sigma_ab,
        q_rho_abc: report.q_a_bc,
        marginal_residual,
        holds: q_sigma_ab >= report.q_a_bc - tol && marginal_residual <= 1e-12,
    };
    if !chain.holds {
        return Err(MonogamyError::ChainViolated(format!(
            "Q(sigma_AB) = {q_sigma_ab}, Q(rho_ABC) = {}, marginal residual = {marginal_residual:e}",
            report.q_a_bc
        )));
    }
    if report.deficit >= -tol {
        return Err(MonogamyError::ChainViolated(format!(
            "deficit {} not below -{tol:e} although Q(rho_AC) = {q_separable}",
            report.deficit
        )));
    }
    Ok(ViolationCertificate { decomposition: dec.clone(), state: rho, q_separable, report, chain })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExtensionReport {
    pub n: usize,
    pub q_per_copy: f64,
    pub q_joint: f64,
    pub rhs: f64,
    /// Finiteness witness for the joint value, where one is recorded for the measure.
    pub bound: Option<f64>,
    pub violated: bool,
}

/// Joint-value bound recorded for a measure with a qubit head.
pub fn extension_bound(measure: Measure) -> Option<f64> {
    match measure {
        Measure::GeometricDiscord => Some(1.0),
        _ => None,
    }
}

/// Compares `Q^{A|B1..Bn}` of the symmetric extension against `n Q^{A|B}`
/// for `n = 1..=n_max`.
pub fn extension_check(dec: &SeparableDecomposition, measure: Measure, n_max: usize) -> Result<Vec<ExtensionReport>> {
    let cfg = OptimizerConfig::default();
    let q_per_copy = measure.evaluate(&dec.state(["A", "B"]), "A", &cfg)?.value;
    require_nonzero(q_per_copy, measure)?;
    let tol = measure.tolerance();
    let mut reports = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        if measure == Measure::Discord {
            let dim = dec.dim_first() * dec.dim_second().pow(n as u32);
            if dim > DISCORD_EXTENSION_MAX_DIM {
                return Err(MonogamyError::TooLarge { dim, limit: DISCORD_EXTENSION_MAX_DIM });
            }
        }
        let ext = symmetric_extension(dec, n)?;
        let q_joint = measure.evaluate(&ext, "A", &cfg)?.value;
        let rhs = n as f64 * q_per_copy;
        reports.push(ExtensionReport {
            n,
            q_per_copy,
            q_joint,
            rhs,
            bound: extension_bound(measure),
            violated: q_joint + tol < rhs,
        });
    }
    Ok(reports)
}

pub fn smallest_violating_n(reports: &[ExtensionReport]) -> Option<usize> {
    reports.iter().find(|r| r.violated).map(|r| r.n)
}

/// Whether a measure is known to be non-increasing under channels on the
/// unmeasured party, the premise of the pure-state maximality argument.
pub fn monotone_under_unmeasured_channels(measure: Measure) -> bool {
    !matches!(measure, Measure::GeometricDiscord)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PureMaximality {
    pub measure: Measure,
    pub max_pure: f64,
    pub max_mixed: f64,
    /// Index of the maximizing mixed sample (its seed is `derive_seed(seed, index)`).
    pub argmax_mixed: u64,
    /// `false` in demonstration mode, where values are only reported.
    pub asserted: bool,
    pub pass: Option<bool>,
}

/// Compares the largest value over two-qubit pure states (the Bell state plus
/// `pure_samples` Haar states) with the largest over `mixed_samples` random
/// mixed states.
pub fn pure_maximality_check(measure: Measure, mixed_samples: u64, pure_samples: u64, seed: u64) -> Result<PureMaximality> {
    let cfg = OptimizerConfig::default();
    let bell = named_pure(NamedState::Bell).expect("bell is pure").density();
    let pure_seed = derive_seed(seed, u64::MAX);
    let pure_values: Vec<f64> = (0..pure_samples)
        .into_par_iter()
        .map(|i| {
            let psi = random_haar_pure_with(&[2, 2], &mut rng_from_seed(derive_seed(pure_seed, i)))?;
            Ok(measure.evaluate(&psi.density(), "A", &cfg)?.value)
        })
        .collect::<Result<_>>()?;
    let mixed_values: Vec<f64> = (0..mixed_samples)
        .into_par_iter()
        .map(|i| {
            let rho = random_density_with(&[2, 2], 4, &mut rng_from_seed(derive_seed(seed, i)))?;
            Ok(measure.evaluate(&rho, "A", &cfg)?.value)
        })
        .collect::<Result<_>>()?;
    let max_pure = pure_values
        .iter()
        .copied()
        .fold(measure.evaluate(&bell, "A", &cfg)?.value, f64::max);
    let (argmax_mixed, max_mixed) = mixed_values
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |best, (i, v)| if v > best.1 { (i as u64, v) } else { best });
    let asserted = monotone_under_unmeasured_channels(measure);
    Ok(PureMaximality {
        measure,
        max_pure,
        max_mixed,
        argmax_mixed,
        asserted,
        pass: asserted.then_some(max_pure >= max_mixed - 1e-4),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChannelWitness {
    pub trial: u64,
    pub seed: u64,
    pub state: DensityMatrix,
    pub channel: KrausChannel,
    pub before: f64,
    pub after: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChannelMonotonicity {
    pub measure: Measure,
    pub trials: u64,
    pub max_increase: f64,
    pub witness: ChannelWitness,
}

/// One trial: a random two-qubit state and a random channel on `B`.
pub fn channel_trial(measure: Measure, seed: u64) -> Result<ChannelWitness> {
    let mut rng = rng_from_seed(seed);
    let state = random_density_with(&[2, 2], 4, &mut rng)?;
    let n_kraus = rng.random_range(1..=4);
    let channel = KrausChannel::random(2, 2, n_kraus, &mut rng);
    channel_increase(measure, &state, &channel).map(|(before, after)| ChannelWitness {
        trial: 0,
        seed,
        state,
        channel,
        before,
        after,
    })
}

/// `(Q(rho), Q(Lambda_B(rho)))`.
pub fn channel_increase(measure: Measure, state: &DensityMatrix, channel: &KrausChannel) -> Result<(f64, f64)> {
    let cfg = OptimizerConfig::default();
    let head = state.labels()[0].clone();
    let target = state.labels()[1].clone();
    let before = measure.evaluate(state, &head, &cfg)?.value;
    let after = measure.evaluate(&apply_local_channel(state, channel, &target)?, &head, &cfg)?.value;
    Ok((before, after))
}

/// Largest observed `Q(after) - Q(before)` over random states and channels on
/// the unmeasured side.
pub fn channel_monotonicity_check(measure: Measure, trials: u64, seed: u64) -> Result<ChannelMonotonicity> {
    let witnesses: Vec<ChannelWitness> = (0..trials.max(1))
        .into_par_iter()
        .map(|i| channel_trial(measure, derive_seed(seed, i)).map(|w| ChannelWitness { trial: i, ..w }))
        .collect::<Result<_>>()?;
    let witness = witnesses
        .into_iter()
        .reduce(|best, w| if w.after - w.before > best.after - best.before { w } else { best })
        .expect("at least one trial");
    Ok(ChannelMonotonicity { measure, trials: trials.max(1), max_increase: witness.after - witness.before, witness })
}

#[derive(Debug, Clone, PartialEq)]
pub struct PureViolationWitness {
    pub index: u64,
    pub seed: u64,
    pub state: PureState,
    pub report: MonogamyReport,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiscordPureSearch {
    pub samples_tried: u64,
    pub threshold: f64,
    pub min_deficit: f64,
    pub witness: Option<PureViolationWitness>,
}

/// Scans Haar-random pure three-qubit states (sample `i` seeded with
/// `derive_seed(seed, i)`) until the discord deficit drops below `threshold`.
pub fn search_discord_pure_violation(samples: u64, seed: u64, threshold: f64) -> Result<DiscordPureSearch> {
    let mut min_deficit = f64::INFINITY;
    for index in 0..samples {
        let sample_seed = derive_seed(seed, index);
        let state = random_haar_pure_with(&[2, 2, 2], &mut rng_from_seed(sample_seed))?;
        let report = deficit(&state.density(), Measure::Discord)?;
        min_deficit = min_deficit.min(report.deficit);
        if report.deficit < threshold {
            return Ok(DiscordPureSearch {
                samples_tried: index + 1,
                threshold,
                min_deficit,
                witness: Some(PureViolationWitness { index, seed: sample_seed, state, report }),
            });
        }
    }
    Ok(DiscordPureSearch { samples_tried: samples, threshold, min_deficit, witness: None })
}

/// `tau_{A|BC} - C^2_{AB} - C^2_{AC}` for a pure three-qubit state.
pub fn ckw_slack(psi: &PureState) -> Result<f64> {
    let report = deficit(&psi.density(), Measure::SquaredConcurrence)?;
    Ok(report.deficit)
}
