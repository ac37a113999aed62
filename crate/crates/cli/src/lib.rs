//! Batch front-end for the `qcorr` library.
//!
//! Exit codes: 0 on success or PASS, 1 on FAIL or an unexpected verdict,
//! 2 on usage and input errors.

pub mod statefile;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qcorr::measures::MeasureResult;
use qcorr::monogamy::{
    self, BrunSample, ChannelMonotonicity, DiscordPureSearch, ExtensionReport, Measure, MonogamyError,
    MonogamyReport, Theorem3Summary, Verdict, DEFICIT_BASE_TOL,
};
use qcorr::optimize::{OptimizerConfig, OPTIMIZER_TOL};
use qcorr::qstate::{EXACT_TOL, STRUCTURAL_TOL, TRACE_TOL};
use qcorr::report::{format_f64, to_json, write_atomic, OptimizerMeta, Report, Tolerances, TOOL_VERSION};
use serde::Serialize;
use statefile::{parse_state_file, Entry, Parsed, StateFile, StateFileError};
use std::ffi::OsString;
use std::path::{Path, PathBuf};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "qcorr", version, about = "Quantum-correlation measures and monogamy checks")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Output {
    /// Report file, written atomically.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Expect {
    Satisfied,
    Violated,
}

#[derive(Debug, Clone, Copy, Default, ValueEnum)]
enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse and validate a state file.
    Validate {
        file: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Evaluate one measure across the split `measured | everything else`.
    Measure {
        /// gdiscord, discord or concurrence2.
        #[arg(long)]
        kind: Measure,
        /// Label of the measured party.
        #[arg(long)]
        measured: String,
        file: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Monogamy deficit of a tripartite state.
    Deficit {
        /// gdiscord, discord or concurrence2.
        #[arg(long)]
        measure: Measure,
        /// Party on the measured side (default: first label).
        #[arg(long)]
        head: Option<String>,
        /// Override of the verdict tolerance.
        #[arg(long)]
        tolerance: Option<f64>,
        /// Exit 1 unless the verdict matches.
        #[arg(long, value_enum)]
        expect: Option<Expect>,
        file: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Randomized checks of monogamy claims.
    #[command(subcommand)]
    Verify(Verify),
    /// Explicit violation certificates.
    #[command(subcommand)]
    Certificate(Certificate),
    /// Symmetric-extension count for a separable decomposition.
    Extend {
        #[arg(long)]
        dec: PathBuf,
        #[arg(long)]
        measure: Measure,
        #[arg(long, default_value_t = 10)]
        n_max: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Seeded searches for counterexamples.
    #[command(subcommand)]
    Search(Search),
    /// Per-sample parameter scans.
    #[command(subcommand)]
    Scan(Scan),
}

#[derive(Debug, Subcommand)]
enum Verify {
    /// Geometric-discord monogamy over random pure three-qubit states.
    Theorem3 {
        #[arg(long, default_value_t = 10_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Debug, Subcommand)]
enum Certificate {
    /// Monogamy violation built from a discordant separable state.
    Theorem1 {
        #[arg(long)]
        dec: PathBuf,
        #[arg(long)]
        measure: Measure,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Debug, Subcommand)]
enum Search {
    /// Pure three-qubit states with a negative discord deficit.
    DiscordPureViolation {
        #[arg(long, default_value_t = 10_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = -1e-3, allow_hyphen_values = true)]
        threshold: f64,
        #[command(flatten)]
        output: Output,
    },
    /// Channels on the unmeasured qubit that increase geometric discord.
    GdiscordIncrease {
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Debug, Subcommand)]
enum Scan {
    /// Per-sample geometric-discord deficits over the Brun family.
    Brun {
        #[arg(long, default_value_t = 1000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
        #[arg(long)]
        out: PathBuf,
    },
}

enum Failure {
    Input(String),
    Compute(String),
}

impl From<StateFileError> for Failure {
    fn from(e: StateFileError) -> Self {
        Self::Input(e.to_string())
    }
}

impl From<MonogamyError> for Failure {
    fn from(e: MonogamyError) -> Self {
        Self::Compute(e.to_string())
    }
}

type Outcome = Result<i32, Failure>;

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Compute(msg)) => {
            eprintln!("error: {msg}");
            EXIT_FAIL
        }
    }
}

fn envelope<T: Serialize>(command: String, seed: Option<u64>, deficit: f64, payload: T) -> Report<T> {
    Report {
        tool_version: TOOL_VERSION.to_string(),
        command,
        seed,
        tolerances: Tolerances {
            structural: STRUCTURAL_TOL,
            trace: TRACE_TOL,
            exact: EXACT_TOL,
            optimizer: OPTIMIZER_TOL,
            deficit,
        },
        optimizer: OptimizerMeta::from(&OptimizerConfig::default()),
        payload,
    }
}

fn emit<T: Serialize>(out: &Output, report: &Report<T>) -> Result<(), Failure> {
    if let Some(path) = &out.out {
        write_file(path, to_json(report).expect("reports serialize").as_bytes())?;
    }
    Ok(())
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    write_atomic(path, bytes).map_err(|e| Failure::Compute(format!("cannot write {}: {e}", path.display())))
}

fn load(path: &Path) -> Result<Parsed, Failure> {
    Ok(parse_state_file(path)?)
}

fn load_density(path: &Path) -> Result<qcorr::qstate::DensityMatrix, Failure> {
    load(path)?
        .into_density()
        .ok_or_else(|| Failure::Input(format!("{}: expected a density or pure state file", path.display())))
}

fn load_decomposition(path: &Path) -> Result<qcorr::families::SeparableDecomposition, Failure> {
    load(path)?
        .into_decomposition()
        .ok_or_else(|| Failure::Input(format!("{}: expected a decomposition file", path.display())))
}

fn sci(x: f64) -> String {
    format!("{x:.6e}")
}

fn pass_fail(pass: bool) -> (&'static str, i32) {
    if pass {
        ("PASS", EXIT_OK)
    } else {
        ("FAIL", EXIT_FAIL)
    }
}

#[derive(Serialize)]
struct ValidatePayload {
    kind: statefile::Kind,
    dims: Vec<usize>,
    labels: Vec<String>,
    terms: Option<usize>,
    trace: f64,
    purity: f64,
    eigenvalues: Vec<f64>,
}

#[derive(Serialize)]
struct MeasurePayload {
    measure: Measure,
    measured: String,
    rest: Vec<String>,
    result: MeasureResult,
}

#[derive(Serialize)]
struct CertificatePayload {
    measure: Measure,
    decomposition: StateFile,
    state: StateFile,
    q_separable: f64,
    report: MonogamyReport,
    chain_check: monogamy::ChainCheck,
}

#[derive(Serialize)]
struct ExtendPayload {
    measure: Measure,
    n_max: usize,
    q_per_copy: f64,
    /// `ceil(bound / q_per_copy)` where a bound is recorded.
    n_upper_bound: Option<u64>,
    smallest_violating_n: Option<usize>,
    reports: Vec<ExtensionReport>,
}

#[derive(Serialize)]
struct PureWitnessPayload {
    index: u64,
    seed: u64,
    state: StateFile,
    report: MonogamyReport,
}

#[derive(Serialize)]
struct DiscordSearchPayload {
    samples: u64,
    threshold: f64,
    samples_tried: u64,
    min_deficit: f64,
    witness: Option<PureWitnessPayload>,
}

#[derive(Serialize)]
struct ChannelWitnessPayload {
    trial: u64,
    seed: u64,
    state: StateFile,
    kraus: Vec<Vec<Vec<Entry>>>,
    before: f64,
    after: f64,
}

#[derive(Serialize)]
struct ChannelPayload {
    measure: Measure,
    trials: u64,
    max_increase: f64,
    witness_threshold: f64,
    witness: ChannelWitnessPayload,
}

fn dispatch(command: Command) -> Outcome {
    match command {
        Command::Validate { file, output } => validate(&file, &output),
        Command::Measure { kind, measured, file, output } => {
            let rho = load_density(&file)?;
            rho.position(&measured).map_err(|e| Failure::Input(e.to_string()))?;
            let result = kind.evaluate(&rho, &measured, &OptimizerConfig::default())?;
            let rest: Vec<String> = rho.labels().iter().filter(|l| **l != measured).cloned().collect();
            println!("{kind}({measured}|{}) = {}", rest.join(""), format_f64(result.value));
            let command = format!("measure --kind {kind} --measured {measured} {}", file.display());
            let payload = MeasurePayload { measure: kind, measured, rest, result };
            emit(&output, &envelope(command, None, kind.tolerance(), payload))?;
            Ok(EXIT_OK)
        }
        Command::Deficit { measure, head, tolerance, expect, file, output } => {
            let rho = load_density(&file)?;
            if let Some(h) = &head {
                rho.position(h).map_err(|e| Failure::Input(e.to_string()))?;
            }
            let mut report = monogamy::deficit_with(&rho, measure, head.as_deref(), &OptimizerConfig::default())?;
            if let Some(t) = tolerance {
                report = report.with_tolerance(t);
            }
            println!(
                "{measure} deficit (head {}) = {} [{}, {}, {}] -> {:?}",
                report.head,
                sci(report.deficit),
                sci(report.q_a_bc),
                sci(report.q_a_b),
                sci(report.q_a_c),
                report.verdict
            );
            let code = match expect {
                Some(Expect::Satisfied) if report.verdict != Verdict::Satisfied => EXIT_FAIL,
                Some(Expect::Violated) if report.verdict != Verdict::Violated => EXIT_FAIL,
                _ => EXIT_OK,
            };
            let mut command = format!("deficit --measure {measure}");
            if let Some(h) = &head {
                command += &format!(" --head {h}");
            }
            if let Some(t) = tolerance {
                command += &format!(" --tolerance {}", format_f64(t));
            }
            command += &format!(" {}", file.display());
            let tol = report.tolerance;
            emit(&output, &envelope(command, None, tol, report))?;
            Ok(code)
        }
        Command::Verify(Verify::Theorem3 { samples, seed, output }) => {
            if samples == 0 {
                return Err(Failure::Input("--samples must be at least 1".into()));
            }
            let summary: Theorem3Summary = monogamy::verify_theorem3(samples, seed)?;
            let (verdict, code) = pass_fail(summary.pass);
            println!(
                "theorem3: {} samples, min deficit {} at sample {}, {} violated, {} inconclusive -> {verdict}",
                summary.samples,
                sci(summary.min_deficit),
                summary.argmin.index,
                summary.violated_count,
                summary.inconclusive_count
            );
            let command = format!("verify theorem3 --samples {samples} --seed {seed}");
            emit(&output, &envelope(command, Some(seed), Measure::GeometricDiscord.tolerance(), summary))?;
            Ok(code)
        }
        Command::Certificate(Certificate::Theorem1 { dec, measure, output }) => {
            let decomposition = load_decomposition(&dec)?;
            let cert = monogamy::theorem1_certificate(&decomposition, measure)?;
            println!(
                "theorem1 certificate ({measure}): Q(A|C) = {}, deficit = {} -> {:?}",
                sci(cert.q_separable),
                sci(cert.report.deficit),
                cert.report.verdict
            );
            let payload = CertificatePayload {
                measure,
                decomposition: StateFile::from_decomposition(&decomposition, ["A", "C"]),
                state: StateFile::from_density(&cert.state),
                q_separable: cert.q_separable,
                chain_check: cert.chain,
                report: cert.report,
            };
            let command = format!("certificate theorem1 --dec {} --measure {measure}", dec.display());
            emit(&output, &envelope(command, None, measure.tolerance(), payload))?;
            Ok(EXIT_OK)
        }
        Command::Extend { dec, measure, n_max, output } => {
            if n_max == 0 {
                return Err(Failure::Input("--n-max must be at least 1".into()));
            }
            let decomposition = load_decomposition(&dec)?;
            let reports = monogamy::extension_check(&decomposition, measure, n_max)?;
            let smallest = monogamy::smallest_violating_n(&reports);
            let q_per_copy = reports[0].q_per_copy;
            let n_upper_bound = monogamy::extension_bound(measure).map(|b| (b / q_per_copy).ceil() as u64);
            match smallest {
                Some(n) => println!("extend ({measure}): n q_per_copy exceeds the joint value first at n = {n}"),
                None => println!("extend ({measure}): no violation up to n = {n_max}"),
            }
            let (_, code) = pass_fail(smallest.is_some());
            let payload =
                ExtendPayload { measure, n_max, q_per_copy, n_upper_bound, smallest_violating_n: smallest, reports };
            let command = format!("extend --dec {} --measure {measure} --n-max {n_max}", dec.display());
            emit(&output, &envelope(command, None, measure.tolerance(), payload))?;
            Ok(code)
        }
        Command::Search(Search::DiscordPureViolation { samples, seed, threshold, output }) => {
            let found: DiscordPureSearch = monogamy::search_discord_pure_violation(samples, seed, threshold)?;
            match &found.witness {
                Some(w) => println!(
                    "discord pure violation: deficit {} at sample {} (seed {}) after {} samples",
                    sci(w.report.deficit),
                    w.index,
                    w.seed,
                    found.samples_tried
                ),
                None => println!("discord pure violation: none below {threshold} in {samples} samples"),
            }
            let (_, code) = pass_fail(found.witness.is_some());
            let payload = DiscordSearchPayload {
                samples,
                threshold,
                samples_tried: found.samples_tried,
                min_deficit: found.min_deficit,
                witness: found.witness.map(|w| PureWitnessPayload {
                    index: w.index,
                    seed: w.seed,
                    state: StateFile::from_pure(&w.state),
                    report: w.report,
                }),
            };
            let command = format!(
                "search discord-pure-violation --samples {samples} --seed {seed} --threshold {}",
                format_f64(threshold)
            );
            emit(&output, &envelope(command, Some(seed), Measure::Discord.tolerance(), payload))?;
            Ok(code)
        }
        Command::Search(Search::GdiscordIncrease { trials, seed, output }) => {
            if trials == 0 {
                return Err(Failure::Input("--trials must be at least 1".into()));
            }
            let measure = Measure::GeometricDiscord;
            let found: ChannelMonotonicity = monogamy::channel_monotonicity_check(measure, trials, seed)?;
            let w = &found.witness;
            let threshold = DEFICIT_BASE_TOL;
            println!(
                "gdiscord increase: max {} at trial {} (seed {}) over {trials} trials",
                sci(found.max_increase),
                w.trial,
                w.seed
            );
            let (_, code) = pass_fail(found.max_increase > threshold);
            let payload = ChannelPayload {
                measure,
                trials,
                max_increase: found.max_increase,
                witness_threshold: threshold,
                witness: ChannelWitnessPayload {
                    trial: w.trial,
                    seed: w.seed,
                    state: StateFile::from_density(&w.state),
                    kraus: w
                        .channel
                        .operators()
                        .iter()
                        .map(|k| (0..k.nrows()).map(|r| (0..k.ncols()).map(|c| [k[(r, c)].re, k[(r, c)].im]).collect()).collect())
                        .collect(),
                    before: w.before,
                    after: w.after,
                },
            };
            let command = format!("search gdiscord-increase --trials {trials} --seed {seed}");
            emit(&output, &envelope(command, Some(seed), measure.tolerance(), payload))?;
            Ok(code)
        }
        Command::Scan(Scan::Brun { samples, seed, format, out }) => {
            let rows = monogamy::scan_brun(samples, seed)?;
            let bytes = match format {
                Format::Csv => brun_csv(&rows),
                Format::Json => {
                    let command = format!("scan brun --samples {samples} --seed {seed} --format json");
                    let report = envelope(command, Some(seed), Measure::GeometricDiscord.tolerance(), &rows);
                    to_json(&report).expect("reports serialize").into_bytes()
                }
            };
            write_file(&out, &bytes)?;
            let min = rows.iter().map(|r| r.report.deficit).fold(f64::INFINITY, f64::min);
            println!("scan brun: {} samples written to {}, min deficit {}", rows.len(), out.display(), sci(min));
            Ok(EXIT_OK)
        }
    }
}

fn validate(file: &Path, output: &Output) -> Outcome {
    let text =
        std::fs::read_to_string(file).map_err(|e| Failure::Input(format!("cannot read {}: {e}", file.display())))?;
    let file_contents = StateFile::from_json(&text)?;
    let parsed = match file_contents.validate() {
        Ok(p) => p,
        Err(e) => {
            println!("{}: INVALID ({e})", file.display());
            return Ok(EXIT_FAIL);
        }
    };
    let (terms, rho) = match parsed {
        Parsed::Density(rho) => (None, rho),
        Parsed::Pure(psi) => (None, psi.density()),
        Parsed::Decomposition(dec) => {
            let labels = [file_contents.labels[0].as_str(), file_contents.labels[1].as_str()];
            (Some(dec.len()), dec.state(labels))
        }
    };
    println!("{}: valid {:?} state, dims {:?}, purity {}", file.display(), file_contents.kind, rho.dims(), sci(rho.purity()));
    let payload = ValidatePayload {
        kind: file_contents.kind,
        dims: rho.dims().to_vec(),
        labels: rho.labels().to_vec(),
        terms,
        trace: rho.trace(),
        purity: rho.purity(),
        eigenvalues: rho.eigenvalues(),
    };
    emit(output, &envelope(format!("validate {}", file.display()), None, DEFICIT_BASE_TOL, payload))?;
    Ok(EXIT_OK)
}

fn brun_csv(rows: &[BrunSample]) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let header = ["sample", "p", "a", "f", "g_re", "g_im", "gamma", "q_abc", "q_ab", "q_ac", "deficit"];
    w.write_record(header).expect("in-memory write");
    for row in rows {
        let (p, r) = (&row.params, &row.report);
        let mut record = vec![row.index.to_string()];
        record.extend(
            [p.p, p.a, p.f, p.g.re, p.g.im, p.gamma, r.q_a_bc, r.q_a_b, r.q_a_c, r.deficit].map(format_f64),
        );
        w.write_record(&record).expect("in-memory write");
    }
    w.into_inner().expect("in-memory flush")
}
