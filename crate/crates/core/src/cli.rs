//! The `wsbm` command line.
//!
//! Every artifact embeds the resolved configuration, seed and crate version,
//! and nothing time-dependent, so identical invocations produce identical
//! bytes. Exit codes: 0 success, 1 numerical failure, 2 configuration error,
//! 3 verification failure.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::divergence::{column_divergence, recovery_predicate, thinned_recovery_predicate, Regime};
use crate::model::{aggregate_thinned_gaussian, EdgeModel, ModelFile, ModelSpec};
use crate::oracle::{mixture_density, verification_suite, ApproxDistance, QuadratureSpec};
use crate::recovery::{binary_symmetric_family, genie_error_rate, phase_csv, phase_sweep, Estimator, GenieOptions};
use crate::sampler::SizeConvention;
use crate::{oracle, CommunityModel, Error};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "wsbm", version, about = "Recovery limits, simulation and numerical checks for weighted stochastic block models")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub options: Options,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// Pairwise semi-metrics between community columns.
    Divergence,
    /// Exact-recovery threshold test.
    Threshold,
    /// Monte Carlo error rate of the genie-aided MAP test.
    Simulate,
    /// Error rates across the recovery threshold (binary symmetric Gaussian).
    Phase,
    /// Thinned edge-sum density against its Gaussian approximation.
    Approx,
    /// Numerical checks of the min-integral bounds.
    Verify,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Options {
    /// Model file (JSON).
    #[arg(long, global = true)]
    pub model: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Monte Carlo trials [default: 100000].
    #[arg(long, global = true)]
    pub trials: Option<u64>,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Output format [default: csv for phase and approx, json otherwise].
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[arg(long, global = true, default_value = "auto")]
    pub regime: Regime,
    /// Node count for phase and approx.
    #[arg(long, global = true)]
    pub n: Option<usize>,
    /// Edge mean for approx.
    #[arg(long, global = true, default_value_t = 0.0, allow_hyphen_values = true)]
    pub mu: f64,
    /// Edge variance for approx.
    #[arg(long = "sigma-sq", global = true, default_value_t = 1.0)]
    pub sigma_sq: f64,
    /// Survival probability is `theta_c * log n / n`.
    #[arg(long = "theta-c", global = true, default_value_t = 1.0)]
    pub theta_c: f64,
    /// Comma-separated values of `c` for phase.
    #[arg(long = "c-grid", global = true, value_delimiter = ',', default_value = "0.25,0.5,1,2,4")]
    pub c_grid: Vec<f64>,
    #[arg(long, global = true, default_value = "plain")]
    pub estimator: Estimator,
    /// Exclude the node itself from its own community's edge sum.
    #[arg(long = "exclude-self", global = true)]
    pub exclude_self: bool,
    /// Rows in the approx density table.
    #[arg(long, global = true, default_value_t = 2001)]
    pub rows: usize,
}

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Numerical(_) => 1,
            CliError::Config(_) => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Numerical(m) => write!(f, "{m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Numerical(_) => CliError::Numerical(e.to_string()),
            other => CliError::Config(other.to_string()),
        }
    }
}

/// Files produced by one run; `None` means standard output.
#[derive(Debug, Default)]
pub struct Outcome {
    pub files: Vec<(Option<PathBuf>, String)>,
    /// Diagnostics for standard error.
    pub notes: Vec<String>,
    pub verification_failed: bool,
}

#[derive(Serialize)]
struct RunConfig<'a> {
    command: Command,
    version: &'static str,
    #[serde(flatten)]
    options: &'a Options,
    #[serde(skip_serializing_if = "Option::is_none")]
    model_spec: Option<&'a ModelFile>,
}

#[derive(Serialize)]
struct Document<'a, T: Serialize> {
    config: &'a RunConfig<'a>,
    result: T,
}

fn json<T: Serialize>(config: &RunConfig, result: T) -> String {
    let mut s = serde_json::to_string_pretty(&Document { config, result }).expect("serializable output");
    s.push('\n');
    s
}

fn csv_header(config: &RunConfig) -> String {
    format!("# {}\n", serde_json::to_string(config).expect("serializable config"))
}

fn load_model(options: &Options) -> Result<(ModelFile, ModelSpec), CliError> {
    let path = options
        .model
        .as_ref()
        .ok_or_else(|| CliError::Config("--model <path> is required for this command".into()))?;
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    let file = ModelFile::from_json(&text)?;
    let spec = file.clone().into_spec()?;
    Ok((file, spec))
}

#[derive(Serialize)]
struct PairRow {
    i: usize,
    j: usize,
    value: f64,
    t_star: f64,
    normalized: Option<f64>,
    terms: Vec<f64>,
}

#[derive(Serialize)]
struct DivergenceSummary {
    value: f64,
    t_star: f64,
    normalized: Option<f64>,
    pair: (usize, usize),
    pairs: Vec<PairRow>,
}

fn cmd_divergence(options: &Options) -> Result<Outcome, CliError> {
    let (file, spec) = load_model(options)?;
    let k = spec.community.k();
    if k < 2 {
        return Err(CliError::Config("at least two communities are required".into()));
    }
    let mut pairs = Vec::new();
    for i in 0..k {
        for j in (i + 1)..k {
            let r = column_divergence(&spec.community, &spec.edges, i, j)?;
            pairs.push(PairRow {
                i,
                j,
                value: r.value,
                t_star: r.t_star,
                normalized: r.normalized,
                terms: r.terms,
            });
        }
    }
    let best = pairs
        .iter()
        .enumerate()
        .fold(0, |b, (idx, p)| if p.value < pairs[b].value { idx } else { b });
    let config = RunConfig {
        command: Command::Divergence,
        version: VERSION,
        options,
        model_spec: Some(&file),
    };
    let body = match options.format.unwrap_or(Format::Json) {
        Format::Json => {
            let p = &pairs[best];
            let summary = DivergenceSummary {
                value: p.value,
                t_star: p.t_star,
                normalized: p.normalized,
                pair: (p.i, p.j),
                pairs,
            };
            json(&config, summary)
        }
        Format::Csv => {
            let mut s = csv_header(&config);
            s.push_str("i,j,value,t_star,normalized,is_min\n");
            for (idx, p) in pairs.iter().enumerate() {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{}",
                    p.i,
                    p.j,
                    p.value,
                    p.t_star,
                    p.normalized.map_or(String::new(), |v| v.to_string()),
                    idx == best
                );
            }
            s
        }
    };
    Ok(single(options, body))
}

fn single(options: &Options, body: String) -> Outcome {
    Outcome {
        files: vec![(options.out.clone(), body)],
        ..Default::default()
    }
}

#[derive(Serialize)]
struct ThinnedEcho {
    theta: Vec<Vec<f64>>,
    aggregated_mean: Vec<Vec<f64>>,
    aggregated_variance: Vec<Vec<f64>>,
}

#[derive(Serialize)]
struct ThresholdSummary {
    #[serde(flatten)]
    verdict: crate::divergence::RecoveryVerdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    thinned: Option<ThinnedEcho>,
    note: &'static str,
}

fn cmd_threshold(options: &Options) -> Result<Outcome, CliError> {
    let (file, spec) = load_model(options)?;
    let (verdict, thinned, note) = match &spec.edges {
        EdgeModel::ThinnedGaussian(t) => {
            let agg = aggregate_thinned_gaussian(&spec.community, t)?;
            let echo = ThinnedEcho {
                theta: t.theta(spec.community.n())?.rows(),
                aggregated_mean: agg.mean.rows(),
                aggregated_variance: agg.variance.rows(),
            };
            (
                thinned_recovery_predicate(&spec.community, t)?,
                Some(echo),
                "thinned models are tested in the order-log regime on Gaussian-approximated edge sums",
            )
        }
        edges => (
            recovery_predicate(&spec.community, edges, options.regime)?,
            None,
            "asymptotic criterion evaluated at the given n",
        ),
    };
    let config = RunConfig {
        command: Command::Threshold,
        version: VERSION,
        options,
        model_spec: Some(&file),
    };
    let body = match options.format.unwrap_or(Format::Json) {
        Format::Json => json(&config, ThresholdSummary { verdict, thinned, note }),
        Format::Csv => {
            let mut s = csv_header(&config);
            s.push_str("possible,margin,regime_used,min_divergence,normalized,i,j,inconclusive\n");
            let _ = writeln!(
                s,
                "{},{},{},{},{},{},{},{}",
                verdict.possible,
                verdict.margin,
                verdict.regime_used,
                verdict.min_divergence,
                verdict.normalized,
                verdict.pair.0,
                verdict.pair.1,
                verdict.inconclusive
            );
            s
        }
    };
    Ok(single(options, body))
}

fn genie_options(options: &Options) -> GenieOptions {
    GenieOptions {
        convention: if options.exclude_self {
            SizeConvention::ExcludeSelf
        } else {
            SizeConvention::Full
        },
        estimator: options.estimator,
    }
}

const PROXY_NOTE: &str =
    "union_bound_proxy = n * error_rate is a finite-n surrogate; the asymptotic exact-recovery statement is not tested";

#[derive(Serialize)]
struct SimulateSummary {
    #[serde(flatten)]
    report: crate::recovery::TrialReport,
    note: &'static str,
}

fn cmd_simulate(options: &Options) -> Result<Outcome, CliError> {
    let (file, spec) = load_model(options)?;
    let trials = options.trials.unwrap_or(100_000);
    let report = genie_error_rate(&spec.community, &spec.edges, trials, options.seed, genie_options(options))?;
    let config = RunConfig {
        command: Command::Simulate,
        version: VERSION,
        options,
        model_spec: Some(&file),
    };
    let body = match options.format.unwrap_or(Format::Json) {
        Format::Json => json(&config, SimulateSummary { report, note: PROXY_NOTE }),
        Format::Csv => {
            let mut s = csv_header(&config);
            s.push_str("trials,errors,error_rate,se,predicted_exponent,empirical_exponent,zero_errors,union_bound_proxy\n");
            let _ = writeln!(
                s,
                "{},{},{},{},{},{},{},{}",
                report.trials,
                report.errors,
                report.error_rate,
                report.se,
                report.predicted_exponent.map_or(String::new(), |v| v.to_string()),
                report.empirical_exponent,
                report.zero_errors,
                report.union_bound_proxy
            );
            s
        }
    };
    Ok(single(options, body))
}

fn cmd_phase(options: &Options) -> Result<Outcome, CliError> {
    let (file, community) = match &options.model {
        Some(_) => {
            let (file, spec) = load_model(options)?;
            (Some(file), spec.community)
        }
        None => (None, CommunityModel::new(vec![0.5, 0.5], options.n.unwrap_or(1000))?),
    };
    if community.k() != 2 {
        return Err(CliError::Config("phase sweeps need a two-community model".into()));
    }
    let trials = options.trials.unwrap_or(100_000);
    let rows = phase_sweep(
        &community,
        binary_symmetric_family(community.n()),
        &options.c_grid,
        trials,
        options.seed,
        genie_options(options),
    )?;
    let config = RunConfig {
        command: Command::Phase,
        version: VERSION,
        options,
        model_spec: file.as_ref(),
    };
    let body = match options.format.unwrap_or(Format::Csv) {
        Format::Csv => csv_header(&config) + &phase_csv(&rows),
        Format::Json => json(&config, &rows),
    };
    Ok(single(options, body))
}

#[derive(Serialize)]
struct ApproxSummary {
    n: usize,
    theta: f64,
    mu: f64,
    sigma_sq: f64,
    #[serde(flatten)]
    distance: ApproxDistance,
    note: &'static str,
}

fn cmd_approx(options: &Options) -> Result<Outcome, CliError> {
    let n = options.n.unwrap_or(10_000);
    if n < 2 {
        return Err(CliError::Config("--n must be at least 2".into()));
    }
    let theta = options.theta_c * (n as f64).ln() / n as f64;
    let mix = mixture_density(n, theta, options.mu, options.sigma_sq)?;
    let summary = ApproxSummary {
        n,
        theta,
        mu: options.mu,
        sigma_sq: options.sigma_sq,
        distance: oracle::approx_distance_of(&mix),
        note: "the atom at zero carries atom_weight and contributes atom_weight / 2 to tv",
    };
    let config = RunConfig {
        command: Command::Approx,
        version: VERSION,
        options,
        model_spec: None,
    };
    let summary_json = json(&config, &summary);
    match options.format.unwrap_or(Format::Csv) {
        Format::Json => Ok(single(options, summary_json)),
        Format::Csv => {
            let mut s = csv_header(&config);
            s.push_str("z,f_mix,f_gauss\n");
            for (z, f, g) in mix.density_table(options.rows) {
                let _ = writeln!(s, "{z},{f},{g}");
            }
            let mut outcome = Outcome::default();
            outcome.files.push((options.out.clone(), s));
            match &options.out {
                Some(path) => outcome.files.push((Some(summary_path(path)), summary_json)),
                None => outcome.notes.push(summary_json),
            }
            Ok(outcome)
        }
    }
}

/// `<out>.json` next to the density table.
pub fn summary_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}

#[derive(Serialize)]
struct VerifySummary {
    all_passed: bool,
    checks: Vec<oracle::Check>,
}

fn cmd_verify(options: &Options) -> Result<Outcome, CliError> {
    let checks = verification_suite(&QuadratureSpec::default())?;
    let all_passed = checks.iter().all(|c| c.passed);
    let config = RunConfig {
        command: Command::Verify,
        version: VERSION,
        options,
        model_spec: None,
    };
    let body = match options.format.unwrap_or(Format::Json) {
        Format::Json => json(&config, VerifySummary { all_passed, checks: checks.clone() }),
        Format::Csv => {
            let mut s = csv_header(&config);
            s.push_str("name,passed,value,expected\n");
            for c in &checks {
                let _ = writeln!(s, "\"{}\",{},{},\"{}\"", c.name, c.passed, c.value, c.expected);
            }
            s
        }
    };
    let mut outcome = single(options, body);
    outcome.verification_failed = !all_passed;
    for c in checks.iter().filter(|c| !c.passed) {
        outcome.notes.push(format!("FAILED {}: {} (expected {})", c.name, c.value, c.expected));
    }
    Ok(outcome)
}

/// Runs a parsed command without touching the filesystem for output.
pub fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    let o = &cli.options;
    match cli.command {
        Command::Divergence => cmd_divergence(o),
        Command::Threshold => cmd_threshold(o),
        Command::Simulate => cmd_simulate(o),
        Command::Phase => cmd_phase(o),
        Command::Approx => cmd_approx(o),
        Command::Verify => cmd_verify(o),
    }
}

/// Parses arguments, runs the command, writes its outputs and returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let outcome = match execute(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("wsbm: {e}");
            return e.exit_code();
        }
    };
    for (path, content) in &outcome.files {
        match path {
            Some(p) => {
                if let Err(e) = std::fs::write(p, content) {
                    eprintln!("wsbm: configuration error: cannot write {}: {e}", p.display());
                    return 2;
                }
            }
            None => print!("{content}"),
        }
    }
    for note in &outcome.notes {
        eprintln!("{}", note.trim_end());
    }
    if outcome.verification_failed {
        3
    } else {
        0
    }
}
