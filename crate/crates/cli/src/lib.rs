//! Argument parsing and command execution for the `swapkit` binary.
//!
//! Every command produces one JSON report that embeds the parsed
//! configuration, the seed, the active tolerance and the crate version.
//! Exit status: 0 on success, 1 on usage or input errors, 2 when a checked
//! identity fails numerically.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Parser, Subcommand};
use serde::{Serialize, Serializer};
use serde_json::{json, Value};
use thiserror::Error;

use swapkit::catalog::{family_u4, fourier_unitary};
use swapkit::chain::{evaluate_chain, order_independence_check, order_spread, FusionTree, MAX_LINKS, ORDER_TOLERANCE};
use swapkit::io::{read_json, to_json, write_json};
use swapkit::measurements::{gour_basis, validate};
use swapkit::noise::{mixed_lu_deterministic, noisy_swap, NoiseModel};
use swapkit::pc::{census, pc_equivalent};
use swapkit::swap::{oracle_swap, swap, ORACLE_MAX_DIM, PROBABILITY_TOLERANCE, SCHMIDT_TOLERANCE};
use swapkit::verify::{verify_all, DEFAULT_SEED};
use swapkit::{Basis, CMatrix, Spectrum, SwapError, Tolerance, VERSION};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] SwapError),
    /// `--help` or `--version` output; not a failure.
    #[error("{0}")]
    Info(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Info(_) => 0,
            CliError::Core(e) if e.is_invariant_violation() => 2,
            _ => 1,
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Comma-separated non-negative numbers.
#[derive(Debug, Clone, PartialEq)]
pub struct Csv(pub Vec<f64>);

impl FromStr for Csv {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let values = s
            .split(',')
            .map(|t| t.trim().parse::<f64>().map_err(|_| format!("{t:?} is not a number")))
            .collect::<Result<Vec<_>, _>>()?;
        if let Some(x) = values.iter().find(|x| !x.is_finite() || **x < 0.0) {
            return Err(format!("entries must be finite and non-negative, got {x}"));
        }
        if values.iter().all(|&x| x == 0.0) {
            return Err("at least one entry must be positive".into());
        }
        Ok(Csv(values))
    }
}

impl Serialize for Csv {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

/// `;`-separated list of [`Csv`] links.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkList(pub Vec<Csv>);

impl FromStr for LinkList {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        s.split(';').map(Csv::from_str).collect::<Result<Vec<_>, _>>().map(LinkList)
    }
}

impl Serialize for LinkList {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

/// `gour:fourier`, `gour:u4:<alpha>` or a basis JSON file.
#[derive(Debug, Clone, PartialEq)]
pub enum BasisSpec {
    GourFourier,
    GourU4(f64),
    File(PathBuf),
}

impl FromStr for BasisSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "gour:fourier" => Ok(BasisSpec::GourFourier),
            _ => match s.strip_prefix("gour:u4:") {
                Some(a) => a.parse().map(BasisSpec::GourU4).map_err(|_| format!("bad u4 angle {a:?}")),
                None if s.starts_with("gour:") => Err(format!("unknown seed in {s:?}")),
                None => Ok(BasisSpec::File(PathBuf::from(s))),
            },
        }
    }
}

impl fmt::Display for BasisSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisSpec::GourFourier => write!(f, "gour:fourier"),
            BasisSpec::GourU4(a) => write!(f, "gour:u4:{a}"),
            BasisSpec::File(p) => write!(f, "{}", p.display()),
        }
    }
}

impl Serialize for BasisSpec {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl BasisSpec {
    fn load(&self, d: usize) -> Result<Basis, CliError> {
        let basis = match self {
            BasisSpec::GourFourier => gour_basis(&fourier_unitary(d))?,
            BasisSpec::GourU4(alpha) => {
                if d != 4 {
                    return Err(usage(format!("gour:u4 needs --dim 4, got {d}")));
                }
                gour_basis(&family_u4(*alpha).matrix)?
            }
            BasisSpec::File(p) => read_json::<Basis>(p)?,
        };
        if basis.dim() != d {
            return Err(usage(format!("basis has dimension {}, expected {d}", basis.dim())));
        }
        Ok(basis)
    }
}

#[derive(Debug, Clone, PartialEq, Subcommand, Serialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum Command {
    /// Single-node swap with per-outcome Schmidt data.
    Swap {
        #[arg(long)]
        dim: usize,
        /// Squared Schmidt coefficients of the A–N link.
        #[arg(long)]
        a: Csv,
        #[arg(long)]
        b: Csv,
        /// Read --a/--b as unnormalized Schmidt coefficients.
        #[arg(long)]
        raw_diag: bool,
        #[arg(long, default_value = "gour:fourier")]
        basis: BasisSpec,
        /// Cross-check against the full-tensor simulation.
        #[arg(long)]
        oracle: bool,
    },
    /// Phase–conjugation classes in the permutation orbit of F_d.
    Census {
        #[arg(long)]
        dim: usize,
        /// Write the class representatives to this file.
        #[arg(long)]
        emit_reps: Option<PathBuf>,
    },
    /// Evaluates one fusion order on a chain of links.
    Chain {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        links: LinkList,
        /// Parenthesization such as "((0.1).2)"; left-associated by default.
        #[arg(long)]
        order: Option<FusionTree>,
        #[arg(long)]
        raw_diag: bool,
    },
    /// Random chains, every parenthesization compared.
    ChainSweep {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        links: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
    /// Swap with depolarized links.
    Noise {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        a: Csv,
        #[arg(long)]
        b: Csv,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        q: f64,
        #[arg(long)]
        raw_diag: bool,
        #[arg(long, default_value = "gour:fourier")]
        basis: BasisSpec,
    },
    /// Phase–conjugation equivalence of two matrix files.
    Classify {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
    },
    /// Runs every acceptance check.
    VerifyAll,
}

#[derive(Debug, Parser)]
#[command(name = "swapkit", version, about = "Deterministic entanglement swapping toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Overrides the default comparison tolerance.
    #[arg(long, global = true)]
    tolerance: Option<f64>,
    /// Caps the worker pool.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Report path; stdout when absent.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: Command,
    pub seed: u64,
    pub tolerance: Option<f64>,
    /// Execution details; left out of reports so they stay byte-identical.
    #[serde(skip)]
    pub threads: Option<usize>,
    #[serde(skip)]
    pub output: Option<PathBuf>,
}

impl RunConfig {
    fn dim(&self) -> Option<usize> {
        match &self.command {
            Command::Swap { dim, .. }
            | Command::Census { dim, .. }
            | Command::Chain { dim, .. }
            | Command::ChainSweep { dim, .. }
            | Command::Noise { dim, .. } => Some(*dim),
            Command::Classify { .. } | Command::VerifyAll => None,
        }
    }

    fn validate(&self) -> Result<(), CliError> {
        if let Some(d) = self.dim() {
            if d < 2 {
                return Err(usage(format!("--dim must be at least 2, got {d}")));
            }
        }
        if let Some(t) = self.tolerance {
            Tolerance::new(t).map_err(|e| usage(e.to_string()))?;
        }
        if self.threads == Some(0) {
            return Err(usage("--threads must be positive"));
        }
        let check_len = |name: &str, v: &Csv, d: usize| {
            if v.0.len() == d {
                Ok(())
            } else {
                Err(usage(format!("{name} has {} entries, expected {d}", v.0.len())))
            }
        };
        match &self.command {
            Command::Swap { dim, a, b, .. } => {
                check_len("--a", a, *dim)?;
                check_len("--b", b, *dim)?;
            }
            Command::Noise { dim, a, b, p, q, .. } => {
                check_len("--a", a, *dim)?;
                check_len("--b", b, *dim)?;
                NoiseModel::new(*p, *q).map_err(|e| usage(e.to_string()))?;
            }
            Command::Chain { dim, links, order, .. } => {
                if links.0.len() < 2 {
                    return Err(usage("--links needs at least two links"));
                }
                for (i, l) in links.0.iter().enumerate() {
                    check_len(&format!("link {i}"), l, *dim)?;
                }
                if let Some(t) = order {
                    if t.leaf_count() != links.0.len() {
                        return Err(usage(format!("--order has {} leaves for {} links", t.leaf_count(), links.0.len())));
                    }
                }
            }
            Command::ChainSweep { links, .. }
                if !(3..=MAX_LINKS).contains(links) => {
                    return Err(usage(format!("--links must be in 3..={MAX_LINKS}, got {links}")));
                }
            _ => {}
        }
        Ok(())
    }
}

pub fn parse_args<I, S>(argv: I) -> Result<RunConfig, CliError>
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let args = std::iter::once(std::ffi::OsString::from("swapkit")).chain(argv.into_iter().map(Into::into));
    let cli = Cli::try_parse_from(args).map_err(|e| match e.kind() {
        clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => CliError::Info(e.to_string()),
        _ => usage(e.to_string()),
    })?;
    let cfg = RunConfig { command: cli.command, seed: cli.seed, tolerance: cli.tolerance, threads: cli.threads, output: cli.output };
    cfg.validate()?;
    Ok(cfg)
}

/// A finished run: the JSON report and, when a checked identity failed,
/// the reason.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: Value,
    pub violation: Option<String>,
}

impl Outcome {
    pub fn exit_code(&self) -> u8 {
        if self.violation.is_some() {
            2
        } else {
            0
        }
    }
}

#[derive(Serialize)]
struct Envelope<'a> {
    tool: &'static str,
    version: &'static str,
    command: &'static str,
    config: &'a RunConfig,
    seed: u64,
    tolerance: f64,
    status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    violation: Option<&'a str>,
    result: Value,
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Swap { .. } => "swap",
        Command::Census { .. } => "census",
        Command::Chain { .. } => "chain",
        Command::ChainSweep { .. } => "chain-sweep",
        Command::Noise { .. } => "noise",
        Command::Classify { .. } => "classify",
        Command::VerifyAll => "verify-all",
    }
}

fn spectrum(v: &Csv, raw: bool) -> Result<Spectrum, CliError> {
    let s = if raw { Spectrum::from_unnormalized(v.0.clone()) } else { Spectrum::from_probabilities(&v.0) };
    s.map_err(|e| usage(e.to_string()))
}

fn value<V: Serialize>(v: &V) -> Result<Value, CliError> {
    serde_json::to_value(v).map_err(|e| CliError::Core(SwapError::Parse(e.to_string())))
}

type Step = (Value, Option<String>);

fn run_swap(dim: usize, a: &Csv, b: &Csv, raw: bool, basis: &BasisSpec, oracle: bool) -> Result<Step, CliError> {
    let (a, b) = (spectrum(a, raw)?, spectrum(b, raw)?);
    let basis = basis.load(dim)?;
    let class = validate(&basis)?;
    let report = swap(&a, &b, &basis)?;
    let mut violation = None;
    if class.unbiased && class.single_pc_class && a.full_rank(0.0) && b.full_rank(0.0) {
        if !report.uniform_probs {
            violation = Some("unbiased basis gave non-uniform probabilities".to_string());
        } else if !report.lu_deterministic {
            violation = Some("single-class basis gave outcome-dependent Schmidt vectors".to_string());
        }
    }
    let mut result = json!({ "basis_class": value(&class)?, "analytic": value(&report)? });
    if oracle {
        if dim > ORACLE_MAX_DIM {
            return Err(usage(format!("--oracle supports d <= {ORACLE_MAX_DIM}")));
        }
        let slow = oracle_swap(&a, &b, &basis)?;
        let mut prob_gap: f64 = 0.0;
        let mut schmidt_gap: f64 = 0.0;
        for (x, y) in report.outcomes.iter().zip(&slow.outcomes) {
            prob_gap = prob_gap.max((x.probability - y.probability).abs());
            schmidt_gap = match (&x.schmidt, &y.schmidt) {
                (Some(s), Some(t)) => schmidt_gap.max(s.max_abs_diff(t)),
                (None, None) => schmidt_gap,
                _ => f64::INFINITY,
            };
        }
        let agree = prob_gap <= PROBABILITY_TOLERANCE && schmidt_gap <= SCHMIDT_TOLERANCE;
        if !agree {
            violation = Some(format!("oracle disagrees: probability gap {prob_gap:e}, Schmidt gap {schmidt_gap:e}"));
        }
        result["oracle"] = value(&slow)?;
        result["agreement"] = json!({ "agree": agree, "max_probability_gap": prob_gap, "max_schmidt_gap": schmidt_gap });
    }
    Ok((result, violation))
}

fn run_census(dim: usize, emit: Option<&Path>) -> Result<Step, CliError> {
    let report = census(dim)?;
    if let Some(path) = emit {
        write_json(path, &report.representatives)?;
    }
    let mut v = value(&report)?;
    v.as_object_mut().expect("struct").remove("representatives");
    Ok((v, None))
}

fn run_chain(dim: usize, links: &LinkList, order: Option<&FusionTree>, raw: bool) -> Result<Step, CliError> {
    let specs = links.0.iter().map(|l| spectrum(l, raw)).collect::<Result<Vec<_>, _>>()?;
    let tree = order.cloned().unwrap_or_else(|| FusionTree::left_assoc(specs.len()));
    let result = evaluate_chain(&specs, &tree)?;
    let spread = order_spread(&specs)?;
    let violation = (dim <= 3 && spread >= ORDER_TOLERANCE)
        .then(|| format!("fusion order changed the d = {dim} result by {spread:e}"));
    let mut v = value(&result)?;
    v["links"] = value(&specs)?;
    v["order_spread"] = json!(spread);
    Ok((v, violation))
}

fn run_chain_sweep(dim: usize, links: usize, trials: usize, seed: u64) -> Result<Step, CliError> {
    let report = order_independence_check::<f64>(dim, links, trials, seed)?;
    let violation = (dim <= 3 && !report.holds)
        .then(|| format!("order dependence at d = {dim}: {:e}", report.max_discrepancy));
    Ok((value(&report)?, violation))
}

fn run_noise(dim: usize, a: &Csv, b: &Csv, raw: bool, noise: NoiseModel, basis: &BasisSpec) -> Result<Step, CliError> {
    let (a, b) = (spectrum(a, raw)?, spectrum(b, raw)?);
    let basis = basis.load(dim)?;
    let out = noisy_swap(&a, &b, &basis, noise)?;
    let lu = mixed_lu_deterministic(&out.outcomes, basis.starred_operators())?;
    let violation = (out.diagonal_orbit_only && !(lu.spectra_equal && lu.diagonal_witnesses_valid))
        .then(|| "diagonal-orbit basis without equal mixed outputs".to_string());
    let spectra: Vec<&Vec<f64>> = out.outcomes.iter().map(|o| &o.spectrum).collect();
    let v = json!({
        "diagonal_orbit_only": out.diagonal_orbit_only,
        "spectra": value(&spectra)?,
        "report": value(&lu)?,
    });
    Ok((v, violation))
}

fn run_classify(a: &Path, b: &Path) -> Result<Step, CliError> {
    let (h1, h2): (CMatrix, CMatrix) = (read_json(a)?, read_json(b)?);
    Ok((value(&pc_equivalent(&h1, &h2)?)?, None))
}

fn run_verify_all(seed: u64) -> Result<Step, CliError> {
    let results = verify_all(seed);
    let failed: Vec<String> = results.iter().filter(|r| !r.passed).map(|r| r.id.to_string()).collect();
    let rows: Vec<Value> = results
        .iter()
        .map(|r| {
            let mut v = value(r)?;
            v["line"] = json!(r.line());
            v["known_unreproducible"] = json!(r.known_unreproducible());
            Ok(v)
        })
        .collect::<Result<_, CliError>>()?;
    let violation = (!failed.is_empty()).then(|| format!("criteria failed: {}", failed.join(", ")));
    Ok((Value::Array(rows), violation))
}

fn execute(cfg: &RunConfig) -> Result<Step, CliError> {
    match &cfg.command {
        Command::Swap { dim, a, b, raw_diag, basis, oracle } => run_swap(*dim, a, b, *raw_diag, basis, *oracle),
        Command::Census { dim, emit_reps } => run_census(*dim, emit_reps.as_deref()),
        Command::Chain { dim, links, order, raw_diag } => run_chain(*dim, links, order.as_ref(), *raw_diag),
        Command::ChainSweep { dim, links, trials } => run_chain_sweep(*dim, *links, *trials, cfg.seed),
        Command::Noise { dim, a, b, p, q, raw_diag, basis } => {
            run_noise(*dim, a, b, *raw_diag, NoiseModel::new(*p, *q)?, basis)
        }
        Command::Classify { a, b } => run_classify(a, b),
        Command::VerifyAll => run_verify_all(cfg.seed),
    }
}

/// Executes the command and writes the report to `--output` (if given).
pub fn run(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let tolerance = match cfg.tolerance {
        Some(t) => {
            let t = Tolerance::new(t).map_err(|e| usage(e.to_string()))?;
            Tolerance::set_global(t);
            t
        }
        None => Tolerance::init_from_env().map_err(|e| usage(e.to_string()))?,
    };
    let (result, violation) = match cfg.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| usage(e.to_string()))?
            .install(|| execute(cfg))?,
        None => execute(cfg)?,
    };
    let envelope = Envelope {
        tool: "swapkit",
        version: VERSION,
        command: command_name(&cfg.command),
        config: cfg,
        seed: cfg.seed,
        tolerance: tolerance.value(),
        status: if violation.is_some() { "violation" } else { "ok" },
        violation: violation.as_deref(),
        result,
    };
    let report = value(&envelope)?;
    if let Some(path) = &cfg.output {
        write_json(path, &report)?;
    }
    Ok(Outcome { report, violation })
}

/// Pretty JSON of a report, as written to files.
pub fn render(report: &Value) -> Result<String, CliError> {
    Ok(to_json(report)?)
}
