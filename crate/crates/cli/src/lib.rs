//! Driver behind the `ordmix` binary.
//!
//! Each subcommand writes its primary artifact (CSV or JSON) to `--out` and
//! returns a short human-readable summary. Output files are deterministic
//! functions of the arguments.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use ordmix::certify::{self, CountTable, MixingCertificate, Rate, StepBound};
use ordmix::channel::{dephasing, replacement};
use ordmix::doeblin::diamond::DiamondPreset;
use ordmix::doeblin::{product_bound_check, DEFAULT_TOL};
use ordmix::lindblad::{self, StepMode};
use ordmix::order;

/// Process exit status for rejected input.
pub const EXIT_INVALID: i32 = 2;
/// Process exit status for numerical failures (positivity, CPTP).
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => EXIT_INVALID,
            CliError::Numerical(_) => EXIT_NUMERICAL,
        }
    }
}

impl From<ordmix::Error> for CliError {
    fn from(e: ordmix::Error) -> Self {
        if e.is_numerical() {
            CliError::Numerical(e.to_string())
        } else {
            CliError::Invalid(e.to_string())
        }
    }
}

fn io_err(path: &Path, e: std::io::Error) -> CliError {
    CliError::Invalid(format!("{}: {e}", path.display()))
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "ordmix", version, about = "Order effects, minorization and mixing certificates for composite instruments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Order-effect sweep under partial ZZ coupling (CSV: gamma,mean,min,max).
    OrderSweep(OrderSweepArgs),
    /// Product Doeblin table for dephasing pairs (CSV: p,q,delta_A,delta_B,delta_AB).
    DoeblinTable(DoeblinTableArgs),
    /// Mixing certificate from a counts table (JSON).
    Certify(CertifyArgs),
    /// Monitored Lindblad limit sweep (CSV: dt,epsilon,gamma,embed_error).
    LindbladSweep(LindbladSweepArgs),
    /// Diamond-norm harness for the order commutator (JSON).
    DiamondCheck(DiamondCheckArgs),
    /// Equality-window scan on Halmos blocks (CSV).
    EqualityScan(EqualityScanArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum InitialState {
    PlusPlus,
    Random,
}

#[derive(Debug, Args)]
pub struct OrderSweepArgs {
    #[arg(long, default_value_t = 16)]
    pub gamma_steps: usize,
    #[arg(long, default_value_t = 12)]
    pub ab_steps: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Two-qubit input state; `random` draws it from `--seed`.
    #[arg(long, value_enum, default_value = "plus-plus")]
    pub psi0: InitialState,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct DoeblinTableArgs {
    /// Comma-separated p:q pairs.
    #[arg(long, default_value = "0.2:0.5,0.3:0.3,0.4:0.7")]
    pub pairs: String,
    /// Local dimension of each dephasing factor.
    #[arg(long, default_value_t = 3)]
    pub dim: usize,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct CertifyArgs {
    /// Counts CSV; repeat for component loops to get a composed bound.
    #[arg(long = "counts", required = true)]
    pub counts: Vec<PathBuf>,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    /// Loop duration, for the rate estimate.
    #[arg(long)]
    pub dt: Option<f64>,
    #[arg(long, requires = "initial_distance")]
    pub target: Option<f64>,
    #[arg(long, requires = "target")]
    pub initial_distance: Option<f64>,
    /// Outcomes may overlap (disables the per-stencil sum check).
    #[arg(long)]
    pub overlapping: bool,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Family {
    Depolarizing,
    AmplitudeDamping,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Mode {
    Exact,
    FirstOrder,
}

#[derive(Debug, Args)]
pub struct LindbladSweepArgs {
    #[arg(long, value_enum, default_value = "depolarizing")]
    pub family: Family,
    #[arg(long, default_value_t = 1.0)]
    pub kappa: f64,
    /// Comma-separated time steps.
    #[arg(long, default_value = "0.2,0.1,0.05,0.025")]
    pub dts: String,
    #[arg(long, default_value_t = 1.0)]
    pub t: f64,
    #[arg(long, value_enum, default_value = "first-order")]
    pub mode: Mode,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct DiamondCheckArgs {
    #[arg(long, default_value = "swap-rank-one")]
    pub preset: String,
    #[arg(long, default_value_t = 32)]
    pub restarts: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct EqualityScanArgs {
    /// Number of block angles, evenly spaced strictly inside (0, pi/2).
    #[arg(long, default_value_t = 100)]
    pub thetas: usize,
    #[arg(long, default_value_t = 400)]
    pub samples: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

pub fn run(cli: &Cli) -> CliResult<String> {
    match &cli.command {
        Command::OrderSweep(a) => run_order_sweep(a),
        Command::DoeblinTable(a) => run_doeblin_table(a),
        Command::Certify(a) => run_certify(a),
        Command::LindbladSweep(a) => run_lindblad_sweep(a),
        Command::DiamondCheck(a) => run_diamond_check(a),
        Command::EqualityScan(a) => run_equality_scan(a),
    }
}

/// Fixed six-decimal formatting; never prints a negative zero.
pub fn fmt6(x: f64) -> String {
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let s = format!("{:.6}", x);
    if s == "-0.000000" {
        "0.000000".into()
    } else {
        s
    }
}

fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    fs::write(path, contents).map_err(|e| io_err(path, e))
}

fn csv_row(values: &[f64]) -> String {
    let cells: Vec<String> = values.iter().map(|&v| fmt6(v)).collect();
    cells.join(",") + "\n"
}

pub fn run_order_sweep(a: &OrderSweepArgs) -> CliResult<String> {
    if a.gamma_steps < 2 || a.ab_steps < 1 {
        return Err(CliError::Invalid("need --gamma-steps >= 2 and --ab-steps >= 1".into()));
    }
    let psi0 = match a.psi0 {
        InitialState::PlusPlus => order::plus_plus(),
        InitialState::Random => ordmix::random::pure_state(4, &mut ChaCha8Rng::seed_from_u64(a.seed)),
    };
    let rows = order::zz_order_sweep(&order::default_gamma_grid(a.gamma_steps), a.ab_steps, &psi0)?;
    let mut out = String::from("gamma,mean,min,max\n");
    for r in &rows {
        out.push_str(&csv_row(&[r.gamma, r.mean, r.min, r.max]));
    }
    write_file(&a.out, &out)?;
    let monotone = rows.windows(2).all(|w| w[1].mean >= w[0].mean);
    Ok(format!(
        "order-sweep: {} rows, mean at gamma=0 is {}, mean column {}",
        rows.len(),
        rows[0].mean,
        if monotone { "nondecreasing" } else { "NOT monotone" }
    ))
}

/// Parses `p:q,p:q,...`.
pub fn parse_pairs(s: &str) -> CliResult<Vec<(f64, f64)>> {
    let mut pairs = Vec::new();
    for item in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let (p, q) = item
            .split_once(':')
            .ok_or_else(|| CliError::Invalid(format!("pair `{item}` is not of the form p:q")))?;
        let parse = |t: &str| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Invalid(format!("`{t}` is not a number")))
        };
        let (p, q) = (parse(p)?, parse(q)?);
        for v in [p, q] {
            if !(0.0..=1.0).contains(&v) {
                return Err(CliError::Invalid(format!("dephasing strength {v} outside [0, 1]")));
            }
        }
        pairs.push((p, q));
    }
    if pairs.is_empty() {
        return Err(CliError::Invalid("no pairs given".into()));
    }
    Ok(pairs)
}

/// Parses a comma-separated list of positive reals.
pub fn parse_dts(s: &str) -> CliResult<Vec<f64>> {
    let mut v = Vec::new();
    for t in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let x: f64 = t.parse().map_err(|_| CliError::Invalid(format!("`{t}` is not a number")))?;
        if !(x > 0.0 && x.is_finite()) {
            return Err(CliError::Invalid(format!("time step {x} must be positive")));
        }
        v.push(x);
    }
    if v.is_empty() {
        return Err(CliError::Invalid("empty time step list".into()));
    }
    Ok(v)
}

pub fn run_doeblin_table(a: &DoeblinTableArgs) -> CliResult<String> {
    let pairs = parse_pairs(&a.pairs)?;
    if a.dim < 2 {
        return Err(CliError::Invalid("--dim must be at least 2".into()));
    }
    let seed = dephasing(1.0, a.dim)?;
    let mut out = String::from("p,q,delta_A,delta_B,delta_AB\n");
    let mut summary = String::from("doeblin-table:");
    for (p, q) in pairs {
        let r = product_bound_check(&dephasing(p, a.dim)?, &dephasing(q, a.dim)?, &seed, &seed, DEFAULT_TOL)?;
        out.push_str(&csv_row(&[p, q, r.delta_a, r.delta_b, r.delta_ab]));
        let _ = write!(
            summary,
            "\n  p={p} q={q}: delta_AB={:.9} vs product {:.9} ({})",
            r.delta_ab,
            r.delta_a * r.delta_b,
            if r.holds { "bound holds" } else { "BOUND FAILS" }
        );
    }
    write_file(&a.out, &out)?;
    Ok(summary)
}

fn certificate_json(
    cert: &MixingCertificate,
    digest: &str,
    dt: Option<f64>,
    target: Option<(f64, f64)>,
) -> CliResult<Value> {
    let mut m = Map::new();
    m.insert("epsilon_hat".into(), json!(cert.epsilon_hat));
    m.insert("alpha".into(), json!(cert.alpha));
    m.insert("alpha_prime".into(), json!(cert.alpha_prime));
    m.insert("per_outcome_lower".into(), json!(cert.per_outcome_lower));
    m.insert("clamped".into(), json!(cert.clamped));
    m.insert("vacuous".into(), json!(cert.vacuous));
    if let Some(dt) = dt {
        let g = match certify::rate_from_epsilon(cert.epsilon_hat, dt)? {
            Rate::Finite(g) => json!(g),
            Rate::Infinite => json!("infinite"),
        };
        m.insert("gamma_hat".into(), g);
        m.insert("dt".into(), json!(dt));
    }
    if let Some((target, d0)) = target {
        let k = match certify::step_bound(cert, target, d0)? {
            StepBound::Steps(k) => json!(k),
            StepBound::NoCertificate => json!("no-certificate"),
        };
        m.insert("step_bound".into(), k);
        m.insert("target".into(), json!(target));
        m.insert("initial_distance".into(), json!(d0));
    } else if cert.vacuous {
        m.insert("step_bound".into(), json!("no-certificate"));
    }
    m.insert("input_sha".into(), json!(digest));
    Ok(Value::Object(m))
}

pub fn run_certify(a: &CertifyArgs) -> CliResult<String> {
    let target = match (a.target, a.initial_distance) {
        (Some(t), Some(d)) => Some((t, d)),
        (None, None) => None,
        _ => return Err(CliError::Invalid("--target and --initial-distance go together".into())),
    };
    let mut components = Vec::new();
    let mut epsilons = Vec::new();
    for path in &a.counts {
        let bytes = fs::read(path).map_err(|e| io_err(path, e))?;
        let digest = hex::encode(Sha256::digest(&bytes));
        let table = CountTable::from_csv(bytes.as_slice(), !a.overlapping)?;
        let cert = certify::epsilon_hat(&table, a.alpha)?;
        epsilons.push(cert.epsilon_hat);
        components.push(certificate_json(&cert, &digest, a.dt, target)?);
    }
    let doc = if components.len() == 1 {
        components.pop().expect("one component")
    } else {
        json!({
            "components": components,
            "epsilon_comp": certify::compose(&epsilons),
        })
    };
    let text = serde_json::to_string_pretty(&doc).map_err(|e| CliError::Invalid(e.to_string()))? + "\n";
    write_file(&a.out, &text)?;
    let mut summary = format!("certify: epsilon_hat = {:?}", epsilons);
    if epsilons.len() > 1 {
        let _ = write!(summary, ", composed {}", certify::compose(&epsilons));
    }
    Ok(summary)
}

pub fn run_lindblad_sweep(a: &LindbladSweepArgs) -> CliResult<String> {
    let dts = parse_dts(&a.dts)?;
    let g = match a.family {
        Family::Depolarizing => lindblad::depolarizing_generator(a.kappa)?,
        Family::AmplitudeDamping => lindblad::amplitude_damping_generator(a.kappa)?,
    };
    let tau = lindblad::stationary_state(&g)?;
    let seed = replacement(&tau)?;
    let mode = match a.mode {
        Mode::Exact => StepMode::Exact,
        Mode::FirstOrder => StepMode::FirstOrder,
    };
    let rows = lindblad::limit_sweep(&g, &seed, &dts, a.t, mode)?;
    let mut out = String::from("dt,epsilon,gamma,embed_error\n");
    for r in &rows {
        out.push_str(&csv_row(&[r.dt, r.epsilon, r.gamma, r.embed_error]));
    }
    write_file(&a.out, &out)?;
    let errs: Vec<f64> = rows.iter().map(|r| r.embed_error).collect();
    let slope = if errs.iter().all(|&e| e < 1e-12) {
        "n/a (errors at rounding level)".to_string()
    } else {
        lindblad::log_log_slope(&dts, &errs)
            .map(|s| format!("{s:.4}"))
            .unwrap_or_else(|_| "n/a".into())
    };
    Ok(format!(
        "lindblad-sweep: seed = replacement by stationary state diag({:.6}, {:.6}); embed_error log-log slope {slope}",
        tau[(0, 0)].re,
        tau[(1, 1)].re
    ))
}

pub fn run_diamond_check(a: &DiamondCheckArgs) -> CliResult<String> {
    let preset = DiamondPreset::parse(&a.preset).ok_or_else(|| {
        CliError::Invalid(format!(
            "unknown preset `{}` (expected identity, swap-rank-one or dephasing-zz)",
            a.preset
        ))
    })?;
    if a.restarts == 0 {
        return Err(CliError::Invalid("--restarts must be positive".into()));
    }
    let report = preset.run(a.restarts, a.seed)?;
    let mut doc = serde_json::to_value(&report).map_err(|e| CliError::Invalid(e.to_string()))?;
    doc["preset"] = json!(preset.name());
    let text = serde_json::to_string_pretty(&doc).map_err(|e| CliError::Invalid(e.to_string()))? + "\n";
    write_file(&a.out, &text)?;
    Ok(format!(
        "diamond-check {}: lower {:.6}, upper {:.6}, rhs {:.6}, verdict {}",
        preset.name(),
        report.lower,
        report.upper,
        report.theorem_rhs,
        report.verdict
    ))
}

pub fn run_equality_scan(a: &EqualityScanArgs) -> CliResult<String> {
    if a.thetas == 0 {
        return Err(CliError::Invalid("--thetas must be positive".into()));
    }
    let mut out = String::from("theta,max_value,bound,phi,chi,window_distance\n");
    let mut worst_gap: f64 = 0.0;
    let mut worst_dist: f64 = 0.0;
    for k in 1..=a.thetas {
        let theta = std::f64::consts::FRAC_PI_2 * k as f64 / (a.thetas + 1) as f64;
        let scan = order::equality_window_scan(theta, a.samples, a.seed)?;
        let bound = 0.5 * (2.0 * theta).sin().abs();
        let dist = order::window_angular_distance(&scan.argmax);
        worst_gap = worst_gap.max((scan.max_value - bound).abs());
        worst_dist = worst_dist.max(dist);
        out.push_str(&csv_row(&[theta, scan.max_value, bound, scan.phi, scan.chi, dist]));
    }
    write_file(&a.out, &out)?;
    Ok(format!(
        "equality-scan: {} angles, max |max - bound| = {worst_gap:e}, max window distance = {worst_dist:e}",
        a.thetas
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn six_decimals() {
        assert_eq!(fmt6(0.1), "0.100000");
        assert_eq!(fmt6(-0.0), "0.000000");
        assert_eq!(fmt6(-1e-9), "0.000000");
        assert_eq!(fmt6(f64::INFINITY), "inf");
    }

    #[test]
    fn pair_parsing() {
        assert_eq!(parse_pairs("0.2:0.5, 0.3:0.3").unwrap(), vec![(0.2, 0.5), (0.3, 0.3)]);
        assert!(parse_pairs("0.2-0.5").is_err());
        assert!(parse_pairs("1.2:0.5").is_err());
        assert!(parse_pairs("").is_err());
    }

    #[test]
    fn dt_parsing() {
        assert_eq!(parse_dts("0.2,0.1").unwrap(), vec![0.2, 0.1]);
        assert!(parse_dts("").is_err());
        assert!(parse_dts("0.1,0").is_err());
    }

    #[test]
    fn error_codes() {
        let e: CliError = ordmix::Error::InvalidParameter("x".into()).into();
        assert_eq!(e.exit_code(), 2);
        let e: CliError = ordmix::Error::NotCompletelyPositive { min_eig: -1.0 }.into();
        assert_eq!(e.exit_code(), 3);
    }
}
