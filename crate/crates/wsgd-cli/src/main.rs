//! Command-line frontend for the fractional advection–diffusion toolkit:
//! weight inspection, stability scans, single solves, convergence studies,
//! and plot-ready figure data.
//!
//! Every subcommand option can also be supplied through a flat `key=value`
//! config file (`--config`); command-line flags override config values and
//! unknown config keys are rejected. Exit status: 0 on success, 1 on a
//! usage error, 2 on a numeric failure.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use wsgd::{
    convergence_study_1d, convergence_study_2d, emit_q_curves, emit_table, error_constant,
    example1, example2, fused_weights, grunwald_weights, max_abs_q, max_error_1d, max_error_2d,
    params_from_set, scan_region, solve_adi, solve_cn_1d, solve_implicit_1d, uniform_grid,
    wsgd_weights, AdiVariant, CanonicalTriple, ErrorNorm, FractionalOrder, ParamSet, Scheme1D,
    StabilityReport, StorePolicy, TableFormat, TauRule, ThetaGrid, WsgdError,
};

/// Environment variable naming the directory that relative `--output`
/// paths are resolved against.
const OUTPUT_DIR_ENV: &str = "WSGD_OUTPUT_DIR";

const AFTER_HELP: &str = "\
Cases:           example1 (1D), example2 (2D)
Schemes:         implicit, cn (1D); pr, douglas, dyakonov (2D ADI)
Parameter sets:  S1, S2, S3 (free lambda1, lambda2, lambda3 respectively)
Numbers:         plain decimals or exact rationals like 1/10
Tau rules:       h, h2, h/<d>, fixed=<tau>
Norms:           final (final-time max), all (all-levels max)
Formats:         csv, markdown

Config files are flat key=value text, one pair per line, '#' comments;
keys mirror the long flag names with dashes replaced by underscores.
Relative --output paths resolve under $WSGD_OUTPUT_DIR when it is set.";

#[derive(Parser)]
#[command(
    name = "wsgd-cli",
    about = "Second-order fractional advection-diffusion solvers and stability analysis",
    after_help = AFTER_HELP,
    version
)]
struct Cli {
    /// Flat key=value config file supplying defaults for the subcommand.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print Grünwald weights, or the fused stencil weights of a triple.
    Weights(WeightsArgs),
    /// Evaluate max |Q| for a family member or scan a free-parameter range.
    Stability(StabilityArgs),
    /// Run a single solve of a named example case and emit the solution.
    Solve(SolveArgs),
    /// Run a grid-refinement convergence study and emit the error table.
    Converge(ConvergeArgs),
    /// Emit plot-ready Q(theta) curve data for chosen family members.
    Figures(FiguresArgs),
}

#[derive(Args, Default)]
struct WeightsArgs {
    /// Fractional order alpha in (1, 2].
    #[arg(long)]
    alpha: Option<String>,
    /// Number of weights to print.
    #[arg(long)]
    count: Option<String>,
    /// Parameter set (S1, S2, S3) for fused weights.
    #[arg(long)]
    set: Option<String>,
    /// Free weight value for the chosen set.
    #[arg(long, allow_hyphen_values = true)]
    free: Option<String>,
    /// Canonical triple index (1, 2, or 3); also reports its error constant.
    #[arg(long, conflicts_with_all = ["set", "free"])]
    canonical: Option<String>,
    /// Output file (stdout when omitted).
    #[arg(long)]
    output: Option<String>,
}

#[derive(Args, Default)]
struct StabilityArgs {
    /// Parameter set to scan over a free-value range.
    #[arg(long)]
    scan: Option<String>,
    /// Scan range lower end.
    #[arg(long, allow_hyphen_values = true)]
    lo: Option<String>,
    /// Scan range upper end.
    #[arg(long, allow_hyphen_values = true)]
    hi: Option<String>,
    /// Scan step.
    #[arg(long, allow_hyphen_values = true)]
    step: Option<String>,
    /// Parameter set for a single max|Q| evaluation.
    #[arg(long, conflicts_with = "scan")]
    set: Option<String>,
    /// Free weight value for --set.
    #[arg(long, allow_hyphen_values = true)]
    free: Option<String>,
    /// Evaluate at a single order instead of the whole alpha grid.
    #[arg(long)]
    alpha: Option<String>,
    /// Number of theta samples on [0, pi].
    #[arg(long)]
    theta_count: Option<String>,
    /// Alpha grid lower end.
    #[arg(long)]
    alpha_lo: Option<String>,
    /// Alpha grid upper end.
    #[arg(long)]
    alpha_hi: Option<String>,
    /// Number of alpha samples.
    #[arg(long)]
    alpha_count: Option<String>,
    /// Output file (stdout when omitted).
    #[arg(long)]
    output: Option<String>,
}

#[derive(Args, Default)]
struct SolveArgs {
    /// Example case: example1 (1D) or example2 (2D).
    #[arg(long)]
    case: Option<String>,
    /// Scheme: implicit, cn, pr, douglas, dyakonov.
    #[arg(long)]
    scheme: Option<String>,
    /// Parameter set for the (x-)axis operator.
    #[arg(long)]
    set: Option<String>,
    /// Free weight value for --set.
    #[arg(long, allow_hyphen_values = true)]
    free: Option<String>,
    /// Fractional order alpha (x axis).
    #[arg(long)]
    alpha: Option<String>,
    /// Fractional order beta (y axis, 2D only).
    #[arg(long)]
    beta: Option<String>,
    /// Parameter set for the y-axis operator (defaults to --set).
    #[arg(long)]
    set_y: Option<String>,
    /// Free weight value for the y-axis set (defaults to --free).
    #[arg(long, allow_hyphen_values = true)]
    free_y: Option<String>,
    /// Number of grid intervals per axis.
    #[arg(long)]
    n: Option<String>,
    /// Time-step rule: h, h2, h/<d>, fixed=<tau>.
    #[arg(long)]
    tau_rule: Option<String>,
    /// Error norm for the reported error: final or all.
    #[arg(long)]
    norm: Option<String>,
    /// Output file (stdout when omitted).
    #[arg(long)]
    output: Option<String>,
}

#[derive(Args, Default)]
struct ConvergeArgs {
    /// Example case: example1 (1D) or example2 (2D).
    #[arg(long)]
    case: Option<String>,
    /// Scheme: implicit, cn, pr, douglas, dyakonov.
    #[arg(long)]
    scheme: Option<String>,
    /// Parameter set for the (x-)axis operator.
    #[arg(long)]
    set: Option<String>,
    /// Free weight value for --set.
    #[arg(long, allow_hyphen_values = true)]
    free: Option<String>,
    /// Fractional order alpha (x axis).
    #[arg(long)]
    alpha: Option<String>,
    /// Fractional order beta (y axis, 2D only).
    #[arg(long)]
    beta: Option<String>,
    /// Parameter set for the y-axis operator (defaults to --set).
    #[arg(long)]
    set_y: Option<String>,
    /// Free weight value for the y-axis set (defaults to --free).
    #[arg(long, allow_hyphen_values = true)]
    free_y: Option<String>,
    /// Comma-separated grid steps, e.g. 1/10,1/20,1/40.
    #[arg(long)]
    h: Option<String>,
    /// Time-step rule: h, h2, h/<d>, fixed=<tau>.
    #[arg(long)]
    tau_rule: Option<String>,
    /// Error norm: final or all.
    #[arg(long)]
    norm: Option<String>,
    /// Table format: csv or markdown.
    #[arg(long)]
    format: Option<String>,
    /// Output file (stdout when omitted).
    #[arg(long)]
    output: Option<String>,
}

#[derive(Args, Default)]
struct FiguresArgs {
    /// Family member as SET=FREE, e.g. S1=1.0; repeatable.
    #[arg(long = "member")]
    members: Vec<String>,
    /// Comma-separated orders, e.g. 1.2,1.5,1.8.
    #[arg(long)]
    alphas: Option<String>,
    /// Number of theta samples on [0, pi].
    #[arg(long)]
    theta_count: Option<String>,
    /// Output file (stdout when omitted).
    #[arg(long)]
    output: Option<String>,
}

/// Failure modes mapped onto the two nonzero exit codes.
enum CliError {
    Usage(String),
    Numeric(String),
}

impl From<WsgdError> for CliError {
    fn from(e: WsgdError) -> Self {
        CliError::Numeric(e.to_string())
    }
}

type CliResult<T> = Result<T, CliError>;

fn usage<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Usage(msg.into()))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Numeric(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cli: Cli) -> CliResult<()> {
    let config = match &cli.config {
        Some(path) => load_config(path)?,
        None => BTreeMap::new(),
    };
    match cli.command {
        Command::Weights(a) => run_weights(merged(a, &config)?),
        Command::Stability(a) => run_stability(merged(a, &config)?),
        Command::Solve(a) => run_solve(merged(a, &config)?),
        Command::Converge(a) => run_converge(merged(a, &config)?),
        Command::Figures(a) => run_figures(merged(a, &config)?),
    }
}

// ---------------------------------------------------------------------------
// Config handling

/// Parses a flat `key=value` file ('#' starts a comment, blank lines ok).
fn load_config(path: &Path) -> CliResult<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config '{}': {e}", path.display())))?;
    let mut map = BTreeMap::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return usage(format!(
                "config '{}' line {}: expected key=value, got '{raw}'",
                path.display(),
                ln + 1
            ));
        };
        let key = key.trim().to_string();
        if map.insert(key.clone(), value.trim().to_string()).is_some() {
            return usage(format!("config '{}': duplicate key '{key}'", path.display()));
        }
    }
    Ok(map)
}

/// A subcommand whose optional fields can be backfilled from a config map.
trait Mergeable {
    /// `(config_key, slot)` pairs; keys mirror flag names with underscores.
    fn slots(&mut self) -> Vec<(&'static str, &mut Option<String>)>;
    /// Keys handled outside the scalar slots (repeatable flags).
    fn consume_extra(&mut self, _key: &str, _value: &str) -> bool {
        false
    }
}

/// Fills unset options from the config and rejects unknown keys.
fn merged<T: Mergeable>(mut args: T, config: &BTreeMap<String, String>) -> CliResult<T> {
    for (key, value) in config {
        let mut known = false;
        for (name, slot) in args.slots() {
            if name == key {
                known = true;
                if slot.is_none() {
                    *slot = Some(value.clone());
                }
                break;
            }
        }
        if !known && !args.consume_extra(key, value) {
            return usage(format!("unknown config key '{key}'"));
        }
    }
    Ok(args)
}

impl Mergeable for WeightsArgs {
    fn slots(&mut self) -> Vec<(&'static str, &mut Option<String>)> {
        vec![
            ("alpha", &mut self.alpha),
            ("count", &mut self.count),
            ("set", &mut self.set),
            ("free", &mut self.free),
            ("canonical", &mut self.canonical),
            ("output", &mut self.output),
        ]
    }
}

impl Mergeable for StabilityArgs {
    fn slots(&mut self) -> Vec<(&'static str, &mut Option<String>)> {
        vec![
            ("scan", &mut self.scan),
            ("lo", &mut self.lo),
            ("hi", &mut self.hi),
            ("step", &mut self.step),
            ("set", &mut self.set),
            ("free", &mut self.free),
            ("alpha", &mut self.alpha),
            ("theta_count", &mut self.theta_count),
            ("alpha_lo", &mut self.alpha_lo),
            ("alpha_hi", &mut self.alpha_hi),
            ("alpha_count", &mut self.alpha_count),
            ("output", &mut self.output),
        ]
    }
}

impl Mergeable for SolveArgs {
    fn slots(&mut self) -> Vec<(&'static str, &mut Option<String>)> {
        vec![
            ("case", &mut self.case),
            ("scheme", &mut self.scheme),
            ("set", &mut self.set),
            ("free", &mut self.free),
            ("alpha", &mut self.alpha),
            ("beta", &mut self.beta),
            ("set_y", &mut self.set_y),
            ("free_y", &mut self.free_y),
            ("n", &mut self.n),
            ("tau_rule", &mut self.tau_rule),
            ("norm", &mut self.norm),
            ("output", &mut self.output),
        ]
    }
}

impl Mergeable for ConvergeArgs {
    fn slots(&mut self) -> Vec<(&'static str, &mut Option<String>)> {
        vec![
            ("case", &mut self.case),
            ("scheme", &mut self.scheme),
            ("set", &mut self.set),
            ("free", &mut self.free),
            ("alpha", &mut self.alpha),
            ("beta", &mut self.beta),
            ("set_y", &mut self.set_y),
            ("free_y", &mut self.free_y),
            ("h", &mut self.h),
            ("tau_rule", &mut self.tau_rule),
            ("norm", &mut self.norm),
            ("format", &mut self.format),
            ("output", &mut self.output),
        ]
    }
}

impl Mergeable for FiguresArgs {
    fn slots(&mut self) -> Vec<(&'static str, &mut Option<String>)> {
        vec![
            ("alphas", &mut self.alphas),
            ("theta_count", &mut self.theta_count),
            ("output", &mut self.output),
        ]
    }

    fn consume_extra(&mut self, key: &str, value: &str) -> bool {
        if key == "member" {
            if self.members.is_empty() {
                self.members = value.split(',').map(|s| s.trim().to_string()).collect();
            }
            return true;
        }
        false
    }
}

// ---------------------------------------------------------------------------
// Value parsing

/// Parses a decimal or exact-rational (`num/den`) number.
fn parse_number(what: &str, s: &str) -> CliResult<f64> {
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let n: f64 = num
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("{what}: bad numerator in '{s}'")))?;
        let d: f64 = den
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("{what}: bad denominator in '{s}'")))?;
        if d == 0.0 {
            return usage(format!("{what}: zero denominator in '{s}'"));
        }
        return Ok(n / d);
    }
    s.parse().map_err(|_| CliError::Usage(format!("{what}: bad number '{s}'")))
}

fn parse_count(what: &str, s: &str) -> CliResult<usize> {
    s.trim().parse().map_err(|_| CliError::Usage(format!("{what}: bad count '{s}'")))
}

fn require<'a>(what: &str, v: &'a Option<String>) -> CliResult<&'a str> {
    v.as_deref().ok_or_else(|| CliError::Usage(format!("missing required option --{what}")))
}

fn parse_order(what: &str, s: &str) -> CliResult<FractionalOrder> {
    let v = parse_number(what, s)?;
    FractionalOrder::new(v).map_err(|e| CliError::Usage(format!("{what}: {e}")))
}

fn parse_set(what: &str, s: &str) -> CliResult<ParamSet> {
    s.parse().map_err(|e| CliError::Usage(format!("{what}: {e}")))
}

fn parse_number_list(what: &str, s: &str) -> CliResult<Vec<f64>> {
    s.split(',').map(|part| parse_number(what, part)).collect()
}

/// Display form rounded to 12 significant digits, so values that are exact
/// in decimal (like 0.0625) print without trailing recurrence noise.
fn fmt_num(v: f64) -> String {
    let rounded: f64 = format!("{v:.12e}").parse().expect("round-trip of a finite float");
    format!("{rounded}")
}

/// Resolves relative output paths under `$WSGD_OUTPUT_DIR` when set.
fn resolve_output(path: &str) -> PathBuf {
    let p = PathBuf::from(path);
    if p.is_relative() {
        if let Ok(dir) = std::env::var(OUTPUT_DIR_ENV) {
            if !dir.is_empty() {
                return PathBuf::from(dir).join(p);
            }
        }
    }
    p
}

/// Writes to the resolved output path, or stdout when no path is given.
fn write_output(output: &Option<String>, text: &str) -> CliResult<()> {
    match output {
        Some(path) => {
            let path = resolve_output(path);
            if let Some(parent) = path.parent() {
                if !parent.as_os_str().is_empty() {
                    std::fs::create_dir_all(parent).map_err(|e| {
                        CliError::Usage(format!("cannot create '{}': {e}", parent.display()))
                    })?;
                }
            }
            std::fs::write(&path, text).map_err(|e| {
                CliError::Usage(format!("cannot write '{}': {e}", path.display()))
            })
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

// ---------------------------------------------------------------------------
// Subcommands

fn run_weights(a: WeightsArgs) -> CliResult<()> {
    let alpha = parse_order("alpha", require("alpha", &a.alpha)?)?;
    let count = parse_count("count", require("count", &a.count)?)?;
    if count == 0 {
        return usage("count must be at least 1");
    }
    let mut out = String::new();
    if let Some(canonical) = &a.canonical {
        let triple = match canonical.trim() {
            "1" => CanonicalTriple::First,
            "2" => CanonicalTriple::Second,
            "3" => CanonicalTriple::Third,
            other => return usage(format!("canonical: expected 1, 2, or 3, got '{other}'")),
        };
        let params = triple.params(alpha);
        let [l1, l2, l3] = params.lambda();
        out.push_str(&format!("lambda = ({l1}, {l2}, {l3})\n"));
        out.push_str(&format!("error_constant = {}\n", error_constant(alpha, triple)));
        for g in fused_weights(alpha, params.lambda(), count) {
            out.push_str(&fmt_num(g));
            out.push('\n');
        }
    } else if let Some(set) = &a.set {
        let set = parse_set("set", set)?;
        let free = parse_number("free", require("free", &a.free)?)?;
        let params = params_from_set(set, free, alpha);
        let [l1, l2, l3] = params.lambda();
        out.push_str(&format!("lambda = ({l1}, {l2}, {l3})\n"));
        for g in wsgd_weights(&params, count).g {
            out.push_str(&fmt_num(g));
            out.push('\n');
        }
    } else {
        if a.free.is_some() {
            return usage("--free requires --set");
        }
        for w in grunwald_weights(alpha, count).w {
            out.push_str(&fmt_num(w));
            out.push('\n');
        }
    }
    write_output(&a.output, &out)
}

fn run_stability(a: StabilityArgs) -> CliResult<()> {
    let theta_count = match &a.theta_count {
        Some(s) => parse_count("theta-count", s)?,
        None => 2001,
    };
    let theta = ThetaGrid::uniform(theta_count)?;
    let alpha_lo = match &a.alpha_lo {
        Some(s) => parse_number("alpha-lo", s)?,
        None => 1.0,
    };
    let alpha_hi = match &a.alpha_hi {
        Some(s) => parse_number("alpha-hi", s)?,
        None => 2.0,
    };
    let alpha_count = match &a.alpha_count {
        Some(s) => parse_count("alpha-count", s)?,
        None => 101,
    };
    let alphas = uniform_grid(alpha_lo, alpha_hi, alpha_count);

    let mut out = String::new();
    if let Some(scan) = &a.scan {
        let set = parse_set("scan", scan)?;
        let lo = parse_number("lo", require("lo", &a.lo)?)?;
        let hi = parse_number("hi", require("hi", &a.hi)?)?;
        let step = parse_number("step", require("step", &a.step)?)?;
        let intervals = scan_region(set, (lo, hi), step, &theta, &alphas)?;
        if intervals.is_empty() {
            out.push_str("no admissible sub-interval found\n");
        }
        for (s, e) in intervals {
            out.push_str(&format!("{set}: [{s}, {e}]\n"));
        }
    } else if let Some(set) = &a.set {
        let set = parse_set("set", set)?;
        let free = parse_number("free", require("free", &a.free)?)?;
        match &a.alpha {
            Some(s) => {
                let alpha = parse_order("alpha", s)?;
                let report = StabilityReport::sample(&params_from_set(set, free, alpha), &theta);
                out.push_str(&format!(
                    "{set}({free}) alpha={}: max|Q| = {}, Q_nonpositive = {}\n",
                    alpha.get(),
                    report.q_max_abs,
                    report.q_all_nonpositive
                ));
            }
            None => {
                let m = max_abs_q(set, free, &theta, &alphas);
                out.push_str(&format!(
                    "{set}({free}) alpha in [{alpha_lo}, {alpha_hi}]: max|Q| = {m}\n"
                ));
            }
        }
    } else {
        return usage("stability requires either --scan or --set");
    }
    write_output(&a.output, &out)
}

/// Which example a scheme name belongs to, and the parsed scheme.
enum SchemeKind {
    OneD(Scheme1D),
    TwoD(AdiVariant),
}

fn parse_scheme(s: &str) -> CliResult<SchemeKind> {
    match s.trim().to_ascii_lowercase().as_str() {
        "implicit" => Ok(SchemeKind::OneD(Scheme1D::Implicit)),
        "cn" | "crank-nicolson" => Ok(SchemeKind::OneD(Scheme1D::CrankNicolson)),
        "pr" | "peaceman-rachford" => Ok(SchemeKind::TwoD(AdiVariant::PeacemanRachford)),
        "douglas" => Ok(SchemeKind::TwoD(AdiVariant::Douglas)),
        "dyakonov" => Ok(SchemeKind::TwoD(AdiVariant::DYakonov)),
        other => usage(format!(
            "unknown scheme '{other}' (expected implicit, cn, pr, douglas, or dyakonov)"
        )),
    }
}

fn parse_norm(v: &Option<String>) -> CliResult<ErrorNorm> {
    match v {
        Some(s) => s.parse().map_err(|e| CliError::Usage(format!("norm: {e}"))),
        None => Ok(ErrorNorm::FinalTimeMax),
    }
}

fn parse_tau_rule(v: &Option<String>) -> CliResult<TauRule> {
    require("tau-rule", v)?
        .parse()
        .map_err(|e| CliError::Usage(format!("tau-rule: {e}")))
}

/// Shared solve/converge plumbing: case and axis-parameter resolution.
struct AxisParams {
    x: wsgd::WsgdParams,
    y: Option<wsgd::WsgdParams>,
}

fn resolve_params(
    scheme: &SchemeKind,
    set: &Option<String>,
    free: &Option<String>,
    alpha: &Option<String>,
    beta: &Option<String>,
    set_y: &Option<String>,
    free_y: &Option<String>,
) -> CliResult<AxisParams> {
    let set_x = parse_set("set", require("set", set)?)?;
    let free_x = parse_number("free", require("free", free)?)?;
    let alpha = parse_order("alpha", require("alpha", alpha)?)?;
    match scheme {
        SchemeKind::OneD(_) => {
            if beta.is_some() || set_y.is_some() || free_y.is_some() {
                return usage("--beta/--set-y/--free-y apply only to 2D schemes");
            }
            Ok(AxisParams { x: params_from_set(set_x, free_x, alpha), y: None })
        }
        SchemeKind::TwoD(_) => {
            let beta = parse_order("beta", require("beta", beta)?)?;
            let sy = match set_y {
                Some(s) => parse_set("set-y", s)?,
                None => set_x,
            };
            let fy = match free_y {
                Some(s) => parse_number("free-y", s)?,
                None => free_x,
            };
            Ok(AxisParams {
                x: params_from_set(set_x, free_x, alpha),
                y: Some(params_from_set(sy, fy, beta)),
            })
        }
    }
}

fn check_case(case: &str, scheme: &SchemeKind) -> CliResult<()> {
    match (case, scheme) {
        ("example1", SchemeKind::OneD(_)) | ("example2", SchemeKind::TwoD(_)) => Ok(()),
        ("example1", SchemeKind::TwoD(_)) => usage("example1 is 1D; use implicit or cn"),
        ("example2", SchemeKind::OneD(_)) => usage("example2 is 2D; use pr, douglas, or dyakonov"),
        (other, _) => usage(format!("unknown case '{other}' (expected example1 or example2)")),
    }
}

fn run_solve(a: SolveArgs) -> CliResult<()> {
    let case = require("case", &a.case)?.trim().to_ascii_lowercase();
    let scheme = parse_scheme(require("scheme", &a.scheme)?)?;
    check_case(&case, &scheme)?;
    let params = resolve_params(&scheme, &a.set, &a.free, &a.alpha, &a.beta, &a.set_y, &a.free_y)?;
    let n = parse_count("n", require("n", &a.n)?)?;
    let tau_rule = parse_tau_rule(&a.tau_rule)?;
    let norm = parse_norm(&a.norm)?;
    let store = match norm {
        ErrorNorm::FinalTimeMax => StorePolicy::FinalOnly,
        ErrorNorm::AllLevelsMax => StorePolicy::AllLevels,
    };

    let mut out = String::new();
    match scheme {
        SchemeKind::OneD(s) => {
            let case = example1(params.x.alpha())?;
            let p = &case.problem;
            let h = (p.b - p.a) / n as f64;
            let nt = tau_rule.steps(h, p.t_final);
            let traj = match s {
                Scheme1D::Implicit => solve_implicit_1d(p, &params.x, n, nt, store)?,
                Scheme1D::CrankNicolson => solve_cn_1d(p, &params.x, n, nt, store)?,
            };
            let (t, u) = traj.levels.last().expect("at least the final level is stored");
            out.push_str(&format!("# t = {t}, tau = {}\n", traj.tau));
            out.push_str("x,u\n");
            for (j, v) in u.iter().enumerate() {
                out.push_str(&format!("{:.16e},{v:.16e}\n", traj.grid.node(j)));
            }
            if p.exact.is_some() {
                let err = max_error_1d(&traj, p.exact.as_ref(), norm)?;
                out.push_str(&format!("# max_error = {err:.6e}\n"));
            }
        }
        SchemeKind::TwoD(variant) => {
            let py = params.y.as_ref().expect("2D schemes resolve y-axis params");
            let case = example2(params.x.alpha(), py.alpha())?;
            let p = &case.problem;
            let h = (p.bx - p.ax) / n as f64;
            let nt = tau_rule.steps(h, p.t_final);
            let traj = solve_adi(p, variant, &params.x, py, n, n, nt, store)?;
            let (t, u) = traj.levels.last().expect("at least the final level is stored");
            out.push_str(&format!("# t = {t}, tau = {}\n", traj.tau));
            out.push_str("x,y,u\n");
            for j in 0..u.nrows() {
                for m in 0..u.ncols() {
                    out.push_str(&format!(
                        "{:.16e},{:.16e},{:.16e}\n",
                        traj.grid.gx.node(j),
                        traj.grid.gy.node(m),
                        u[(j, m)]
                    ));
                }
            }
            if p.exact.is_some() {
                let err = max_error_2d(&traj, p.exact.as_ref(), norm)?;
                out.push_str(&format!("# max_error = {err:.6e}\n"));
            }
        }
    }
    write_output(&a.output, &out)
}

fn run_converge(a: ConvergeArgs) -> CliResult<()> {
    let case = require("case", &a.case)?.trim().to_ascii_lowercase();
    let scheme = parse_scheme(require("scheme", &a.scheme)?)?;
    check_case(&case, &scheme)?;
    let params = resolve_params(&scheme, &a.set, &a.free, &a.alpha, &a.beta, &a.set_y, &a.free_y)?;
    let hs = parse_number_list("h", require("h", &a.h)?)?;
    let tau_rule = parse_tau_rule(&a.tau_rule)?;
    let norm = parse_norm(&a.norm)?;
    let format: TableFormat = match &a.format {
        Some(s) => s.parse().map_err(|e| CliError::Usage(format!("format: {e}")))?,
        None => TableFormat::Csv,
    };

    let rows = match scheme {
        SchemeKind::OneD(s) => {
            let case = example1(params.x.alpha())?;
            let n_list = steps_from_h(&hs, case.problem.b - case.problem.a)?;
            convergence_study_1d(&case, s, &params.x, &n_list, tau_rule, norm)?
        }
        SchemeKind::TwoD(variant) => {
            let py = params.y.as_ref().expect("2D schemes resolve y-axis params");
            let case = example2(params.x.alpha(), py.alpha())?;
            let n_list = steps_from_h(&hs, case.problem.bx - case.problem.ax)?;
            convergence_study_2d(&case, variant, &params.x, py, &n_list, tau_rule, norm)?
        }
    };
    write_output(&a.output, &emit_table(&rows, format)?)
}

/// Converts grid steps to interval counts, requiring an exact division of
/// the domain length.
fn steps_from_h(hs: &[f64], length: f64) -> CliResult<Vec<usize>> {
    let mut out = Vec::with_capacity(hs.len());
    for &h in hs {
        if h <= 0.0 {
            return usage(format!("grid step must be positive, got {h}"));
        }
        let n = (length / h).round();
        if n < 2.0 || ((length / n) - h).abs() > 1e-12 * h {
            return usage(format!("grid step {h} does not evenly divide the domain length {length}"));
        }
        out.push(n as usize);
    }
    Ok(out)
}

fn run_figures(a: FiguresArgs) -> CliResult<()> {
    if a.members.is_empty() {
        return usage("figures requires at least one --member SET=FREE");
    }
    let mut members = Vec::with_capacity(a.members.len());
    for m in &a.members {
        let Some((set, free)) = m.split_once('=') else {
            return usage(format!("member: expected SET=FREE, got '{m}'"));
        };
        members.push((parse_set("member", set)?, parse_number("member", free)?));
    }
    let alphas = parse_number_list("alphas", require("alphas", &a.alphas)?)?;
    let theta_count = match &a.theta_count {
        Some(s) => parse_count("theta-count", s)?,
        None => 2001,
    };
    let theta = ThetaGrid::uniform(theta_count)?;
    write_output(&a.output, &emit_q_curves(&members, &alphas, &theta))
}
