//! `schatten-lab`: Schatten norms and numerical checks of Schatten-class
//! norm inequalities.
//!
//! Exit status: 0 on success, 1 when an inequality is violated, 2 on usage,
//! parse or precondition errors.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use schatten_lab::campaign::{run_verify, VerifyConfig, DEFAULT_P_GRID};
use schatten_lab::format::parse_matrix;
use schatten_lab::ineq::{
    run_case, write_reports_csv, CaseId, Constraint, InequalityCase, Instance, InstanceKind, OperatorTuple, ReportRow,
    Sign, Tolerance,
};
use schatten_lab::numfmt::fmt_g17;
use schatten_lab::schatten::schatten_norm;
use schatten_lab::selftest::run_selftest;
use schatten_lab::tightness::{optimize_ratio, sweep, SearchConfig, SweepMode};
use schatten_lab::{ComplexMatrix, Error, PExponent};

const THREADS_ENV: &str = "SCHATTEN_LAB_THREADS";

#[derive(Parser)]
#[command(name = "schatten-lab", version, about = "Schatten p-norms and numerical checks of norm inequalities")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format for reports
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,

    /// Write the report here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Print the Schatten p-norm of a matrix file
    Norm {
        file: PathBuf,
        #[arg(long, value_parser = parse_p)]
        p: PExponent,
    },
    /// Check one inequality on operators read from files
    Check(CheckArgs),
    /// Run a seeded verification campaign
    Verify(VerifyArgs),
    /// Tightness search (or verification) over a grid of exponents
    Sweep(SweepArgs),
    /// Search for instances that make an inequality nearly tight
    Tighten(TightenArgs),
    /// Run the table of hand-computed examples
    Selftest {
        /// Scale every expected value by 1 + PERTURB (mutation test)
        #[arg(long, hide = true, default_value_t = 0.0)]
        perturb: f64,
    },
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long, value_parser = parse_case)]
    case: CaseId,
    /// Exponent; defaults to 2 for the p = 2 identities
    #[arg(long, value_parser = parse_p)]
    p: Option<PExponent>,
    /// Sign for ± cases; both when omitted
    #[arg(long, value_parser = parse_sign)]
    sign: Option<Sign>,
    /// Matrix files: the tuple A_1..A_n (or A and B for Parallelogram)
    files: Vec<PathBuf>,
    /// Partner tuple B_1..B_n for Th1 and Th2
    #[arg(long = "b", num_args = 1..)]
    b_files: Vec<PathBuf>,
    /// Nonnegative scalars for ScalarPower
    #[arg(long, value_delimiter = ',')]
    values: Vec<f64>,
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
}

#[derive(Args)]
struct VerifyArgs {
    /// Case ids, comma separated, or `all`
    #[arg(long, default_value = "all", value_delimiter = ',')]
    case: Vec<String>,
    #[arg(long, value_delimiter = ',', value_parser = parse_p)]
    p_grid: Vec<PExponent>,
    #[arg(long, value_delimiter = ',', default_values_t = [2, 3, 5])]
    n: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_values_t = [2, 4, 8])]
    dim: Vec<usize>,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    /// Restrict ± cases to one sign
    #[arg(long, value_parser = parse_sign)]
    sign: Option<Sign>,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long, value_parser = parse_case)]
    case: CaseId,
    #[arg(long, value_parser = parse_sign, default_value = "plus")]
    sign: Sign,
    #[arg(long, default_value_t = 3)]
    n: usize,
    #[arg(long, default_value_t = 4)]
    dim: usize,
    #[arg(long, default_value_t = 16)]
    restarts: usize,
    #[arg(long, default_value_t = 400)]
    steps: usize,
    #[arg(long, default_value_t = 0.5)]
    initial_step: f64,
    #[arg(long, default_value_t = 0.95)]
    decay: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
}

impl SearchArgs {
    fn config(&self, p: PExponent) -> SearchConfig {
        SearchConfig {
            n: self.n,
            d: self.dim,
            restarts: self.restarts,
            steps: self.steps,
            initial_step: self.initial_step,
            step_decay: self.decay,
            tol: Tolerance::relative(self.tol),
            ..SearchConfig::new(self.case, p, self.sign, self.seed)
        }
    }
}

#[derive(Args)]
struct TightenArgs {
    #[arg(long, value_parser = parse_p)]
    p: PExponent,
    #[command(flatten)]
    search: SearchArgs,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SweepModeArg {
    Search,
    Verify,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, value_delimiter = ',', value_parser = parse_p, required = true)]
    p_grid: Vec<PExponent>,
    #[arg(long, value_enum, default_value_t = SweepModeArg::Search)]
    mode: SweepModeArg,
    /// Trials per grid point in verify mode
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[command(flatten)]
    search: SearchArgs,
}

fn parse_p(s: &str) -> Result<PExponent, String> {
    let x: f64 = s.parse().map_err(|_| format!("not a number: {s:?}"))?;
    PExponent::new(x).map_err(|e| e.to_string())
}

fn parse_case(s: &str) -> Result<CaseId, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_sign(s: &str) -> Result<Sign, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Failure modes mapped onto exit codes.
enum Failure {
    Violation(String),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Violation(_) => Failure::Violation(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(format!("i/o error: {e}"))
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Usage(format!("serialization error: {e}"))
    }
}

type CmdResult = Result<bool, Failure>;

/// Report sink: the `--out` file or stdout.
fn emit(out: Option<&Path>, body: &[u8]) -> io::Result<()> {
    match out {
        Some(path) => fs::write(path, body),
        None => io::stdout().lock().write_all(body),
    }
}

fn json<T: Serialize + ?Sized>(value: &T) -> Result<Vec<u8>, Failure> {
    let mut buf = serde_json::to_vec_pretty(value)?;
    buf.push(b'\n');
    Ok(buf)
}

fn report_body(format: Format, rows: &[ReportRow]) -> Result<Vec<u8>, Failure> {
    match format {
        Format::Json => json(rows),
        Format::Csv => {
            let mut buf = Vec::new();
            write_reports_csv(&mut buf, rows)?;
            Ok(buf)
        }
    }
}

fn read_matrix(path: &Path) -> Result<ComplexMatrix, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    parse_matrix(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn read_all(paths: &[PathBuf]) -> Result<Vec<ComplexMatrix>, Failure> {
    paths.iter().map(|p| read_matrix(p)).collect()
}

fn tolerance(rel: f64) -> Result<Tolerance, Failure> {
    if !(rel.is_finite() && rel >= 0.0) {
        return Err(Failure::Usage(format!("tolerance must be a nonnegative number, got {rel}")));
    }
    Ok(Tolerance::relative(rel))
}

fn cmd_norm(cli: &Cli, file: &Path, p: PExponent) -> CmdResult {
    let m = read_matrix(file)?;
    let value = schatten_norm(&m, p);
    let body = match cli.format {
        Format::Csv => format!("{}\n", fmt_g17(value)).into_bytes(),
        Format::Json => json(&serde_json::json!({ "p": p.value(), "norm": value }))?,
    };
    emit(cli.out.as_deref(), &body)?;
    Ok(true)
}

fn build_instance(case: CaseId, args: &CheckArgs) -> Result<Instance, Failure> {
    let kind = case.instance_kind();
    if kind != InstanceKind::Scalars && !args.values.is_empty() {
        return Err(Failure::Usage(format!("--values only applies to ScalarPower, not {case}")));
    }
    if kind != InstanceKind::CrossOrthogonalPair && !args.b_files.is_empty() {
        return Err(Failure::Usage(format!("--b only applies to Th1 and Th2, not {case}")));
    }
    Ok(match kind {
        InstanceKind::Scalars => {
            if !args.files.is_empty() {
                return Err(Failure::Usage("ScalarPower takes --values, not matrix files".into()));
            }
            Instance::Scalars(args.values.clone())
        }
        InstanceKind::MatrixPair => {
            let [a, b] = <[PathBuf; 2]>::try_from(args.files.clone())
                .map_err(|_| Failure::Usage(format!("{case} takes exactly two matrix files")))?;
            Instance::Matrices(read_matrix(&a)?, read_matrix(&b)?)
        }
        InstanceKind::Tuple(constraint) => {
            if args.files.is_empty() {
                return Err(Failure::Usage(format!("{case} needs at least one matrix file")));
            }
            Instance::Tuple(OperatorTuple::new(read_all(&args.files)?, constraint)?)
        }
        InstanceKind::CrossOrthogonalPair => {
            if args.files.is_empty() || args.files.len() != args.b_files.len() {
                return Err(Failure::Usage(format!("{case} needs n files for A and n files after --b")));
            }
            let a = OperatorTuple::new(read_all(&args.files)?, Constraint::Free)?;
            let b = OperatorTuple::new(read_all(&args.b_files)?, Constraint::Free)?;
            Instance::Pair(a, b)
        }
    })
}

fn cmd_check(cli: &Cli, args: &CheckArgs) -> CmdResult {
    let case = args.case;
    let tol = tolerance(args.tol)?;
    let p = match (args.p, case.is_fixed_p2()) {
        (Some(p), _) => p,
        (None, true) => PExponent::new(2.0)?,
        (None, false) => return Err(Failure::Usage(format!("{case} needs --p"))),
    };
    if args.sign.is_some() && !case.has_sign() {
        return Err(Failure::Usage(format!("{case} has no sign variant")));
    }
    let instance = build_instance(case, args)?;
    let signs = match args.sign {
        Some(s) => vec![Some(s)],
        None => case.signs().to_vec(),
    };
    let mut rows = Vec::new();
    let mut clean = true;
    for sign in signs {
        for report in run_case(InequalityCase::new(case, sign)?, &instance, p, tol)? {
            clean &= !report.is_violated();
            rows.push(ReportRow::new(&report, None));
        }
    }
    emit(cli.out.as_deref(), &report_body(cli.format, &rows)?)?;
    Ok(clean)
}

fn parse_cases(names: &[String]) -> Result<Vec<CaseId>, Failure> {
    if names.iter().any(|n| n.eq_ignore_ascii_case("all")) {
        if names.len() > 1 {
            return Err(Failure::Usage("`all` cannot be combined with other cases".into()));
        }
        return Ok(CaseId::ALL.to_vec());
    }
    let mut cases: Vec<CaseId> = names.iter().map(|n| n.parse()).collect::<Result<_, Error>>()?;
    cases.sort();
    cases.dedup();
    Ok(cases)
}

fn cmd_verify(cli: &Cli, args: &VerifyArgs) -> CmdResult {
    let cases = parse_cases(&args.case)?;
    let grid: Vec<f64> = match args.p_grid.is_empty() {
        true => DEFAULT_P_GRID.to_vec(),
        false => args.p_grid.iter().map(|p| p.value()).collect(),
    };
    let mut cfg = VerifyConfig::new(cases, &grid, args.trials, args.seed)?;
    cfg.ns = args.n.clone();
    cfg.dims = args.dim.clone();
    cfg.tol = tolerance(args.tol)?;
    cfg.sign = args.sign;
    let out = run_verify(&cfg)?;
    emit(cli.out.as_deref(), &report_body(cli.format, &out.rows())?)?;

    for case in &out.skipped {
        eprintln!("verify: skipped {case}: no admissible (n, d) in the requested lists");
    }
    let c = out.counts();
    eprintln!(
        "verify: {} reports, {} holds, {} equality, {} inapplicable, {} violated",
        c.total(),
        c.holds,
        c.equality_holds,
        c.inapplicable,
        c.violated
    );
    for r in out.records.iter().filter(|r| r.report.is_violated()) {
        eprintln!("violated: {} (seed {})", r.report.summary(), r.seed);
    }
    Ok(c.violated == 0)
}

fn cmd_tighten(cli: &Cli, args: &TightenArgs) -> CmdResult {
    let case = args.search.case;
    if args.p.is_two() && (case.is_two_regime() || case.is_fixed_p2()) {
        return Err(Failure::Usage(format!(
            "{case} is an equality at p = 2, so there is nothing to tighten; pick p ≠ 2"
        )));
    }
    let cfg = args.search.config(args.p);
    tolerance(args.search.tol)?;
    let result = optimize_ratio(&cfg)?;
    if result.ill_conditioned {
        eprintln!("tighten: p = {} is in the ill-conditioned regime (p < 0.5); treat the ratio with care", args.p);
    }
    eprintln!(
        "tighten: best ratio {} (restart {}, step {}, {} evaluations)",
        fmt_g17(result.best_ratio),
        result.best_restart,
        result.best_step,
        result.evaluations
    );
    let body = match cli.format {
        Format::Json => json(&result)?,
        Format::Csv => {
            let mut buf = Vec::new();
            result.write_csv(&mut buf)?;
            buf
        }
    };
    emit(cli.out.as_deref(), &body)?;
    Ok(true)
}

fn cmd_sweep(cli: &Cli, args: &SweepArgs) -> CmdResult {
    let base = args.search.config(args.p_grid[0]);
    tolerance(args.search.tol)?;
    let mode = match args.mode {
        SweepModeArg::Search => SweepMode::Search,
        SweepModeArg::Verify => SweepMode::Verify { trials: args.trials },
    };
    let result = sweep(args.search.case, &args.p_grid, &base, mode)?;
    let body = match cli.format {
        Format::Json => json(&result)?,
        Format::Csv => {
            let mut buf = Vec::new();
            result.write_csv(&mut buf)?;
            buf
        }
    };
    emit(cli.out.as_deref(), &body)?;
    Ok(result.violations() == 0)
}

fn cmd_selftest(perturb: f64) -> CmdResult {
    let report = run_selftest(perturb);
    let mut stdout = io::stdout().lock();
    for o in &report.outcomes {
        if o.passed {
            writeln!(stdout, "ok    {}", o.id)?;
        } else {
            writeln!(stdout, "FAIL  {}: {}", o.id, o.detail)?;
        }
    }
    let failed = report.failures().count();
    writeln!(stdout, "selftest: {} examples, {} failed", report.outcomes.len(), failed)?;
    Ok(failed == 0)
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| Failure::Usage(format!("{THREADS_ENV} must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Failure::Usage(format!("cannot size the worker pool: {e}")))
}

fn run(cli: &Cli) -> CmdResult {
    configure_threads()?;
    match &cli.command {
        Command::Norm { file, p } => cmd_norm(cli, file, *p),
        Command::Check(args) => cmd_check(cli, args),
        Command::Verify(args) => cmd_verify(cli, args),
        Command::Sweep(args) => cmd_sweep(cli, args),
        Command::Tighten(args) => cmd_tighten(cli, args),
        Command::Selftest { perturb } => cmd_selftest(*perturb),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Violation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
