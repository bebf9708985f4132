use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use harlrv::har_tests::{dm_test, gr_test, t_test_regression};
use harlrv::io::{
    breakdown_from_table, dataset_table, loss_differential_from_table, read_json, regression_from_table, to_json,
    write_json, EstimateReport, NumericTable, TestReport,
};
use harlrv::lrv::{estimate, LrvKind, LrvOptions};
use harlrv::montecarlo::{replicate_table, run_experiment, McConfig, McReport, SCHEMA_VERSION};
use harlrv::plot::power_curves_svg;
use harlrv::sls_sim::dgp::{make_dgp, DgpId, Model};
use harlrv::HarError;

#[derive(Parser)]
#[command(name = "harlrv", version, about = "Long-run variance estimation and HAR tests")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate one dataset of a Monte Carlo model to CSV.
    Simulate(SimulateArgs),
    /// Estimate the long-run variance of the columns of a CSV file.
    Estimate(EstimateArgs),
    /// Run a HAR test on a CSV file.
    Test(TestArgs),
    /// Run a size/power experiment from a JSON configuration.
    Run(RunArgs),
    /// Rerun a reference table and compare cell by cell.
    Replicate(ReplicateArgs),
    /// Draw rejection rate against delta from a run report.
    Plot(PlotArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    M1,
    M2,
    M3,
    M4,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long, value_enum)]
    model: ModelArg,
    /// Error autocorrelation of M1.
    #[arg(long, default_value_t = 0.4)]
    rho: f64,
    #[arg(long, default_value_t = 0.0)]
    delta: f64,
    #[arg(long = "T", visible_alias = "t", default_value_t = 400)]
    t: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Output CSV; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EstimatorOpts {
    #[arg(long, value_parser = parse_kind)]
    estimator: LrvKind,
    /// VAR order of the prewhitening step.
    #[arg(long, default_value_t = 1)]
    pa: usize,
    /// Block length exponent: n_T = floor(T^e).
    #[arg(long, default_value_t = 2.0 / 3.0)]
    nt_exponent: f64,
    /// Demean the series before estimating.
    #[arg(long)]
    demean: bool,
}

impl EstimatorOpts {
    fn options(&self) -> LrvOptions {
        LrvOptions {
            var_order: self.pa,
            nt_exponent: self.nt_exponent,
            demean: self.demean,
            ..Default::default()
        }
    }
}

#[derive(Args)]
struct EstimateArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[command(flatten)]
    est: EstimatorOpts,
    #[arg(long)]
    json_out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum TestKind {
    /// Regression t-test (`y,x…` columns).
    T,
    /// Diebold–Mariano (`d` column).
    Dm,
    /// Forecast breakdown (`loss,in_sample` columns).
    Gr,
}

#[derive(Args)]
struct TestArgs {
    #[arg(long = "test", value_enum)]
    test: TestKind,
    #[command(flatten)]
    est: EstimatorOpts,
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    #[arg(long = "in")]
    input: PathBuf,
    /// Coefficient under test (0 is the intercept).
    #[arg(long, default_value_t = 1)]
    coef: usize,
    /// Value of the coefficient under the null.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    beta0: f64,
    #[arg(long)]
    json_out: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    /// JSON file with the fields of the experiment configuration.
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long)]
    json_out: Option<PathBuf>,
}

#[derive(Args)]
struct ReplicateArgs {
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=4))]
    table: u8,
    #[arg(long, default_value_t = 5000)]
    reps: usize,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    #[arg(long)]
    threads: Option<usize>,
    /// Comparison CSV; stdout when neither output is given.
    #[arg(long)]
    csv_out: Option<PathBuf>,
    #[arg(long)]
    json_out: Option<PathBuf>,
}

#[derive(Args)]
struct PlotArgs {
    /// Report written by `run --json-out`.
    #[arg(long)]
    report: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

fn parse_kind(s: &str) -> Result<LrvKind, String> {
    s.parse().map_err(|e: HarError| e.to_string())
}

/// Failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<HarError> for Failure {
    fn from(e: HarError) -> Self {
        Failure { code: if e.is_statistical() { 1 } else { 2 }, message: e.to_string() }
    }
}

type CliResult = Result<(), Failure>;

fn threads(flag: Option<usize>) -> Result<Option<usize>, Failure> {
    match std::env::var("HARLRV_THREADS") {
        Ok(v) if !v.trim().is_empty() => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|n| *n > 0)
            .map(Some)
            .ok_or(Failure { code: 2, message: format!("HARLRV_THREADS must be a positive integer, got `{v}`") }),
        _ => Ok(flag),
    }
}

fn emit(text: &str, path: Option<&Path>) -> CliResult {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| HarError::Io(format!("{}: {e}", p.display())).into()),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn simulate(a: SimulateArgs) -> CliResult {
    let model = match a.model {
        ModelArg::M1 => Model::M1 { rho: a.rho },
        ModelArg::M2 => Model::M2,
        ModelArg::M3 => Model::M3,
        ModelArg::M4 => Model::M4,
    };
    let data = make_dgp(&DgpId { model, delta: a.delta, t: a.t, seed: a.seed })?;
    emit(&dataset_table(&data)?.to_csv()?, a.out.as_deref())
}

fn run_estimate(a: EstimateArgs) -> CliResult {
    let table = NumericTable::read(&a.input)?;
    let v = table.to_series()?;
    let est = estimate(&v, a.est.estimator, &a.est.options())?;
    let report = EstimateReport::new(&est, v.n_obs());
    emit(&(to_json(&report)? + "\n"), a.json_out.as_deref())
}

fn run_test(a: TestArgs) -> CliResult {
    let table = NumericTable::read(&a.input)?;
    let opts = a.est.options();
    let kind = a.est.estimator;
    let (name, n, outcome) = match a.test {
        TestKind::T => {
            let (y, x) = regression_from_table(&table)?;
            ("t", y.len(), t_test_regression(&y, &x, a.coef, a.beta0, kind, a.alpha, &opts)?)
        }
        TestKind::Dm => {
            let d = loss_differential_from_table(&table)?;
            ("dm", d.len(), dm_test(&d, kind, a.alpha, &opts)?)
        }
        TestKind::Gr => {
            let (ins, outs) = breakdown_from_table(&table)?;
            ("gr", outs.len(), gr_test(&ins, &outs, kind, a.alpha, &opts)?)
        }
    };
    let report = TestReport { schema_version: SCHEMA_VERSION, test: name.into(), n_obs: n, outcome };
    emit(&(to_json(&report)? + "\n"), a.json_out.as_deref())
}

fn run(a: RunArgs) -> CliResult {
    let mut cfg: McConfig = read_json(&a.config)?;
    if let Some(n) = threads(a.threads)? {
        cfg.threads = Some(n);
    }
    let report = run_experiment(&cfg)?;
    emit(&(to_json(&report)? + "\n"), a.json_out.as_deref())?;
    if report.succeeded() {
        Ok(())
    } else {
        Err(Failure { code: 1, message: format!("cells with too many errored replications:\n{}", report.failed_cells.join("\n")) })
    }
}

fn replicate(a: ReplicateArgs) -> CliResult {
    let cmp = replicate_table(a.table, a.reps, a.seed, threads(a.threads)?)?;
    if let Some(p) = &a.json_out {
        write_json(p, &cmp)?;
    }
    if a.csv_out.is_some() || a.json_out.is_none() {
        emit(&cmp.to_csv()?, a.csv_out.as_deref())?;
    }
    eprintln!(
        "table {}: {:.0}% of cells within tolerance ({} replications, {:.1}s on {} thread(s))",
        cmp.table,
        100.0 * cmp.pass_share(),
        cmp.replications,
        cmp.runtime.seconds,
        cmp.runtime.threads
    );
    if cmp.failed_cells.is_empty() {
        Ok(())
    } else {
        Err(Failure { code: 1, message: cmp.failed_cells.join("\n") })
    }
}

fn plot(a: PlotArgs) -> CliResult {
    let report: McReport = read_json(&a.report)?;
    let svg = power_curves_svg(&report)?;
    emit(&svg, Some(&a.out))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Simulate(a) => simulate(a),
        Command::Estimate(a) => run_estimate(a),
        Command::Test(a) => run_test(a),
        Command::Run(a) => run(a),
        Command::Replicate(a) => replicate(a),
        Command::Plot(a) => plot(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("harlrv: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
