//! Size and power experiments.
//!
//! Every replication simulates one dataset and evaluates every requested
//! estimator on it. Replication seeds come from the root seed, the model and
//! the sample size (not `δ`, so power curves use common random numbers), and
//! the replication index; results are gathered in replication order, so a
//! report does not depend on the number of worker threads.

pub mod tables;

use std::time::Instant;

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{HarError, Result};
use crate::har_tests::{critical_value, dm_test, gr_test, t_test_regression, CvFamily};
use crate::lrv::{LrvKind, LrvOptions};
use crate::rng::{derive_seed, rng_from_seed, stream_id};
use crate::sls_sim::dgp::{make_dgp, Dataset, DgpId, Model};

pub use tables::{reference_table, ReferenceTable};

pub const SCHEMA_VERSION: u32 = 1;

/// Minimum replication count accepted by [`run_experiment`].
pub const MIN_REPLICATIONS: usize = 100;

/// Share of errored replications above which a cell fails the run.
pub const MAX_ERROR_SHARE: f64 = 0.01;

fn default_alpha() -> f64 {
    0.05
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct McConfig {
    pub models: Vec<Model>,
    pub estimators: Vec<LrvKind>,
    pub t_grid: Vec<usize>,
    pub delta_grid: Vec<f64>,
    pub replications: usize,
    pub root_seed: u64,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    /// Worker threads; `None` uses all cores.
    #[serde(default)]
    pub threads: Option<usize>,
    /// Feed demeaned series to the estimators.
    #[serde(default)]
    pub demean: bool,
    /// Replace every statistic by an independent standard-normal draw.
    #[serde(default)]
    pub debug_normal_statistic: bool,
}

impl McConfig {
    pub fn validate(&self) -> Result<()> {
        if self.replications < MIN_REPLICATIONS {
            return Err(HarError::InvalidSpec(format!(
                "replications must be ≥ {MIN_REPLICATIONS}, got {}",
                self.replications
            )));
        }
        if self.models.is_empty() || self.estimators.is_empty() || self.t_grid.is_empty() || self.delta_grid.is_empty() {
            return Err(HarError::InvalidSpec("every grid must be nonempty".into()));
        }
        if !(self.alpha > 0.0 && self.alpha <= 0.5) {
            return Err(HarError::InvalidSpec(format!("alpha must lie in (0, 0.5], got {}", self.alpha)));
        }
        if self.threads == Some(0) {
            return Err(HarError::InvalidSpec("threads must be ≥ 1".into()));
        }
        Ok(())
    }
}

/// One simulation design: a model at a sample size and shift.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Design {
    pub model: Model,
    pub t: usize,
    pub delta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellResult {
    pub model: Model,
    pub estimator: LrvKind,
    pub t: usize,
    pub delta: f64,
    /// Rejections over non-errored replications.
    pub rate: f64,
    pub mc_se: f64,
    pub rejections: usize,
    pub replications: usize,
    pub errors: usize,
    /// Diagnostic: rejection rate counting errored replications as non-rejections.
    pub rate_errors_as_accept: f64,
    pub first_error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RuntimeInfo {
    pub seconds: f64,
    pub threads: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McReport {
    pub schema_version: u32,
    pub config: McConfig,
    pub cells: Vec<CellResult>,
    /// Cells with more than 1% errored replications.
    pub failed_cells: Vec<String>,
    pub runtime: RuntimeInfo,
}

impl McReport {
    pub fn cell(&self, model: &Model, estimator: LrvKind, t: usize, delta: f64) -> Option<&CellResult> {
        self.cells
            .iter()
            .find(|c| &c.model == model && c.estimator == estimator && c.t == t && c.delta == delta)
    }

    pub fn succeeded(&self) -> bool {
        self.failed_cells.is_empty()
    }
}

/// Shared settings of a batch of designs.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSettings {
    pub estimators: Vec<LrvKind>,
    pub replications: usize,
    pub root_seed: u64,
    pub alpha: f64,
    pub threads: Option<usize>,
    pub demean: bool,
    pub debug_normal_statistic: bool,
}

/// Seed of replication `rep` of a design.
pub fn replication_seed(root: u64, model: &Model, t: usize, rep: usize) -> u64 {
    derive_seed(root, stream_id(&format!("{}|T={t}", model.label())), rep as u64)
}

type RepOutcome = std::result::Result<bool, String>;

fn run_test(data: &Dataset, kind: LrvKind, alpha: f64, opts: &LrvOptions) -> Result<bool> {
    let outcome = match data {
        Dataset::Regression { y, x, coef_index } => t_test_regression(y, x, *coef_index, 0.0, kind, alpha, opts)?,
        Dataset::LossDifferential { d } => dm_test(d, kind, alpha, opts)?,
        Dataset::ForecastBreakdown { in_losses, out_losses } => gr_test(in_losses, out_losses, kind, alpha, opts)?,
    };
    Ok(outcome.reject)
}

fn replicate_once(design: &Design, rep: usize, settings: &RunSettings, opts: &LrvOptions) -> Vec<RepOutcome> {
    let seed = replication_seed(settings.root_seed, &design.model, design.t, rep);
    if settings.debug_normal_statistic {
        let cv = critical_value(CvFamily::Normal, settings.alpha).expect("validated alpha");
        let mut rng = rng_from_seed(derive_seed(seed, stream_id("debug-normal"), 0));
        return settings
            .estimators
            .iter()
            .map(|_| Ok(rng.sample::<f64, _>(StandardNormal).abs() > cv))
            .collect();
    }
    let id = DgpId { model: design.model, delta: design.delta, t: design.t, seed };
    match make_dgp(&id) {
        Ok(data) => settings
            .estimators
            .iter()
            .map(|k| run_test(&data, *k, settings.alpha, opts).map_err(|e| e.to_string()))
            .collect(),
        Err(e) => settings.estimators.iter().map(|_| Err(e.to_string())).collect(),
    }
}

fn with_pool<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<(T, usize)> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| HarError::InvalidSpec(format!("thread pool: {e}")))?;
    let n = pool.current_num_threads();
    Ok((pool.install(f), n))
}

/// Runs every design with the shared settings.
pub fn run_designs(designs: &[Design], settings: &RunSettings) -> Result<(Vec<CellResult>, Vec<String>, RuntimeInfo)> {
    let start = Instant::now();
    let opts = LrvOptions { demean: settings.demean, ..Default::default() };
    let reps = settings.replications;
    let (outcomes, threads) = with_pool(settings.threads, || {
        designs
            .iter()
            .map(|d| {
                (0..reps)
                    .into_par_iter()
                    .map(|r| replicate_once(d, r, settings, &opts))
                    .collect::<Vec<_>>()
            })
            .collect::<Vec<_>>()
    })?;
    let mut cells = Vec::new();
    let mut failed = Vec::new();
    for (design, per_rep) in designs.iter().zip(outcomes) {
        for (e, &kind) in settings.estimators.iter().enumerate() {
            let (mut rejections, mut errors, mut first_error) = (0usize, 0usize, None);
            for rep in &per_rep {
                match &rep[e] {
                    Ok(true) => rejections += 1,
                    Ok(false) => {}
                    Err(msg) => {
                        errors += 1;
                        first_error.get_or_insert_with(|| msg.clone());
                    }
                }
            }
            let valid = reps - errors;
            let rate = if valid > 0 { rejections as f64 / valid as f64 } else { f64::NAN };
            let cell = CellResult {
                model: design.model,
                estimator: kind,
                t: design.t,
                delta: design.delta,
                rate,
                mc_se: (rate * (1.0 - rate) / reps as f64).sqrt(),
                rejections,
                replications: reps,
                errors,
                rate_errors_as_accept: rejections as f64 / reps as f64,
                first_error,
            };
            if errors as f64 > MAX_ERROR_SHARE * reps as f64 {
                failed.push(format!(
                    "{} {} T={} delta={}: {errors}/{reps} replications errored ({})",
                    design.model,
                    kind,
                    design.t,
                    design.delta,
                    cell.first_error.as_deref().unwrap_or("")
                ));
            }
            cells.push(cell);
        }
    }
    let runtime = RuntimeInfo { seconds: start.elapsed().as_secs_f64(), threads };
    Ok((cells, failed, runtime))
}

/// Runs the full `models × T × δ × estimators` grid of `cfg`.
pub fn run_experiment(cfg: &McConfig) -> Result<McReport> {
    cfg.validate()?;
    let mut designs = Vec::new();
    for model in &cfg.models {
        for &t in &cfg.t_grid {
            for &delta in &cfg.delta_grid {
                designs.push(Design { model: *model, t, delta });
            }
        }
    }
    let settings = RunSettings {
        estimators: cfg.estimators.clone(),
        replications: cfg.replications,
        root_seed: cfg.root_seed,
        alpha: cfg.alpha,
        threads: cfg.threads,
        demean: cfg.demean,
        debug_normal_statistic: cfg.debug_normal_statistic,
    };
    let (cells, failed_cells, runtime) = run_designs(&designs, &settings)?;
    Ok(McReport {
        schema_version: SCHEMA_VERSION,
        config: cfg.clone(),
        cells,
        failed_cells,
        runtime,
    })
}

/// Tolerance for comparing a reproduced rate with a reference one.
pub fn tolerance(reference: f64, delta: f64) -> f64 {
    if reference == 0.0 || reference == 1.0 {
        0.01
    } else if delta == 0.0 {
        0.02
    } else {
        0.03
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub table: u8,
    pub model: Model,
    pub t: usize,
    pub delta: f64,
    pub estimator: LrvKind,
    pub reference: f64,
    pub reproduced: f64,
    pub abs_diff: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub mc_se: f64,
    pub errors: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableComparison {
    pub schema_version: u32,
    pub table: u8,
    pub replications: usize,
    pub root_seed: u64,
    pub rows: Vec<ComparisonRow>,
    pub failed_cells: Vec<String>,
    pub runtime: RuntimeInfo,
}

impl TableComparison {
    pub fn row(&self, model: &Model, estimator: LrvKind, t: usize, delta: f64) -> Option<&ComparisonRow> {
        self.rows
            .iter()
            .find(|r| &r.model == model && r.estimator == estimator && r.t == t && r.delta == delta)
    }

    pub fn pass_share(&self) -> f64 {
        self.rows.iter().filter(|r| r.pass).count() as f64 / self.rows.len() as f64
    }

    /// CSV rendering without runtime metadata.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record([
            "table", "model", "T", "delta", "estimator", "reference", "reproduced", "abs_diff", "tolerance", "pass",
            "mc_se", "errors",
        ])
        .map_err(|e| HarError::Io(e.to_string()))?;
        for r in &self.rows {
            w.write_record([
                r.table.to_string(),
                r.model.label(),
                r.t.to_string(),
                r.delta.to_string(),
                r.estimator.token().to_string(),
                format!("{:.3}", r.reference),
                format!("{:.4}", r.reproduced),
                format!("{:.4}", r.abs_diff),
                format!("{:.2}", r.tolerance),
                r.pass.to_string(),
                format!("{:.4}", r.mc_se),
                r.errors.to_string(),
            ])
            .map_err(|e| HarError::Io(e.to_string()))?;
        }
        let bytes = w.into_inner().map_err(|e| HarError::Io(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| HarError::Io(e.to_string()))
    }
}

/// Runs the grid of reference table `table_id` and compares cell by cell.
pub fn replicate_table(table_id: u8, replications: usize, root_seed: u64, threads: Option<usize>) -> Result<TableComparison> {
    let table = reference_table(table_id)?;
    if replications == 0 {
        return Err(HarError::InvalidSpec("replications must be ≥ 1".into()));
    }
    let settings = RunSettings {
        estimators: table.estimators.clone(),
        replications,
        root_seed,
        alpha: 0.05,
        threads,
        demean: false,
        debug_normal_statistic: false,
    };
    let (cells, failed_cells, runtime) = run_designs(&table.columns, &settings)?;
    let mut rows = Vec::new();
    for (e, &kind) in table.estimators.iter().enumerate() {
        for (c, design) in table.columns.iter().enumerate() {
            let reference = table.values[e][c];
            let cell = cells
                .iter()
                .find(|x| x.model == design.model && x.t == design.t && x.delta == design.delta && x.estimator == kind)
                .expect("every design/estimator pair was run");
            let tol = tolerance(reference, design.delta);
            let diff = (cell.rate - reference).abs();
            rows.push(ComparisonRow {
                table: table_id,
                model: design.model,
                t: design.t,
                delta: design.delta,
                estimator: kind,
                reference,
                reproduced: cell.rate,
                abs_diff: diff,
                tolerance: tol,
                pass: diff <= tol + 1e-12,
                mc_se: cell.mc_se,
                errors: cell.errors,
            });
        }
    }
    Ok(TableComparison {
        schema_version: SCHEMA_VERSION,
        table: table_id,
        replications,
        root_seed,
        rows,
        failed_cells,
        runtime,
    })
}
