//! CSV and JSON files used by the command-line tool.
//!
//! Dataset layouts:
//!
//! | model  | columns            |
//! |--------|--------------------|
//! | M1, M2 | `y,x`              |
//! | M3     | `d`                |
//! | M4     | `loss,in_sample`   |
//!
//! `in_sample` is 1 for in-sample fitted losses and 0 for out-of-sample
//! forecast losses. Regression designs get their column of ones back on
//! reading, so the files only carry the stochastic regressors.

use std::fs;
use std::path::Path;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{HarError, Result};
use crate::har_tests::TestOutcome;
use crate::lrv::{BandwidthInfo, LrvEstimate, LrvKind};
use crate::montecarlo::SCHEMA_VERSION;
use crate::series::SeriesMatrix;
use crate::sls_sim::dgp::Dataset;

fn io_err(path: &Path, e: impl std::fmt::Display) -> HarError {
    HarError::Io(format!("{}: {e}", path.display()))
}

/// Named numeric columns of equal length.
#[derive(Debug, Clone, PartialEq)]
pub struct NumericTable {
    pub headers: Vec<String>,
    pub columns: Vec<Vec<f64>>,
}

impl NumericTable {
    pub fn new(headers: Vec<String>, columns: Vec<Vec<f64>>) -> Result<Self> {
        if headers.len() != columns.len() {
            return Err(HarError::InvalidInput(format!(
                "{} headers for {} columns",
                headers.len(),
                columns.len()
            )));
        }
        if let Some(first) = columns.first() {
            if columns.iter().any(|c| c.len() != first.len()) {
                return Err(HarError::InvalidInput("columns differ in length".into()));
            }
        }
        Ok(Self { headers, columns })
    }

    pub fn n_rows(&self) -> usize {
        self.columns.first().map_or(0, Vec::len)
    }

    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.headers
            .iter()
            .position(|h| h == name)
            .map(|i| self.columns[i].as_slice())
    }

    fn require(&self, name: &str) -> Result<&[f64]> {
        self.column(name)
            .ok_or_else(|| HarError::InvalidInput(format!("missing column `{name}` (have {:?})", self.headers)))
    }

    /// All columns as a `T×p` series.
    pub fn to_series(&self) -> Result<SeriesMatrix> {
        if self.columns.is_empty() || self.n_rows() == 0 {
            return Err(HarError::InvalidInput("table has no data".into()));
        }
        let data = DMatrix::from_fn(self.n_rows(), self.columns.len(), |i, j| self.columns[j][i]);
        SeriesMatrix::new(data)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
        let headers: Vec<String> = reader
            .headers()
            .map_err(|e| HarError::Io(e.to_string()))?
            .iter()
            .map(str::to_owned)
            .collect();
        let mut columns = vec![Vec::new(); headers.len()];
        for (line, record) in reader.records().enumerate() {
            let record = record.map_err(|e| HarError::Io(e.to_string()))?;
            for (j, field) in record.iter().enumerate() {
                let v: f64 = field.parse().map_err(|_| {
                    HarError::InvalidInput(format!("row {}: `{field}` is not a number", line + 2))
                })?;
                columns[j].push(v);
            }
        }
        Self::new(headers, columns)
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.headers).map_err(|e| HarError::Io(e.to_string()))?;
        for i in 0..self.n_rows() {
            w.write_record(self.columns.iter().map(|c| c[i].to_string()))
                .map_err(|e| HarError::Io(e.to_string()))?;
        }
        let bytes = w.into_inner().map_err(|e| HarError::Io(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| HarError::Io(e.to_string()))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
        Self::parse(&text)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_csv()?).map_err(|e| io_err(path, e))
    }
}

/// File layout of a simulated dataset.
pub fn dataset_table(data: &Dataset) -> Result<NumericTable> {
    match data {
        Dataset::Regression { y, x, .. } => {
            let mut headers = vec!["y".to_string()];
            let mut columns = vec![y.clone()];
            let regressors: Vec<usize> = (0..x.ncols()).filter(|&j| !is_constant_one(x, j)).collect();
            for (n, &j) in regressors.iter().enumerate() {
                headers.push(if regressors.len() == 1 { "x".into() } else { format!("x{}", n + 1) });
                columns.push(x.column(j).iter().copied().collect());
            }
            NumericTable::new(headers, columns)
        }
        Dataset::LossDifferential { d } => NumericTable::new(vec!["d".into()], vec![d.clone()]),
        Dataset::ForecastBreakdown { in_losses, out_losses } => {
            let loss: Vec<f64> = in_losses.iter().chain(out_losses).copied().collect();
            let flag: Vec<f64> = in_losses
                .iter()
                .map(|_| 1.0)
                .chain(out_losses.iter().map(|_| 0.0))
                .collect();
            NumericTable::new(vec!["loss".into(), "in_sample".into()], vec![loss, flag])
        }
    }
}

fn is_constant_one(x: &DMatrix<f64>, j: usize) -> bool {
    x.column(j).iter().all(|v| *v == 1.0)
}

/// Regressand and design `[1, x…]` from a `y,x…` table; every column other
/// than `y` is a regressor.
pub fn regression_from_table(table: &NumericTable) -> Result<(Vec<f64>, DMatrix<f64>)> {
    let y = table.require("y")?.to_vec();
    let others: Vec<&Vec<f64>> = table
        .headers
        .iter()
        .zip(&table.columns)
        .filter(|(h, _)| h.as_str() != "y")
        .map(|(_, c)| c)
        .collect();
    let x = DMatrix::from_fn(y.len(), others.len() + 1, |i, j| if j == 0 { 1.0 } else { others[j - 1][i] });
    Ok((y, x))
}

/// Loss differentials: the `d` column, or the only column.
pub fn loss_differential_from_table(table: &NumericTable) -> Result<Vec<f64>> {
    match table.column("d") {
        Some(d) => Ok(d.to_vec()),
        None if table.columns.len() == 1 => Ok(table.columns[0].clone()),
        None => Err(HarError::InvalidInput("expected a `d` column".into())),
    }
}

/// In-sample and out-of-sample losses from a `loss,in_sample` table.
pub fn breakdown_from_table(table: &NumericTable) -> Result<(Vec<f64>, Vec<f64>)> {
    let loss = table.require("loss")?;
    let flag = table.require("in_sample")?;
    let (mut ins, mut outs) = (Vec::new(), Vec::new());
    for (l, f) in loss.iter().zip(flag) {
        match *f {
            v if v == 1.0 => ins.push(*l),
            v if v == 0.0 => outs.push(*l),
            other => {
                return Err(HarError::InvalidInput(format!("in_sample must be 0 or 1, got {other}")));
            }
        }
    }
    Ok((ins, outs))
}

/// JSON form of an [`LrvEstimate`].
#[derive(Debug, Clone, PartialEq, Serialize, serde::Deserialize)]
pub struct EstimateReport {
    pub schema_version: u32,
    pub kind: LrvKind,
    pub n_obs: usize,
    pub dim: usize,
    /// Row-major `J`.
    pub j: Vec<Vec<f64>>,
    pub bandwidths: BandwidthInfo,
    pub warnings: Vec<String>,
}

impl EstimateReport {
    pub fn new(est: &LrvEstimate, n_obs: usize) -> Self {
        let j = est.j.row_iter().map(|r| r.iter().copied().collect()).collect();
        Self {
            schema_version: SCHEMA_VERSION,
            kind: est.kind,
            n_obs,
            dim: est.j.nrows(),
            j,
            bandwidths: est.bandwidths.clone(),
            warnings: est.notes.clone(),
        }
    }
}

/// JSON form of a HAR test result.
#[derive(Debug, Clone, PartialEq, Serialize, serde::Deserialize)]
pub struct TestReport {
    pub schema_version: u32,
    pub test: String,
    pub n_obs: usize,
    #[serde(flatten)]
    pub outcome: TestOutcome,
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value).map_err(|e| HarError::Io(e.to_string()))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    fs::write(path, to_json(value)? + "\n").map_err(|e| io_err(path, e))
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    serde_json::from_str(&text).map_err(|e| HarError::InvalidSpec(format!("{}: {e}", path.display())))
}
