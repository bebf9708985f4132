//! HAR test statistics normalized by any [`LrvKind`], with the matching
//! critical values: standard normal for consistent estimators, the KVB
//! fixed-b distribution, and Student-t with `B` degrees of freedom for EWC.

pub mod kvb_sim;
mod kvb_table;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal, StudentsT};

use crate::error::{HarError, Result};
use crate::lrv::{default_ewc_b, estimate, LrvKind, LrvOptions};
use crate::series::SeriesMatrix;

pub use kvb_table::KVB_CRITICAL_VALUES;

/// Settings the shipped KVB table was generated with.
pub const KVB_TABLE_PATHS: usize = 50_000;
pub const KVB_TABLE_STEPS: usize = 2_000;
pub const KVB_TABLE_SEED: u64 = 20_240_601;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum CvFamily {
    Normal,
    #[serde(rename = "FixedB_KVB")]
    FixedBKvb,
    #[serde(rename = "Student_t_B")]
    StudentT { dof: usize },
}

impl CvFamily {
    /// Family matching an estimator applied to a series of length `t_len`.
    pub fn for_kind(kind: LrvKind, t_len: usize, opts: &LrvOptions) -> Self {
        match kind {
            LrvKind::Kvb => CvFamily::FixedBKvb,
            LrvKind::Ewc => CvFamily::StudentT { dof: opts.ewc_b.unwrap_or_else(|| default_ewc_b(t_len)) },
            _ => CvFamily::Normal,
        }
    }
}

/// Two-sided critical value at level `alpha`.
pub fn critical_value(family: CvFamily, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha <= 0.5) {
        return Err(HarError::InvalidInput(format!("alpha must lie in (0, 0.5], got {alpha}")));
    }
    match family {
        CvFamily::Normal => {
            let n = Normal::new(0.0, 1.0).expect("standard normal");
            Ok(n.inverse_cdf(1.0 - alpha / 2.0))
        }
        CvFamily::StudentT { dof } => {
            if dof == 0 {
                return Err(HarError::InvalidInput("Student-t needs dof ≥ 1".into()));
            }
            let t = StudentsT::new(0.0, 1.0, dof as f64)
                .map_err(|e| HarError::InvalidInput(format!("Student-t: {e}")))?;
            Ok(t.inverse_cdf(1.0 - alpha / 2.0))
        }
        CvFamily::FixedBKvb => kvb_critical_value(alpha),
    }
}

fn kvb_critical_value(alpha: f64) -> Result<f64> {
    let step = 0.005;
    let pos = alpha / step;
    if pos < 1.0 - 1e-9 {
        return Err(HarError::Unsupported(format!(
            "KVB critical values are tabulated for alpha ≥ 0.005, got {alpha}"
        )));
    }
    let lo = (pos.floor() as usize).clamp(1, KVB_CRITICAL_VALUES.len());
    if lo == KVB_CRITICAL_VALUES.len() || (pos - lo as f64).abs() < 1e-9 {
        return Ok(KVB_CRITICAL_VALUES[lo - 1]);
    }
    let frac = pos - lo as f64;
    Ok(KVB_CRITICAL_VALUES[lo - 1] + frac * (KVB_CRITICAL_VALUES[lo] - KVB_CRITICAL_VALUES[lo - 1]))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestOutcome {
    pub statistic: f64,
    pub alpha: f64,
    pub critical_value: f64,
    pub cv_family: CvFamily,
    pub reject: bool,
    pub lrv_kind: LrvKind,
    /// Scalar long-run variance in the statistic's denominator.
    pub variance: f64,
    pub notes: Vec<String>,
}

fn outcome(statistic: f64, variance: f64, alpha: f64, family: CvFamily, kind: LrvKind, notes: Vec<String>) -> Result<TestOutcome> {
    let cv = critical_value(family, alpha)?;
    Ok(TestOutcome {
        statistic,
        alpha,
        critical_value: cv,
        cv_family: family,
        reject: statistic.abs() > cv,
        lrv_kind: kind,
        variance,
        notes,
    })
}

fn check_variance(v: f64) -> Result<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(HarError::DegenerateVariance(format!("long-run variance is {v}")))
    }
}

/// Bandwidth weights that zero out columns constant in time (intercepts).
pub fn intercept_weights(x: &DMatrix<f64>) -> Vec<f64> {
    x.column_iter()
        .map(|c| {
            let first = c[0];
            if first != 0.0 && c.iter().all(|v| *v == first) {
                0.0
            } else {
                1.0
            }
        })
        .collect()
}

/// Plug-in weights used when none are given: the double-kernel plug-ins
/// zero out intercept columns, the classical plug-ins weight every column.
pub fn default_regression_weights(x: &DMatrix<f64>, kind: LrvKind) -> Vec<f64> {
    if kind.is_double_kernel() {
        intercept_weights(x)
    } else {
        vec![1.0; x.ncols()]
    }
}

/// Regression t-test of `β_r = β₀` with the sandwich variance
/// `(X'X/T)⁻¹ Ĵ (X'X/T)⁻¹`, `Ĵ` computed on `V_t = x_t ê_t`.
///
/// Without explicit weights in `opts`, see [`default_regression_weights`].
pub fn t_test_regression(
    y: &[f64],
    x: &DMatrix<f64>,
    coef_index: usize,
    beta0: f64,
    kind: LrvKind,
    alpha: f64,
    opts: &LrvOptions,
) -> Result<TestOutcome> {
    let t_len = y.len();
    if x.nrows() != t_len {
        return Err(HarError::InvalidInput(format!("X has {} rows, y has {t_len}", x.nrows())));
    }
    if coef_index >= x.ncols() {
        return Err(HarError::InvalidInput(format!("coefficient index {coef_index} out of range")));
    }
    let yv = DVector::from_column_slice(y);
    let xtx = x.transpose() * x;
    let xtx_inv = xtx
        .clone()
        .try_inverse()
        .filter(|m| m.iter().all(|v| v.is_finite()))
        .ok_or_else(|| HarError::InvalidInput("design matrix is rank deficient".into()))?;
    let beta = &xtx_inv * x.transpose() * &yv;
    let resid = &yv - x * &beta;
    let scale = yv.amax().max(1.0);
    if resid.amax() <= 1e-12 * scale {
        return Err(HarError::DegenerateVariance("residuals vanish".into()));
    }
    let mut v = x.clone();
    for (mut row, e) in v.row_iter_mut().zip(resid.iter()) {
        row *= *e;
    }
    let v = SeriesMatrix::new(v)?;
    let mut opts = opts.clone();
    if opts.weights.is_none() {
        opts.weights = Some(default_regression_weights(x, kind));
    }
    let est = estimate(&v, kind, &opts)?;
    let q_inv = xtx_inv * t_len as f64;
    let jx = &q_inv * &est.j * &q_inv;
    let var = check_variance(jx[(coef_index, coef_index)])?;
    let stat = (t_len as f64).sqrt() * (beta[coef_index] - beta0) / var.sqrt();
    outcome(stat, var, alpha, CvFamily::for_kind(kind, t_len, &opts), kind, est.notes)
}

/// `T_n^{1/2} mean(d) / Ĵ_d^{1/2}`; `opts.demean` selects the demeaned
/// estimator input.
pub fn mean_test(d: &[f64], kind: LrvKind, alpha: f64, opts: &LrvOptions) -> Result<TestOutcome> {
    let n = d.len();
    if n < 20 {
        return Err(HarError::InvalidInput(format!("test needs at least 20 observations, got {n}")));
    }
    if d.iter().all(|x| *x == 0.0) {
        return Err(HarError::DegenerateVariance("series is identically zero".into()));
    }
    let v = SeriesMatrix::from_column(d)?;
    let est = estimate(&v, kind, opts)?;
    let var = check_variance(est.j[(0, 0)])?;
    let mean = d.iter().sum::<f64>() / n as f64;
    let stat = (n as f64).sqrt() * mean / var.sqrt();
    outcome(stat, var, alpha, CvFamily::for_kind(kind, n, opts), kind, est.notes)
}

/// Diebold–Mariano test on a loss differential.
pub fn dm_test(d: &[f64], kind: LrvKind, alpha: f64, opts: &LrvOptions) -> Result<TestOutcome> {
    mean_test(d, kind, alpha, opts)
}

/// Surprise losses `L_t − L̄_in` of the forecast-breakdown test.
pub fn surprise_losses(in_losses: &[f64], out_losses: &[f64]) -> Result<Vec<f64>> {
    if in_losses.is_empty() || out_losses.is_empty() {
        return Err(HarError::InvalidInput("loss series must be nonempty".into()));
    }
    let avg = in_losses.iter().sum::<f64>() / in_losses.len() as f64;
    Ok(out_losses.iter().map(|l| l - avg).collect())
}

/// Giacomini–Rossi forecast-breakdown test with `τ = 1`.
pub fn gr_test(in_losses: &[f64], out_losses: &[f64], kind: LrvKind, alpha: f64, opts: &LrvOptions) -> Result<TestOutcome> {
    let sl = surprise_losses(in_losses, out_losses)?;
    if sl.iter().all(|x| *x == 0.0) {
        return Ok(TestOutcome {
            statistic: 0.0,
            alpha,
            critical_value: critical_value(CvFamily::for_kind(kind, sl.len(), opts), alpha)?,
            cv_family: CvFamily::for_kind(kind, sl.len(), opts),
            reject: false,
            lrv_kind: kind,
            variance: 0.0,
            notes: vec!["surprise losses are identically zero".into()],
        });
    }
    mean_test(&sl, kind, alpha, opts)
}
