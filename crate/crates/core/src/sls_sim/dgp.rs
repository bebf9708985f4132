//! The four Monte Carlo data-generating processes.
//!
//! * `M1(ρ)`: `y_t = δ + x_t + e_t`, `x_t ~ N(1,1)`, `e_t` AR(1) with
//!   coefficient ρ and innovation variance 0.7. The test is on the intercept.
//! * `M2`: `y_t = δ·x_t + e_t`, `x_t = 0.6 + 0.8x_{t−1} + u_{x,t}`, `e_t` a
//!   segmented tvAR(1) (smooth coefficient up to `4T/5`, then 0.5). The test
//!   is on the slope.
//! * `M3`: Diebold–Mariano loss differentials from a fixed-scheme one-step
//!   forecasting exercise; under `δ > 0` the second forecaster's predictor
//!   shifts by `δ` over the last quarter of the sample.
//! * `M4`: in-sample and out-of-sample quadratic losses for the forecast
//!   breakdown test; the slope shifts by `δ` at `0.85T`.
//!
//! `N(m, v)` is read as mean `m`, variance `v`.

use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::{Regime, SlsSpec, BURN_IN};
use crate::error::{HarError, Result};
use crate::rng::rng_from_seed;

/// Minimum sample size accepted by [`make_dgp`].
pub const MIN_T: usize = 50;

/// Innovation variance used by M1 and M4.
const INNOV_VAR_07: f64 = 0.7;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "lowercase")]
pub enum Model {
    M1 { rho: f64 },
    M2,
    M3,
    M4,
}

impl Model {
    /// Short label, e.g. `m1(rho=0.4)`.
    pub fn label(&self) -> String {
        match self {
            Model::M1 { rho } => format!("m1(rho={rho})"),
            Model::M2 => "m2".into(),
            Model::M3 => "m3".into(),
            Model::M4 => "m4".into(),
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// One draw request: model, shift magnitude, sample size and seed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DgpId {
    pub model: Model,
    pub delta: f64,
    pub t: usize,
    pub seed: u64,
}

/// The arrays each HAR test consumes.
#[derive(Debug, Clone, PartialEq)]
pub enum Dataset {
    /// Regressand, `T×2` design with a leading column of ones, and the
    /// index of the coefficient under test.
    Regression {
        y: Vec<f64>,
        x: DMatrix<f64>,
        coef_index: usize,
    },
    /// Loss differentials `d_t = L⁽²⁾_t − L⁽¹⁾_t`.
    LossDifferential { d: Vec<f64> },
    /// In-sample fitted losses and out-of-sample forecast losses.
    ForecastBreakdown {
        in_losses: Vec<f64>,
        out_losses: Vec<f64>,
    },
}

/// M2 error process: `ρ(u) = max{0, 0.8·cos(1.5 − cos 5u)}` for `u < 4/5`,
/// then 0.5; unit innovation variance.
pub fn m2_error_spec() -> SlsSpec {
    SlsSpec::new(vec![
        Regime {
            end: 0.8,
            ar: Arc::new(|u: f64| (0.8 * (1.5 - (5.0 * u).cos()).cos()).max(0.0)),
            intercept: super::constant(0.0),
            innov_sd: super::constant(1.0),
        },
        Regime::constant(1.0, 0.5, 1.0),
    ])
    .expect("static spec is valid")
}

fn ar1_spec(rho: f64, innov_var: f64) -> Result<SlsSpec> {
    SlsSpec::stationary_ar1(rho, innov_var.sqrt())
}

fn normal<R: Rng + ?Sized>(rng: &mut R, mean: f64, var: f64) -> f64 {
    let z: f64 = rng.sample(StandardNormal);
    mean + var.sqrt() * z
}

/// Intercept and slope of the OLS fit of `y` on `(1, z)`.
fn simple_ols(y: &[f64], z: &[f64]) -> (f64, f64) {
    let n = y.len() as f64;
    let my = y.iter().sum::<f64>() / n;
    let mz = z.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    for (a, b) in y.iter().zip(z) {
        sxy += (b - mz) * (a - my);
        sxx += (b - mz) * (b - mz);
    }
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    (my - slope * mz, slope)
}

/// Builds the dataset for `id`.
pub fn make_dgp(id: &DgpId) -> Result<Dataset> {
    if !(id.delta >= 0.0) || !id.delta.is_finite() {
        return Err(HarError::InvalidInput(format!("delta must be ≥ 0, got {}", id.delta)));
    }
    if id.t < MIN_T {
        return Err(HarError::InvalidInput(format!("T must be ≥ {MIN_T}, got {}", id.t)));
    }
    let mut rng = rng_from_seed(id.seed);
    let t = id.t;
    let delta = id.delta;
    match id.model {
        Model::M1 { rho } => {
            let errors = ar1_spec(rho, INNOV_VAR_07)?.sample_path(t, &mut rng);
            let regressor: Vec<f64> = (0..t).map(|_| normal(&mut rng, 1.0, 1.0)).collect();
            let y = (0..t).map(|i| delta + regressor[i] + errors[i]).collect();
            Ok(Dataset::Regression {
                y,
                x: design_with_intercept(&regressor),
                coef_index: 0,
            })
        }
        Model::M2 => {
            let errors = m2_error_spec().sample_path(t, &mut rng);
            let mut prev = 3.0;
            for _ in 0..BURN_IN {
                prev = 0.6 + 0.8 * prev + normal(&mut rng, 0.0, 1.0);
            }
            let mut regressor = Vec::with_capacity(t);
            for _ in 0..t {
                prev = 0.6 + 0.8 * prev + normal(&mut rng, 0.0, 1.0);
                regressor.push(prev);
            }
            let y = (0..t).map(|i| delta * regressor[i] + errors[i]).collect();
            Ok(Dataset::Regression {
                y,
                x: design_with_intercept(&regressor),
                coef_index: 1,
            })
        }
        Model::M3 => Ok(Dataset::LossDifferential {
            d: m3_loss_differential(t, delta, &mut rng)?,
        }),
        Model::M4 => {
            let (in_losses, out_losses) = m4_losses(t, delta, &mut rng)?;
            Ok(Dataset::ForecastBreakdown { in_losses, out_losses })
        }
    }
}

fn design_with_intercept(regressor: &[f64]) -> DMatrix<f64> {
    DMatrix::from_fn(regressor.len(), 2, |i, j| if j == 0 { 1.0 } else { regressor[i] })
}

/// Index `i` of the returned vectors holds the value at time `i + 1`; the
/// predictor arrays hold `x_{t−1}` at index `t − 1`.
fn m3_loss_differential<R: Rng + ?Sized>(t: usize, delta: f64, rng: &mut R) -> Result<Vec<f64>> {
    let errors = ar1_spec(0.8, 1.0)?.sample_path(t, rng);
    let x0: Vec<f64> = (0..t).map(|_| normal(rng, 1.0, 1.0)).collect();
    let y: Vec<f64> = (0..t).map(|i| x0[i] + errors[i]).collect();
    let shift_after = 3 * t / 4;
    let (z1, z2): (Vec<f64>, Vec<f64>) = if delta == 0.0 {
        // Equal predictive ability: two independent irrelevant predictors.
        let z1 = (0..t).map(|_| normal(rng, 1.0, 1.0)).collect();
        let z2 = (0..t).map(|_| normal(rng, 1.0, 1.0)).collect();
        (z1, z2)
    } else {
        let z2 = (0..t)
            .map(|i| {
                let shift = if i + 1 > shift_after { delta } else { 0.0 };
                shift + x0[i] + normal(rng, 0.0, 1.0)
            })
            .collect();
        (x0.clone(), z2)
    };
    let in_sample = t / 2;
    let fit1 = simple_ols(&y[..in_sample], &z1[..in_sample]);
    let fit2 = simple_ols(&y[..in_sample], &z2[..in_sample]);
    // Forecast origins t = T/2+1..T−1, targets t+1.
    let d = (in_sample + 1..t)
        .map(|i| {
            let l1 = (y[i] - fit1.0 - fit1.1 * z1[i]).powi(2);
            let l2 = (y[i] - fit2.0 - fit2.1 * z2[i]).powi(2);
            l2 - l1
        })
        .collect();
    Ok(d)
}

fn m4_losses<R: Rng + ?Sized>(t: usize, delta: f64, rng: &mut R) -> Result<(Vec<f64>, Vec<f64>)> {
    let errors = ar1_spec(0.3, INNOV_VAR_07)?.sample_path(t, rng);
    let x: Vec<f64> = (0..t).map(|_| normal(rng, 1.5, 1.5)).collect();
    let break_at = (0.85 * t as f64).floor() as usize;
    let y: Vec<f64> = (0..t)
        .map(|i| {
            let slope = if i + 1 > break_at { 1.0 + delta } else { 1.0 };
            1.0 + slope * x[i] + errors[i]
        })
        .collect();
    let in_sample = (0.6 * t as f64).round() as usize;
    let (b0, b1) = simple_ols(&y[..in_sample], &x[..in_sample]);
    let loss = |i: usize| (y[i] - b0 - b1 * x[i]).powi(2);
    let in_losses = (0..in_sample).map(loss).collect();
    let out_losses = (in_sample + 1..t).map(loss).collect();
    Ok((in_losses, out_losses))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn id(model: Model, delta: f64, t: usize, seed: u64) -> DgpId {
        DgpId { model, delta, t, seed }
    }

    #[test]
    fn m1_shapes() {
        let ds = make_dgp(&id(Model::M1 { rho: 0.4 }, 0.0, 200, 1)).unwrap();
        match ds {
            Dataset::Regression { y, x, coef_index } => {
                assert_eq!(y.len(), 200);
                assert_eq!(x.shape(), (200, 2));
                assert!(x.column(0).iter().all(|&v| v == 1.0));
                assert_eq!(coef_index, 0);
            }
            _ => panic!("wrong dataset kind"),
        }
    }

    #[test]
    fn rejects_bad_ids() {
        assert!(make_dgp(&id(Model::M2, -0.1, 200, 1)).is_err());
        assert!(make_dgp(&id(Model::M2, 0.0, 49, 1)).is_err());
        assert!(make_dgp(&id(Model::M1 { rho: 1.2 }, 0.0, 200, 1)).is_err());
    }

    #[test]
    fn m2_coefficient_path_bounds() {
        let spec = m2_error_spec();
        let t = 4000;
        let mut max = 0.0f64;
        let mut min = f64::INFINITY;
        for i in 1..=t {
            let u = i as f64 / t as f64;
            let a = spec.ar_at(u);
            if (i as f64) < 0.8 * t as f64 {
                max = max.max(a);
                min = min.min(a);
            } else {
                assert_eq!(a, 0.5);
            }
        }
        assert!(max <= 0.7021 + 1e-4 && max > 0.70, "{max}");
        assert!(min >= 0.0);
    }

    #[test]
    fn m3_and_m4_lengths() {
        match make_dgp(&id(Model::M3, 0.0, 400, 3)).unwrap() {
            Dataset::LossDifferential { d } => assert_eq!(d.len(), 199),
            _ => panic!(),
        }
        match make_dgp(&id(Model::M4, 1.0, 400, 3)).unwrap() {
            Dataset::ForecastBreakdown { in_losses, out_losses } => {
                assert_eq!(in_losses.len(), 240);
                assert_eq!(out_losses.len(), 159);
            }
            _ => panic!(),
        }
    }

    #[test]
    fn m3_null_mean_is_zero() {
        let reps = 400;
        let mut all = Vec::new();
        for s in 0..reps {
            if let Dataset::LossDifferential { d } = make_dgp(&id(Model::M3, 0.0, 400, s)).unwrap() {
                all.push(d.iter().sum::<f64>() / d.len() as f64);
            }
        }
        let m = all.iter().sum::<f64>() / reps as f64;
        let sd = (all.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (reps - 1) as f64).sqrt();
        assert!(m.abs() < 3.0 * sd / (reps as f64).sqrt(), "mean {m}, sd {sd}");
    }

    #[test]
    fn m3_alternative_raises_late_losses() {
        // Independent MC estimate of E(d_t) over the shifted quarter.
        let reps = 2000;
        let t = 400;
        let mut late = 0.0;
        let mut early = 0.0;
        for s in 0..reps {
            if let Dataset::LossDifferential { d } = make_dgp(&id(Model::M3, 2.0, t, s)).unwrap() {
                // d[i] is the loss at target time T/2 + 2 + i.
                for (i, v) in d.iter().enumerate() {
                    if t / 2 + 2 + i > 3 * t / 4 {
                        late += v;
                    } else {
                        early += v;
                    }
                }
            }
        }
        let late_mean = late / (reps as f64 * 100.0);
        let early_mean = early / (reps as f64 * 99.0);
        // Forecast bias 0.5δ adds roughly (0.5δ)² = 1 to the late losses.
        assert!(late_mean > 0.5, "{late_mean}");
        assert!(late_mean > early_mean + 0.5);
    }
}
