//! Segmented locally stationary (SLS) simulation.
//!
//! An [`SlsSpec`] is a list of regimes in rescaled time `u = t/T`, each
//! carrying smooth coefficient functions of a time-varying AR(1):
//!
//! ```text
//! V_t = μ(t/T) + a(t/T)·(V_{t−1} − μ((t−1)/T)) + σ(t/T)·ε_t,   ε_t iid N(0,1)
//! ```
//!
//! Coefficients may jump at regime boundaries and vary smoothly inside a
//! regime. The data-generating processes of the Monte Carlo study live in
//! [`dgp`].

pub mod dgp;

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{HarError, Result};
use crate::rng::rng_from_seed;
use crate::series::SeriesMatrix;

/// Number of pre-sample draws discarded before `t = 1`.
pub const BURN_IN: usize = 200;

/// Coefficient function of rescaled time.
pub type CoefFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

pub fn constant(c: f64) -> CoefFn {
    Arc::new(move |_| c)
}

/// One regime: active for `u ∈ [previous end, end)`.
#[derive(Clone)]
pub struct Regime {
    pub end: f64,
    pub ar: CoefFn,
    pub intercept: CoefFn,
    pub innov_sd: CoefFn,
}

impl Regime {
    pub fn constant(end: f64, ar: f64, innov_sd: f64) -> Self {
        Self {
            end,
            ar: constant(ar),
            intercept: constant(0.0),
            innov_sd: constant(innov_sd),
        }
    }
}

impl fmt::Debug for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Regime").field("end", &self.end).finish_non_exhaustive()
    }
}

/// Piecewise specification of a time-varying AR(1) process.
#[derive(Debug, Clone)]
pub struct SlsSpec {
    regimes: Vec<Regime>,
}

const VALIDATION_GRID: usize = 1000;

impl SlsSpec {
    pub fn new(regimes: Vec<Regime>) -> Result<Self> {
        if regimes.is_empty() {
            return Err(HarError::InvalidSpec("no regimes".into()));
        }
        let mut prev = 0.0;
        for (j, r) in regimes.iter().enumerate() {
            if !(r.end > prev && r.end <= 1.0) {
                return Err(HarError::InvalidSpec(format!(
                    "break fractions must be strictly increasing in (0, 1]; regime {j} ends at {}",
                    r.end
                )));
            }
            for i in 0..=VALIDATION_GRID {
                let u = prev + (r.end - prev) * i as f64 / VALIDATION_GRID as f64;
                let a = (r.ar)(u);
                if !a.is_finite() || a.abs() >= 1.0 {
                    return Err(HarError::InvalidSpec(format!(
                        "|a(u)| must stay below 1; regime {j} has a({u:.4}) = {a}"
                    )));
                }
                let s = (r.innov_sd)(u);
                if !s.is_finite() || s <= 0.0 {
                    return Err(HarError::InvalidSpec(format!(
                        "innovation sd must be positive; regime {j} has σ({u:.4}) = {s}"
                    )));
                }
                if !(r.intercept)(u).is_finite() {
                    return Err(HarError::InvalidSpec(format!("non-finite intercept in regime {j}")));
                }
            }
            prev = r.end;
        }
        if (prev - 1.0).abs() > 1e-12 {
            return Err(HarError::InvalidSpec("last break fraction must be 1".into()));
        }
        Ok(Self { regimes })
    }

    /// Stationary zero-mean AR(1).
    pub fn stationary_ar1(a: f64, innov_sd: f64) -> Result<Self> {
        Self::new(vec![Regime::constant(1.0, a, innov_sd)])
    }

    pub fn regimes(&self) -> &[Regime] {
        &self.regimes
    }

    pub fn regime_at(&self, u: f64) -> &Regime {
        self.regimes
            .iter()
            .find(|r| u < r.end)
            .unwrap_or_else(|| self.regimes.last().expect("validated non-empty"))
    }

    pub fn ar_at(&self, u: f64) -> f64 {
        (self.regime_at(u).ar)(u)
    }

    pub fn intercept_at(&self, u: f64) -> f64 {
        (self.regime_at(u).intercept)(u)
    }

    pub fn innov_sd_at(&self, u: f64) -> f64 {
        (self.regime_at(u).innov_sd)(u)
    }

    /// Draws a path of length `t_len` from `rng`.
    pub fn sample_path<R: Rng + ?Sized>(&self, t_len: usize, rng: &mut R) -> Vec<f64> {
        let first = &self.regimes[0];
        let (a0, mu0, sd0) = ((first.ar)(0.0), (first.intercept)(0.0), (first.innov_sd)(0.0));
        let mut prev = mu0;
        for _ in 0..BURN_IN {
            let eps: f64 = rng.sample(StandardNormal);
            prev = mu0 + a0 * (prev - mu0) + sd0 * eps;
        }
        let tf = t_len as f64;
        let mut prev_mu = mu0;
        let mut out = Vec::with_capacity(t_len);
        for t in 1..=t_len {
            let u = t as f64 / tf;
            let regime = self.regime_at(u);
            let mu = (regime.intercept)(u);
            let eps: f64 = rng.sample(StandardNormal);
            let v = mu + (regime.ar)(u) * (prev - prev_mu) + (regime.innov_sd)(u) * eps;
            out.push(v);
            prev = v;
            prev_mu = mu;
        }
        out
    }
}

/// Simulates `t_len` observations of `spec`; bit-identical for equal seeds.
pub fn simulate_sls(spec: &SlsSpec, t_len: usize, seed: u64) -> Result<SeriesMatrix> {
    if t_len == 0 {
        return Err(HarError::InvalidInput("T must be at least 1".into()));
    }
    let mut rng = rng_from_seed(seed);
    SeriesMatrix::from_column(&spec.sample_path(t_len, &mut rng))
}

/// Long-run variance `∫₀¹ σ²(u)/(1−a(u))² du` of a zero-mean spec, by
/// composite Simpson quadrature on every regime.
pub fn true_lrv(spec: &SlsSpec) -> Result<f64> {
    const PANELS: usize = 2000;
    let mut total = 0.0;
    let mut start = 0.0;
    for (j, regime) in spec.regimes.iter().enumerate() {
        let h = (regime.end - start) / PANELS as f64;
        let mut acc = 0.0;
        for i in 0..=PANELS {
            // Evaluate strictly inside the regime at the right edge.
            let u = if i == PANELS { regime.end - 1e-12 } else { start + i as f64 * h };
            let a = (regime.ar)(u);
            if a.abs() >= 1.0 {
                return Err(HarError::InvalidSpec(format!("|a(u)| ≥ 1 at u = {u} in regime {j}")));
            }
            if (regime.intercept)(u) != 0.0 {
                return Err(HarError::InvalidSpec("true_lrv requires a zero-mean spec".into()));
            }
            let s = (regime.innov_sd)(u);
            let f = s * s / ((1.0 - a) * (1.0 - a));
            let w = if i == 0 || i == PANELS {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            acc += w * f;
        }
        total += acc * h / 3.0;
        start = regime.end;
    }
    Ok(total)
}
