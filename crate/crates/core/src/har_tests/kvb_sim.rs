//! Simulation of the fixed-b limit of the KVB-normalized t statistic,
//! `W(1) / (2 ∫₀¹ B̃(r)² dr)^{1/2}` with `B̃(r) = W(r) − r W(1)`.

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::rng::{derive_seed, rng_from_seed, stream_id};

/// Significance levels of the shipped table: 0.005, 0.010, …, 0.500.
pub fn alpha_grid() -> Vec<f64> {
    (1..=100).map(|i| i as f64 * 0.005).collect()
}

/// One draw of the limiting statistic on a grid of `steps` increments.
pub fn draw_statistic<R: Rng + ?Sized>(rng: &mut R, steps: usize) -> f64 {
    let h = 1.0 / steps as f64;
    let sd = h.sqrt();
    let mut w = Vec::with_capacity(steps);
    let mut acc = 0.0;
    for _ in 0..steps {
        acc += sd * rng.sample::<f64, _>(StandardNormal);
        w.push(acc);
    }
    let w1 = acc;
    let integral: f64 = w
        .iter()
        .enumerate()
        .map(|(i, wi)| {
            let b = wi - (i + 1) as f64 * h * w1;
            b * b
        })
        .sum::<f64>()
        * h;
    w1 / (2.0 * integral).sqrt()
}

/// Two-sided critical values `q` with `P(|t| > q) = α` for each `α`.
pub fn simulate_critical_values(paths: usize, steps: usize, seed: u64, alphas: &[f64]) -> Vec<f64> {
    let stream = stream_id("kvb-critical-values");
    let mut stats: Vec<f64> = (0..paths)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_from_seed(derive_seed(seed, stream, i as u64));
            draw_statistic(&mut rng, steps).abs()
        })
        .collect();
    stats.sort_by(|a, b| a.total_cmp(b));
    alphas.iter().map(|a| empirical_quantile(&stats, 1.0 - a)).collect()
}

/// Linear-interpolation quantile of sorted data (type 7).
pub fn empirical_quantile(sorted: &[f64], p: f64) -> f64 {
    let n = sorted.len();
    let h = (n - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(n - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}
