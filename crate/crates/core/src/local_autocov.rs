//! Kernel-smoothed local autocovariances and their block average.
//!
//! For block `r` with block length `n_T` and time bandwidth `b₂`, the local
//! autocovariance at lag `k ≥ 0` is
//!
//! ```text
//! ĉ(r, k) = (T b₂)⁻¹ Σ_{s=k+1}^{T} K₂*(r, s, s−k) V_s V_{s−k}'
//! K₂*(r, s, s') = (K₂(((r+1)n_T − s)/(T b₂)) · K₂(((r+1)n_T − s')/(T b₂)))^{1/2}
//! ```
//!
//! and `ĉ(r, −k) = ĉ(r, k)'`. The block average is
//! `Γ̂(k) = n_T/(T − n_T) Σ_{r=0}^{⌊(T−n_T)/n_T⌋} ĉ(r, k)`.
//!
//! Because the taper factorizes, `ĉ(r, ·)` is the sample autocovariance of the
//! tapered series `Y_s = K₂(((r+1)n_T − s)/(T b₂))^{1/2} V_s`; the fast
//! kernel-weighted sum in [`double_kernel_sum`] uses that form, while
//! [`local_acov`] evaluates the defining sum term by term.

use nalgebra::DMatrix;

use crate::error::{HarError, Result};
use crate::kernels::{taper_weight, time_kernel, LagKernel};
use crate::series::{symmetrize, SeriesMatrix};

/// Time bandwidth and block length for local autocovariances.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalAcovConfig {
    pub b2: f64,
    pub block_len: usize,
}

impl LocalAcovConfig {
    fn validate(&self, t_len: usize) -> Result<()> {
        if !(self.b2 > 0.0 && self.b2 <= 1.0) {
            return Err(HarError::InvalidInput(format!("b2 must lie in (0, 1], got {}", self.b2)));
        }
        validate_block_len(self.block_len, t_len)
    }
}

fn validate_block_len(n_t: usize, t_len: usize) -> Result<()> {
    if n_t == 0 || n_t > t_len {
        return Err(HarError::InvalidInput(format!(
            "block length must lie in [1, T={t_len}], got {n_t}"
        )));
    }
    Ok(())
}

/// Largest block index `⌊(T − n_T)/n_T⌋` entering the block average.
pub fn last_block_index(t_len: usize, n_t: usize) -> usize {
    (t_len - n_t) / n_t
}

/// Number of blocks entering the block average.
pub fn block_count(t_len: usize, n_t: usize) -> usize {
    last_block_index(t_len, n_t) + 1
}

/// Local autocovariance `ĉ(r, k)` by direct evaluation of the defining sum.
pub fn local_acov(v: &SeriesMatrix, r: usize, k: i64, cfg: &LocalAcovConfig) -> Result<DMatrix<f64>> {
    let t_len = v.n_obs();
    cfg.validate(t_len)?;
    if k.unsigned_abs() as usize >= t_len {
        return Err(HarError::LagOutOfRange { lag: k, len: t_len });
    }
    if r > t_len / cfg.block_len {
        return Err(HarError::InvalidInput(format!("block index {r} out of range")));
    }
    let p = v.dim();
    let m = v.matrix();
    let lag = k.unsigned_abs() as usize;
    let scale = t_len as f64 * cfg.b2;
    let end = ((r + 1) * cfg.block_len) as f64;
    let mut out = DMatrix::zeros(p, p);
    // 1-based s from lag+1 to T; the pair is (s, s − lag).
    for s in (lag + 1)..=t_len {
        let w = taper_weight((end - s as f64) / scale, (end - (s - lag) as f64) / scale);
        if w == 0.0 {
            continue;
        }
        let (lead, trail) = (s - 1, s - lag - 1);
        for a in 0..p {
            for b in 0..p {
                out[(a, b)] += w * m[(lead, a)] * m[(trail, b)];
            }
        }
    }
    out /= scale;
    if k < 0 {
        out.transpose_mut();
    }
    Ok(out)
}

/// Block-averaged autocovariance `Γ̂(k)` with a common bandwidth.
pub fn block_avg_acov(v: &SeriesMatrix, k: i64, cfg: &LocalAcovConfig) -> Result<DMatrix<f64>> {
    cfg.validate(v.n_obs())?;
    let n = block_count(v.n_obs(), cfg.block_len);
    block_avg_acov_with(v, k, cfg.block_len, &vec![cfg.b2; n])
}

/// Block-averaged autocovariance with one bandwidth per block.
pub fn block_avg_acov_with(v: &SeriesMatrix, k: i64, n_t: usize, b2_per_block: &[f64]) -> Result<DMatrix<f64>> {
    let t_len = v.n_obs();
    validate_block_len(n_t, t_len)?;
    if n_t == t_len {
        return Err(HarError::InvalidInput("block average needs n_T < T".into()));
    }
    let blocks = block_count(t_len, n_t);
    if b2_per_block.len() != blocks {
        return Err(HarError::InvalidInput(format!(
            "expected {blocks} block bandwidths, got {}",
            b2_per_block.len()
        )));
    }
    let mut out = DMatrix::zeros(v.dim(), v.dim());
    for (r, &b2) in b2_per_block.iter().enumerate() {
        out += local_acov(v, r, k, &LocalAcovConfig { b2, block_len: n_t })?;
    }
    Ok(out * (n_t as f64 / (t_len - n_t) as f64))
}

/// `Σ_{|k|<T} K₁(b₁k) Γ̂(k)` computed through the tapered-series form.
///
/// The result is symmetric; it is positive semi-definite whenever `K₁` has
/// a nonnegative Fourier transform (QS, Bartlett, Parzen).
pub fn double_kernel_sum(
    v: &SeriesMatrix,
    n_t: usize,
    b2_per_block: &[f64],
    kernel: LagKernel,
    b1: f64,
) -> Result<DMatrix<f64>> {
    let t_len = v.n_obs();
    validate_block_len(n_t, t_len)?;
    if n_t == t_len {
        return Err(HarError::InvalidInput("block average needs n_T < T".into()));
    }
    let blocks = block_count(t_len, n_t);
    if b2_per_block.len() != blocks {
        return Err(HarError::InvalidInput(format!(
            "expected {blocks} block bandwidths, got {}",
            b2_per_block.len()
        )));
    }
    if !(b1 > 0.0) || !b1.is_finite() {
        return Err(HarError::InvalidInput(format!("b1 must be positive, got {b1}")));
    }
    let p = v.dim();
    let data = v.to_row_major();
    let lag_weights: Vec<f64> = (0..t_len).map(|k| kernel.weight(b1 * k as f64)).collect();

    let mut total = DMatrix::<f64>::zeros(p, p);
    let mut tapered: Vec<f64> = Vec::new();
    let mut smoothed: Vec<f64> = Vec::new();
    for (r, &b2) in b2_per_block.iter().enumerate() {
        if !(b2 > 0.0 && b2 <= 1.0) {
            return Err(HarError::InvalidInput(format!("b2 must lie in (0, 1], got {b2}")));
        }
        let scale = t_len as f64 * b2;
        let end = ((r + 1) * n_t) as f64;
        // 1-based support: 0 ≤ (end − s)/scale ≤ 1.
        let lo = ((end - scale).ceil().max(1.0)) as usize;
        let hi = (end as usize).min(t_len);
        if lo > hi {
            continue;
        }
        let len = hi - lo + 1;
        tapered.clear();
        tapered.resize(len * p, 0.0);
        for (i, s) in (lo..=hi).enumerate() {
            let w = time_kernel((end - s as f64) / scale);
            if w > 0.0 {
                let w = w.sqrt();
                for a in 0..p {
                    tapered[i * p + a] = w * data[(s - 1) * p + a];
                }
            }
        }
        smoothed.clear();
        smoothed.resize(len * p, 0.0);
        for i in 0..len {
            for j in 0..len {
                let w = lag_weights[i.abs_diff(j)];
                if w == 0.0 {
                    continue;
                }
                for a in 0..p {
                    smoothed[i * p + a] += w * tapered[j * p + a];
                }
            }
        }
        let mut block = DMatrix::<f64>::zeros(p, p);
        for i in 0..len {
            for a in 0..p {
                let ya = tapered[i * p + a];
                if ya == 0.0 {
                    continue;
                }
                for b in 0..p {
                    block[(a, b)] += ya * smoothed[i * p + b];
                }
            }
        }
        total += block / scale;
    }
    total *= n_t as f64 / (t_len - n_t) as f64;
    symmetrize(&mut total);
    Ok(total)
}
