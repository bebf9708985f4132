//! Long-run variance estimators.
//!
//! | kind          | estimator                                                        |
//! |---------------|------------------------------------------------------------------|
//! | `Dk`          | double-kernel HAC on `V`                                         |
//! | `PwDkSls`     | blockwise VAR(1) prewhitening, DK-HAC on recolored residuals      |
//! | `PwDk1`       | as `PwDkSls` with a single VAR block                             |
//! | `PwDkSlsMu`   | as `PwDkSls` with a per-block intercept in the VAR               |
//! | `Nw87`        | Bartlett kernel, Newey–West (1994) lag selection                 |
//! | `PwNw87`      | `Nw87` after Andrews–Monahan VAR(1) prewhitening                 |
//! | `A91`         | QS kernel, Andrews (1991) AR(1) plug-in bandwidth                |
//! | `PwA91`       | `A91` after Andrews–Monahan VAR(1) prewhitening                  |
//! | `Kvb`         | Bartlett kernel with bandwidth equal to the sample size          |
//! | `Ewc`         | equal-weighted cosine estimator with `B` basis functions         |

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::bandwidths::{block_len_for, select_bandwidths, BandwidthConfig, BandwidthSelection, AR_CLAMP};
use crate::error::{HarError, Result};
use crate::kernels::LagKernel;
use crate::local_autocov::{block_count, double_kernel_sum};
use crate::prewhiten::{fit_blocks, recolor};
use crate::series::{symmetrize, SeriesMatrix};

/// Andrews–Monahan adjustment: when an eigenvalue of `Â` exceeds this in
/// modulus, singular values of `Â` above it are set to it.
pub const AM_SV_CAP: f64 = 0.97;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LrvKind {
    #[serde(rename = "dk")]
    Dk,
    #[serde(rename = "pwdk-sls")]
    PwDkSls,
    #[serde(rename = "pwdk-1")]
    PwDk1,
    #[serde(rename = "pwdk-mu")]
    PwDkSlsMu,
    #[serde(rename = "nw")]
    Nw87,
    #[serde(rename = "pw-nw")]
    PwNw87,
    #[serde(rename = "a91")]
    A91,
    #[serde(rename = "pw-a91")]
    PwA91,
    #[serde(rename = "kvb")]
    Kvb,
    #[serde(rename = "ewc")]
    Ewc,
}

impl LrvKind {
    pub const ALL: [LrvKind; 10] = [
        LrvKind::Dk,
        LrvKind::PwDkSls,
        LrvKind::PwDk1,
        LrvKind::PwDkSlsMu,
        LrvKind::Nw87,
        LrvKind::PwNw87,
        LrvKind::A91,
        LrvKind::PwA91,
        LrvKind::Kvb,
        LrvKind::Ewc,
    ];

    /// Command-line token.
    pub fn token(self) -> &'static str {
        match self {
            LrvKind::Dk => "dk",
            LrvKind::PwDkSls => "pwdk-sls",
            LrvKind::PwDk1 => "pwdk-1",
            LrvKind::PwDkSlsMu => "pwdk-mu",
            LrvKind::Nw87 => "nw",
            LrvKind::PwNw87 => "pw-nw",
            LrvKind::A91 => "a91",
            LrvKind::PwA91 => "pw-a91",
            LrvKind::Kvb => "kvb",
            LrvKind::Ewc => "ewc",
        }
    }

    /// Row label used in the size/power tables.
    pub fn table_label(self) -> &'static str {
        match self {
            LrvKind::Dk => "DK, QS",
            LrvKind::PwDkSls => "DK, QS, prew, SLS",
            LrvKind::PwDk1 => "DK, QS, prew",
            LrvKind::PwDkSlsMu => "DK, QS, prew, SLS, mu",
            LrvKind::Nw87 => "Newey-West",
            LrvKind::PwNw87 => "Newey-West, prew",
            LrvKind::A91 => "Andrews",
            LrvKind::PwA91 => "Andrews, prew",
            LrvKind::Kvb => "Newey-West, fixed-b (KVB)",
            LrvKind::Ewc => "EWC",
        }
    }

    pub fn is_double_kernel(self) -> bool {
        matches!(self, LrvKind::Dk | LrvKind::PwDkSls | LrvKind::PwDk1 | LrvKind::PwDkSlsMu)
    }
}

impl fmt::Display for LrvKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for LrvKind {
    type Err = HarError;
    fn from_str(s: &str) -> Result<Self> {
        LrvKind::ALL
            .into_iter()
            .find(|k| k.token() == s)
            .ok_or_else(|| HarError::InvalidSpec(format!("unknown estimator '{s}'")))
    }
}

/// Bandwidths fixed by the caller instead of selected from the data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum FrozenBandwidths {
    /// `b₁` and one `b₂` per block of the block average.
    DoubleKernel { b1: f64, b2_per_block: Vec<f64> },
    /// Lag truncation / scale `S_T` of a classical kernel estimator.
    Lag(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LrvOptions {
    /// Per-component weights of the bandwidth plug-ins; `None` means ones.
    pub weights: Option<Vec<f64>>,
    /// Lag kernel of the double-kernel estimators.
    pub kernel: LagKernel,
    /// `n_T = ⌊T^{nt_exponent}⌋`.
    pub nt_exponent: f64,
    /// VAR order `p_A` of the blockwise prewhitening.
    pub var_order: usize,
    pub frozen: Option<FrozenBandwidths>,
    /// EWC basis count `B`; `None` uses the default rule.
    pub ewc_b: Option<usize>,
    /// Subtract the sample mean before estimating.
    pub demean: bool,
}

impl Default for LrvOptions {
    fn default() -> Self {
        Self {
            weights: None,
            kernel: LagKernel::QuadraticSpectral,
            nt_exponent: 2.0 / 3.0,
            var_order: 1,
            frozen: None,
            ewc_b: None,
            demean: false,
        }
    }
}

impl LrvOptions {
    pub fn with_weights(mut self, weights: Vec<f64>) -> Self {
        self.weights = Some(weights);
        self
    }

    fn weight_vec(&self, p: usize) -> Result<Vec<f64>> {
        match &self.weights {
            None => Ok(vec![1.0; p]),
            Some(w) if w.len() == p => Ok(w.clone()),
            Some(w) => Err(HarError::InvalidInput(format!("expected {p} weights, got {}", w.len()))),
        }
    }
}

/// Bandwidth record of an estimate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum BandwidthInfo {
    DoubleKernel(BandwidthSelection),
    FrozenDoubleKernel { b1: f64, b2_per_block: Vec<f64> },
    Lag { s_t: f64 },
    Cosine { b: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct LrvEstimate {
    pub j: DMatrix<f64>,
    pub kind: LrvKind,
    pub bandwidths: BandwidthInfo,
    pub notes: Vec<String>,
}

/// Runs the estimator `kind` on `v`.
pub fn estimate(v: &SeriesMatrix, kind: LrvKind, opts: &LrvOptions) -> Result<LrvEstimate> {
    let owned;
    let v = if opts.demean {
        owned = v.demeaned();
        &owned
    } else {
        v
    };
    match kind {
        LrvKind::Dk => dk_hac(v, opts),
        LrvKind::PwDkSls => pw_dk_hac(v, PwVariant::Sls, opts),
        LrvKind::PwDk1 => pw_dk_hac(v, PwVariant::SingleBlock, opts),
        LrvKind::PwDkSlsMu => pw_dk_hac(v, PwVariant::SlsMu, opts),
        LrvKind::Nw87 => classic_hac(v, ClassicKind::Nw87, false, opts),
        LrvKind::PwNw87 => classic_hac(v, ClassicKind::Nw87, true, opts),
        LrvKind::A91 => classic_hac(v, ClassicKind::A91, false, opts),
        LrvKind::PwA91 => classic_hac(v, ClassicKind::A91, true, opts),
        LrvKind::Kvb => fixed_b_lrv(v, FixedBKind::Kvb, opts),
        LrvKind::Ewc => fixed_b_lrv(v, FixedBKind::Ewc, opts),
    }
}

fn dk_core(
    v: &SeriesMatrix,
    n_t: usize,
    opts: &LrvOptions,
    kind: LrvKind,
) -> Result<(DMatrix<f64>, BandwidthInfo, Vec<String>)> {
    match &opts.frozen {
        Some(FrozenBandwidths::DoubleKernel { b1, b2_per_block }) => {
            let j = double_kernel_sum(v, n_t, b2_per_block, opts.kernel, *b1)?;
            let info = BandwidthInfo::FrozenDoubleKernel { b1: *b1, b2_per_block: b2_per_block.clone() };
            Ok((j, info, Vec::new()))
        }
        Some(FrozenBandwidths::Lag(_)) => Err(HarError::InvalidInput(format!(
            "{kind} needs double-kernel bandwidths, got a lag bandwidth"
        ))),
        None => {
            let cfg = BandwidthConfig {
                block_len: n_t,
                n2: n_t,
                n3: n_t,
                kernel: opts.kernel,
                weights: Some(opts.weight_vec(v.dim())?),
            };
            let sel = select_bandwidths(v, &cfg)?;
            debug_assert_eq!(sel.b2_per_block.len(), block_count(v.n_obs(), n_t));
            let j = double_kernel_sum(v, n_t, &sel.b2_values(), opts.kernel, sel.b1)?;
            let notes = sel.warnings.clone();
            Ok((j, BandwidthInfo::DoubleKernel(sel), notes))
        }
    }
}

fn dk_block_len(t_len: usize, opts: &LrvOptions) -> Result<usize> {
    if !(opts.nt_exponent > 0.0 && opts.nt_exponent < 1.0) {
        return Err(HarError::InvalidInput(format!(
            "block exponent must lie in (0, 1), got {}",
            opts.nt_exponent
        )));
    }
    let n_t = block_len_for(t_len, opts.nt_exponent);
    if t_len < 4 * n_t {
        return Err(HarError::InvalidInput(format!(
            "DK-HAC needs T ≥ 4·n_T (T = {t_len}, n_T = {n_t})"
        )));
    }
    Ok(n_t)
}

/// Double-kernel HAC estimator on `V` itself.
pub fn dk_hac(v: &SeriesMatrix, opts: &LrvOptions) -> Result<LrvEstimate> {
    let n_t = dk_block_len(v.n_obs(), opts)?;
    let (j, bandwidths, notes) = dk_core(v, n_t, opts, LrvKind::Dk)?;
    Ok(LrvEstimate { j, kind: LrvKind::Dk, bandwidths, notes })
}

/// Prewhitening flavor of [`pw_dk_hac`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PwVariant {
    Sls,
    SingleBlock,
    SlsMu,
}

/// Prewhitened DK-HAC: VAR fit, recoloring `D̂_s V̂*_s`, bandwidths and
/// DK-HAC on the recolored residuals, small-sample factor `T/(T − p_A)`.
pub fn pw_dk_hac(v: &SeriesMatrix, variant: PwVariant, opts: &LrvOptions) -> Result<LrvEstimate> {
    let t_len = v.n_obs();
    let n_t = dk_block_len(t_len, opts)?;
    let order = opts.var_order;
    let (var_len, intercept, kind) = match variant {
        PwVariant::Sls => (n_t, false, LrvKind::PwDkSls),
        PwVariant::SingleBlock => (t_len, false, LrvKind::PwDk1),
        PwVariant::SlsMu => (n_t, true, LrvKind::PwDkSlsMu),
    };
    let fit = fit_blocks(v, var_len, order, intercept)?;
    let recolored = fit.recolored_padded()?;
    let (mut j, bandwidths, mut notes) = dk_core(&recolored, n_t, opts, kind)?;
    j *= t_len as f64 / (t_len - order) as f64;
    symmetrize(&mut j);
    let floored = fit
        .blocks
        .iter()
        .filter(|b| b.recolor.abs().max() >= 0.999 / crate::prewhiten::RECOLOR_SV_FLOOR)
        .count();
    if floored > 0 {
        notes.push(format!("recoloring guard engaged in {floored} block(s)"));
    }
    Ok(LrvEstimate { j, kind, bandwidths, notes })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ClassicKind {
    Nw87,
    A91,
}

/// Sample autocovariances `Γ̂(k) = T⁻¹ Σ_{t>k} V_t V_{t−k}'` for `k = 0..=max_lag`.
pub fn sample_autocovariances(v: &SeriesMatrix, max_lag: usize) -> Vec<DMatrix<f64>> {
    let t_len = v.n_obs();
    let p = v.dim();
    let data = v.to_row_major();
    (0..=max_lag.min(t_len - 1))
        .map(|k| {
            let mut g = DMatrix::zeros(p, p);
            for t in k..t_len {
                let (cur, lag) = (&data[t * p..(t + 1) * p], &data[(t - k) * p..(t - k + 1) * p]);
                for a in 0..p {
                    for b in 0..p {
                        g[(a, b)] += cur[a] * lag[b];
                    }
                }
            }
            g / t_len as f64
        })
        .collect()
}

/// `Σ_{|k|<T} K(k/S_T) Γ̂(k)`.
pub fn kernel_lrv(v: &SeriesMatrix, kernel: LagKernel, s_t: f64) -> Result<DMatrix<f64>> {
    if !(s_t > 0.0) || !s_t.is_finite() {
        return Err(HarError::InvalidInput(format!("lag bandwidth must be positive, got {s_t}")));
    }
    let t_len = v.n_obs();
    let max_lag = match kernel {
        LagKernel::QuadraticSpectral => t_len - 1,
        _ => (s_t.floor() as usize).min(t_len - 1),
    };
    let gammas = sample_autocovariances(v, max_lag);
    let mut j = gammas[0].clone();
    for (k, g) in gammas.iter().enumerate().skip(1) {
        let w = kernel.weight(k as f64 / s_t);
        if w != 0.0 {
            j += (g + g.transpose()) * w;
        }
    }
    symmetrize(&mut j);
    Ok(j)
}

fn check_weights(w: &[f64]) -> Result<()> {
    if w.iter().any(|x| !(*x >= 0.0)) || !w.iter().any(|x| *x > 0.0) {
        return Err(HarError::DegenerateWeights(
            "weights must be nonnegative with at least one positive".into(),
        ));
    }
    Ok(())
}

/// Newey–West (1994) lag truncation for the Bartlett kernel:
/// `S_T = 1.1447 (ŝ₁/ŝ₀)^{2/3} T^{1/3}` with pilot lag `⌊4(T/100)^{2/9}⌋`.
pub fn nw94_bandwidth(v: &SeriesMatrix, weights: &[f64]) -> Result<f64> {
    check_weights(weights)?;
    let t_len = v.n_obs();
    let pilot = (4.0 * (t_len as f64 / 100.0).powf(2.0 / 9.0)).floor() as usize;
    let gammas = sample_autocovariances(v, pilot);
    let w = nalgebra::DVector::from_column_slice(weights);
    let sigma: Vec<f64> = gammas.iter().map(|g| (w.transpose() * g * &w)[(0, 0)]).collect();
    let s0 = sigma[0] + 2.0 * sigma[1..].iter().sum::<f64>();
    let s1 = 2.0 * sigma.iter().enumerate().skip(1).map(|(j, s)| j as f64 * s).sum::<f64>();
    if !(sigma[0] > 0.0) {
        return Err(HarError::DegenerateWeights("weighted series has zero variance".into()));
    }
    let ratio = (s1 / s0).powi(2);
    let gamma = 1.1447 * ratio.powf(1.0 / 3.0);
    let s_t = gamma * (t_len as f64).powf(1.0 / 3.0);
    Ok(if s_t.is_finite() { s_t } else { 1.0 })
}

/// Andrews (1991) AR(1) plug-in for the QS kernel:
/// `S_T = 1.3221 (α̂(2) T)^{1/5}`.
pub fn a91_bandwidth(v: &SeriesMatrix, weights: &[f64]) -> Result<f64> {
    check_weights(weights)?;
    let t_len = v.n_obs();
    let (mut num, mut den) = (0.0, 0.0);
    for (a, &w) in weights.iter().enumerate() {
        if w == 0.0 {
            continue;
        }
        let col = v.column(a);
        let (mut sxy, mut sxx) = (0.0, 0.0);
        for t in 1..t_len {
            sxy += col[t] * col[t - 1];
            sxx += col[t - 1] * col[t - 1];
        }
        if sxx == 0.0 {
            continue;
        }
        let rho = (sxy / sxx).clamp(-AR_CLAMP, AR_CLAMP);
        let s2 = (1..t_len).map(|t| (col[t] - rho * col[t - 1]).powi(2)).sum::<f64>() / (t_len - 1) as f64;
        num += w * 4.0 * rho * rho * s2 * s2 / (1.0 - rho).powi(8);
        den += w * s2 * s2 / (1.0 - rho).powi(4);
    }
    if !(den > 0.0) {
        return Err(HarError::DegenerateWeights("weighted components have zero variance".into()));
    }
    let alpha2 = num / den;
    Ok(1.3221 * (alpha2 * t_len as f64).powf(0.2))
}

/// Classical kernel HAC, optionally with Andrews–Monahan VAR(1)
/// prewhitening (no intercept, eigenvalue adjustment at 0.97).
pub fn classic_hac(v: &SeriesMatrix, kind: ClassicKind, prewhitened: bool, opts: &LrvOptions) -> Result<LrvEstimate> {
    let t_len = v.n_obs();
    if t_len < 20 {
        return Err(HarError::InvalidInput(format!("classical HAC needs T ≥ 20, got {t_len}")));
    }
    let p = v.dim();
    let weights = opts.weight_vec(p)?;
    let mut notes = Vec::new();
    let (series, recolor_m) = if prewhitened {
        let fit = fit_blocks(v, t_len, 1, false)?;
        let mut a = fit.blocks[0].coefficients[0].clone();
        let spectral_radius = a.complex_eigenvalues().iter().map(|z| z.norm()).fold(0.0, f64::max);
        if spectral_radius > AM_SV_CAP {
            let svd = a.clone().svd(true, true);
            let capped = svd.singular_values.map(|s| s.min(AM_SV_CAP));
            a = svd.u.expect("U") * DMatrix::from_diagonal(&capped) * svd.v_t.expect("V'");
            notes.push("VAR(1) coefficient adjusted: eigenvalue above 0.97".into());
        }
        let data = v.matrix();
        let mut res = DMatrix::zeros(t_len - 1, p);
        for t in 1..t_len {
            let e = data.row(t).transpose() - &a * data.row(t - 1).transpose();
            res.row_mut(t - 1).copy_from(&e.transpose());
        }
        (SeriesMatrix::new(res)?, Some(recolor(&[a])))
    } else {
        (v.clone(), None)
    };
    let (kernel, lrv_kind) = match (kind, prewhitened) {
        (ClassicKind::Nw87, false) => (LagKernel::Bartlett, LrvKind::Nw87),
        (ClassicKind::Nw87, true) => (LagKernel::Bartlett, LrvKind::PwNw87),
        (ClassicKind::A91, false) => (LagKernel::QuadraticSpectral, LrvKind::A91),
        (ClassicKind::A91, true) => (LagKernel::QuadraticSpectral, LrvKind::PwA91),
    };
    let s_t = match &opts.frozen {
        Some(FrozenBandwidths::Lag(s)) => *s,
        Some(FrozenBandwidths::DoubleKernel { .. }) => {
            return Err(HarError::InvalidInput(format!("{lrv_kind} needs a lag bandwidth")))
        }
        None => match kind {
            ClassicKind::Nw87 => nw94_bandwidth(&series, &weights)?,
            ClassicKind::A91 => a91_bandwidth(&series, &weights)?,
        },
    };
    let mut j = kernel_lrv(&series, kernel, s_t)?;
    if let Some(d) = recolor_m {
        j = &d * j * d.transpose();
        symmetrize(&mut j);
    }
    Ok(LrvEstimate { j, kind: lrv_kind, bandwidths: BandwidthInfo::Lag { s_t }, notes })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FixedBKind {
    Kvb,
    Ewc,
}

/// Default EWC basis count `max(2, even-rounded 0.4·T^{2/3})`.
pub fn default_ewc_b(t_len: usize) -> usize {
    let raw = 0.4 * (t_len as f64).powf(2.0 / 3.0);
    let even = 2.0 * (raw / 2.0).round();
    (even as usize).max(2)
}

/// `T⁻¹ Σ_t Σ_s (1 − |t − s|/T) V_t V_s'`.
pub fn kvb_lrv(v: &SeriesMatrix) -> DMatrix<f64> {
    let t_len = v.n_obs();
    let p = v.dim();
    // Σ_{t,s} (T − |t−s|) V_t V_s' = Σ_m S_m S_m' with partial sums S_m.
    let data = v.matrix();
    let mut partial = nalgebra::DVector::zeros(p);
    let mut j = DMatrix::zeros(p, p);
    for t in 0..t_len {
        partial += data.row(t).transpose();
        j += &partial * partial.transpose();
    }
    // Σ_{m=1}^{T} S_m S_m' counts pair (t, s) (T − max(t, s) + 1) times;
    // add the reverse partial sums to reach T − |t − s|.
    let mut rev = nalgebra::DVector::zeros(p);
    let mut j_rev = DMatrix::zeros(p, p);
    for t in (0..t_len).rev() {
        rev += data.row(t).transpose();
        j_rev += &rev * rev.transpose();
    }
    let total = data.row_sum().transpose();
    let mut out = (j + j_rev - &total * total.transpose()) / (t_len as f64 * t_len as f64);
    symmetrize(&mut out);
    out
}

/// `B⁻¹ Σ_{j≤B} Λ_j Λ_j'` with `Λ_j = (2/T)^{1/2} Σ_t cos(πj(t − 1/2)/T) V_t`.
pub fn ewc_lrv(v: &SeriesMatrix, b: usize) -> Result<DMatrix<f64>> {
    let t_len = v.n_obs();
    if b == 0 || b >= t_len {
        return Err(HarError::InvalidInput(format!("EWC needs 1 ≤ B < T, got B = {b}")));
    }
    let p = v.dim();
    let data = v.matrix();
    let tf = t_len as f64;
    let mut j = DMatrix::zeros(p, p);
    for basis in 1..=b {
        let mut lambda = nalgebra::DVector::zeros(p);
        for t in 0..t_len {
            let c = (PI * basis as f64 * (t as f64 + 0.5) / tf).cos();
            lambda += data.row(t).transpose() * c;
        }
        lambda *= (2.0 / tf).sqrt();
        j += &lambda * lambda.transpose();
    }
    j /= b as f64;
    symmetrize(&mut j);
    Ok(j)
}

/// Fixed-b estimators: KVB and EWC.
pub fn fixed_b_lrv(v: &SeriesMatrix, kind: FixedBKind, opts: &LrvOptions) -> Result<LrvEstimate> {
    let t_len = v.n_obs();
    if t_len < 8 {
        return Err(HarError::InvalidInput(format!("fixed-b estimators need T ≥ 8, got {t_len}")));
    }
    match kind {
        FixedBKind::Kvb => Ok(LrvEstimate {
            j: kvb_lrv(v),
            kind: LrvKind::Kvb,
            bandwidths: BandwidthInfo::Lag { s_t: t_len as f64 },
            notes: Vec::new(),
        }),
        FixedBKind::Ewc => {
            let b = opts.ewc_b.unwrap_or_else(|| default_ewc_b(t_len));
            Ok(LrvEstimate {
                j: ewc_lrv(v, b)?,
                kind: LrvKind::Ewc,
                bandwidths: BandwidthInfo::Cosine { b },
                notes: Vec::new(),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from_seed;
    use crate::sls_sim::{simulate_sls, SlsSpec};
    use rand::Rng;
    use rand_distr::StandardNormal;

    fn noise(t: usize, p: usize, seed: u64) -> SeriesMatrix {
        let mut rng = rng_from_seed(seed);
        let rows: Vec<Vec<f64>> = (0..t)
            .map(|_| (0..p).map(|_| rng.sample::<f64, _>(StandardNormal)).collect())
            .collect();
        SeriesMatrix::from_rows(&rows).unwrap()
    }

    fn ar_pair(t: usize, seed: u64) -> SeriesMatrix {
        let spec = SlsSpec::stationary_ar1(0.6, 1.0).unwrap();
        let a = simulate_sls(&spec, t, seed).unwrap();
        let b = noise(t, 1, seed + 1000);
        let rows: Vec<Vec<f64>> = (0..t)
            .map(|i| vec![a.matrix()[(i, 0)], 0.5 * a.matrix()[(i, 0)] + b.matrix()[(i, 0)]])
            .collect();
        SeriesMatrix::from_rows(&rows).unwrap()
    }

    #[test]
    fn kind_tokens_round_trip() {
        for k in LrvKind::ALL {
            assert_eq!(k.token().parse::<LrvKind>().unwrap(), k);
            let json = serde_json::to_string(&k).unwrap();
            assert_eq!(json, format!("\"{}\"", k.token()));
        }
        assert!("bogus".parse::<LrvKind>().is_err());
    }

    #[test]
    fn kvb_matches_double_sum_oracle() {
        let alt: Vec<f64> = (0..8).map(|t| if t % 2 == 0 { 1.0 } else { -1.0 }).collect();
        for series in [alt, noise(8, 1, 3).column(0)] {
            let v = SeriesMatrix::from_column(&series).unwrap();
            let t = 8.0;
            let mut want = 0.0;
            for (i, x) in series.iter().enumerate() {
                for (k, y) in series.iter().enumerate() {
                    want += (1.0 - (i as f64 - k as f64).abs() / t) * x * y;
                }
            }
            want /= t;
            assert!((kvb_lrv(&v)[(0, 0)] - want).abs() < 1e-14, "{} vs {want}", kvb_lrv(&v)[(0, 0)]);
        }
    }

    #[test]
    fn kvb_equals_bartlett_at_full_bandwidth() {
        let v = noise(30, 2, 4);
        let a = kvb_lrv(&v);
        let b = kernel_lrv(&v, LagKernel::Bartlett, 30.0).unwrap();
        assert!((a - b).abs().max() < 1e-12);
    }

    #[test]
    fn kvb_is_psd() {
        for seed in 0..20 {
            let j = kvb_lrv(&noise(40, 3, seed));
            assert!(j.symmetric_eigenvalues().min() >= -1e-10);
        }
    }

    #[test]
    fn ewc_matches_loop() {
        let v = noise(25, 1, 8);
        let x = v.column(0);
        let b = 4;
        let mut want = 0.0;
        for j in 1..=b {
            let l: f64 = (1..=25)
                .map(|t| (PI * j as f64 * (t as f64 - 0.5) / 25.0).cos() * x[t - 1])
                .sum::<f64>()
                * (2.0 / 25.0f64).sqrt();
            want += l * l;
        }
        want /= b as f64;
        assert!((ewc_lrv(&v, b).unwrap()[(0, 0)] - want).abs() < 1e-12);
        assert_eq!(default_ewc_b(400), 22);
        assert_eq!(default_ewc_b(200), 14);
        assert_eq!(default_ewc_b(5), 2);
    }

    #[test]
    fn ewc_full_basis_recovers_demeaned_variance() {
        // The B = T − 1 cosines plus the constant span R^T, so the estimate
        // is the sum of squares of the demeaned series divided by T − 1.
        let v = noise(50, 1, 9);
        let x = v.column(0);
        let mean = x.iter().sum::<f64>() / 50.0;
        let ss: f64 = x.iter().map(|y| (y - mean).powi(2)).sum();
        let got = ewc_lrv(&v, 49).unwrap()[(0, 0)];
        assert!((got - ss / 49.0).abs() < 1e-10, "{got} vs {}", ss / 49.0);
    }

    #[test]
    fn constant_series_bartlett_closed_form() {
        let c = 1.5;
        let t = 40;
        let v = SeriesMatrix::from_column(&vec![c; t]).unwrap();
        let s_t = 5.0;
        let j = kernel_lrv(&v, LagKernel::Bartlett, s_t).unwrap()[(0, 0)];
        let mut want = c * c;
        for k in 1..5 {
            want += 2.0 * (1.0 - k as f64 / s_t) * c * c * (t - k) as f64 / t as f64;
        }
        assert!((j - want).abs() < 1e-12);
        assert!(j > 0.0);
    }

    #[test]
    fn zero_series_gives_zero_for_dk() {
        let v = SeriesMatrix::from_column(&vec![0.0; 200]).unwrap();
        let frozen = LrvOptions {
            frozen: Some(FrozenBandwidths::DoubleKernel { b1: 0.3, b2_per_block: vec![0.4; 5] }),
            ..Default::default()
        };
        assert_eq!(dk_hac(&v, &frozen).unwrap().j[(0, 0)], 0.0);
    }

    #[test]
    fn every_estimator_is_scale_equivariant() {
        let v = ar_pair(240, 5);
        let c = 3.7;
        let opts = LrvOptions::default().with_weights(vec![1.0, 1.0]);
        for kind in LrvKind::ALL {
            let a = estimate(&v, kind, &opts).unwrap().j;
            let b = estimate(&v.scaled(c), kind, &opts).unwrap().j;
            let diff = (b - &a * c * c).abs().max();
            let scale = (a.abs().max() * c * c).max(1.0);
            assert!(diff < 1e-10 * scale, "{kind}: {diff}");
        }
    }

    #[test]
    fn matrix_equivariance_with_frozen_bandwidths() {
        let v = ar_pair(240, 6);
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 0.4, -0.2, 1.5]);
        let mv = v.transformed(&m).unwrap();
        let n_t = block_len_for(240, 2.0 / 3.0);
        let blocks = block_count(240, n_t);
        let dk = LrvOptions {
            frozen: Some(FrozenBandwidths::DoubleKernel { b1: 0.2, b2_per_block: vec![0.35; blocks] }),
            ..Default::default()
        };
        let lag = LrvOptions { frozen: Some(FrozenBandwidths::Lag(6.5)), ..Default::default() };
        for kind in LrvKind::ALL {
            let opts = if kind.is_double_kernel() { &dk } else { &lag };
            let a = estimate(&v, kind, opts).unwrap().j;
            let b = estimate(&mv, kind, opts).unwrap().j;
            let want = &m * &a * m.transpose();
            let diff = (b - &want).abs().max();
            assert!(diff < 1e-9 * want.abs().max(), "{kind}: {diff}");
        }
    }

    #[test]
    fn outputs_are_symmetric() {
        let v = ar_pair(300, 7);
        let opts = LrvOptions::default().with_weights(vec![0.0, 1.0]);
        for kind in LrvKind::ALL {
            let j = estimate(&v, kind, &opts).unwrap().j;
            assert_eq!(j, j.transpose(), "{kind}");
        }
    }

    #[test]
    fn single_block_identity_scalar() {
        let spec = SlsSpec::stationary_ar1(0.5, 1.0).unwrap();
        let v = simulate_sls(&spec, 300, 11).unwrap();
        let n_t = block_len_for(300, 2.0 / 3.0);
        let frozen = FrozenBandwidths::DoubleKernel { b1: 0.25, b2_per_block: vec![0.4; block_count(300, n_t)] };
        let opts = LrvOptions { frozen: Some(frozen), ..Default::default() };
        let pw = pw_dk_hac(&v, PwVariant::SingleBlock, &opts).unwrap().j[(0, 0)];
        let fit = fit_blocks(&v, 300, 1, false).unwrap();
        let d = fit.blocks[0].recolor[(0, 0)];
        let mut padded = vec![0.0];
        padded.extend(fit.residuals.column(0));
        let res = SeriesMatrix::from_column(&padded).unwrap();
        let inner = double_kernel_sum(&res, n_t, &vec![0.4; block_count(300, n_t)], LagKernel::QuadraticSpectral, 0.25)
            .unwrap()[(0, 0)];
        let want = d * d * inner * 300.0 / 299.0;
        assert!((pw - want).abs() < 1e-12 * want, "{pw} vs {want}");
    }

    #[test]
    fn white_noise_estimates_near_unit_variance() {
        let opts = LrvOptions::default();
        for kind in LrvKind::ALL {
            // Fixed-b estimates are far noisier; they are also cheap.
            let reps = if matches!(kind, LrvKind::Kvb | LrvKind::Ewc) { 400 } else { 40 };
            let mean: f64 = (0..reps)
                .map(|s| estimate(&noise(1000, 1, 500 + s), kind, &opts).unwrap().j[(0, 0)])
                .sum::<f64>()
                / reps as f64;
            assert!((mean - 1.0).abs() < 0.15, "{kind}: {mean}");
        }
    }

    #[test]
    fn nw94_and_a91_bandwidths() {
        let v = noise(400, 2, 1);
        let s = nw94_bandwidth(&v, &[0.0, 1.0]).unwrap();
        assert!(s > 0.0 && s < 10.0);
        let spec = SlsSpec::stationary_ar1(0.8, 1.0).unwrap();
        let ar = simulate_sls(&spec, 400, 2).unwrap();
        assert!(a91_bandwidth(&ar, &[1.0]).unwrap() > a91_bandwidth(&v.scaled(1.0), &[1.0, 0.0]).unwrap());
        assert!(nw94_bandwidth(&v, &[0.0, 0.0]).is_err());
        // α(2) by hand for a known AR fit.
        let x = ar.column(0);
        let (sxy, sxx) = (1..400).fold((0.0, 0.0), |(a, b), t| (a + x[t] * x[t - 1], b + x[t - 1] * x[t - 1]));
        let rho = sxy / sxx;
        let s2 = (1..400).map(|t| (x[t] - rho * x[t - 1]).powi(2)).sum::<f64>() / 399.0;
        let alpha = (4.0 * rho * rho * s2 * s2 / (1.0 - rho).powi(8)) / (s2 * s2 / (1.0 - rho).powi(4));
        let want = 1.3221 * (alpha * 400.0).powf(0.2);
        assert!((a91_bandwidth(&ar, &[1.0]).unwrap() - want).abs() < 1e-12);
    }

    #[test]
    fn am_prewhitening_recolors_exactly() {
        let spec = SlsSpec::stationary_ar1(0.5, 1.0).unwrap();
        let v = simulate_sls(&spec, 300, 3).unwrap();
        let opts = LrvOptions { frozen: Some(FrozenBandwidths::Lag(4.0)), ..Default::default() };
        let pw = classic_hac(&v, ClassicKind::Nw87, true, &opts).unwrap().j[(0, 0)];
        let fit = fit_blocks(&v, 300, 1, false).unwrap();
        let a = fit.blocks[0].coefficients[0][(0, 0)];
        let x = v.column(0);
        let res: Vec<f64> = (1..300).map(|t| x[t] - a * x[t - 1]).collect();
        let inner = kernel_lrv(&SeriesMatrix::from_column(&res).unwrap(), LagKernel::Bartlett, 4.0).unwrap()[(0, 0)];
        let want = inner / (1.0 - a).powi(2);
        assert!((pw - want).abs() < 1e-12 * want);
    }

    #[test]
    fn guards_on_short_series() {
        let v = noise(30, 1, 1);
        assert!(dk_hac(&v, &LrvOptions::default()).is_err());
        assert!(classic_hac(&noise(10, 1, 1), ClassicKind::Nw87, false, &LrvOptions::default()).is_err());
        assert!(fixed_b_lrv(&noise(5, 1, 1), FixedBKind::Kvb, &LrvOptions::default()).is_err());
    }
}
