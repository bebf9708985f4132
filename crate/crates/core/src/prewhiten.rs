//! Blockwise VAR(p_A) whitening and the recoloring matrices `D̂_s`.
//!
//! Block `r` covers observations `r n_T + 1, …, (r+1) n_T`; a trailing
//! remainder too short to fit on its own is merged into the last full
//! block. Lagged regressors reach back across block boundaries, so only the
//! first `p_A` observations of the sample are lost and the residual series
//! has `T − p_A` rows.

use nalgebra::{DMatrix, DVector};

use crate::error::{HarError, Result};
use crate::series::SeriesMatrix;

/// Floor on the singular values of `I − ΣÂ_j` before inversion.
pub const RECOLOR_SV_FLOOR: f64 = 0.03;

/// OLS fit of one block.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockFit {
    /// 0-based first observation of the block.
    pub start: usize,
    /// 0-based one-past-last observation.
    pub end: usize,
    /// `Â_{r,1}, …, Â_{r,p_A}`.
    pub coefficients: Vec<DMatrix<f64>>,
    pub intercept: Option<DVector<f64>>,
    /// `D̂ = (I − ΣÂ_{r,j})⁻¹` after the singular-value floor.
    pub recolor: DMatrix<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PrewhitenFit {
    pub block_len: usize,
    pub order: usize,
    pub blocks: Vec<BlockFit>,
    /// `V̂*_t` for `t = p_A + 1, …, T`.
    pub residuals: SeriesMatrix,
    /// Number of observations of the input series.
    pub t_len: usize,
}

impl PrewhitenFit {
    /// Block holding 0-based observation `t`.
    pub fn block_of(&self, t: usize) -> &BlockFit {
        let idx = self.blocks.partition_point(|b| b.end <= t);
        &self.blocks[idx.min(self.blocks.len() - 1)]
    }

    /// `D̂_s` for 0-based observation `t`.
    pub fn d_hat(&self, t: usize) -> &DMatrix<f64> {
        &self.block_of(t).recolor
    }

    /// `D̂_s V̂*_s` on the original time index, with zero rows for the first
    /// `p_A` observations.
    pub fn recolored_padded(&self) -> Result<SeriesMatrix> {
        let p = self.residuals.dim();
        let mut out = DMatrix::zeros(self.t_len, p);
        let res = self.residuals.matrix();
        for i in 0..res.nrows() {
            let t = i + self.order;
            let row = self.d_hat(t) * res.row(i).transpose();
            out.row_mut(t).copy_from(&row.transpose());
        }
        SeriesMatrix::new(out)
    }
}

/// `(I − ΣÂ_j)⁻¹` with singular values of `I − ΣÂ_j` floored at
/// [`RECOLOR_SV_FLOOR`].
pub fn recolor(coefficients: &[DMatrix<f64>]) -> DMatrix<f64> {
    let p = coefficients.first().map_or(0, |a| a.nrows());
    let mut m = DMatrix::<f64>::identity(p, p);
    for a in coefficients {
        m -= a;
    }
    let svd = m.svd(true, true);
    let u = svd.u.expect("requested U");
    let v_t = svd.v_t.expect("requested V'");
    let inv_sv = DMatrix::from_diagonal(&svd.singular_values.map(|s| 1.0 / s.max(RECOLOR_SV_FLOOR)));
    v_t.transpose() * inv_sv * u.transpose()
}

/// Minimum usable observations per block.
pub fn min_block_obs(p: usize, order: usize, with_intercept: bool) -> usize {
    p * order + order + 2 + usize::from(with_intercept)
}

fn block_ranges(t_len: usize, n_t: usize, order: usize, need: usize) -> Vec<(usize, usize)> {
    let full = t_len / n_t;
    let mut ranges: Vec<(usize, usize)> = (0..full).map(|r| (r * n_t, (r + 1) * n_t)).collect();
    let rem_start = full * n_t;
    if rem_start < t_len {
        let usable = t_len - rem_start.max(order);
        match ranges.last_mut() {
            Some(last) if usable < need => last.1 = t_len,
            _ => ranges.push((rem_start, t_len)),
        }
    }
    ranges
}

/// Fits `V_t = Σ_j Â_{r,j} V_{t−j} [+ μ̂_r] + V̂*_t` by OLS in every block.
pub fn fit_blocks(v: &SeriesMatrix, n_t: usize, order: usize, with_intercept: bool) -> Result<PrewhitenFit> {
    let t_len = v.n_obs();
    let p = v.dim();
    if order == 0 {
        return Err(HarError::InvalidInput("VAR order must be ≥ 1".into()));
    }
    if n_t == 0 || n_t > t_len {
        return Err(HarError::InvalidInput(format!("block length {n_t} must lie in [1, {t_len}]")));
    }
    let need = min_block_obs(p, order, with_intercept);
    let ranges = block_ranges(t_len, n_t, order, need);
    let m = p * order + usize::from(with_intercept);
    let data = v.matrix();
    let mut residuals = DMatrix::zeros(t_len - order.min(t_len), p);
    let mut blocks = Vec::with_capacity(ranges.len());
    for (r, &(start, end)) in ranges.iter().enumerate() {
        let first = start.max(order);
        let len = end.saturating_sub(first);
        if len < need {
            return Err(HarError::BlockTooShort { block: r, len, need });
        }
        let mut x = DMatrix::zeros(len, m);
        let mut y = DMatrix::zeros(len, p);
        for (i, t) in (first..end).enumerate() {
            for j in 1..=order {
                for a in 0..p {
                    x[(i, (j - 1) * p + a)] = data[(t - j, a)];
                }
            }
            if with_intercept {
                x[(i, m - 1)] = 1.0;
            }
            y.row_mut(i).copy_from(&data.row(t));
        }
        let svd = x.clone().svd(true, true);
        let smax = svd.singular_values.max();
        if !(smax > 0.0) || svd.singular_values.min() <= 1e-10 * smax {
            return Err(HarError::RankDeficient { block: r });
        }
        let beta = svd
            .solve(&y, 0.0)
            .map_err(|e| HarError::InvalidInput(format!("block {r}: {e}")))?;
        let fitted = &x * &beta;
        for (i, t) in (first..end).enumerate() {
            let row = y.row(i) - fitted.row(i);
            residuals.row_mut(t - order).copy_from(&row);
        }
        let coefficients: Vec<DMatrix<f64>> = (0..order)
            .map(|j| beta.rows(j * p, p).transpose().into_owned())
            .collect();
        let intercept = with_intercept.then(|| beta.row(m - 1).transpose().into_owned());
        let recolor = recolor(&coefficients);
        blocks.push(BlockFit { start, end, coefficients, intercept, recolor });
    }
    Ok(PrewhitenFit {
        block_len: n_t,
        order,
        blocks,
        residuals: SeriesMatrix::new(residuals)?,
        t_len,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from_seed;
    use crate::sls_sim::{simulate_sls, Regime, SlsSpec};
    use rand::Rng;
    use rand_distr::StandardNormal;

    fn noise(t: usize, p: usize, seed: u64) -> SeriesMatrix {
        let mut rng = rng_from_seed(seed);
        let rows: Vec<Vec<f64>> = (0..t)
            .map(|_| (0..p).map(|_| rng.sample::<f64, _>(StandardNormal)).collect())
            .collect();
        SeriesMatrix::from_rows(&rows).unwrap()
    }

    #[test]
    fn recolor_examples() {
        assert_eq!(recolor(&[DMatrix::zeros(2, 2)]), DMatrix::identity(2, 2));
        let half = recolor(&[DMatrix::from_element(1, 1, 0.5)]);
        assert!((half[(0, 0)] - 2.0).abs() < 1e-14);
        let near_unit = recolor(&[DMatrix::from_element(1, 1, 0.999)]);
        assert!((near_unit[(0, 0)] - 1.0 / 0.03).abs() < 1e-10);
        let neg = recolor(&[DMatrix::from_element(1, 1, 1.5)]);
        assert!((neg[(0, 0)] + 2.0).abs() < 1e-12);
        let split = recolor(&[DMatrix::from_element(1, 1, 0.2), DMatrix::from_element(1, 1, 0.3)]);
        assert!((split[(0, 0)] - 2.0).abs() < 1e-14);
    }

    #[test]
    fn noiseless_ar_is_fit_exactly() {
        let x: Vec<f64> = (0..60).map(|t| 0.5f64.powi(t) * 3.0).collect();
        let fit = fit_blocks(&SeriesMatrix::from_column(&x).unwrap(), 60, 1, false).unwrap();
        assert_eq!(fit.blocks.len(), 1);
        assert!((fit.blocks[0].coefficients[0][(0, 0)] - 0.5).abs() < 1e-12);
        assert!(fit.residuals.matrix().abs().max() < 1e-12);
        assert!((fit.blocks[0].recolor[(0, 0)] - 2.0).abs() < 1e-10);
        assert_eq!(fit.residuals.n_obs(), 59);
    }

    #[test]
    fn white_noise_gives_small_coefficients() {
        let t = 5000;
        let v = noise(t, 2, 4);
        let fit = fit_blocks(&v, t, 1, false).unwrap();
        let a = &fit.blocks[0].coefficients[0];
        assert!(a.abs().max() < 3.0 / (t as f64).sqrt(), "{a}");
        assert!((&fit.blocks[0].recolor - DMatrix::identity(2, 2)).abs().max() < 0.05);
    }

    #[test]
    fn normal_equations_hold_per_block() {
        let v = noise(300, 2, 9);
        for intercept in [false, true] {
            let fit = fit_blocks(&v, 44, 2, intercept).unwrap();
            let data = v.matrix();
            let res = fit.residuals.matrix();
            for b in &fit.blocks {
                let first = b.start.max(fit.order);
                let mut cross = DMatrix::<f64>::zeros(2 * fit.order + 1, 2);
                for t in first..b.end {
                    let e = res.row(t - fit.order);
                    for j in 1..=fit.order {
                        for a in 0..2 {
                            for c in 0..2 {
                                cross[((j - 1) * 2 + a, c)] += data[(t - j, a)] * e[c];
                            }
                        }
                    }
                    if intercept {
                        for c in 0..2 {
                            cross[(4, c)] += e[c];
                        }
                    }
                }
                assert!(cross.abs().max() < 1e-8, "{cross}");
            }
        }
    }

    #[test]
    fn two_regime_coefficients_are_recovered() {
        let spec = SlsSpec::new(vec![
            Regime::constant(0.5, 0.2, 1.0),
            Regime::constant(1.0, 0.8, 1.0),
        ])
        .unwrap();
        let t = 10_000;
        let v = simulate_sls(&spec, t, 17).unwrap();
        let fit = fit_blocks(&v, t / 2, 1, false).unwrap();
        assert_eq!(fit.blocks.len(), 2);
        for (b, a) in fit.blocks.iter().zip([0.2f64, 0.8]) {
            let se = ((1.0 - a * a) / (t / 2) as f64).sqrt();
            let got = b.coefficients[0][(0, 0)];
            assert!((got - a).abs() < 3.0 * se, "{got} vs {a}");
        }
    }

    #[test]
    fn second_pass_is_nearly_white() {
        let spec = SlsSpec::stationary_ar1(0.7, 1.0).unwrap();
        let v = simulate_sls(&spec, 2000, 3).unwrap();
        let fit = fit_blocks(&v, 250, 1, false).unwrap();
        let again = fit_blocks(&fit.residuals, 250, 1, false).unwrap();
        for b in &again.blocks {
            let n = (b.end - b.start) as f64;
            assert!(b.coefficients[0][(0, 0)].abs() < 3.0 / n.sqrt());
        }
    }

    #[test]
    fn short_remainder_is_merged() {
        let v = noise(103, 1, 1);
        let fit = fit_blocks(&v, 50, 1, false).unwrap();
        assert_eq!(fit.blocks.len(), 2);
        assert_eq!(fit.blocks[1].end, 103);
        let fit = fit_blocks(&noise(120, 1, 1), 50, 1, false).unwrap();
        assert_eq!(fit.blocks.len(), 3);
        assert_eq!(fit.block_of(119).start, 100);
        assert_eq!(fit.block_of(49).start, 0);
        assert_eq!(fit.block_of(50).start, 50);
    }

    #[test]
    fn errors_are_reported() {
        let v = noise(40, 2, 1);
        assert!(matches!(fit_blocks(&v, 4, 1, false), Err(HarError::BlockTooShort { .. })));
        assert!(fit_blocks(&v, 20, 0, false).is_err());
        let rows: Vec<Vec<f64>> = (0..40).map(|t| vec![t as f64 % 3.0, 0.0]).collect();
        let flat = SeriesMatrix::from_rows(&rows).unwrap();
        assert!(matches!(
            fit_blocks(&flat, 20, 1, false),
            Err(HarError::RankDeficient { block: 0 })
        ));
    }

    #[test]
    fn padded_recolored_series() {
        let v = noise(100, 1, 2);
        let fit = fit_blocks(&v, 50, 1, false).unwrap();
        let padded = fit.recolored_padded().unwrap();
        assert_eq!(padded.n_obs(), 100);
        assert_eq!(padded.matrix()[(0, 0)], 0.0);
        let want = fit.blocks[1].recolor[(0, 0)] * fit.residuals.matrix()[(70 - 1, 0)];
        assert!((padded.matrix()[(70, 0)] - want).abs() < 1e-15);
    }
}
