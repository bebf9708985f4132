//! `T×p` observation matrices.

use nalgebra::{DMatrix, DVector};

use crate::error::{HarError, Result};

/// A `T×p` array of observations. Rows index time, columns index
/// components.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesMatrix {
    data: DMatrix<f64>,
}

impl SeriesMatrix {
    pub fn new(data: DMatrix<f64>) -> Result<Self> {
        if data.nrows() == 0 || data.ncols() == 0 {
            return Err(HarError::InvalidInput("series must be non-empty".into()));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(HarError::InvalidInput("series contains non-finite values".into()));
        }
        Ok(Self { data })
    }

    /// Single-component series.
    pub fn from_column(values: &[f64]) -> Result<Self> {
        Self::new(DMatrix::from_column_slice(values.len(), 1, values))
    }

    /// Builds a series from rows of equal length.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let t = rows.len();
        let p = rows.first().map(|r| r.len()).unwrap_or(0);
        if rows.iter().any(|r| r.len() != p) {
            return Err(HarError::InvalidInput("ragged rows".into()));
        }
        Self::new(DMatrix::from_fn(t, p, |i, j| rows[i][j]))
    }

    pub fn n_obs(&self) -> usize {
        self.data.nrows()
    }

    pub fn dim(&self) -> usize {
        self.data.ncols()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.data
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.data
    }

    /// Observation at 0-based time `t`.
    pub fn row(&self, t: usize) -> DVector<f64> {
        self.data.row(t).transpose()
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        self.data.column(j).iter().copied().collect()
    }

    /// Row-major copy, used by the inner loops.
    pub fn to_row_major(&self) -> Vec<f64> {
        let (t, p) = self.data.shape();
        let mut out = Vec::with_capacity(t * p);
        for i in 0..t {
            for j in 0..p {
                out.push(self.data[(i, j)]);
            }
        }
        out
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self { data: &self.data * c }
    }

    /// Applies `V_t ↦ M V_t` to every observation.
    pub fn transformed(&self, m: &DMatrix<f64>) -> Result<Self> {
        if m.ncols() != self.dim() {
            return Err(HarError::InvalidInput("transform dimension mismatch".into()));
        }
        Self::new(&self.data * m.transpose())
    }

    /// Subtracts the column means.
    pub fn demeaned(&self) -> Self {
        let mut data = self.data.clone();
        for mut col in data.column_iter_mut() {
            let mean = col.mean();
            col.add_scalar_mut(-mean);
        }
        Self { data }
    }

    pub fn column_means(&self) -> DVector<f64> {
        DVector::from_iterator(self.dim(), self.data.column_iter().map(|c| c.mean()))
    }
}

/// Symmetrizes `(A + A')/2` in place.
pub(crate) fn symmetrize(m: &mut DMatrix<f64>) {
    let n = m.nrows();
    for i in 0..n {
        for j in (i + 1)..n {
            let avg = 0.5 * (m[(i, j)] + m[(j, i)]);
            m[(i, j)] = avg;
            m[(j, i)] = avg;
        }
    }
}
