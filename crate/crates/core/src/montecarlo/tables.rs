//! Reference rejection rates used as the replication fixture.

use crate::error::{HarError, Result};
use crate::lrv::LrvKind;
use crate::sls_sim::dgp::Model;

use super::Design;

/// A reference size or power table: `values[e][c]` is the rate of
/// `estimators[e]` in design `columns[c]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceTable {
    pub id: u8,
    pub title: &'static str,
    pub estimators: Vec<LrvKind>,
    pub columns: Vec<Design>,
    pub values: Vec<Vec<f64>>,
}

impl ReferenceTable {
    pub fn value(&self, estimator: LrvKind, design: &Design) -> Option<f64> {
        let e = self.estimators.iter().position(|k| *k == estimator)?;
        let c = self.columns.iter().position(|d| d == design)?;
        Some(self.values[e][c])
    }
}

const NINE: [LrvKind; 9] = [
    LrvKind::PwDk1,
    LrvKind::PwDkSls,
    LrvKind::PwDkSlsMu,
    LrvKind::A91,
    LrvKind::PwA91,
    LrvKind::Nw87,
    LrvKind::PwNw87,
    LrvKind::Kvb,
    LrvKind::Ewc,
];

fn design(model: Model, t: usize, delta: f64) -> Design {
    Design { model, t, delta }
}

/// Table `id` (1 to 4).
pub fn reference_table(id: u8) -> Result<ReferenceTable> {
    let m1 = |rho| Model::M1 { rho };
    match id {
        1 => Ok(ReferenceTable {
            id,
            title: "Size of the regression t-test, M1 and M2",
            estimators: NINE.to_vec(),
            columns: vec![
                design(m1(0.4), 200, 0.0),
                design(m1(0.4), 400, 0.0),
                design(m1(0.9), 200, 0.0),
                design(m1(0.9), 400, 0.0),
                design(Model::M2, 200, 0.0),
                design(Model::M2, 400, 0.0),
            ],
            values: vec![
                vec![0.054, 0.045, 0.085, 0.065, 0.061, 0.053],
                vec![0.052, 0.043, 0.086, 0.051, 0.065, 0.054],
                vec![0.049, 0.048, 0.103, 0.092, 0.063, 0.054],
                vec![0.082, 0.065, 0.162, 0.118, 0.095, 0.050],
                vec![0.063, 0.057, 0.104, 0.083, 0.077, 0.048],
                vec![0.114, 0.090, 0.351, 0.272, 0.138, 0.057],
                vec![0.075, 0.064, 0.110, 0.077, 0.090, 0.059],
                vec![0.058, 0.056, 0.091, 0.066, 0.069, 0.052],
                vec![0.058, 0.055, 0.149, 0.113, 0.071, 0.048],
            ],
        }),
        2 => Ok(ReferenceTable {
            id,
            title: "Size of the Diebold-Mariano (M3) and forecast-breakdown (M4) tests",
            estimators: NINE[1..].to_vec(),
            columns: vec![
                design(Model::M3, 400, 0.0),
                design(Model::M3, 800, 0.0),
                design(Model::M4, 400, 0.0),
                design(Model::M4, 800, 0.0),
            ],
            values: vec![
                vec![0.065, 0.060, 0.071, 0.066],
                vec![0.065, 0.061, 0.077, 0.067],
                vec![0.082, 0.073, 0.000, 0.000],
                vec![0.080, 0.074, 0.005, 0.000],
                vec![0.080, 0.074, 0.000, 0.000],
                vec![0.078, 0.073, 0.000, 0.000],
                vec![0.002, 0.002, 0.074, 0.061],
                vec![0.080, 0.074, 0.018, 0.022],
            ],
        }),
        3 => Ok(ReferenceTable {
            id,
            title: "Power of the regression t-test, M1 (rho = 0.9) and M2, T = 400",
            estimators: NINE.to_vec(),
            columns: vec![
                design(m1(0.9), 400, 0.5),
                design(m1(0.9), 400, 1.0),
                design(m1(0.9), 400, 2.0),
                design(Model::M2, 400, 0.1),
                design(Model::M2, 400, 0.2),
                design(Model::M2, 400, 0.4),
            ],
            values: vec![
                vec![0.344, 0.807, 1.000, 0.387, 0.889, 1.000],
                vec![0.378, 0.787, 1.000, 0.330, 0.813, 1.000],
                vec![0.463, 0.849, 1.000, 0.347, 0.833, 1.000],
                vec![0.430, 0.864, 1.000, 0.450, 0.922, 1.000],
                vec![0.360, 0.812, 1.000, 0.433, 0.911, 1.000],
                vec![0.630, 0.958, 1.000, 0.511, 0.938, 1.000],
                vec![0.363, 0.811, 1.000, 0.443, 0.911, 1.000],
                vec![0.274, 0.655, 0.980, 0.329, 0.758, 0.990],
                vec![0.436, 0.886, 1.000, 0.392, 0.890, 1.000],
            ],
        }),
        4 => Ok(ReferenceTable {
            id,
            title: "Power of the Diebold-Mariano (M3) and forecast-breakdown (M4) tests, T = 400",
            estimators: NINE[1..].to_vec(),
            columns: vec![
                design(Model::M3, 400, 0.5),
                design(Model::M3, 400, 2.0),
                design(Model::M3, 400, 6.0),
                design(Model::M4, 400, 0.5),
                design(Model::M4, 400, 1.0),
                design(Model::M4, 400, 2.0),
            ],
            values: vec![
                vec![0.495, 0.920, 1.000, 0.613, 0.923, 1.000],
                vec![0.498, 0.940, 1.000, 0.663, 0.957, 1.000],
                vec![0.158, 0.014, 0.000, 0.000, 0.043, 0.073],
                vec![0.224, 0.056, 0.000, 0.351, 0.942, 0.952],
                vec![0.179, 0.302, 0.587, 0.019, 0.821, 1.000],
                vec![0.137, 0.014, 0.000, 0.003, 0.278, 0.722],
                vec![0.059, 0.008, 0.000, 0.000, 0.000, 0.000],
                vec![0.087, 0.018, 0.000, 0.062, 0.000, 0.000],
            ],
        }),
        other => Err(HarError::InvalidSpec(format!("table must be 1 to 4, got {other}"))),
    }
}
