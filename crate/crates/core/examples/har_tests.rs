//! Regression t-test, Diebold-Mariano test and forecast-breakdown test on
//! simulated data, for several long-run variance estimators.
//!
//! ```text
//! cargo run --release --example har_tests -- 2
//! ```
//! Argument: the shift `delta` of the M3/M4 alternatives.

use harlrv::har_tests::{dm_test, gr_test, t_test_regression};
use harlrv::lrv::{LrvKind, LrvOptions};
use harlrv::sls_sim::dgp::{make_dgp, Dataset, DgpId, Model};

const KINDS: [LrvKind; 5] = [LrvKind::PwDkSls, LrvKind::PwDkSlsMu, LrvKind::PwNw87, LrvKind::Kvb, LrvKind::Ewc];

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let delta: f64 = std::env::args().nth(1).map_or(Ok(2.0), |s| s.parse())?;
    let opts = LrvOptions::default();

    let Dataset::Regression { y, x, coef_index } = make_dgp(&DgpId { model: Model::M1 { rho: 0.9 }, delta: 0.0, t: 400, seed: 4 })?
    else {
        unreachable!()
    };
    println!("t-test on the intercept, M1 rho=0.9, T=400 (null true)");
    for k in KINDS {
        let o = t_test_regression(&y, &x, coef_index, 0.0, k, 0.05, &opts)?;
        println!("  {:<26} t = {:>7.3}  cv = {:.3}  reject = {}", k.table_label(), o.statistic, o.critical_value, o.reject);
    }

    let Dataset::LossDifferential { d } = make_dgp(&DgpId { model: Model::M3, delta, t: 400, seed: 4 })? else {
        unreachable!()
    };
    println!("Diebold-Mariano, M3 delta={delta}");
    for k in KINDS {
        let o = dm_test(&d, k, 0.05, &opts)?;
        println!("  {:<26} t = {:>7.3}  cv = {:.3}  reject = {}", k.table_label(), o.statistic, o.critical_value, o.reject);
    }

    let Dataset::ForecastBreakdown { in_losses, out_losses } = make_dgp(&DgpId { model: Model::M4, delta, t: 400, seed: 4 })?
    else {
        unreachable!()
    };
    println!("forecast breakdown, M4 delta={delta}");
    for k in KINDS {
        let o = gr_test(&in_losses, &out_losses, k, 0.05, &opts)?;
        println!("  {:<26} t = {:>7.3}  cv = {:.3}  reject = {}", k.table_label(), o.statistic, o.critical_value, o.reject);
    }
    Ok(())
}
