//! Every long-run variance estimator on one path of a time-varying AR(1),
//! next to the true value.
//!
//! ```text
//! cargo run --release --example estimate_lrv -- 1000 3
//! ```

use std::sync::Arc;

use harlrv::lrv::{estimate, LrvKind, LrvOptions};
use harlrv::sls_sim::{constant, simulate_sls, true_lrv, Regime, SlsSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let t: usize = args.first().map_or(Ok(1000), |s| s.parse())?;
    let seed: u64 = args.get(1).map_or(Ok(3), |s| s.parse())?;

    // Smoothly rising persistence, then a break to a calmer regime.
    let spec = SlsSpec::new(vec![
        Regime {
            end: 0.7,
            ar: Arc::new(|u: f64| 0.2 + 0.6 * u),
            intercept: constant(0.0),
            innov_sd: constant(1.0),
        },
        Regime::constant(1.0, 0.3, 1.0),
    ])?;
    let v = simulate_sls(&spec, t, seed)?;
    println!("T = {t}, true long-run variance {:.3}", true_lrv(&spec)?);
    for kind in LrvKind::ALL {
        match estimate(&v, kind, &LrvOptions::default()) {
            Ok(est) => println!("{:<26} {:>9.3}  {:?}", kind.table_label(), est.j[(0, 0)], est.notes),
            Err(e) => println!("{:<26} error: {e}", kind.table_label()),
        }
    }
    Ok(())
}
