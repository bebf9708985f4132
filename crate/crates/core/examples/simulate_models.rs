//! Draws one dataset from each Monte Carlo model and prints what a HAR test
//! would receive.
//!
//! ```text
//! cargo run --release --example simulate_models -- 400 1
//! ```

use harlrv::sls_sim::dgp::{make_dgp, Dataset, DgpId, Model};

fn mean(x: &[f64]) -> f64 {
    x.iter().sum::<f64>() / x.len() as f64
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let t: usize = args.first().map_or(Ok(400), |s| s.parse())?;
    let seed: u64 = args.get(1).map_or(Ok(1), |s| s.parse())?;

    for model in [Model::M1 { rho: 0.9 }, Model::M2, Model::M3, Model::M4] {
        for delta in [0.0, 2.0] {
            let data = make_dgp(&DgpId { model, delta, t, seed })?;
            let summary = match &data {
                Dataset::Regression { y, x, coef_index } => format!(
                    "y: {} obs, mean {:.3}; design {}x{}; testing coefficient {coef_index}",
                    y.len(),
                    mean(y),
                    x.nrows(),
                    x.ncols()
                ),
                Dataset::LossDifferential { d } => {
                    let tail = &d[d.len() / 2..];
                    format!("d: {} obs, mean {:.3}, mean of second half {:.3}", d.len(), mean(d), mean(tail))
                }
                Dataset::ForecastBreakdown { in_losses, out_losses } => format!(
                    "{} in-sample losses (mean {:.3}), {} out-of-sample (mean {:.3})",
                    in_losses.len(),
                    mean(in_losses),
                    out_losses.len(),
                    mean(out_losses)
                ),
            };
            println!("{:<12} delta={delta}: {summary}", model.label());
        }
    }
    Ok(())
}
