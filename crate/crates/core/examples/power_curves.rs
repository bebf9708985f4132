//! A small power experiment on M3 written as a JSON report and an SVG chart.
//!
//! ```text
//! cargo run --release --example power_curves -- 300 out/
//! ```
//! Arguments: replications and output directory.

use std::path::PathBuf;

use harlrv::io::write_json;
use harlrv::lrv::LrvKind;
use harlrv::montecarlo::{run_experiment, McConfig};
use harlrv::plot::power_curves_svg;
use harlrv::sls_sim::dgp::Model;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let reps: usize = args.first().map_or(Ok(300), |s| s.parse())?;
    let dir = PathBuf::from(args.get(1).map_or(".", String::as_str));
    std::fs::create_dir_all(&dir)?;

    let cfg = McConfig {
        models: vec![Model::M3],
        estimators: vec![LrvKind::PwDkSls, LrvKind::PwDkSlsMu, LrvKind::PwNw87, LrvKind::Kvb],
        t_grid: vec![400],
        delta_grid: vec![0.0, 0.5, 1.0, 2.0, 4.0, 6.0],
        replications: reps,
        root_seed: 2024,
        alpha: 0.05,
        threads: None,
        demean: false,
        debug_normal_statistic: false,
    };
    let report = run_experiment(&cfg)?;
    for c in &report.cells {
        println!("{:<26} delta={:<4} rate={:.3} (se {:.3})", c.estimator.table_label(), c.delta, c.rate, c.mc_se);
    }
    write_json(&dir.join("power_m3.json"), &report)?;
    std::fs::write(dir.join("power_m3.svg"), power_curves_svg(&report)?)?;
    println!("wrote {}", dir.join("power_m3.svg").display());
    Ok(())
}
