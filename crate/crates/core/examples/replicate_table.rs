//! Reproduces one of the reference size/power tables and prints the
//! side-by-side comparison.
//!
//! ```text
//! cargo run --release --example replicate_table -- 4 1000 7
//! ```
//! Arguments: table id (1-4), replications, root seed.

use harlrv::montecarlo::replicate_table;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let table: u8 = args.first().map_or(Ok(1), |s| s.parse())?;
    let reps: usize = args.get(1).map_or(Ok(500), |s| s.parse())?;
    let seed: u64 = args.get(2).map_or(Ok(7), |s| s.parse())?;

    let cmp = replicate_table(table, reps, seed, None)?;
    println!("{:<14} {:>5} {:>5} {:<9} {:>7} {:>7} {:>6}", "model", "T", "delta", "estimator", "reference", "ours", "ok");
    for r in &cmp.rows {
        println!(
            "{:<14} {:>5} {:>5} {:<9} {:>7.3} {:>7.3} {:>6}",
            r.model.label(),
            r.t,
            r.delta,
            r.estimator.token(),
            r.reference,
            r.reproduced,
            if r.pass { "yes" } else { "NO" }
        );
    }
    println!(
        "{:.0}% of cells within tolerance; {:.1}s on {} thread(s)",
        100.0 * cmp.pass_share(),
        cmp.runtime.seconds,
        cmp.runtime.threads
    );
    for f in &cmp.failed_cells {
        println!("failed cell: {f}");
    }
    Ok(())
}
