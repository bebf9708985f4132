//! Regenerates the KVB fixed-b critical-value table baked into
//! `src/har_tests/kvb_table.rs`.
//!
//! ```text
//! cargo run --release --example kvb_critical_values > crates/core/src/har_tests/kvb_table.rs
//! ```

use harlrv::har_tests::kvb_sim::{alpha_grid, simulate_critical_values};
use harlrv::har_tests::{KVB_TABLE_PATHS, KVB_TABLE_SEED, KVB_TABLE_STEPS};

fn main() {
    let alphas = alpha_grid();
    let cvs = simulate_critical_values(KVB_TABLE_PATHS, KVB_TABLE_STEPS, KVB_TABLE_SEED, &alphas);
    println!("// Generated by examples/kvb_critical_values.rs; do not edit by hand.");
    println!(
        "// {} paths, {} steps, seed {}.",
        KVB_TABLE_PATHS, KVB_TABLE_STEPS, KVB_TABLE_SEED
    );
    println!();
    println!("/// Two-sided critical values at α = 0.005, 0.010, …, 0.500.");
    println!("pub const KVB_CRITICAL_VALUES: [f64; {}] = [", cvs.len());
    for (a, c) in alphas.iter().zip(&cvs) {
        println!("    {c:.6}, // {a:.3}");
    }
    println!("];");
}
