//! Data-dependent bandwidths of the double-kernel estimator: per-block time
//! bandwidths, their average and the lag bandwidth.
//!
//! ```text
//! cargo run --release --example bandwidths
//! ```

use harlrv::bandwidths::{select_bandwidths, BandwidthConfig};
use harlrv::sls_sim::{simulate_sls, Regime, SlsSpec};

fn main() -> harlrv::Result<()> {
    let t = 800;
    for (label, spec) in [
        ("white noise", SlsSpec::stationary_ar1(0.0, 1.0)?),
        ("AR(1) a=0.7", SlsSpec::stationary_ar1(0.7, 1.0)?),
        (
            "break 0.2 -> 0.8",
            SlsSpec::new(vec![Regime::constant(0.5, 0.2, 1.0), Regime::constant(1.0, 0.8, 1.0)])?,
        ),
    ] {
        let v = simulate_sls(&spec, t, 11)?;
        let cfg = BandwidthConfig::for_len(t);
        let sel = select_bandwidths(&v, &cfg)?;
        println!("{label}: n_T = {}", cfg.block_len);
        println!("  b1 = {:.4}, phi = {:.4}, mean b2 = {:.4}", sel.b1, sel.phi_hat, sel.b2_bar);
        let per_block: Vec<String> = sel.b2_per_block.iter().map(|(u, b)| format!("{u:.2}:{b:.3}")).collect();
        println!("  b2 by block start: {}", per_block.join(" "));
        for w in &sel.warnings {
            println!("  warning: {w}");
        }
    }
    Ok(())
}
