//! Local autocovariances track a variance that doubles halfway through the
//! sample, while the block average recovers the overall level.
//!
//! ```text
//! cargo run --release --example local_autocovariance
//! ```

use harlrv::local_autocov::{block_avg_acov, block_count, local_acov, LocalAcovConfig};
use harlrv::sls_sim::{simulate_sls, Regime, SlsSpec};

fn main() -> harlrv::Result<()> {
    let t = 4000;
    let spec = SlsSpec::new(vec![Regime::constant(0.5, 0.0, 1.0), Regime::constant(1.0, 0.0, 2f64.sqrt())])?;
    let v = simulate_sls(&spec, t, 9)?;
    let cfg = LocalAcovConfig { b2: 0.1, block_len: 250 };
    for r in 0..block_count(t, cfg.block_len) {
        let c0 = local_acov(&v, r, 0, &cfg)?;
        let c1 = local_acov(&v, r, 1, &cfg)?;
        println!(
            "block {r:>2} ends at u = {:.3}: c(u,0) = {:.3}, c(u,1) = {:+.3}",
            ((r + 1) * cfg.block_len) as f64 / t as f64,
            c0[(0, 0)],
            c1[(0, 0)]
        );
    }
    println!("block average at lag 0: {:.3}", block_avg_acov(&v, 0, &cfg)?[(0, 0)]);
    Ok(())
}
