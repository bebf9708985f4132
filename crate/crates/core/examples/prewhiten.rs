//! Blockwise VAR(1) prewhitening of a series whose persistence changes
//! halfway: block coefficients and the recoloring factors.
//!
//! ```text
//! cargo run --release --example prewhiten
//! ```

use harlrv::bandwidths::default_block_len;
use harlrv::prewhiten::fit_blocks;
use harlrv::sls_sim::{simulate_sls, Regime, SlsSpec};

fn main() -> harlrv::Result<()> {
    let t = 1000;
    let spec = SlsSpec::new(vec![Regime::constant(0.5, 0.1, 1.0), Regime::constant(1.0, 0.85, 1.0)])?;
    let v = simulate_sls(&spec, t, 5)?;
    let n_t = default_block_len(t);

    let fit = fit_blocks(&v, n_t, 1, false)?;
    println!("{} blocks of {n_t} observations", fit.blocks.len());
    for (r, b) in fit.blocks.iter().enumerate() {
        println!(
            "block {r:>2} [{:>4}, {:>4}): A = {:>6.3}, D = {:>7.3}",
            b.start,
            b.end,
            b.coefficients[0][(0, 0)],
            b.recolor[(0, 0)]
        );
    }

    let single = fit_blocks(&v, t, 1, false)?;
    println!(
        "single block: A = {:.3}, D = {:.3}",
        single.blocks[0].coefficients[0][(0, 0)],
        single.blocks[0].recolor[(0, 0)]
    );
    let recolored = fit.recolored_padded()?;
    println!("recolored residual series: {} x {}", recolored.n_obs(), recolored.dim());
    Ok(())
}
