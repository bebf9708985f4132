//! Simulates a segmented locally stationary AR(1) with a break and compares
//! the sample variance in each regime with the theoretical one.
//!
//! ```text
//! cargo run --release --example simulate_sls
//! ```

use harlrv::sls_sim::{simulate_sls, true_lrv, Regime, SlsSpec};

fn main() -> harlrv::Result<()> {
    // a = 0.2 on the first half, 0.8 on the second.
    let spec = SlsSpec::new(vec![Regime::constant(0.5, 0.2, 1.0), Regime::constant(1.0, 0.8, 1.0)])?;
    let t_len = 20_000;
    let v = simulate_sls(&spec, t_len, 42)?;
    let col: Vec<f64> = v.column(0).to_vec();
    let (first, second) = col.split_at(t_len / 2);
    let var = |x: &[f64]| x.iter().map(|v| v * v).sum::<f64>() / x.len() as f64;
    println!("regime 1: sample variance {:.3}, theory {:.3}", var(first), 1.0 / (1.0 - 0.04));
    println!("regime 2: sample variance {:.3}, theory {:.3}", var(second), 1.0 / (1.0 - 0.64));
    println!("long-run variance of the whole path: {:.5}", true_lrv(&spec)?);
    Ok(())
}
