//! Lag kernel weights and the constants that enter the bandwidth formulas.
//!
//! ```text
//! cargo run --release --example kernels
//! ```

use harlrv::kernels::{time_kernel, LagKernel};

fn main() {
    let xs = [0.0, 0.25, 0.5, 1.0, 1.5, 3.0];
    print!("{:<20}", "kernel");
    for x in xs {
        print!("{:>9}", format!("x={x}"));
    }
    println!("{:>6}{:>10}{:>10}", "q", "K1,q", "int K^2");
    for k in LagKernel::ALL {
        print!("{:<20}", format!("{k:?}"));
        for x in xs {
            print!("{:>9.4}", k.weight(x));
        }
        match k.constants() {
            Some(c) => println!("{:>6}{:>10.4}{:>10.4}", c.q, c.k1q, c.int_k1_sq),
            None => println!("{:>6}", "-"),
        }
    }
    println!("time kernel K2 at 0.25, 0.5: {:.4}, {:.4}", time_kernel(0.25), time_kernel(0.5));
}
