//! Three-parameter Mittag-Leffler function and the Havriliak-Negami kernel.
//!
//! `cargo run --example kernel`

use hnmx::special_fn::{hn_kernel, ml3, prabhakar_integral_monomial, PrabhakarParams};

fn main() -> hnmx::Result<()> {
    let p = PrabhakarParams::new(0.5, 1.0, 1.0)?;
    println!("E_(1/2,1)(-1) = {:.15}", ml3(p, -1.0)?);

    println!("\n{:>8} {:>14} {:>14} {:>14}", "t", "(0.5,0.5)", "(0.9,0.3)", "Debye");
    for t in [0.001, 0.01, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0] {
        println!(
            "{t:>8} {:>14.6e} {:>14.6e} {:>14.6e}",
            hn_kernel(0.5, 0.5, t)?,
            hn_kernel(0.9, 0.3, t)?,
            hn_kernel(1.0, 1.0, t)?
        );
    }

    // k! t^(αβ+k) E^β_{α,αβ+k+1}(-t^α) equals the convolution of the kernel
    // with s^k on [0, t]
    println!("\nconvolution of the (0.5,0.5) kernel with s^k at t = 1");
    for k in 0..4 {
        println!("  k = {k}: {:.15}", prabhakar_integral_monomial(0.5, 0.5, k, 1.0)?);
    }
    Ok(())
}
