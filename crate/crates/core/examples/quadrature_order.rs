//! Second-order accuracy of the CM2 convolution on u(s) = s^3 at t = 1.
//!
//! `cargo run --example quadrature_order`

use hnmx::cq_weights::{cm2_weights, delta_consistency_residual};
use hnmx::special_fn::prabhakar_integral_monomial;

fn main() -> hnmx::Result<()> {
    for (a, b) in [(0.1, 0.1), (0.5, 0.5), (0.9, 0.9)] {
        let exact = prabhakar_integral_monomial(a, b, 3, 1.0)?;
        println!("alpha = {a}, beta = {b}, exact = {exact:.12}");
        let mut prev: Option<f64> = None;
        for n in [10, 20, 40, 80, 160, 320] {
            let tau = 1.0 / n as f64;
            let w = cm2_weights(a, b, tau, n)?;
            let u: Vec<f64> = (0..=n).map(|k| (k as f64 * tau).powi(3)).collect();
            let err = (w.convolve_last(&u) - exact).abs();
            let ratio = prev.map_or(String::new(), |p| format!("ratio {:.3}", p / err));
            println!("  tau = 1/{n:<4} error {err:.4e}  {ratio}");
            prev = Some(err);
        }
    }

    println!("\nconsistency residual r(tau) - 1");
    for a in [0.1, 0.5, 0.9] {
        let r: Vec<String> = [0.1, 0.05, 0.025, 0.0125]
            .iter()
            .map(|&t| delta_consistency_residual(a, t).map(|v| format!("{v:.4e}")))
            .collect::<hnmx::Result<_>>()?;
        println!("  alpha = {a}: {}", r.join("  "));
    }
    Ok(())
}
