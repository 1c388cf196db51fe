//! Convolution quadrature weights: CM2 against BDF1 and BDF2. At
//! `alpha = 1/2` the CM2 symbol reduces to the BDF2 one and the columns agree.
//!
//! `cargo run --example weights -- 0.7 0.4 0.01`

use hnmx::cq_weights::{CqWeights, Scheme};

fn main() -> hnmx::Result<()> {
    let args: Vec<f64> = std::env::args().skip(1).map(|a| a.parse().expect("numeric argument")).collect();
    let (alpha, beta, tau) = match args[..] {
        [a, b, t] => (a, b, t),
        _ => (0.7, 0.5, 0.01),
    };
    let n = 12;
    let sets = [Scheme::Cm2, Scheme::Bdf1, Scheme::Bdf2]
        .map(|s| CqWeights::generate(s, alpha, beta, tau, n))
        .into_iter()
        .collect::<hnmx::Result<Vec<_>>>()?;

    println!("alpha = {alpha}, beta = {beta}, tau = {tau}");
    println!("{:>3} {:>16} {:>16} {:>16}", "j", "cm2", "bdf1", "bdf2");
    for j in 0..=n {
        println!("{j:>3} {:>16.9e} {:>16.9e} {:>16.9e}", sets[0].weights[j], sets[1].weights[j], sets[2].weights[j]);
    }
    let bdf2_neg = sets[2].weights.iter().filter(|&&w| w < 0.0).count();
    println!("\nnegative bdf2 weights among the first {}: {bdf2_neg}", n + 1);
    Ok(())
}
