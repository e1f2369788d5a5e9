//! Log-log fit of the Dirichlet residual `f_0(n) − (1−γ)n` over a doubling grid.
//!
//!     cargo run --release --example divisor_exponent [max_log2]

use fracsum::asym::{fit_exponent, geometric_grid, residuals};
use fracsum::SumKind;

fn main() -> fracsum::Result<()> {
    let top: u32 = std::env::args()
        .nth(1)
        .and_then(|a| a.parse().ok())
        .unwrap_or(26);
    let grid = geometric_grid(1 << 10, 1 << top, 2)?;
    let samples = residuals(SumKind::FracPower, 0, &grid, 40)?;
    for r in &samples {
        let abs = r.residual.to_f64().abs();
        println!(
            "n = 2^{:<2}  residual {:+.6}  |r|/n^(1/4) {:.4}",
            r.n.ilog2(),
            r.residual.to_f64(),
            abs / (r.n as f64).powf(0.25)
        );
    }
    let fit = fit_exponent(&samples)?;
    println!(
        "theta_hat = {:.4}, log C = {:.4}, r^2 = {:.4}, dropped {}",
        fit.theta_hat, fit.log_c, fit.r_squared, fit.dropped_points
    );
    Ok(())
}
