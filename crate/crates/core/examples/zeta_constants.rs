//! Bernoulli numbers, ζ(s), γ and the generalized constants γ_a.
//!
//!     cargo run --release --example zeta_constants [digits]

use fracsum::zeta::{self, bernoulli};
use fracsum::SumKind;
use num_rational::BigRational;

fn main() -> fracsum::Result<()> {
    let digits: u32 = std::env::args()
        .nth(1)
        .and_then(|a| a.parse().ok())
        .unwrap_or(50);
    for k in [0, 1, 2, 4, 12, 30] {
        println!("B_{k} = {}", bernoulli(k));
    }
    println!("gamma    = {}", zeta::euler_gamma(digits)?);
    for s in 2..=5 {
        println!("zeta({s})  = {}", zeta::zeta_int(s, digits)?);
    }
    for (num, den) in [(1i64, 2i64), (1, 3), (3, 2)] {
        let s = BigRational::new(num.into(), den.into());
        println!("zeta({s}) = {}", zeta::zeta(&s, digits)?);
    }
    for den in [2i64, 3, 10] {
        let a = BigRational::new(1.into(), den.into());
        println!("gamma_{a} = {}", zeta::gen_gamma(&a, digits)?);
    }
    println!("\nlimits of the normalized sums");
    for (kind, s) in [
        (SumKind::FracPower, 0),
        (SumKind::FracPower, 1),
        (SumKind::FracPower, 2),
        (SumKind::Transform, 2),
        (SumKind::Transform, 3),
        (SumKind::Pillichshammer, 2),
    ] {
        println!(
            "  {kind} s={s}: {}",
            zeta::theorem_constant(kind, s, digits)?
        );
    }
    Ok(())
}
