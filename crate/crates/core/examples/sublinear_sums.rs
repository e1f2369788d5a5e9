//! Floor-quotient blocks and the O(√n) evaluators.
//!
//!     cargo run --release --example sublinear_sums

use fracsum::exact;
use fracsum::fastsum::{self, quotient_blocks};
use std::time::Instant;

fn main() -> fracsum::Result<()> {
    print!("blocks of 30:");
    for b in quotient_blocks(30)? {
        print!(" {}..={}:{}", b.lo, b.hi, b.q);
    }
    println!();

    for n in [1_000u64, 1_000_000, 1_000_000_000_000] {
        let start = Instant::now();
        let (t, ops) = fastsum::t_s_fast_counted(n, 0)?;
        println!(
            "D({n}) = {t}  [{} blocks, {ops} ops, {:.2?}]",
            quotient_blocks(n)?.count(),
            start.elapsed()
        );
    }

    // Integer-valued f_s for s ≥ 1 and exact Φ_s, checked against the loops.
    let n = 5_000;
    for s in 1..=3 {
        let fast = fastsum::f_s_fast(n, s)?;
        let naive = exact::f_s_naive(n, s)?;
        assert_eq!(naive, num_bigint::BigInt::from(fast.clone()).into());
        println!("f_{s}({n}) = {fast}");
    }
    let phi = fastsum::phi_s_fast(n, 2)?;
    assert_eq!(phi, exact::phi_s_naive(n, 2)?);
    println!(
        "Phi_2({n}) = {} (denominator of {} digits)",
        fracsum::Real::from_rational(&phi, 30),
        phi.denom().to_string().len()
    );

    let n = 10_000_000_000u64;
    let start = Instant::now();
    let f0 = fastsum::f0_fast_real(n, 40)?;
    println!("f_0({n}) = {f0}  [{:.2?}]", start.elapsed());
    Ok(())
}
