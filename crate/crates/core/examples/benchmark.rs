//! Wall time of the naive and block evaluators of `T_s(n)`.
//!
//!     cargo run --release --example benchmark

use fracsum::{exact, fastsum};
use std::time::Instant;

fn main() -> fracsum::Result<()> {
    println!(
        "{:>12} {:>2} {:>12} {:>12} {:>9}",
        "n", "s", "naive", "fast", "speedup"
    );
    for s in [0u32, 2] {
        for n in [10_000u64, 1_000_000, 100_000_000] {
            let start = Instant::now();
            let fast = fastsum::t_s_fast(n, s)?;
            let fast_time = start.elapsed();
            let start = Instant::now();
            let naive = exact::t_s_naive(n, s)?;
            let naive_time = start.elapsed();
            assert_eq!(fast, naive);
            println!(
                "{n:>12} {s:>2} {:>12.3?} {:>12.3?} {:>8.0}x",
                naive_time,
                fast_time,
                naive_time.as_secs_f64() / fast_time.as_secs_f64()
            );
        }
    }
    for n in [1_000_000_000u64, 1_000_000_000_000] {
        let start = Instant::now();
        fastsum::t_s_fast(n, 0)?;
        println!("{n:>12}  0 {:>12} {:>12.3?}", "skipped", start.elapsed());
    }
    Ok(())
}
