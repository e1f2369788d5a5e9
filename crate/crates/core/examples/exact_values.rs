//! Exact fractional-part sums as reduced fractions, and the identity that
//! drives the transform.
//!
//!     cargo run --example exact_values

use fracsum::exact::{self, frac_diff, in_boundary, interval_count};
use num_rational::BigRational;

fn main() -> fracsum::Result<()> {
    let n = 10;
    println!("n = {n}");
    for s in 0..4 {
        println!("  f_{s}   = {}", exact::f_s_naive(n, s)?);
    }
    for s in 1..4 {
        println!("  Phi_{s} = {}", exact::phi_s_naive(n, s)?);
    }
    println!("  T_0   = {}", exact::t_s_naive(n, 0)?);
    println!("  poussin(w = 3)    = {}", exact::poussin_sum(n, 3)?);
    println!("  pillichshammer(2) = {}", exact::pillichshammer_sum(n, 2)?);

    // {n/x} − {n/(x+1)} = n/(x(x+1)) − #(integers in (n/(x+1), n/x])
    println!("\n x  {{n/x}}-{{n/(x+1)}}  n/(x(x+1))  count  boundary");
    for x in 1..n {
        let main = BigRational::new(n.into(), (x * (x + 1)).into());
        println!(
            "{x:>2}  {:>14}  {:>10}  {:>5}  {}",
            frac_diff(n, x)?.to_string(),
            main.to_string(),
            interval_count(n, x)?,
            in_boundary(n, x)?
        );
    }

    // Partial transforms stay within a constant multiple of w^s.
    let n = 1000;
    println!("\npartial transforms of n = {n}, s = 1");
    for w in [1, 10, 31, 100, 500, 999] {
        let g = exact::phi_partial(n, w, 1)?;
        println!(
            "  w = {w:>3}: g/w = {:+.6}",
            fracsum::Real::from_rational(&g, 20).to_f64() / w as f64
        );
    }
    Ok(())
}
