//! Convergence of the normalized sums to their limits, with the error scaled by √n.
//!
//!     cargo run --release --example limit_laws

use fracsum::asym::{convergence_table, law_label};
use fracsum::SumKind;

fn main() -> fracsum::Result<()> {
    let grid = [1_000u64, 10_000, 100_000, 1_000_000];
    let cases = [
        (SumKind::FracPower, 0),
        (SumKind::FracPower, 1),
        (SumKind::FracPower, 2),
        (SumKind::Transform, 2),
        (SumKind::Transform, 3),
        (SumKind::Poussin, 3),
        (SumKind::Pillichshammer, 2),
    ];
    for (kind, s) in cases {
        let rows = convergence_table(kind, s, &grid, 60)?;
        println!(
            "{kind} s={s} ({}), limit {:.12}",
            law_label(kind, s),
            rows[0].constant.to_f64()
        );
        for r in &rows {
            println!(
                "  n = {:>8}  normalized {:.12}  error {:+.3e}  error·√n {:+.5}",
                r.n,
                r.normalized.to_f64(),
                r.error.to_f64(),
                r.scaled_error.to_f64()
            );
        }
    }
    Ok(())
}
