//! Plot-ready CSV of Φ_s(n)/n^s for s = 1, 2, 3 and n ≤ 1000 next to the limits.
//!
//!     cargo run --release --example transform_curves > curves.csv

use fracsum::asym::convergence_table;
use fracsum::SumKind;

fn main() -> fracsum::Result<()> {
    let grid: Vec<u64> = (1..=1000).collect();
    let tables = (1..=3)
        .map(|s| convergence_table(SumKind::Transform, s, &grid, 30))
        .collect::<fracsum::Result<Vec<_>>>()?;
    let mut out = csv::Writer::from_writer(std::io::stdout());
    out.write_record(["n", "s1", "s2", "s3", "limit_s1", "limit_s2", "limit_s3"])
        .expect("stdout");
    for (i, n) in grid.iter().enumerate() {
        let mut record = vec![n.to_string()];
        record.extend(
            tables
                .iter()
                .map(|t| format!("{:.10}", t[i].normalized.to_f64())),
        );
        record.extend(
            tables
                .iter()
                .map(|t| format!("{:.10}", t[i].constant.to_f64())),
        );
        out.write_record(&record).expect("stdout");
    }
    out.flush().expect("stdout");
    Ok(())
}
