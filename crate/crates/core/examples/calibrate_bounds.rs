//! Recomputes `max |normalized error|·√n` over the calibration grid and
//! compares it with the values recorded in `asym::CALIBRATED_SCALED_ERRORS`.
//!
//!     cargo run --release --example calibrate_bounds

use fracsum::asym::{self, CALIBRATED_SCALED_ERRORS, CALIBRATION_GRID};
use fracsum::zeta::required_precision;

fn main() -> fracsum::Result<()> {
    for &(kind, s, recorded) in &CALIBRATED_SCALED_ERRORS {
        let top = *CALIBRATION_GRID.last().unwrap();
        let precision = required_precision(asym::law_power(kind, s), top) + 10;
        let rows = asym::convergence_table(kind, s, &CALIBRATION_GRID, precision)?;
        let scaled: Vec<String> = rows
            .iter()
            .map(|r| format!("{:+.5}", r.scaled_error.to_f64()))
            .collect();
        let observed = asym::max_scaled_error(&rows);
        // Recorded bounds are the maxima rounded up to four significant digits.
        let step = 10f64.powi(observed.log10().floor() as i32 - 3);
        let bound = (observed / step).ceil() * step;
        println!(
            "{kind} s={s}: scaled errors [{}]  max {observed:.8}  bound {bound:.6}  recorded {recorded}  {}",
            scaled.join(", "),
            if observed <= recorded { "ok" } else { "EXCEEDS" }
        );
    }
    Ok(())
}
