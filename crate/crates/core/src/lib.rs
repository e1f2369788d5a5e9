//! Fractional-part power sums and their connection to zeta values.
//!
//! The crate computes
//!
//! * `f_s(n) = Σ_{x≤n} {n/x}·x^s`, the fractional-part power sums,
//! * `Φ_s(n) = Σ_{x<n} ({n/x} − {n/(x+1)})·x^s`, their fractional transforms,
//! * `T_s(n) = Σ_{x≤n} ⌊n/x⌋·x^s`, the divisor-weighted sums,
//! * the arithmetic-progression and power variants of Dirichlet's average,
//!
//! exactly (arbitrary-precision integers and rationals) and, where possible, in
//! `O(√n)` arithmetic operations by grouping `x` into runs of constant `⌊n/x⌋`.
//!
//! On top of the evaluators sit a high-precision constants engine (Bernoulli
//! numbers, `ζ(s)` by Euler–Maclaurin, the Euler–Mascheroni constant) and a small
//! laboratory that measures how fast the normalized sums approach their limits:
//!
//! ```text
//! f_s(n) / n^{s+1}  →  1/s − ζ(s+1)/(s+1)          (s ≥ 1)
//! f_0(n) / n        →  1 − γ
//! Φ_s(n) / n^s      →  1/(s−1) + 1 − ζ(s)          (s ≥ 2)
//! ```
//!
//! Runnable walkthroughs of each capability live in the crate's `examples/`
//! directory; the `fracsum` binary exposes the same functionality on the command
//! line.

pub mod asym;
pub mod cli;
mod error;
pub mod exact;
pub mod fastsum;
pub mod real;
pub mod zeta;

pub use error::{Error, Result};
pub use real::Real;

use num_bigint::BigUint;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

/// Arbitrary-precision non-negative integer used for every exact sum.
pub type Natural = BigUint;

/// Canonical fraction (`gcd(num, den) = 1`, `den ≥ 1`, zero is `0/1`).
pub type ExactRational = BigRational;

/// The families of sums the crate knows how to evaluate and verify.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SumKind {
    /// `f_s(n) = Σ {n/x} x^s`
    FracPower,
    /// `Φ_s(n) = Σ ({n/x} − {n/(x+1)}) x^s`
    Transform,
    /// `T_s(n) = Σ ⌊n/x⌋ x^s`
    DivisorWeighted,
    /// `Σ_{x ≤ (n−1)/w} {n/(wx+1)}`
    Poussin,
    /// `Σ_{x ≤ n^{1/β}} {n/x^β}`
    Pillichshammer,
}

impl SumKind {
    pub const ALL: [SumKind; 5] = [
        SumKind::FracPower,
        SumKind::Transform,
        SumKind::DivisorWeighted,
        SumKind::Poussin,
        SumKind::Pillichshammer,
    ];

    /// Short name used on the command line and in emitted tables.
    pub fn short_name(self) -> &'static str {
        match self {
            SumKind::FracPower => "f",
            SumKind::Transform => "phi",
            SumKind::DivisorWeighted => "t",
            SumKind::Poussin => "poussin",
            SumKind::Pillichshammer => "pill",
        }
    }

    /// Inverse of [`SumKind::short_name`].
    pub fn from_short_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.short_name() == name)
    }
}

impl std::fmt::Display for SumKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.short_name())
    }
}
