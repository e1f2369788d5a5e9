//! Exact reference evaluators.
//!
//! Every quantity here is computed by direct summation in arbitrary-precision
//! arithmetic: `O(n)` terms, no floating point. Rational sums are accumulated over
//! the least common multiple of their denominators and reduced once at the end,
//! which keeps the cost of each term proportional to the size of that multiple
//! instead of paying a gcd per addition.
//!
//! Indices (`n`, `x`, `w`, `β`) are machine words; every product and sum is a
//! [`Natural`] or [`ExactRational`].

use num_bigint::{BigInt, BigUint};
use num_integer::{Integer, Roots};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{domain, Result};
use crate::{ExactRational, Natural};

fn require_positive(name: &str, v: u64) -> Result<()> {
    if v == 0 {
        domain(format!("{name} must be at least 1"))
    } else {
        Ok(())
    }
}

fn lcm_with(acc: BigUint, d: u64) -> BigUint {
    let r = (&acc % d).iter_u64_digits().next().unwrap_or(0);
    let g = r.gcd(&d);
    acc * (d / g)
}

/// Terms per chunk in [`sum_over_lcm`]; chunk-local multiples stay a few words long.
const LCM_CHUNK: usize = 64;

/// `Σ numerator_i / denominator_i` over the lcm of the denominators.
///
/// Terms are first summed in chunks over the chunk's own lcm, so the per-term
/// work is on short integers; the chunk sums are then lifted to the global lcm.
fn sum_over_lcm<I>(terms: I) -> ExactRational
where
    I: Iterator<Item = (BigInt, u64)>,
{
    let terms: Vec<(BigInt, u64)> = terms.collect();
    let mut parts = Vec::with_capacity(terms.len() / LCM_CHUNK + 1);
    let mut lcm = BigUint::one();
    for chunk in terms.chunks(LCM_CHUNK) {
        let local = chunk
            .iter()
            .fold(BigUint::one(), |acc, (_, d)| lcm_with(acc, *d));
        let mut num = BigInt::zero();
        for (a, d) in chunk {
            if !a.is_zero() {
                num += a * BigInt::from(&local / *d);
            }
        }
        // lcm(L, m) = L·(m / gcd(L mod m, m)), with the gcd on short operands.
        let g = (&lcm % &local).gcd(&local);
        lcm *= &local / g;
        parts.push((num, local));
    }
    let mut num = BigInt::zero();
    for (part, local) in parts {
        if !part.is_zero() {
            num += part * BigInt::from(&lcm / local);
        }
    }
    BigRational::new(num, BigInt::from(lcm))
}

/// `⌊n^{1/k}⌋`, exact for every `u64`.
pub fn integer_root(n: u64, k: u32) -> u64 {
    n.nth_root(k)
}

/// Fractional part `{n/x} = (n mod x)/x`.
pub fn frac(n: u64, x: u64) -> Result<ExactRational> {
    require_positive("x", x)?;
    Ok(BigRational::new(BigInt::from(n % x), BigInt::from(x)))
}

/// Number of integers in the half-open interval `(n/(x+1), n/x]`, i.e.
/// `⌊n/x⌋ − ⌊n/(x+1)⌋`.
///
/// The closed interval `[n/(x+1), n/x]` overcounts by one whenever `(x+1) | n`;
/// the half-open count is the one for which
/// `{n/x} − {n/(x+1)} = n/(x(x+1)) − count` holds for every input.
pub fn interval_count(n: u64, x: u64) -> Result<u64> {
    require_positive("x", x)?;
    Ok(n / x - n / (x + 1))
}

/// Membership of `x` in the boundary set: `(n/(x+1), n/x]` contains an integer.
pub fn in_boundary(n: u64, x: u64) -> Result<bool> {
    Ok(interval_count(n, x)? >= 1)
}

/// `{n/x} − {n/(x+1)}`.
pub fn frac_diff(n: u64, x: u64) -> Result<ExactRational> {
    Ok(frac(n, x)? - frac(n, x + 1)?)
}

/// `H_n = Σ_{x≤n} 1/x` as an exact rational.
pub fn harmonic(n: u64) -> ExactRational {
    sum_over_lcm((1..=n).map(|x| (BigInt::one(), x)))
}

/// `f_s(n) = Σ_{x=1}^{n} {n/x}·x^s`, by direct summation.
///
/// For `s ≥ 1` the value is the integer `Σ (n mod x)·x^{s−1}`.
pub fn f_s_naive(n: u64, s: u32) -> Result<ExactRational> {
    require_positive("n", n)?;
    if s == 0 {
        return Ok(sum_over_lcm((1..=n).map(|x| (BigInt::from(n % x), x))));
    }
    let mut acc = BigUint::zero();
    for x in 1..=n {
        let r = n % x;
        if r != 0 {
            acc += BigUint::from(x).pow(s - 1) * r;
        }
    }
    Ok(BigRational::from_integer(acc.into()))
}

fn transform_terms(n: u64, w: u64, s: u32) -> impl Iterator<Item = (BigInt, u64)> + Clone {
    (1..=w).flat_map(move |x| {
        let weight = BigInt::from(x).pow(s);
        [(&weight * (n % x), x), (-(weight * (n % (x + 1))), x + 1)]
    })
}

/// `Φ_s(n) = Σ_{x=1}^{n−1} ({n/x} − {n/(x+1)})·x^s`, summed as written.
pub fn phi_s_naive(n: u64, s: u32) -> Result<ExactRational> {
    require_positive("n", n)?;
    Ok(sum_over_lcm(transform_terms(n, n - 1, s)))
}

/// Partial transform `Σ_{x=1}^{w} ({n/x} − {n/(x+1)})·x^s` for `w ≤ n − 1`.
pub fn phi_partial(n: u64, w: u64, s: u32) -> Result<ExactRational> {
    require_positive("n", n)?;
    if w >= n {
        return domain(format!(
            "partial transform needs w ≤ n − 1 (n = {n}, w = {w})"
        ));
    }
    Ok(sum_over_lcm(transform_terms(n, w, s)))
}

/// `Σ_{x=1}^{⌊(n−1)/w⌋} {n/(wx+1)}`, the arithmetic-progression average.
pub fn poussin_sum(n: u64, w: u64) -> Result<ExactRational> {
    require_positive("n", n)?;
    require_positive("w", w)?;
    let top = (n - 1) / w;
    Ok(sum_over_lcm((1..=top).map(|x| {
        let d = w * x + 1;
        (BigInt::from(n % d), d)
    })))
}

/// `Σ_{x=1}^{⌊n^{1/β}⌋} {n/x^β}` for integer `β ≥ 2`.
pub fn pillichshammer_sum(n: u64, beta: u32) -> Result<ExactRational> {
    require_positive("n", n)?;
    if beta < 2 {
        return domain(format!(
            "exact power sums need an integer exponent β ≥ 2, got {beta}"
        ));
    }
    let top = integer_root(n, beta);
    Ok(sum_over_lcm((1..=top).map(|x| {
        // x^β ≤ n by construction of `top`.
        let d = x.pow(beta);
        (BigInt::from(n % d), d)
    })))
}

/// `T_s(n) = Σ_{x=1}^{n} ⌊n/x⌋·x^s`, one term at a time.
pub fn t_s_naive(n: u64, s: u32) -> Result<Natural> {
    require_positive("n", n)?;
    let mut acc = BigUint::zero();
    if s == 0 {
        for x in 1..=n {
            acc += n / x;
        }
    } else {
        for x in 1..=n {
            acc += BigUint::from(x).pow(s) * (n / x);
        }
    }
    Ok(acc)
}
