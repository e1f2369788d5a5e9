//! Sublinear evaluators built on the hyperbola method.
//!
//! `x ↦ ⌊n/x⌋` takes at most `2⌊√n⌋` distinct values on `[1, n]`, each on a
//! contiguous run of `x`. Summing `⌊n/x⌋·x^s` block by block with a closed-form
//! power sum for `Σ_{lo≤x≤hi} x^s` costs `O(√n)` polynomial evaluations:
//!
//! ```text
//! T_s(n) = Σ_blocks q · (S_s(hi) − S_s(lo − 1))
//! f_s(n) = n · S_{s−1}(n) − T_s(n)                       (s ≥ 1)
//! Φ_s(n) = Σ_{k=1}^{s} (−1)^{k+1} C(s,k) f_{s−k}(n)
//! ```
//!
//! where `S_p(m) = Σ_{x≤m} x^p` is Faulhaber's polynomial. All arithmetic on
//! sums stays arbitrary precision.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{domain, Error, Result};
use crate::exact::{harmonic, integer_root};
use crate::real::{bits_for_digits, Real};
use crate::zeta::{bernoulli, euler_gamma, MAX_PRECISION};
use crate::{ExactRational, Natural};

/// A maximal run `lo..=hi` on which `⌊n/x⌋ = q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuotientBlock {
    pub q: u64,
    pub lo: u64,
    pub hi: u64,
}

impl QuotientBlock {
    /// Number of `x` values in the block.
    pub fn width(&self) -> u64 {
        self.hi - self.lo + 1
    }
}

/// Iterator over the constant-quotient blocks of `n`, in increasing `x`.
#[derive(Debug, Clone)]
pub struct QuotientBlocks {
    n: u64,
    next: u64,
}

impl Iterator for QuotientBlocks {
    type Item = QuotientBlock;

    fn next(&mut self) -> Option<QuotientBlock> {
        if self.next == 0 || self.next > self.n {
            return None;
        }
        let lo = self.next;
        let q = self.n / lo;
        let hi = self.n / q;
        self.next = hi.checked_add(1).unwrap_or(0);
        Some(QuotientBlock { q, lo, hi })
    }
}

/// Blocks of `x ↦ ⌊n/x⌋` over `[1, n]` via the jump `x' = ⌊n/⌊n/x⌋⌋ + 1`.
pub fn quotient_blocks(n: u64) -> Result<QuotientBlocks> {
    if n == 0 {
        return domain("quotient blocks need n ≥ 1");
    }
    Ok(QuotientBlocks { n, next: 1 })
}

/// Blocks of `n` covering `[x, n]`; the first block may be a partial run.
pub fn quotient_blocks_from(n: u64, x: u64) -> Result<QuotientBlocks> {
    if n == 0 || x == 0 {
        return domain("quotient blocks need n ≥ 1 and x ≥ 1");
    }
    Ok(QuotientBlocks { n, next: x })
}

/// Faulhaber polynomial `S_p(m) = Σ_{x=1}^{m} x^p`, degree `p + 1`, stored as
/// integer numerators over one common denominator.
#[derive(Debug, Clone)]
pub struct PowerSumPoly {
    p: u32,
    numerators: Vec<BigInt>,
    denominator: BigInt,
}

impl PowerSumPoly {
    /// `S_p(m) = 1/(p+1) · Σ_{j=0}^{p} C(p+1, j)·B_j·m^{p+1−j}` with `B_1 = +1/2`.
    pub fn new(p: u32) -> Self {
        let degree = p as usize + 1;
        let mut coeffs = vec![BigRational::zero(); degree + 1];
        let mut binom = BigInt::one();
        let scale = BigRational::from_integer(BigInt::from(degree));
        for j in 0..degree {
            coeffs[degree - j] = bernoulli(j) * &binom / &scale;
            binom = binom * (degree - j) / (j + 1);
        }
        let denominator = coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let numerators = coeffs
            .iter()
            .map(|c| c.numer() * (&denominator / c.denom()))
            .collect();
        PowerSumPoly {
            p,
            numerators,
            denominator,
        }
    }

    pub fn exponent(&self) -> u32 {
        self.p
    }

    /// Coefficients in ascending degree.
    pub fn coefficients(&self) -> Vec<ExactRational> {
        self.numerators
            .iter()
            .map(|c| BigRational::new(c.clone(), self.denominator.clone()))
            .collect()
    }

    /// `S_p(m)`; `S_p(0) = 0`.
    pub fn eval(&self, m: u64) -> BigInt {
        let mut ops = 0;
        self.eval_counted(m, &mut ops)
    }

    fn eval_counted(&self, m: u64, ops: &mut u64) -> BigInt {
        let m = BigInt::from(m);
        let mut acc = BigInt::zero();
        for c in self.numerators.iter().rev() {
            acc = acc * &m + c;
            *ops += 2;
        }
        if !self.denominator.is_one() {
            acc /= &self.denominator;
            *ops += 1;
        }
        acc
    }
}

static POWER_SUMS: RwLock<Option<HashMap<u32, Arc<PowerSumPoly>>>> = RwLock::new(None);

/// Cached Faulhaber polynomial for exponent `p`.
pub fn power_sum_poly(p: u32) -> Arc<PowerSumPoly> {
    if let Some(poly) = POWER_SUMS
        .read()
        .expect("power-sum cache poisoned")
        .as_ref()
        .and_then(|m| m.get(&p))
    {
        return Arc::clone(poly);
    }
    let poly = Arc::new(PowerSumPoly::new(p));
    let mut guard = POWER_SUMS.write().expect("power-sum cache poisoned");
    Arc::clone(
        guard
            .get_or_insert_with(HashMap::new)
            .entry(p)
            .or_insert(poly),
    )
}

/// `Σ_{x=a}^{b} x^p` in closed form; rejects `a > b` and `a = 0`.
pub fn faulhaber_sum(p: u32, a: u64, b: u64) -> Result<Natural> {
    if a == 0 {
        return domain("power sums start at a ≥ 1");
    }
    if a > b {
        return domain(format!("empty power-sum range {a}..={b}"));
    }
    let poly = power_sum_poly(p);
    let v = poly.eval(b) - poly.eval(a - 1);
    Ok(v.magnitude().clone())
}

/// `T_s(n) = Σ_{x≤n} ⌊n/x⌋·x^s` together with the number of arithmetic
/// operations spent (two per Horner step, three per block).
pub fn t_s_fast_counted(n: u64, s: u32) -> Result<(Natural, u64)> {
    let blocks = quotient_blocks(n)?;
    let poly = power_sum_poly(s);
    let mut ops = 0u64;
    let mut acc = BigInt::zero();
    let mut prev = BigInt::zero();
    for block in blocks {
        let cur = poly.eval_counted(block.hi, &mut ops);
        acc += (&cur - &prev) * block.q;
        ops += 3;
        prev = cur;
    }
    Ok((acc.magnitude().clone(), ops))
}

/// `T_s(n) = Σ_{x≤n} ⌊n/x⌋·x^s` in `O(√n)` polynomial evaluations.
pub fn t_s_fast(n: u64, s: u32) -> Result<Natural> {
    t_s_fast_counted(n, s).map(|(v, _)| v)
}

/// Operation count of the one-term-at-a-time loop for `T_s(n)`: a division,
/// `s` multiplications for `x^s`, a multiplication by the quotient and an
/// addition per term.
pub fn t_s_naive_ops(n: u64, s: u32) -> u64 {
    n.saturating_mul(u64::from(s) + 3)
}

/// `f_s(n)` for `s ≥ 1` as the integer `n·S_{s−1}(n) − T_s(n)`.
pub fn f_s_fast(n: u64, s: u32) -> Result<Natural> {
    if s == 0 {
        return Err(Error::Unsupported(
            "f_0 is rational; use f_s_naive for exact values or f0_fast_real for large n".into(),
        ));
    }
    if n == 0 {
        return domain("f_s needs n ≥ 1");
    }
    let lead = BigInt::from(n) * power_sum_poly(s - 1).eval(n);
    let t = BigInt::from(t_s_fast(n, s)?);
    Ok((lead - t).magnitude().clone())
}

fn binomial(s: u32, k: u32) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * (s - i) / (i + 1))
}

/// Exact `f_0(n) = n·H_n − T_0(n)`; `H_n` is summed exactly, so this is `O(n)`.
fn f0_exact(n: u64) -> Result<ExactRational> {
    let d = BigInt::from(t_s_fast(n, 0)?);
    Ok(harmonic(n) * BigInt::from(n) - d)
}

/// Exact `Φ_s(n)` through the binomial reduction
/// `Φ_s = Σ_{k=1}^{s} (−1)^{k+1} C(s,k) f_{s−k}`.
///
/// The `f_{≥1}` terms come from [`f_s_fast`]; the rational `f_0` term is exact.
pub fn phi_s_fast(n: u64, s: u32) -> Result<ExactRational> {
    if s == 0 {
        return domain("phi_s_fast needs s ≥ 1");
    }
    if n == 0 {
        return domain("phi_s_fast needs n ≥ 1");
    }
    let mut integer_part = BigInt::zero();
    for k in 1..s {
        let term = binomial(s, k) * BigInt::from(f_s_fast(n, s - k)?);
        if k % 2 == 1 {
            integer_part += term;
        } else {
            integer_part -= term;
        }
    }
    let f0 = f0_exact(n)?;
    let f0_term = if s % 2 == 1 { f0 } else { -f0 };
    Ok(f0_term + integer_part)
}

const DIRECT_HARMONIC_LIMIT: u64 = 2000;

fn check_real_precision(precision: u32) -> Result<()> {
    if !(10..=MAX_PRECISION).contains(&precision) {
        return Err(Error::Configuration(format!(
            "real pathways support 10..={MAX_PRECISION} digits, got {precision}"
        )));
    }
    Ok(())
}

fn decimal_len(v: u64) -> u32 {
    v.max(1).ilog10() + 1
}

/// `H_n` to `digits` digits: exact summation up to a small cutoff, otherwise
/// `ln n + γ + 1/(2n) − Σ_k B_{2k}/(2k·n^{2k})` truncated once four times the
/// next term drops below `10^{−digits}`.
pub fn harmonic_real(n: u64, digits: u32) -> Result<Real> {
    if n <= DIRECT_HARMONIC_LIMIT {
        return Ok(Real::from_rational(&harmonic(n), digits));
    }
    let work = digits + 10;
    let target = Real::pow10(-(digits as i32) - 2, work);
    let nr = Real::from_u64(n, work);
    let mut h = nr.ln()? + euler_gamma(work)? + (&nr * Real::from_u64(2, work)).recip();
    let inv_n2 = (&nr * &nr).recip();
    let mut n_pow = inv_n2.clone();
    for k in 1.. {
        let coeff = bernoulli(2 * k) / BigRational::from_integer(BigInt::from(2 * k));
        let term = Real::from_rational(&coeff, work) * &n_pow;
        if term.abs() * Real::from_u64(4, work) < target {
            break;
        }
        h = h - &term;
        n_pow = &n_pow * &inv_n2;
        if k > 10_000 {
            return Err(Error::Configuration(format!(
                "harmonic number H_{n} cannot reach {digits} digits"
            )));
        }
    }
    Ok(h.with_digits(digits))
}

/// `f_0(n)` to `precision` digits as `n·H_n − T_0(n)`, in `O(√n)`.
pub fn f0_fast_real(n: u64, precision: u32) -> Result<Real> {
    check_real_precision(precision)?;
    if n == 0 {
        return domain("f_0 needs n ≥ 1");
    }
    let work = precision + decimal_len(n) + 10;
    let d = Real::from_biguint(&t_s_fast(n, 0)?, work);
    let v = Real::from_u64(n, work) * harmonic_real(n, work)? - d;
    Ok(v.with_digits(precision))
}

/// `Φ_s(n)` to `precision` digits: exact `f_{≥1}` terms plus [`f0_fast_real`].
pub fn phi_s_real(n: u64, s: u32, precision: u32) -> Result<Real> {
    check_real_precision(precision)?;
    if s == 0 {
        return domain("phi_s_real needs s ≥ 1");
    }
    let work = precision + 5;
    let mut integer_part = BigInt::zero();
    for k in 1..s {
        let term = binomial(s, k) * BigInt::from(f_s_fast(n, s - k)?);
        if k % 2 == 1 {
            integer_part += term;
        } else {
            integer_part -= term;
        }
    }
    let f0 = f0_fast_real(n, work)?;
    let f0_term = if s % 2 == 1 { f0 } else { -f0 };
    Ok((Real::from_bigint(&integer_part, work) + f0_term).with_digits(precision))
}

/// Fixed-point accumulator for sums of fractions `r/d` with `0 ≤ r < d`.
///
/// Each fraction is expanded to `64·frac_limbs` binary places, truncated, so the
/// total error is below `terms · 2^{−64·frac_limbs}`. Integer addition keeps the
/// result independent of summation order.
#[derive(Clone)]
struct FixedSum {
    limbs: Vec<u128>,
}

impl FixedSum {
    fn new(frac_limbs: usize) -> Self {
        FixedSum {
            limbs: vec![0; frac_limbs + 2],
        }
    }

    fn frac_limbs(&self) -> usize {
        self.limbs.len() - 2
    }

    fn add_fraction(&mut self, r: u64, d: u64) {
        debug_assert!(r < d);
        let mut rem = r as u128;
        let d = d as u128;
        for pos in (0..self.frac_limbs()).rev() {
            if rem == 0 {
                break;
            }
            let cur = rem << 64;
            self.limbs[pos] += cur / d;
            rem = cur % d;
        }
    }

    fn merge(mut self, other: FixedSum) -> FixedSum {
        for (a, b) in self.limbs.iter_mut().zip(other.limbs) {
            *a += b;
        }
        self
    }

    fn to_real(&self, digits: u32) -> Real {
        let mut words = Vec::with_capacity(self.limbs.len() * 2 + 2);
        let mut carry: u128 = 0;
        for &limb in &self.limbs {
            // limb < 2^127 and carry < 2^64, so the sum cannot overflow
            let v = limb + carry;
            let low = v as u64;
            words.push(low as u32);
            words.push((low >> 32) as u32);
            carry = v >> 64;
        }
        while carry > 0 {
            words.push(carry as u32);
            carry >>= 32;
        }
        let mantissa = BigUint::new(words);
        let scale = Real::from_u64(2, digits).powi(64 * self.frac_limbs() as u32);
        Real::from_biguint(&mantissa, digits) / scale
    }
}

fn fixed_limbs_for(digits: u32) -> usize {
    bits_for_digits(digits) / 64 + 3
}

/// Certified real sum of `r_i/d_i` for `i = 1..=count`, where `denominator(i)`
/// yields the pair `(r_i, d_i)` with `r_i < d_i`.
fn frac_sum_real<F>(count: u64, denominator: F, precision: u32) -> Real
where
    F: Fn(u64) -> (u64, u64) + Sync,
{
    const CHUNK: u64 = 1 << 14;
    let limbs = fixed_limbs_for(precision + 5);
    let chunks = count.div_ceil(CHUNK);
    let total = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut acc = FixedSum::new(limbs);
            let end = ((c + 1) * CHUNK).min(count);
            for i in c * CHUNK + 1..=end {
                let (r, d) = denominator(i);
                acc.add_fraction(r, d);
            }
            acc
        })
        .reduce(|| FixedSum::new(limbs), FixedSum::merge);
    total.to_real(precision + 5).with_digits(precision)
}

/// `Σ_{x≤(n−1)/w} {n/(wx+1)}` to `precision` digits in `O(n/w)` word
/// operations.
pub fn poussin_sum_real(n: u64, w: u64, precision: u32) -> Result<Real> {
    check_real_precision(precision)?;
    if n == 0 || w == 0 {
        return domain("poussin sums need n ≥ 1 and w ≥ 1");
    }
    let top = (n - 1) / w;
    Ok(frac_sum_real(
        top,
        |x| {
            let d = w * x + 1;
            (n % d, d)
        },
        precision,
    ))
}

/// `Σ_{x≤⌊n^{1/β}⌋} {n/x^β}` to `precision` digits for integer `β ≥ 2`.
pub fn pillichshammer_sum_real(n: u64, beta: u32, precision: u32) -> Result<Real> {
    check_real_precision(precision)?;
    if n == 0 {
        return domain("power sums need n ≥ 1");
    }
    if beta < 2 {
        return domain(format!("β must be an integer ≥ 2, got {beta}"));
    }
    let top = integer_root(n, beta);
    Ok(frac_sum_real(
        top,
        |x| {
            let d = x.pow(beta);
            (n % d, d)
        },
        precision,
    ))
}
