//! High-precision constants: Bernoulli numbers, `ζ(s)` for real `s > 0`, the
//! Euler–Mascheroni constant, the generalized constants `γ_a`, and the limiting
//! constants of each sum family.
//!
//! Bernoulli numbers follow the `B_1 = +1/2` convention throughout, which is the
//! convention under which the Euler–Maclaurin remainder terms and Faulhaber's
//! formula are written in this crate. Most references use `B_1 = −1/2`; only the
//! sign of `B_1` differs.
//!
//! Truncated Euler–Maclaurin expansions estimate their error as four times the
//! first omitted term. When that estimate misses the target the expansion is
//! widened; when no admissible widening reaches the target a
//! [`Error::Configuration`] is returned rather than a degraded value.

use std::collections::HashMap;
use std::sync::{Mutex, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{domain, Error, Result};
use crate::exact::harmonic;
use crate::real::Real;
use crate::SumKind;

/// Default working precision in decimal digits.
pub const DEFAULT_PRECISION: u32 = 50;

/// Largest precision any constant routine accepts.
pub const MAX_PRECISION: u32 = 4000;

const MAX_EM_BASE: u64 = 1 << 22;
const MAX_EM_TERMS: usize = 4000;

/// Digits needed so that `value − constant·n^power` keeps 15 significant digits
/// after cancelling a leading term of magnitude `n^power`.
pub fn required_precision(power: f64, n: u64) -> u32 {
    let magnitude = power * (n.max(1) as f64).log10();
    magnitude.max(0.0).ceil() as u32 + 15
}

fn check_precision(precision: u32) -> Result<()> {
    if precision == 0 || precision > MAX_PRECISION {
        return Err(Error::Configuration(format!(
            "precision must lie in 1..={MAX_PRECISION} digits, got {precision}"
        )));
    }
    Ok(())
}

fn decimal_len(v: u64) -> u32 {
    v.max(1).ilog10() + 1
}

/// Bernoulli numbers `B_0, B_1, …`, grown on demand and never rewritten.
pub struct BernoulliCache {
    values: RwLock<Vec<BigRational>>,
}

impl BernoulliCache {
    pub const fn new() -> Self {
        BernoulliCache {
            values: RwLock::new(Vec::new()),
        }
    }

    pub fn get(&self, k: usize) -> BigRational {
        if let Some(v) = self.values.read().expect("bernoulli cache poisoned").get(k) {
            return v.clone();
        }
        let mut values = self.values.write().expect("bernoulli cache poisoned");
        while values.len() <= k {
            let m = values.len();
            let next = next_bernoulli(&values, m);
            values.push(next);
        }
        values[k].clone()
    }
}

impl Default for BernoulliCache {
    fn default() -> Self {
        Self::new()
    }
}

/// `B_m` from `Σ_{j=0}^{m} C(m+1, j)·B_j = m + 1` (the `B_1 = +1/2` recurrence).
fn next_bernoulli(prev: &[BigRational], m: usize) -> BigRational {
    if m == 0 {
        return BigRational::one();
    }
    if m >= 3 && m % 2 == 1 {
        return BigRational::zero();
    }
    let mut binom = BigInt::one(); // C(m+1, 0)
    let mut acc = BigRational::zero();
    for (j, b) in prev.iter().enumerate().take(m) {
        if !b.is_zero() {
            acc += b * &binom;
        }
        binom = binom * (m + 1 - j) / (j + 1);
    }
    let m1 = BigRational::from_integer(BigInt::from(m + 1));
    BigRational::one() - acc / m1
}

static BERNOULLI: BernoulliCache = BernoulliCache::new();

/// Exact Bernoulli number `B_k` with `B_1 = +1/2`.
pub fn bernoulli(k: usize) -> BigRational {
    BERNOULLI.get(k)
}

fn factorial(n: usize) -> BigInt {
    (2..=n).fold(BigInt::one(), |acc, k| acc * k)
}

fn rational_to_u32(s: &BigRational) -> Option<u32> {
    if s.is_integer() {
        s.to_integer().to_u32()
    } else {
        None
    }
}

/// `x^{−s}` for a positive integer base.
fn inverse_power(x: u64, s: &BigRational, s_real: &Real, digits: u32) -> Real {
    let base = Real::from_u64(x, digits);
    match rational_to_u32(s) {
        Some(k) => base.powi(k).recip(),
        None => base.pow(&-s_real),
    }
}

struct EmRun {
    value: Real,
    error: Real,
}

fn zeta_em_once(s: &BigRational, w: u64, m: usize, digits: u32) -> EmRun {
    let s_real = Real::from_rational(s, digits);
    let mut sum = Real::zero(digits);
    for x in 1..w {
        sum = sum + inverse_power(x, s, &s_real, digits);
    }
    let w_neg_s = inverse_power(w, s, &s_real, digits);
    let w_real = Real::from_u64(w, digits);
    let half = Real::from_rational(&BigRational::new(1.into(), 2.into()), digits);
    let s_minus_one = s - BigRational::one();
    sum = sum + &w_neg_s * &half;
    sum = sum + &w_neg_s * &w_real / Real::from_rational(&s_minus_one, digits);

    // term_k = B_{2k}/(2k)! · s(s+1)…(s+2k−2) · w^{−s−2k+1}
    let inv_w2 = (&w_real * &w_real).recip();
    let mut w_pow = &w_neg_s / &w_real; // w^{−s−1}
    let mut rising = s.clone(); // s(s+1)…(s+2k−2), starting at k = 1
    let mut term = Real::zero(digits);
    for k in 1..=m + 1 {
        let coeff = bernoulli(2 * k) / BigRational::from_integer(factorial(2 * k)) * &rising;
        term = Real::from_rational(&coeff, digits) * &w_pow;
        if k <= m {
            sum = sum + &term;
        }
        let a = BigInt::from(2 * k - 1);
        let b = BigInt::from(2 * k);
        rising = rising * (s + BigRational::from_integer(a)) * (s + BigRational::from_integer(b));
        w_pow = &w_pow * &inv_w2;
    }
    EmRun {
        value: sum,
        error: term.abs() * Real::from_u64(4, digits),
    }
}

fn validate_zeta_arg(s: &BigRational) -> Result<()> {
    if s.is_one() {
        return Err(Error::Pole);
    }
    if !s.is_positive() {
        return domain(format!("zeta_em needs s > 0, got {s}"));
    }
    Ok(())
}

/// `ζ(s)` by Euler–Maclaurin summation with base `w` and `m` Bernoulli
/// corrections:
///
/// `ζ(s) ≈ Σ_{x<w} x^{−s} + w^{−s}/2 + w^{1−s}/(s−1) + Σ_{k=1}^{m} B_{2k}/(2k)!·(s)_{2k−1}·w^{−s−2k+1}`
///
/// where `(s)_j` is the rising factorial. If four times the first omitted term
/// exceeds `10^{−precision}`, `m` is doubled while the corrections still shrink
/// and `w` is doubled otherwise.
pub fn zeta_em(s: &BigRational, w: u64, m: usize, precision: u32) -> Result<Real> {
    validate_zeta_arg(s)?;
    check_precision(precision)?;
    if w < 2 {
        return domain(format!("zeta_em needs w ≥ 2, got {w}"));
    }
    if m < 1 {
        return domain("zeta_em needs at least one correction term");
    }
    let (mut w, mut m) = (w, m);
    loop {
        let digits = precision + 12 + decimal_len(w);
        let target = Real::pow10(-(precision as i32), digits);
        let run = zeta_em_once(s, w, m, digits);
        if run.error < target {
            return Ok(run.value.with_digits(precision));
        }
        // Corrections at fixed w shrink until 2k ≈ 2πw; beyond that, widen w.
        let m_limit = (3.0 * w as f64) as usize;
        if 2 * m <= m_limit && 2 * m <= MAX_EM_TERMS {
            m *= 2;
        } else if 2 * w <= MAX_EM_BASE {
            w *= 2;
        } else {
            return Err(Error::Configuration(format!(
                "zeta({s}) to {precision} digits exceeds the Euler–Maclaurin caps (w ≤ {MAX_EM_BASE}, m ≤ {MAX_EM_TERMS})"
            )));
        }
    }
}

/// Default `(w, m)` for a requested precision.
pub fn default_em_parameters(precision: u32) -> (u64, usize) {
    let w = u64::from(precision).max(10);
    let m = (precision as usize) / 2 + 5;
    (w, m)
}

static ZETA_CACHE: Mutex<Option<HashMap<(BigRational, u32), Real>>> = Mutex::new(None);

/// `ζ(s)` to `precision` digits, checked against a second run at doubled `w`.
pub fn zeta(s: &BigRational, precision: u32) -> Result<Real> {
    validate_zeta_arg(s)?;
    check_precision(precision)?;
    let key = (s.clone(), precision);
    if let Some(v) = ZETA_CACHE
        .lock()
        .expect("zeta cache poisoned")
        .get_or_insert_with(HashMap::new)
        .get(&key)
    {
        return Ok(v.clone());
    }
    let (w, m) = default_em_parameters(precision);
    let first = zeta_em(s, w, m, precision + 5)?;
    let second = zeta_em(s, 2 * w, m, precision + 5)?;
    if !crate::real::agrees_to(&first, &second, precision as i32) {
        return Err(Error::Configuration(format!(
            "zeta({s}) failed the doubling check at {precision} digits"
        )));
    }
    let value = first.with_digits(precision);
    ZETA_CACHE
        .lock()
        .expect("zeta cache poisoned")
        .get_or_insert_with(HashMap::new)
        .insert(key, value.clone());
    Ok(value)
}

/// `ζ(s)` at a positive integer `s ≥ 2`.
pub fn zeta_int(s: u32, precision: u32) -> Result<Real> {
    zeta(&BigRational::from_integer(BigInt::from(s)), precision)
}

/// `γ = H_N − ln N − 1/(2N) + Σ_{k=1}^{m} B_{2k}/(2k·N^{2k})` for base `N`,
/// with `m` chosen so the first omitted term (×4) is below `10^{−precision}`.
pub fn euler_gamma_with(base: u64, precision: u32) -> Result<Real> {
    check_precision(precision)?;
    if base < 2 {
        return domain("Euler–Maclaurin base must be at least 2");
    }
    let digits = precision + 12 + decimal_len(base);
    let target = Real::pow10(-(precision as i32), digits);
    let n = Real::from_u64(base, digits);
    let mut gamma = Real::from_rational(&harmonic(base), digits)
        - n.ln()?
        - (&n * Real::from_u64(2, digits)).recip();

    let inv_n2 = (&n * &n).recip();
    let mut n_pow = inv_n2.clone();
    let mut previous: Option<Real> = None;
    for k in 1..=MAX_EM_TERMS {
        let coeff = bernoulli(2 * k) / BigRational::from_integer(BigInt::from(2 * k));
        let term = Real::from_rational(&coeff, digits) * &n_pow;
        if term.abs() * Real::from_u64(4, digits) < target {
            return Ok(gamma.with_digits(precision));
        }
        if let Some(prev) = &previous {
            if term.abs() > prev.abs() {
                break;
            }
        }
        gamma = gamma + &term;
        previous = Some(term);
        n_pow = &n_pow * &inv_n2;
    }
    Err(Error::Configuration(format!(
        "Euler–Maclaurin base {base} cannot reach {precision} digits of γ"
    )))
}

static GAMMA_CACHE: Mutex<Option<HashMap<u32, Real>>> = Mutex::new(None);

/// Euler–Mascheroni constant, computed at two Euler–Maclaurin bases and
/// accepted only when both agree to `precision` digits.
pub fn euler_gamma(precision: u32) -> Result<Real> {
    check_precision(precision)?;
    if let Some(v) = GAMMA_CACHE
        .lock()
        .expect("gamma cache poisoned")
        .get_or_insert_with(HashMap::new)
        .get(&precision)
    {
        return Ok(v.clone());
    }
    let base = u64::from(precision) / 2 + 16;
    let first = euler_gamma_with(base, precision + 5)?;
    let second = euler_gamma_with(2 * base, precision + 5)?;
    if !crate::real::agrees_to(&first, &second, precision as i32) {
        return Err(Error::Configuration(format!(
            "γ failed the two-base agreement check at {precision} digits"
        )));
    }
    let value = first.with_digits(precision);
    GAMMA_CACHE
        .lock()
        .expect("gamma cache poisoned")
        .get_or_insert_with(HashMap::new)
        .insert(precision, value.clone());
    Ok(value)
}

/// Generalized Euler constant
/// `γ_a = lim (Σ_{k≤n} k^{−a} − ∫_1^n t^{−a} dt)`, equal to `ζ(a) + 1/(1−a)` for
/// `0 < a < 1` and to `γ` at `a = 1`.
pub fn gen_gamma(a: &BigRational, precision: u32) -> Result<Real> {
    if !a.is_positive() || a > &BigRational::one() {
        return domain(format!("γ_a needs 0 < a ≤ 1, got {a}"));
    }
    if a.is_one() {
        return euler_gamma(precision);
    }
    let digits = precision + 5;
    let z = zeta(a, digits)?;
    let pole = Real::from_rational(&(BigRational::one() - a).recip(), digits);
    Ok((z + pole).with_digits(precision))
}

/// Limiting constant of `sum(n) / n^power` for each family:
///
/// | kind | `s` | constant |
/// |------|-----|----------|
/// | `FracPower` | 0 | `1 − γ` |
/// | `FracPower` | ≥ 1 | `1/s − ζ(s+1)/(s+1)` |
/// | `Transform` | 1 | `1 − γ` |
/// | `Transform` | ≥ 2 | `1/(s−1) + 1 − ζ(s)` |
/// | `DivisorWeighted` | ≥ 1 | `ζ(s+1)/(s+1)` |
/// | `Poussin` | `w ≥ 1` | `1 − γ` |
/// | `Pillichshammer` | `β ≥ 2` | `1 − γ_{1/β}` |
///
/// The transform constant follows from `Φ_s = Σ_k (−1)^{k+1} C(s,k) f_{s−k}`,
/// whose leading term is `s·f_{s−1}`; its `s → 1` limit is `1 − γ`.
pub fn theorem_constant(kind: SumKind, s: u32, precision: u32) -> Result<Real> {
    let digits = precision + 5;
    let one = Real::one(digits);
    let ratio =
        |num: i64, den: i64| Real::from_rational(&BigRational::new(num.into(), den.into()), digits);
    let value = match kind {
        SumKind::FracPower if s == 0 => one - euler_gamma(digits)?,
        SumKind::FracPower => {
            ratio(1, s as i64) - zeta_int(s + 1, digits)? * ratio(1, s as i64 + 1)
        }
        SumKind::Transform => match s {
            0 => return domain("the fractional transform has no limit law at s = 0"),
            1 => one - euler_gamma(digits)?,
            _ => ratio(1, s as i64 - 1) + one - zeta_int(s, digits)?,
        },
        SumKind::DivisorWeighted => {
            if s == 0 {
                return domain("T_0(n) grows like n·log n; no power-law constant");
            }
            zeta_int(s + 1, digits)? * ratio(1, s as i64 + 1)
        }
        SumKind::Poussin => {
            if s == 0 {
                return domain("the progression step w must be at least 1");
            }
            one - euler_gamma(digits)?
        }
        SumKind::Pillichshammer => {
            if s < 2 {
                return domain(format!("β must be an integer ≥ 2, got {s}"));
            }
            one - gen_gamma(&BigRational::new(1.into(), BigInt::from(s)), digits)?
        }
    };
    Ok(value.with_digits(precision))
}
