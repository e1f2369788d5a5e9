//! Arbitrary-precision reals carrying an explicit decimal precision.
//!
//! A [`Real`] is a binary floating-point number (backed by `astro-float`) whose
//! mantissa holds enough bits for the advertised number of decimal digits plus
//! [`GUARD_BITS`] extra bits. Arithmetic between two reals runs at the larger of
//! the two working precisions and the result advertises the smaller of the two
//! digit counts, so the label never overstates what the inputs support.
//!
//! Transcendental operations share one `astro_float::Consts` cache per thread.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use astro_float::{BigFloat, Consts, Exponent, Radix, RoundingMode, Sign};
use num_bigint::{BigInt, BigUint, Sign as IntSign};
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

const RM: RoundingMode = RoundingMode::ToEven;

/// Extra binary digits carried beyond the requested decimal precision.
pub const GUARD_BITS: usize = 64;

thread_local! {
    static CONSTS: RefCell<Consts> =
        RefCell::new(Consts::new().expect("failed to allocate the astro-float constant cache"));
}

fn with_consts<R>(f: impl FnOnce(&mut Consts) -> R) -> R {
    CONSTS.with(|cc| f(&mut cc.borrow_mut()))
}

/// Binary working precision used for `digits` decimal digits.
pub fn bits_for_digits(digits: u32) -> usize {
    (f64::from(digits) * std::f64::consts::LOG2_10).ceil() as usize + GUARD_BITS
}

/// A high-precision real number with an advertised count of correct digits.
#[derive(Clone, Debug)]
pub struct Real {
    value: BigFloat,
    digits: u32,
}

fn float_from_biguint(u: &BigUint, p: usize) -> BigFloat {
    if u.is_zero() {
        return BigFloat::from_word(0, p);
    }
    let bits = u.bits() as usize;
    let keep = p + GUARD_BITS;
    let (mantissa, shift) = if bits > keep {
        (u >> (bits - keep), bits - keep)
    } else {
        (u.clone(), 0)
    };
    let words = mantissa.to_u64_digits();
    let exponent = (words.len() * 64 + shift) as Exponent;
    let mut f = BigFloat::from_words(&words, Sign::Pos, exponent);
    f.set_precision(p, RM)
        .expect("rounding an integer mantissa cannot fail");
    f
}

impl Real {
    fn wrap(value: BigFloat, digits: u32) -> Self {
        Real { value, digits }
    }

    fn bits(&self) -> usize {
        bits_for_digits(self.digits)
    }

    fn joint(&self, other: &Real) -> (usize, u32) {
        (self.bits().max(other.bits()), self.digits.min(other.digits))
    }

    pub fn zero(digits: u32) -> Self {
        Self::from_u64(0, digits)
    }

    pub fn one(digits: u32) -> Self {
        Self::from_u64(1, digits)
    }

    pub fn from_u64(v: u64, digits: u32) -> Self {
        Self::wrap(BigFloat::from_u64(v, bits_for_digits(digits)), digits)
    }

    pub fn from_i64(v: i64, digits: u32) -> Self {
        Self::wrap(BigFloat::from_i64(v, bits_for_digits(digits)), digits)
    }

    pub fn from_biguint(u: &BigUint, digits: u32) -> Self {
        Self::wrap(float_from_biguint(u, bits_for_digits(digits)), digits)
    }

    pub fn from_bigint(i: &BigInt, digits: u32) -> Self {
        let r = Self::from_biguint(i.magnitude(), digits);
        if i.sign() == IntSign::Minus {
            -r
        } else {
            r
        }
    }

    /// Nearest real to an exact rational; huge numerators and denominators are
    /// truncated to the working precision before dividing.
    pub fn from_rational(q: &BigRational, digits: u32) -> Self {
        let num = Self::from_bigint(q.numer(), digits);
        let den = Self::from_bigint(q.denom(), digits);
        &num / &den
    }

    /// Parses a decimal literal such as `-1.25`, `3e-7` or `577`.
    pub fn parse(s: &str, digits: u32) -> Result<Self> {
        let s = s.trim();
        let p = bits_for_digits(digits);
        let value = with_consts(|cc| BigFloat::parse(s, Radix::Dec, p, RM, cc));
        if value.is_nan() || value.is_inf() || s.is_empty() {
            return Err(Error::Domain(format!("not a decimal number: {s:?}")));
        }
        Ok(Self::wrap(value, digits))
    }

    pub fn pi(digits: u32) -> Self {
        let p = bits_for_digits(digits);
        Self::wrap(with_consts(|cc| cc.pi(p, RM)), digits)
    }

    /// `10^exp` at the given precision.
    pub fn pow10(exp: i32, digits: u32) -> Self {
        let ten = Real::from_u64(10, digits);
        let mag = ten.powi(exp.unsigned_abs());
        if exp < 0 {
            mag.recip()
        } else {
            mag
        }
    }

    /// Advertised number of correct decimal digits.
    pub fn digits(&self) -> u32 {
        self.digits
    }

    /// Re-rounds to a different precision label.
    pub fn with_digits(&self, digits: u32) -> Self {
        let mut value = self.value.clone();
        // NaN/Inf carry no mantissa; leave them untouched.
        let _ = value.set_precision(bits_for_digits(digits), RM);
        Self::wrap(value, digits)
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.value.is_negative() && !self.value.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        !self.value.is_nan() && !self.value.is_inf()
    }

    pub fn abs(&self) -> Self {
        Self::wrap(self.value.abs(), self.digits)
    }

    pub fn recip(&self) -> Self {
        Self::wrap(self.value.reciprocal(self.bits(), RM), self.digits)
    }

    pub fn sqrt(&self) -> Self {
        Self::wrap(self.value.sqrt(self.bits(), RM), self.digits)
    }

    /// Natural logarithm; the argument must be positive.
    pub fn ln(&self) -> Result<Self> {
        if self.is_zero() || self.is_negative() {
            return Err(Error::Domain("logarithm of a non-positive number".into()));
        }
        let p = self.bits();
        Ok(Self::wrap(
            with_consts(|cc| self.value.ln(p, RM, cc)),
            self.digits,
        ))
    }

    pub fn exp(&self) -> Self {
        let p = self.bits();
        Self::wrap(with_consts(|cc| self.value.exp(p, RM, cc)), self.digits)
    }

    /// `self^exponent` for positive `self`, as `exp(exponent·ln self)`.
    ///
    /// `BigFloat::pow` never terminates when the result is exactly
    /// representable (`4^{1/2}`), so the logarithm route is used instead with
    /// [`GUARD_BITS`] extra bits.
    pub fn pow(&self, exponent: &Real) -> Self {
        let (p, digits) = self.joint(exponent);
        if self.is_zero() {
            return Self::zero(digits);
        }
        let work = p + GUARD_BITS;
        let value = with_consts(|cc| {
            let log = self.value.abs().ln(work, RM, cc);
            log.mul(&exponent.value, work, RM).exp(p, RM, cc)
        });
        Self::wrap(value, digits)
    }

    pub fn powi(&self, n: u32) -> Self {
        Self::wrap(self.value.powi(n as usize, self.bits(), RM), self.digits)
    }

    /// Nearest `f64`; saturates to `±inf` or `0` outside the `f64` range.
    pub fn to_f64(&self) -> f64 {
        if self.value.is_nan() {
            return f64::NAN;
        }
        if self.value.is_inf() {
            return if self.value.is_negative() {
                f64::NEG_INFINITY
            } else {
                f64::INFINITY
            };
        }
        let Some((words, _, sign, exponent, _)) = self.value.as_raw_parts() else {
            return f64::NAN;
        };
        let Some(&top) = words.last() else {
            return 0.0;
        };
        if top == 0 {
            return 0.0;
        }
        let magnitude = (top as f64) * 2f64.powi(exponent - 64);
        if sign == Sign::Neg {
            -magnitude
        } else {
            magnitude
        }
    }

    /// Decimal rendering with `self.digits()` significant digits.
    pub fn to_decimal_string(&self) -> String {
        self.to_significant(self.digits.max(1))
    }

    /// Decimal rendering rounded half-up to `sig` significant digits, trailing
    /// zeros removed. Positional notation for moderate exponents, scientific
    /// otherwise.
    pub fn to_significant(&self, sig: u32) -> String {
        if !self.is_finite() {
            return if self.value.is_nan() {
                "NaN".into()
            } else if self.value.is_negative() {
                "-inf".into()
            } else {
                "inf".into()
            };
        }
        if self.is_zero() {
            return "0".into();
        }
        let converted = with_consts(|cc| self.value.convert_to_radix(Radix::Dec, RM, cc));
        let (sign, mut digits, mut exp) = match converted {
            Ok(parts) => parts,
            Err(_) => return "NaN".into(),
        };
        // value = 0.d1 d2 d3 ... × 10^exp
        let sig = sig as usize;
        if digits.len() > sig {
            let round_up = digits[sig] >= 5;
            digits.truncate(sig);
            if round_up {
                let mut i = sig;
                loop {
                    if i == 0 {
                        digits.insert(0, 1);
                        digits.truncate(sig);
                        exp += 1;
                        break;
                    }
                    i -= 1;
                    if digits[i] == 9 {
                        digits[i] = 0;
                    } else {
                        digits[i] += 1;
                        break;
                    }
                }
            }
        }
        while digits.len() > 1 && digits.last() == Some(&0) {
            digits.pop();
        }
        if digits.iter().all(|&d| d == 0) {
            return "0".into();
        }
        let text: String = digits.iter().map(|d| char::from(b'0' + d)).collect();
        let len = text.len() as i64;
        let exp = exp as i64;
        let body = if !(-6..=21).contains(&exp) {
            let (lead, rest) = text.split_at(1);
            if rest.is_empty() {
                format!("{lead}e{}", exp - 1)
            } else {
                format!("{lead}.{rest}e{}", exp - 1)
            }
        } else if exp <= 0 {
            format!("0.{}{}", "0".repeat((-exp) as usize), text)
        } else if exp >= len {
            format!("{}{}", text, "0".repeat((exp - len) as usize))
        } else {
            let (int, frac) = text.split_at(exp as usize);
            format!("{int}.{frac}")
        };
        if sign == Sign::Neg {
            format!("-{body}")
        } else {
            body
        }
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal_string())
    }
}

impl PartialEq for Real {
    fn eq(&self, other: &Self) -> bool {
        self.value.cmp(&other.value) == Some(0)
    }
}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.value.cmp(&other.value).map(|c| c.cmp(&0))
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&Real> for &Real {
            type Output = Real;
            fn $method(self, rhs: &Real) -> Real {
                let (p, digits) = self.joint(rhs);
                Real::wrap(self.value.$method(&rhs.value, p, RM), digits)
            }
        }

        impl $trait<Real> for Real {
            type Output = Real;
            fn $method(self, rhs: Real) -> Real {
                (&self).$method(&rhs)
            }
        }

        impl $trait<&Real> for Real {
            type Output = Real;
            fn $method(self, rhs: &Real) -> Real {
                (&self).$method(rhs)
            }
        }

        impl $trait<Real> for &Real {
            type Output = Real;
            fn $method(self, rhs: Real) -> Real {
                self.$method(&rhs)
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real::wrap(BigFloat::neg(&self.value), self.digits)
    }
}

impl Neg for &Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real::wrap(BigFloat::neg(&self.value), self.digits)
    }
}

/// `|a − b| < 10^{−k}`.
pub fn agrees_to(a: &Real, b: &Real, k: i32) -> bool {
    let digits = a.digits().max(b.digits()).max(k.unsigned_abs() + 10);
    (a - b).abs() < Real::pow10(-k, digits)
}

/// Exact rational → decimal string with `sig` significant digits, via [`Real`].
pub fn rational_to_decimal(q: &BigRational, sig: u32) -> String {
    if q.is_zero() {
        return "0".into();
    }
    let r = Real::from_rational(q, sig + 10);
    let s = r.to_significant(sig);
    if q.is_negative() && !s.starts_with('-') {
        format!("-{s}")
    } else {
        s
    }
}
