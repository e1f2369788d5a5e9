//! Constants engine against independent oracles.

use fracsum::real::{agrees_to, Real};
use fracsum::zeta::*;
use fracsum::{Error, SumKind};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

fn q(num: i64, den: i64) -> BigRational {
    BigRational::new(num.into(), den.into())
}

fn binomial(n: u64, k: u64) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, j| acc * (n - j) / (j + 1))
}

/// `ζ(s) = η(s)/(1 − 2^{1−s})` with `η` from the Borwein alternating-series
/// acceleration; the truncation error is below `3·(3+√8)^{−terms}`.
fn zeta_borwein(s: &BigRational, digits: u32) -> Real {
    let work = digits + 20;
    let terms = (f64::from(work) / 0.76).ceil() as u64 + 2;
    let fact = |k: u64| (2..=k).fold(BigUint::one(), |a, i| a * i);
    // d_k = terms·Σ_{i≤k} (terms+i−1)!·4^i / ((terms−i)!·(2i)!)
    let mut d = Vec::with_capacity(terms as usize + 1);
    let mut acc = BigRational::zero();
    for i in 0..=terms {
        let num = fact(terms + i - 1) * (BigUint::one() << (2 * i));
        let den = fact(terms - i) * fact(2 * i);
        acc += BigRational::new(BigInt::from(num), BigInt::from(den));
        d.push(&acc * BigInt::from(terms));
    }
    let dn = d[terms as usize].clone();
    let s_real = Real::from_rational(s, work);
    let mut eta = Real::zero(work);
    for k in 0..terms {
        let coeff = Real::from_rational(&(&d[k as usize] - &dn), work);
        let power = Real::from_u64(k + 1, work).pow(&s_real);
        let term = coeff / power;
        eta = if k % 2 == 0 { eta + term } else { eta - term };
    }
    eta = -(eta / Real::from_rational(&dn, work));
    let two = Real::from_u64(2, work);
    let one = Real::one(work);
    let factor = one.clone() - two.pow(&(one - s_real));
    (eta / factor).with_digits(digits)
}

#[test]
fn zeta_two_is_pi_squared_over_six() {
    for precision in [30u32, 60, 120] {
        let z = zeta(&q(2, 1), precision).unwrap();
        let pi = Real::pi(precision + 10);
        let oracle = &pi * &pi / Real::from_u64(6, precision + 10);
        assert!(
            agrees_to(&z, &oracle, precision as i32 - 1),
            "precision {precision}"
        );
    }
    let z = zeta(&q(2, 1), 30).unwrap();
    assert!(z.to_decimal_string().starts_with("1.644934066848226436"));
}

#[test]
fn zeta_against_alternating_series() {
    for (num, den) in [
        (3, 1),
        (4, 1),
        (5, 1),
        (6, 1),
        (1, 2),
        (1, 3),
        (9, 10),
        (3, 2),
        (7, 3),
    ] {
        let s = q(num, den);
        let z = zeta(&s, 30).unwrap();
        let oracle = zeta_borwein(&s, 40);
        assert!(agrees_to(&z, &oracle, 28), "s = {s}: {z} vs {oracle}");
    }
    let half = zeta(&q(1, 2), 30).unwrap();
    assert!(half
        .to_decimal_string()
        .starts_with("-1.460354508809586812"));
    let three = zeta(&q(3, 1), 30).unwrap();
    assert!(three
        .to_decimal_string()
        .starts_with("1.202056903159594285"));
}

#[test]
fn zeta_inside_the_direct_series_bracket() {
    // Σ_{x≤N} x^{−s} plus a tail between ∫_{N+1}^∞ and ∫_N^∞ t^{−s} dt.
    let n = 3000u64;
    for s in 3u32..=6 {
        let digits = 40;
        let mut partial = Real::zero(digits);
        for x in 1..=n {
            partial = partial + Real::from_u64(x, digits).powi(s).recip();
        }
        let sm1 = Real::from_u64(u64::from(s) - 1, digits);
        let tail = |base: u64| Real::from_u64(base, digits).powi(s - 1).recip() / &sm1;
        let lower = &partial + tail(n + 1);
        let upper = &partial + tail(n);
        let z = zeta_int(s, 30).unwrap();
        assert!(lower <= z && z <= upper, "s = {s}");
        let em = zeta_em(&q(s as i64, 1), 8, 4, 30).unwrap();
        assert!(agrees_to(&em, &z, 28), "s = {s}");
    }
}

#[test]
fn zeta_em_is_stable_under_parameter_changes() {
    for s in [q(2, 1), q(3, 1), q(1, 2), q(5, 2)] {
        let (w, m) = default_em_parameters(40);
        let base = zeta_em(&s, w, m, 40).unwrap();
        let doubled = zeta_em(&s, 2 * w, m, 40).unwrap();
        let more_terms = zeta_em(&s, w, m + 2, 40).unwrap();
        assert!(agrees_to(&base, &doubled, 40), "s = {s}");
        assert!(agrees_to(&base, &more_terms, 40), "s = {s}");
    }
}

#[test]
fn zeta_error_cases() {
    assert_eq!(zeta(&q(1, 1), 30).unwrap_err(), Error::Pole);
    assert!(matches!(zeta(&q(0, 1), 30), Err(Error::Domain(_))));
    assert!(matches!(zeta(&q(-2, 1), 30), Err(Error::Domain(_))));
    assert!(matches!(zeta_em(&q(2, 1), 1, 3, 30), Err(Error::Domain(_))));
    assert!(matches!(
        zeta(&q(2, 1), MAX_PRECISION + 1),
        Err(Error::Configuration(_))
    ));
}

const GAMMA_REFERENCE: &str = "0.57721566490153286060651209008240243104215933593992";

#[test]
fn gamma_two_methods_agree() {
    let a = euler_gamma_with(40, 25).unwrap();
    let b = euler_gamma_with(80, 25).unwrap();
    assert!(agrees_to(&a, &b, 20));
    let g = euler_gamma(20).unwrap();
    assert!(agrees_to(&g, &a, 20));
    let reference = Real::parse(GAMMA_REFERENCE, 50).unwrap();
    assert!(agrees_to(&euler_gamma(48).unwrap(), &reference, 47));
    assert_eq!(euler_gamma(4).unwrap().to_decimal_string(), "0.5772");
}

#[test]
fn bernoulli_recurrence_through_sixty() {
    // With B_1 = +1/2: Σ_{j=0}^{m} C(m+1, j)·B_j = m + 1.
    for m in 0..=60u64 {
        let mut total = BigRational::zero();
        for j in 0..=m {
            total += bernoulli(j as usize) * BigRational::from_integer(binomial(m + 1, j));
        }
        assert_eq!(
            total,
            BigRational::from_integer(BigInt::from(m + 1)),
            "m = {m}"
        );
    }
    assert_eq!(bernoulli(1), q(1, 2));
    assert_eq!(bernoulli(2), q(1, 6));
    for k in (3..=61).step_by(2) {
        assert!(bernoulli(k).is_zero(), "B_{k}");
    }
    assert_eq!(
        bernoulli(60),
        BigRational::new(
            "-1215233140483755572040304994079820246041491"
                .parse()
                .unwrap(),
            "56786730".parse().unwrap()
        )
    );
}

/// `Σ_{k≤n} k^{−a} − ∫_1^n t^{−a} dt − n^{−a}/2`: the defining limit with the
/// trapezoid endpoint correction, whose remaining error is `O(n^{−a−1})`.
fn gamma_direct_limit(a: f64, n: u64) -> f64 {
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for k in (1..=n).rev() {
        let t = (k as f64).powf(-a);
        let y = t - comp;
        let next = sum + y;
        comp = (next - sum) - y;
        sum = next;
    }
    let integral = ((n as f64).powf(1.0 - a) - 1.0) / (1.0 - a);
    sum - integral - 0.5 * (n as f64).powf(-a)
}

#[test]
fn generalized_gamma_against_direct_limit() {
    for (num, den) in [(1, 2), (1, 3), (9, 10)] {
        let a = q(num, den);
        let value = gen_gamma(&a, 30).unwrap().to_f64();
        let direct = gamma_direct_limit(num as f64 / den as f64, 10_000_000);
        assert!(
            (value - direct).abs() < 1e-6 * value.abs(),
            "a = {a}: {value} vs {direct}"
        );
        assert!(value > 0.0 && value < 1.0);
    }
    let half = gen_gamma(&q(1, 2), 30).unwrap();
    assert!(half.to_decimal_string().starts_with("0.5396454911"));
    assert!(agrees_to(
        &gen_gamma(&q(1, 1), 30).unwrap(),
        &euler_gamma(30).unwrap(),
        29
    ));
    assert!(gen_gamma(&q(0, 1), 30).is_err());
    assert!(gen_gamma(&q(3, 2), 30).is_err());
}

#[test]
fn theorem_constants() {
    let c = |kind, s| theorem_constant(kind, s, 30).unwrap().to_decimal_string();
    assert!(c(SumKind::FracPower, 0).starts_with("0.42278433509"));
    assert!(c(SumKind::FracPower, 1).starts_with("0.1775329665"));
    assert!(c(SumKind::FracPower, 2).starts_with("0.09931436561"));
    assert!(c(SumKind::Transform, 1).starts_with("0.42278433509"));
    assert!(c(SumKind::Poussin, 3).starts_with("0.42278433509"));
    assert!(c(SumKind::Pillichshammer, 2).starts_with("0.4603545088"));
    assert!(theorem_constant(SumKind::Transform, 0, 30).is_err());

    let twenty = theorem_constant(SumKind::FracPower, 20, 30)
        .unwrap()
        .to_f64();
    assert!((twenty - (1.0 / 20.0 - 1.0 / 21.0)).abs() < 1e-5);
}

#[test]
fn transform_constant_is_the_limit_of_the_binomial_expansion() {
    // Φ_s = s·f_{s−1} − C(s,2)·f_{s−2} + …; only the first term has order n^s,
    // so the constant is s·(1/(s−1) − ζ(s)/s) = s/(s−1) − ζ(s).
    for s in 2u32..=6 {
        let c = theorem_constant(SumKind::Transform, s, 30).unwrap();
        let f = theorem_constant(SumKind::FracPower, s - 1, 30).unwrap();
        let lead = f * Real::from_u64(u64::from(s), 30);
        assert!(agrees_to(&c, &lead, 27), "s = {s}");
    }
}

#[test]
fn constants_are_deterministic() {
    for _ in 0..3 {
        assert_eq!(
            zeta(&q(7, 3), 45).unwrap().to_decimal_string(),
            zeta_borwein(&q(7, 3), 45).to_significant(45)
        );
    }
    let a = theorem_constant(SumKind::Transform, 3, 40)
        .unwrap()
        .to_decimal_string();
    let b = theorem_constant(SumKind::Transform, 3, 40)
        .unwrap()
        .to_decimal_string();
    assert_eq!(a, b);
}

#[test]
fn required_precision_rule() {
    assert_eq!(required_precision(3.0, 1_000_000), 33);
    assert_eq!(required_precision(1.0, 1), 15);
}
