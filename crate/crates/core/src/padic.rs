//! Rational numbers viewed as elements of the p-adic field.
//!
//! Every center, translation and modulation handled by this crate is a
//! rational number, so p-adic quantities (valuation, norm, fractional part,
//! character exponent) are computed exactly from a reduced fraction.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// A prime `p`, validated at construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(Prime(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    #[inline]
    pub fn get(self) -> u64 {
        self.0
    }

    pub fn big(self) -> BigInt {
        BigInt::from(self.0)
    }

    /// `p^e` as an integer.
    pub fn pow(self, e: u32) -> BigInt {
        num_traits::pow(self.big(), e as usize)
    }

    /// `p^e` as a rational, for any integer exponent.
    pub fn rat_pow(self, e: i64) -> BigRational {
        let magnitude = self.pow(e.unsigned_abs() as u32);
        if e >= 0 {
            BigRational::from_integer(magnitude)
        } else {
            BigRational::new(BigInt::one(), magnitude)
        }
    }

    /// `p^e` as a machine integer, if it fits.
    pub fn checked_pow(self, e: u32) -> Option<u64> {
        self.0.checked_pow(e)
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Exponent of `p` in a nonzero integer.
fn int_valuation(n: &BigInt, p: &BigInt) -> i64 {
    debug_assert!(!n.is_zero());
    let mut v = 0;
    let mut cur = n.clone();
    loop {
        let (q, r) = cur.div_rem(p);
        if !r.is_zero() {
            return v;
        }
        cur = q;
        v += 1;
    }
}

/// p-adic valuation of a rational; `None` for zero.
pub fn valuation(x: &BigRational, p: Prime) -> Option<i64> {
    if x.is_zero() {
        return None;
    }
    let pb = p.big();
    Some(int_valuation(x.numer(), &pb) - int_valuation(x.denom(), &pb))
}

/// Representative of `x` modulo `p^{-radius_exp} Z_p`, i.e. the canonical
/// center of the ball `B_{radius_exp}(x)`: `p^{-radius_exp} * {p^{radius_exp} x}_p`.
pub fn reduce_mod_ball(x: &BigRational, radius_exp: i64, p: Prime) -> BigRational {
    let scaled = x * p.rat_pow(radius_exp);
    fractional_part_raw(&scaled, p) * p.rat_pow(-radius_exp)
}

fn fractional_part_raw(x: &BigRational, p: Prime) -> BigRational {
    let (k, c) = character_exponent_raw(x, p);
    if k == 0 {
        BigRational::zero()
    } else {
        BigRational::new(c, p.pow(k))
    }
}

fn character_exponent_raw(x: &BigRational, p: Prime) -> (u32, BigInt) {
    let v = match valuation(x, p) {
        None => return (0, BigInt::zero()),
        Some(v) if v >= 0 => return (0, BigInt::zero()),
        Some(v) => v,
    };
    let k = (-v) as u32;
    let modulus = p.pow(k);
    // x * p^k is a p-adic unit u/d with p coprime to d
    let unit = x * BigRational::from_integer(modulus.clone());
    let d = unit.denom();
    let inv = mod_inverse(d, &modulus).expect("denominator coprime to p");
    let c = (unit.numer() * inv).mod_floor(&modulus);
    (k, c)
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

/// An exact rational viewed as an element of `Q_p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PAdicRational {
    value: BigRational,
    p: Prime,
}

impl PAdicRational {
    pub fn new(value: BigRational, p: Prime) -> Self {
        PAdicRational { value, p }
    }

    pub fn from_integer(n: i64, p: Prime) -> Self {
        Self::new(BigRational::from_integer(BigInt::from(n)), p)
    }

    pub fn from_ratio(num: i64, den: i64, p: Prime) -> Self {
        Self::new(BigRational::new(num.into(), den.into()), p)
    }

    pub fn zero(p: Prime) -> Self {
        Self::new(BigRational::zero(), p)
    }

    /// `p^e`.
    pub fn prime_power(e: i64, p: Prime) -> Self {
        Self::new(p.rat_pow(e), p)
    }

    pub fn parse(s: &str, p: Prime) -> Result<Self> {
        Ok(Self::new(parse_rational(s)?, p))
    }

    #[inline]
    pub fn value(&self) -> &BigRational {
        &self.value
    }

    pub fn into_value(self) -> BigRational {
        self.value
    }

    #[inline]
    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    /// Exponent γ with `x = p^γ m/n`, `p ∤ mn`; `None` for zero.
    pub fn valuation(&self) -> Option<i64> {
        valuation(&self.value, self.p)
    }

    /// `|x|_p`, exactly: `0` or `p^{-γ}`.
    pub fn norm(&self) -> BigRational {
        match self.valuation() {
            None => BigRational::zero(),
            Some(v) => self.p.rat_pow(-v),
        }
    }

    /// `log_p |x|_p`; `None` for zero.
    pub fn norm_exp(&self) -> Option<i64> {
        self.valuation().map(|v| -v)
    }

    /// `{x}_p`: the rational `c/p^k` in `[0,1)` with `x - {x}_p ∈ Z_p`.
    pub fn fractional_part(&self) -> PAdicRational {
        Self::new(fractional_part_raw(&self.value, self.p), self.p)
    }

    /// `(k, c)` with `χ_p(x) = exp(2πi c / p^k)` and `0 <= c < p^k`.
    /// `(0, 0)` exactly when `x ∈ Z_p`.
    pub fn character_exponent(&self) -> (u32, BigInt) {
        character_exponent_raw(&self.value, self.p)
    }

    pub fn is_integral(&self) -> bool {
        self.valuation().is_none_or(|v| v >= 0)
    }

    /// `p^j * self`.
    pub fn scale(&self, j: i64) -> Self {
        Self::new(&self.value * self.p.rat_pow(j), self.p)
    }

    /// Canonical representative modulo `p^{-radius_exp} Z_p`.
    pub fn reduce_mod_ball(&self, radius_exp: i64) -> Self {
        Self::new(reduce_mod_ball(&self.value, radius_exp, self.p), self.p)
    }

    /// True when `|self - other|_p <= p^radius_exp`.
    pub fn within(&self, other: &Self, radius_exp: i64) -> bool {
        let diff = &self.value - &other.value;
        match valuation(&diff, self.p) {
            None => true,
            Some(v) => -v <= radius_exp,
        }
    }
}

impl PartialOrd for PAdicRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PAdicRational {
    fn cmp(&self, other: &Self) -> Ordering {
        self.value.cmp(&other.value).then(self.p.cmp(&other.p))
    }
}

impl fmt::Display for PAdicRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_rational(&self.value))
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $op:tt) => {
        impl<'a> $tr<&'a PAdicRational> for &'a PAdicRational {
            type Output = PAdicRational;
            fn $m(self, rhs: &'a PAdicRational) -> PAdicRational {
                debug_assert_eq!(self.p, rhs.p, "mixed primes");
                PAdicRational::new(&self.value $op &rhs.value, self.p)
            }
        }
        impl $tr for PAdicRational {
            type Output = PAdicRational;
            fn $m(self, rhs: PAdicRational) -> PAdicRational {
                (&self).$m(&rhs)
            }
        }
    };
}

binop!(Add, add, +);
binop!(Sub, sub, -);
binop!(Mul, mul, *);

impl Neg for &PAdicRational {
    type Output = PAdicRational;
    fn neg(self) -> PAdicRational {
        PAdicRational::new(-&self.value, self.p)
    }
}

impl Neg for PAdicRational {
    type Output = PAdicRational;
    fn neg(self) -> PAdicRational {
        -&self
    }
}

/// Renders `num/den`, omitting the denominator when it is 1.
pub fn format_rational(x: &BigRational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `"num/den"` or `"num"`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("invalid rational {s:?}"));
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n = BigInt::from_str(n).map_err(|_| bad())?;
    let d = BigInt::from_str(d).map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

/// Which translation set to enumerate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TranslationKind {
    /// All `a ∈ I_p` with `|a|_p <= p^k`.
    Bounded,
    /// `J_{p,m}`: fractions whose leading digit `s_{-m}` is nonzero.
    LeadingDigit,
}

/// Enumerates `{a ∈ I_p : |a|_p <= p^bound}` or `J_{p,bound}`, ordered by
/// (denominator exponent, numerator).
pub fn enumerate_translations(
    kind: TranslationKind,
    bound: u32,
    p: Prime,
) -> Result<Vec<PAdicRational>> {
    let count = p
        .checked_pow(bound)
        .filter(|&n| n <= 1 << 32)
        .ok_or_else(|| Error::ResolutionLimit(format!("p^{bound} translations")))?;
    let denom = p.pow(bound);
    let pu = p.get();
    match kind {
        TranslationKind::Bounded => {
            let mut out: Vec<PAdicRational> = (0..count)
                .map(|j| PAdicRational::new(BigRational::new(j.into(), denom.clone()), p))
                .collect();
            out.sort_by(translation_order);
            Ok(out)
        }
        TranslationKind::LeadingDigit => {
            if bound == 0 {
                return Err(Error::InvalidInput("J_{p,m} requires m >= 1".into()));
            }
            Ok((1..count)
                .filter(|j| j % pu != 0)
                .map(|j| PAdicRational::new(BigRational::new(j.into(), denom.clone()), p))
                .collect())
        }
    }
}

fn translation_order(a: &PAdicRational, b: &PAdicRational) -> Ordering {
    let ka = a.character_exponent().0;
    let kb = b.character_exponent().0;
    ka.cmp(&kb).then_with(|| a.value.numer().cmp(b.value.numer()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    fn q(s: &str, pr: u64) -> PAdicRational {
        PAdicRational::parse(s, p(pr)).unwrap()
    }

    /// Exponent of `p` by factoring numerator and denominator separately.
    fn factor_oracle(num: i64, den: i64, pr: i64) -> i64 {
        let count = |mut n: i64| {
            let mut c = 0;
            while n % pr == 0 {
                n /= pr;
                c += 1;
            }
            c
        };
        count(num.abs()) - count(den.abs())
    }

    #[test]
    fn primes_are_checked() {
        assert!(Prime::new(2).is_ok());
        assert!(Prime::new(7919).is_ok());
        assert!(Prime::new(1).is_err());
        assert!(Prime::new(9).is_err());
        assert!(Prime::new(0).is_err());
    }

    #[test]
    fn norm_examples() {
        assert!(q("0", 2).norm().is_zero());
        assert_eq!(q("4", 2).norm(), BigRational::new(1.into(), 4.into()));
        assert_eq!(q("3/4", 2).norm(), BigRational::from_integer(4.into()));
        assert_eq!(factor_oracle(3, 4, 2), -2);
    }

    #[test]
    fn fractional_part_examples() {
        assert!(q("5", 3).fractional_part().is_zero());
        assert_eq!(q("1/2", 2).fractional_part(), q("1/2", 2));
        // -1 ≡ 1 (mod 2)
        assert_eq!(q("-1/2", 2).fractional_part(), q("1/2", 2));
        // 1/6 in Q_3: 1/6 = (1/2)(1/3), 1/2 ≡ 2 (mod 3)
        assert_eq!(q("1/6", 3).fractional_part(), q("2/3", 3));
    }

    #[test]
    fn character_exponent_examples() {
        assert_eq!(q("7", 5).character_exponent(), (0, BigInt::zero()));
        assert_eq!(q("1/2", 2).character_exponent(), (1, BigInt::one()));
        assert_eq!(q("1/3", 3).character_exponent(), (1, BigInt::one()));
        assert_eq!(q("3/5", 2).character_exponent(), (0, BigInt::zero()));
    }

    #[test]
    fn translation_examples() {
        let two = p(2);
        let got = enumerate_translations(TranslationKind::Bounded, 1, two).unwrap();
        assert_eq!(got, vec![q("0", 2), q("1/2", 2)]);
        let got = enumerate_translations(TranslationKind::LeadingDigit, 1, p(3)).unwrap();
        assert_eq!(got, vec![q("1/3", 3), q("2/3", 3)]);
        let got = enumerate_translations(TranslationKind::LeadingDigit, 2, two).unwrap();
        assert_eq!(got, vec![q("1/4", 2), q("3/4", 2)]);
        assert!(enumerate_translations(TranslationKind::LeadingDigit, 0, two).is_err());
        let got = enumerate_translations(TranslationKind::Bounded, 2, two).unwrap();
        assert_eq!(got, vec![q("0", 2), q("1/2", 2), q("1/4", 2), q("3/4", 2)]);
    }

    #[test]
    fn leading_digit_count() {
        for pr in [2u64, 3, 5, 7] {
            for m in 1..=3u32 {
                let got = enumerate_translations(TranslationKind::LeadingDigit, m, p(pr)).unwrap();
                assert_eq!(got.len() as u64, (pr - 1) * pr.pow(m - 1));
                for s in &got {
                    assert_eq!(s.fractional_part(), *s);
                    assert_eq!(s.norm_exp(), Some(m as i64));
                }
            }
        }
    }

    #[test]
    fn ball_reduction() {
        // B_{-1}(1) = 1 + pZ_p has center 1
        assert_eq!(q("1", 2).reduce_mod_ball(-1), q("1", 2));
        assert_eq!(q("3", 2).reduce_mod_ball(-1), q("1", 2));
        assert_eq!(q("5/2", 2).reduce_mod_ball(0), q("1/2", 2));
        assert_eq!(q("-1", 3).reduce_mod_ball(-2), q("8", 3));
        assert_eq!(q("7/4", 2).reduce_mod_ball(1), q("1/4", 2));
    }

    fn small_rational() -> impl Strategy<Value = (i64, i64)> {
        (-2000i64..2000, 1i64..500)
    }

    proptest! {
        #[test]
        fn strong_triangle((a, b) in small_rational(), (c, d) in small_rational(), pr in prop::sample::select(vec![2u64, 3, 5, 7])) {
            let x = PAdicRational::from_ratio(a, b, p(pr));
            let y = PAdicRational::from_ratio(c, d, p(pr));
            let s = &x + &y;
            let nx = x.norm();
            let ny = y.norm();
            let max = if nx > ny { nx.clone() } else { ny.clone() };
            prop_assert!(s.norm() <= max);
            if nx != ny {
                prop_assert_eq!(s.norm(), max);
            }
            prop_assert_eq!((&x * &y).norm(), &nx * &ny);
        }

        #[test]
        fn valuation_matches_factoring((a, b) in small_rational(), pr in prop::sample::select(vec![2i64, 3, 5, 7])) {
            prop_assume!(a != 0);
            let x = PAdicRational::from_ratio(a, b, p(pr as u64));
            prop_assert_eq!(x.valuation(), Some(factor_oracle(a, b, pr)));
        }

        #[test]
        fn fractional_part_differs_by_integer((a, b) in small_rational(), pr in prop::sample::select(vec![2u64, 3, 5, 7])) {
            let x = PAdicRational::from_ratio(a, b, p(pr));
            let f = x.fractional_part();
            prop_assert!((&f - &x).is_integral());
            prop_assert!(f.value() >= &BigRational::zero() && f.value() < &BigRational::one());
            prop_assert_eq!(f.is_zero(), x.is_integral());
        }

        #[test]
        fn character_exponent_additive((a, b) in small_rational(), (c, d) in small_rational(), pr in prop::sample::select(vec![2u64, 3, 5])) {
            let x = PAdicRational::from_ratio(a, b, p(pr));
            let y = PAdicRational::from_ratio(c, d, p(pr));
            let (kx, cx) = x.character_exponent();
            let (ky, cy) = y.character_exponent();
            let (ks, cs) = (&x + &y).character_exponent();
            let k = kx.max(ky);
            let m = p(pr).pow(k);
            let lifted = (cx * p(pr).pow(k - kx) + cy * p(pr).pow(k - ky)).mod_floor(&m);
            prop_assert!(ks <= k);
            prop_assert_eq!(lifted, cs * p(pr).pow(k - ks));
        }
    }
}
