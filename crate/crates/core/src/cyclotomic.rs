//! Exact arithmetic in `Q(ζ_{p^k})`.
//!
//! Values are stored in the power basis `1, ζ, …, ζ^{φ(p^k)-1}` after
//! reduction modulo `Φ_{p^k}(x) = Σ_{i<p} x^{i p^{k-1}}`, at the smallest
//! order `k` that holds them. Equal values therefore have equal fields.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::padic::{format_rational, parse_rational, Prime};

/// Largest root order `p^k` a value may use.
pub const MAX_ROOT_ORDER: u64 = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CyclotomicNumber {
    p: Prime,
    order_exp: u32,
    coeffs: Vec<BigRational>,
}

fn root_order(p: Prime, k: u32) -> usize {
    let n = p
        .checked_pow(k)
        .filter(|&n| n <= MAX_ROOT_ORDER)
        .unwrap_or_else(|| panic!("root of unity order {p}^{k} exceeds {MAX_ROOT_ORDER}"));
    n as usize
}

/// `φ(p^k)`, the degree of `Φ_{p^k}`.
fn degree(p: Prime, k: u32) -> usize {
    if k == 0 {
        1
    } else {
        root_order(p, k - 1) * (p.get() as usize - 1)
    }
}

impl CyclotomicNumber {
    pub fn zero(p: Prime) -> Self {
        CyclotomicNumber { p, order_exp: 0, coeffs: vec![BigRational::zero()] }
    }

    pub fn one(p: Prime) -> Self {
        Self::from_rational(p, BigRational::one())
    }

    pub fn from_rational(p: Prime, q: BigRational) -> Self {
        CyclotomicNumber { p, order_exp: 0, coeffs: vec![q] }
    }

    pub fn from_integer(p: Prime, n: i64) -> Self {
        Self::from_rational(p, BigRational::from_integer(n.into()))
    }

    /// `ζ_{p^k}^c`, with `c` taken modulo `p^k`.
    pub fn root_of_unity(p: Prime, k: u32, c: &BigInt) -> Self {
        let n = root_order(p, k);
        let e = c.mod_floor(&BigInt::from(n)).to_usize().unwrap();
        let mut full = vec![BigRational::zero(); n];
        full[e] = BigRational::one();
        Self::from_full(p, k, full)
    }

    /// Builds `Σ_e weights[e] ζ_{p^k}^e` from a vector of length `p^k`.
    pub fn from_full(p: Prime, k: u32, mut full: Vec<BigRational>) -> Self {
        let n = root_order(p, k);
        assert_eq!(full.len(), n, "expected {n} coefficients");
        let deg = degree(p, k);
        if k > 0 {
            let block = n / p.get() as usize;
            for e in deg..n {
                if full[e].is_zero() {
                    continue;
                }
                let c = std::mem::take(&mut full[e]);
                let r = e - deg;
                for i in 0..(p.get() as usize - 1) {
                    full[i * block + r] -= &c;
                }
            }
        }
        full.truncate(deg);
        let mut out = CyclotomicNumber { p, order_exp: k, coeffs: full };
        out.demote();
        out
    }

    /// Same as [`from_full`](Self::from_full) but from integer weights.
    pub fn from_full_integers(p: Prime, k: u32, full: &[BigInt]) -> Self {
        Self::from_full(p, k, full.iter().map(|c| BigRational::from_integer(c.clone())).collect())
    }

    fn demote(&mut self) {
        let pu = self.p.get() as usize;
        while self.order_exp > 0 {
            let reducible = self
                .coeffs
                .iter()
                .enumerate()
                .all(|(e, c)| e % pu == 0 || c.is_zero());
            if !reducible {
                break;
            }
            let deg = degree(self.p, self.order_exp - 1);
            let next: Vec<BigRational> =
                (0..deg).map(|q| std::mem::take(&mut self.coeffs[q * pu])).collect();
            self.coeffs = next;
            self.order_exp -= 1;
        }
    }

    #[inline]
    pub fn prime(&self) -> Prime {
        self.p
    }

    #[inline]
    pub fn order_exp(&self) -> u32 {
        self.order_exp
    }

    /// Canonical coefficients of `1, ζ, …, ζ^{φ(p^k)-1}`.
    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.order_exp == 0 && self.coeffs[0].is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.order_exp == 0 && self.coeffs[0].is_one()
    }

    /// The value as a rational, if it lies in `Q`.
    pub fn as_rational(&self) -> Option<&BigRational> {
        (self.order_exp == 0).then(|| &self.coeffs[0])
    }

    fn check_prime(&self, other: &Self) -> Result<()> {
        if self.p != other.p {
            return Err(Error::MixedPrimes(self.p.get(), other.p.get()));
        }
        Ok(())
    }

    /// Coefficients at order `k >= self.order_exp`, as a full vector of length `p^k`.
    fn lifted_full(&self, k: u32) -> Vec<BigRational> {
        let n = root_order(self.p, k);
        let step = root_order(self.p, k - self.order_exp);
        let mut full = vec![BigRational::zero(); n];
        for (e, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                full[e * step] = c.clone();
            }
        }
        full
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_prime(other)?;
        let k = self.order_exp.max(other.order_exp);
        let mut full = self.lifted_full(k);
        let step = root_order(self.p, k - other.order_exp);
        for (e, c) in other.coeffs.iter().enumerate() {
            if !c.is_zero() {
                full[e * step] += c;
            }
        }
        Ok(Self::from_full(self.p, k, full))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_prime(other)?;
        if let Some(q) = other.as_rational() {
            return Ok(self.scale(q));
        }
        if let Some(q) = self.as_rational() {
            return Ok(other.scale(q));
        }
        let k = self.order_exp.max(other.order_exp);
        let n = root_order(self.p, k);
        let sa = root_order(self.p, k - self.order_exp);
        let sb = root_order(self.p, k - other.order_exp);
        let mut full = vec![BigRational::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            for (j, b) in other.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                full[(i * sa + j * sb) % n] += a * b;
            }
        }
        Ok(Self::from_full(self.p, k, full))
    }

    pub fn neg(&self) -> Self {
        CyclotomicNumber {
            p: self.p,
            order_exp: self.order_exp,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    /// Complex conjugate: `ζ^e ↦ ζ^{-e}`.
    pub fn conjugate(&self) -> Self {
        self.galois(-1)
    }

    /// The automorphism `ζ ↦ ζ^u` for `u` coprime to `p`.
    pub fn galois(&self, u: i64) -> Self {
        if self.order_exp == 0 {
            return self.clone();
        }
        let n = root_order(self.p, self.order_exp) as i64;
        let mut full = vec![BigRational::zero(); n as usize];
        for (e, c) in self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            let idx = (e as i64 * u).rem_euclid(n) as usize;
            full[idx] += c;
        }
        Self::from_full(self.p, self.order_exp, full)
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        if q.is_zero() {
            return Self::zero(self.p);
        }
        CyclotomicNumber {
            p: self.p,
            order_exp: self.order_exp,
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
        }
    }

    /// `self · ζ_{p^k}^c`.
    pub fn mul_root(&self, k: u32, c: &BigInt) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let kk = self.order_exp.max(k);
        let n = root_order(self.p, kk);
        let shift = (c.mod_floor(&BigInt::from(root_order(self.p, k))).to_usize().unwrap()
            * root_order(self.p, kk - k))
            % n;
        let step = root_order(self.p, kk - self.order_exp);
        let mut full = vec![BigRational::zero(); n];
        for (e, c) in self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            full[(e * step + shift) % n] = c.clone();
        }
        Self::from_full(self.p, kk, full)
    }

    /// Field norm down to `Q` at the current order.
    fn field_norm_cofactor(&self) -> Self {
        let n = root_order(self.p, self.order_exp) as i64;
        let pu = self.p.get() as i64;
        let mut acc = Self::one(self.p);
        for u in 2..n {
            if u % pu != 0 {
                acc = acc.try_mul(&self.galois(u)).unwrap();
            }
        }
        acc
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if let Some(q) = self.as_rational() {
            return Some(Self::from_rational(self.p, q.recip()));
        }
        let cof = self.field_norm_cofactor();
        let norm = self.try_mul(&cof).unwrap();
        let q = norm.as_rational().expect("field norm is rational").clone();
        Some(cof.scale(&q.recip()))
    }

    /// `|self|^2 = self · conj(self)`, a real element of the field.
    pub fn abs_squared(&self) -> Self {
        self.try_mul(&self.conjugate()).unwrap()
    }

    /// Double-precision evaluation of `Σ c_e e^{2πi e / p^k}`.
    pub fn to_complex(&self) -> Complex64 {
        let n = root_order(self.p, self.order_exp) as f64;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(e, c)| {
                let w = rational_to_f64(c);
                let theta = std::f64::consts::TAU * e as f64 / n;
                Complex64::new(w * theta.cos(), w * theta.sin())
            })
            .sum()
    }

    pub fn to_json(&self) -> CyclotomicJson {
        let n = root_order(self.p, self.order_exp);
        let mut coeffs: Vec<String> = self.coeffs.iter().map(format_rational).collect();
        coeffs.resize(n, "0".to_string());
        CyclotomicJson { order_exp: self.order_exp, coeffs }
    }

    pub fn from_json(p: Prime, json: &CyclotomicJson) -> Result<Self> {
        let n = p
            .checked_pow(json.order_exp)
            .filter(|&n| n <= MAX_ROOT_ORDER)
            .ok_or_else(|| Error::InvalidInput(format!("root order {p}^{} too large", json.order_exp)))?
            as usize;
        if json.coeffs.len() > n {
            return Err(Error::InvalidInput(format!(
                "{} coefficients for root order {n}",
                json.coeffs.len()
            )));
        }
        let mut full = vec![BigRational::zero(); n];
        for (slot, s) in full.iter_mut().zip(&json.coeffs) {
            *slot = parse_rational(s)?;
        }
        Ok(Self::from_full(p, json.order_exp, full))
    }
}

pub(crate) fn rational_to_f64(q: &BigRational) -> f64 {
    match (q.numer().to_f64(), q.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            // scale both down until they fit
            let shift = q.numer().bits().max(q.denom().bits()).saturating_sub(1000);
            let n = (q.numer() >> shift).to_f64().unwrap_or(0.0);
            let d = (q.denom() >> shift).to_f64().unwrap_or(f64::INFINITY);
            n / d
        }
    }
}

/// Wire form: `{"order_exp": k, "coeffs": ["num/den", …]}` with `p^k` entries.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CyclotomicJson {
    pub order_exp: u32,
    pub coeffs: Vec<String>,
}

impl fmt::Display for CyclotomicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let n = root_order(self.p, self.order_exp);
        let mut first = true;
        for (e, c) in self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            let (sign, mag) = if c.is_negative() { ("-", -c) } else { ("+", c.clone()) };
            if first {
                if sign == "-" {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match (e, mag.is_one()) {
                (0, _) => f.write_str(&format_rational(&mag))?,
                (_, true) => write!(f, "ζ{n}^{e}")?,
                (_, false) => write!(f, "{}*ζ{n}^{e}", format_rational(&mag))?,
            }
        }
        Ok(())
    }
}

macro_rules! ops {
    ($tr:ident, $m:ident, $f:ident) => {
        impl<'a> std::ops::$tr<&'a CyclotomicNumber> for &'a CyclotomicNumber {
            type Output = CyclotomicNumber;
            fn $m(self, rhs: &'a CyclotomicNumber) -> CyclotomicNumber {
                self.$f(rhs).expect("mixed primes")
            }
        }
        impl std::ops::$tr for CyclotomicNumber {
            type Output = CyclotomicNumber;
            fn $m(self, rhs: CyclotomicNumber) -> CyclotomicNumber {
                self.$f(&rhs).expect("mixed primes")
            }
        }
    };
}

ops!(Add, add, try_add);
ops!(Mul, mul, try_mul);

impl<'a> std::ops::Sub<&'a CyclotomicNumber> for &'a CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn sub(self, rhs: &'a CyclotomicNumber) -> CyclotomicNumber {
        self.try_add(&rhs.neg()).expect("mixed primes")
    }
}

impl std::ops::Neg for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn neg(self) -> CyclotomicNumber {
        CyclotomicNumber::neg(self)
    }
}

impl std::iter::Sum for CyclotomicNumber {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        let mut iter = iter.peekable();
        let p = match iter.peek() {
            Some(x) => x.p,
            None => panic!("sum of an empty iterator has no prime context; use Accumulator"),
        };
        let mut acc = Accumulator::new(p);
        for x in iter {
            acc.add(&x);
        }
        acc.finish()
    }
}

/// Sums many field elements at a fixed maximum order before reducing once.
#[derive(Clone, Debug)]
pub struct Accumulator {
    p: Prime,
    order_exp: u32,
    full: Vec<BigRational>,
}

impl Accumulator {
    pub fn new(p: Prime) -> Self {
        Accumulator { p, order_exp: 0, full: vec![BigRational::zero()] }
    }

    fn raise(&mut self, k: u32) {
        if k <= self.order_exp {
            return;
        }
        let n = root_order(self.p, k);
        let step = root_order(self.p, k - self.order_exp);
        let mut full = vec![BigRational::zero(); n];
        for (e, c) in self.full.drain(..).enumerate() {
            if !c.is_zero() {
                full[e * step] = c;
            }
        }
        self.full = full;
        self.order_exp = k;
    }

    pub fn add(&mut self, x: &CyclotomicNumber) {
        debug_assert_eq!(x.p, self.p);
        self.raise(x.order_exp);
        let step = root_order(self.p, self.order_exp - x.order_exp);
        for (e, c) in x.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            self.full[e * step] += c;
        }
    }

    /// Adds `w · ζ_{p^k}^c`.
    pub fn add_root(&mut self, w: &BigRational, k: u32, c: &BigInt) {
        if w.is_zero() {
            return;
        }
        self.raise(k);
        let n = root_order(self.p, k);
        let e = c.mod_floor(&BigInt::from(n)).to_usize().unwrap();
        let step = root_order(self.p, self.order_exp - k);
        self.full[e * step] += w;
    }

    /// Adds `x · ζ_{p^k}^c`.
    pub fn add_rotated(&mut self, x: &CyclotomicNumber, k: u32, c: &BigInt) {
        if let Some(q) = x.as_rational() {
            self.add_root(q, k, c);
            return;
        }
        self.raise(k.max(x.order_exp));
        let n = self.full.len();
        let shift = c.mod_floor(&BigInt::from(root_order(self.p, k))).to_usize().unwrap()
            * root_order(self.p, self.order_exp - k);
        let step = root_order(self.p, self.order_exp - x.order_exp);
        for (e, v) in x.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            self.full[(e * step + shift) % n] += v;
        }
    }

    pub fn finish(self) -> CyclotomicNumber {
        CyclotomicNumber::from_full(self.p, self.order_exp, self.full)
    }
}
