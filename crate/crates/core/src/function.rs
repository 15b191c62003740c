//! Locally constant, compactly supported functions of the form
//! `Σ c · χ_p(t x) · 1_B(x)`.
//!
//! The class is closed under the Fourier transform, dilation and translation,
//! and inner products reduce to ball integrals of characters, so everything
//! here is computed exactly in a cyclotomic field.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;

use crate::cyclotomic::{rational_to_f64, Accumulator, CyclotomicNumber};
use crate::error::{Error, Result};
use crate::padic::{PAdicRational, Prime};
use crate::set::{Ball, ClopenSet, Limits};

/// `χ_p(x)` as an exact root of unity.
pub fn character(x: &PAdicRational) -> CyclotomicNumber {
    let (k, c) = x.character_exponent();
    CyclotomicNumber::root_of_unity(x.prime(), k, &c)
}

/// One summand `coef · χ_p(t x) · 1_B(x)`.
///
/// The modulation is kept reduced modulo the annihilator `p^γ Z_p` of the
/// support, with the resulting constant folded into the coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CharTerm {
    coef: CyclotomicNumber,
    modulation: PAdicRational,
    support: Ball,
}

impl CharTerm {
    pub fn new(coef: CyclotomicNumber, modulation: PAdicRational, support: Ball) -> Self {
        let reduced = modulation.reduce_mod_ball(-support.radius_exp());
        let shift = &modulation - &reduced;
        let coef = if shift.is_zero() {
            coef
        } else {
            &coef * &character(&(&shift * support.center()))
        };
        CharTerm { coef, modulation: reduced, support }
    }

    pub fn coef(&self) -> &CyclotomicNumber {
        &self.coef
    }

    pub fn modulation(&self) -> &PAdicRational {
        &self.modulation
    }

    pub fn support(&self) -> &Ball {
        &self.support
    }

    /// This term restricted to a sub-ball, as `(modulation, coefficient)`
    /// reduced relative to that sub-ball.
    fn restricted_to(&self, sub: &Ball) -> (PAdicRational, CyclotomicNumber) {
        let t = CharTerm::new(self.coef.clone(), self.modulation.clone(), sub.clone());
        (t.modulation, t.coef)
    }
}

/// Which transform to apply.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// `f̂(ξ) = ∫ χ_p(ξx) f(x) dx`.
    Forward,
    /// `f̌(x) = ∫ χ_p(-xξ) f(ξ) dξ`.
    Inverse,
}

/// A finite sum of character-modulated ball indicators.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LCFunction {
    p: Prime,
    terms: Vec<CharTerm>,
}

/// Piece of the common refinement: a ball with the function written as a
/// character sum on it.
pub type Atom = (Ball, BTreeMap<PAdicRational, CyclotomicNumber>);

impl LCFunction {
    pub fn zero(p: Prime) -> Self {
        LCFunction { p, terms: Vec::new() }
    }

    pub fn from_terms(p: Prime, terms: impl IntoIterator<Item = CharTerm>) -> Result<Self> {
        let mut merged: BTreeMap<(Ball, PAdicRational), CyclotomicNumber> = BTreeMap::new();
        for t in terms {
            if t.support.prime() != p || t.coef.prime() != p {
                return Err(Error::MixedPrimes(p.get(), t.support.prime().get()));
            }
            let key = (t.support, t.modulation);
            match merged.get_mut(&key) {
                Some(c) => *c = &*c + &t.coef,
                None => {
                    merged.insert(key, t.coef);
                }
            }
        }
        let terms = merged
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|((support, modulation), coef)| CharTerm { coef, modulation, support })
            .collect();
        Ok(LCFunction { p, terms })
    }

    fn from_terms_same_prime(p: Prime, terms: impl IntoIterator<Item = CharTerm>) -> Self {
        Self::from_terms(p, terms).expect("terms share the prime")
    }

    /// `c · χ_p(t x) · 1_B(x)`.
    pub fn term(coef: CyclotomicNumber, t: PAdicRational, support: Ball) -> Self {
        let p = support.prime();
        Self::from_terms_same_prime(p, [CharTerm::new(coef, t, support)])
    }

    /// `1_S`.
    pub fn indicator(set: &ClopenSet) -> Self {
        let p = set.prime();
        Self::from_terms_same_prime(
            p,
            set.balls().iter().map(|b| {
                CharTerm::new(CyclotomicNumber::one(p), PAdicRational::zero(p), b.clone())
            }),
        )
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn terms(&self) -> &[CharTerm] {
        &self.terms
    }

    pub fn has_no_terms(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &LCFunction) -> Result<LCFunction> {
        if self.p != other.p {
            return Err(Error::MixedPrimes(self.p.get(), other.p.get()));
        }
        Self::from_terms(self.p, self.terms.iter().chain(&other.terms).cloned())
    }

    pub fn sub(&self, other: &LCFunction) -> Result<LCFunction> {
        self.add(&other.scale(&CyclotomicNumber::from_integer(other.p, -1)))
    }

    pub fn scale(&self, c: &CyclotomicNumber) -> LCFunction {
        Self::from_terms_same_prime(
            self.p,
            self.terms.iter().map(|t| CharTerm {
                coef: &t.coef * c,
                modulation: t.modulation.clone(),
                support: t.support.clone(),
            }),
        )
    }

    pub fn scale_rational(&self, q: &BigRational) -> LCFunction {
        self.scale(&CyclotomicNumber::from_rational(self.p, q.clone()))
    }

    /// `f(x)`, exactly.
    pub fn eval(&self, x: &PAdicRational) -> CyclotomicNumber {
        let mut acc = Accumulator::new(self.p);
        for t in self.terms.iter().filter(|t| t.support.contains_point(x)) {
            let (k, c) = (&t.modulation * x).character_exponent();
            acc.add_rotated(&t.coef, k, &c);
        }
        acc.finish()
    }

    /// Term-wise closed-form Fourier transform.
    pub fn fourier(&self, direction: Direction) -> LCFunction {
        let p = self.p;
        let terms = self.terms.iter().map(|t| {
            let b = t.support.center();
            let gamma = t.support.radius_exp();
            let weight = p.rat_pow(gamma);
            match direction {
                Direction::Forward => {
                    // c χ(tx) 1_{B_γ(b)}  ↦  c p^γ χ(bt) χ(bξ) 1_{B_{-γ}(-t)}
                    let coef = (&t.coef * &character(&(b * &t.modulation))).scale(&weight);
                    CharTerm::new(coef, b.clone(), Ball::new(-&t.modulation, -gamma))
                }
                Direction::Inverse => {
                    // c χ(sξ) 1_{B_δ(a)}  ↦  c p^δ χ(sa) χ(-a x) 1_{B_{-δ}(s)}
                    let coef = (&t.coef * &character(&(b * &t.modulation))).scale(&weight);
                    CharTerm::new(coef, -b, Ball::new(t.modulation.clone(), -gamma))
                }
            }
        });
        Self::from_terms_same_prime(p, terms.collect::<Vec<_>>())
    }

    /// `x ↦ f(p^j x + b)`.
    pub fn dilate_translate(&self, j: i64, b: &PAdicRational) -> LCFunction {
        let terms = self.terms.iter().map(|t| {
            let coef = &t.coef * &character(&(&t.modulation * b));
            let support =
                Ball::new((t.support.center() - b).scale(-j), t.support.radius_exp() + j);
            CharTerm::new(coef, t.modulation.scale(j), support)
        });
        Self::from_terms_same_prime(self.p, terms.collect::<Vec<_>>())
    }

    /// `x ↦ f(x + u)`.
    pub fn translate(&self, u: &PAdicRational) -> LCFunction {
        self.dilate_translate(0, u)
    }

    /// `∫ f · conj(g)`, exactly.
    pub fn inner_product(&self, other: &LCFunction) -> Result<CyclotomicNumber> {
        if self.p != other.p {
            return Err(Error::MixedPrimes(self.p.get(), other.p.get()));
        }
        let mut acc = Accumulator::new(self.p);
        for a in &self.terms {
            for b in &other.terms {
                let Some(meet) = a.support.intersect(&b.support) else { continue };
                let u = &a.modulation - &b.modulation;
                // ∫_{B_ρ(c)} χ(ux) dx = χ(uc) p^ρ when |u| <= p^{-ρ}, else 0
                let rho = meet.radius_exp();
                if u.norm_exp().is_some_and(|e| e > -rho) {
                    continue;
                }
                let coef = (&a.coef * &b.coef.conjugate()).scale(&self.p.rat_pow(rho));
                let (k, c) = (&u * meet.center()).character_exponent();
                acc.add_rotated(&coef, k, &c);
            }
        }
        Ok(acc.finish())
    }

    /// `‖f‖²`.
    pub fn norm_squared(&self) -> CyclotomicNumber {
        self.inner_product(self).expect("same prime")
    }

    /// The common refinement of all term supports, with the function written
    /// on each piece as a sum of characters reduced to that piece.
    pub fn atoms(&self) -> Vec<Atom> {
        let mut supports: Vec<Ball> = self.terms.iter().map(|t| t.support.clone()).collect();
        supports.sort();
        supports.dedup();
        let mut out = Vec::new();
        for (i, b) in supports.iter().enumerate() {
            let inner: Vec<&Ball> = supports
                .iter()
                .enumerate()
                .filter(|&(j, c)| j != i && b.contains(c))
                .map(|(_, c)| c)
                .collect();
            let maximal = inner
                .iter()
                .filter(|c| !inner.iter().any(|d| d != *c && d.contains(c)))
                .map(|c| (*c).clone());
            let holes = ClopenSet::from_balls(self.p, maximal).expect("same prime");
            let region = ClopenSet::ball(b.clone()).difference(&holes).expect("same prime");
            let covering: Vec<&CharTerm> =
                self.terms.iter().filter(|t| t.support.contains(b)).collect();
            for piece in region.balls() {
                let mut sums: BTreeMap<PAdicRational, CyclotomicNumber> = BTreeMap::new();
                for t in &covering {
                    let (m, c) = t.restricted_to(piece);
                    match sums.get_mut(&m) {
                        Some(acc) => *acc = &*acc + &c,
                        None => {
                            sums.insert(m, c);
                        }
                    }
                }
                sums.retain(|_, c| !c.is_zero());
                out.push((piece.clone(), sums));
            }
        }
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out
    }

    /// True when `f` vanishes identically.
    pub fn is_zero(&self) -> bool {
        // characters with distinct reduced modulations are independent on a ball
        self.atoms().iter().all(|(_, sums)| sums.is_empty())
    }

    /// Pointwise equality, decided on the common refinement.
    pub fn pointwise_eq(&self, other: &LCFunction) -> bool {
        self.sub(other).map(|d| d.is_zero()).unwrap_or(false)
    }

    /// `f · 1_{Q_p ∖ B}`.
    pub fn restrict_outside(&self, ball: &Ball) -> LCFunction {
        let mut terms = Vec::new();
        for t in &self.terms {
            if ball.contains(&t.support) {
                continue;
            }
            if t.support.contains(ball) {
                for piece in t.support.difference(ball) {
                    terms.push(CharTerm::new(t.coef.clone(), t.modulation.clone(), piece));
                }
            } else {
                terms.push(t.clone());
            }
        }
        Self::from_terms_same_prime(self.p, terms)
    }

    /// `supp f ⊆ B`.
    pub fn support_within(&self, ball: &Ball) -> bool {
        self.restrict_outside(ball).is_zero()
    }

    /// Smallest `N` with the term supports inside `B_N(0)`.
    pub fn support_radius(&self) -> Option<i64> {
        let set = ClopenSet::from_balls(self.p, self.terms.iter().map(|t| t.support.clone()))
            .expect("same prime");
        set.bounding_radius()
    }

    /// Smallest `N` with `supp f ⊆ B_N(0)`, accounting for cancellation.
    pub fn exact_support_radius(&self) -> Option<i64> {
        let upper = self.support_radius()?;
        if self.is_zero() {
            return None;
        }
        let mut n = upper;
        while self.support_within(&Ball::around_zero(n - 1, self.p)) {
            n -= 1;
        }
        Some(n)
    }

    /// Membership in `D_N^M`: `supp f ⊆ B_N(0)` and `f` invariant under
    /// translation by every `u` with `|u|_p <= p^{-M}`.
    ///
    /// Invariance is decided twice, by translating with the generator `p^M`
    /// and by checking `supp f̂ ⊆ B_M(0)`; a disagreement is an error.
    pub fn class_membership(&self, m: i64, n: i64) -> Result<bool> {
        let supported = self.support_within(&Ball::around_zero(n, self.p));
        let shift = PAdicRational::prime_power(m, self.p);
        let direct = self.translate(&shift).sub(self)?.is_zero();
        let spectral = self.fourier(Direction::Forward).support_within(&Ball::around_zero(m, self.p));
        if direct != spectral {
            return Err(Error::Inconsistent(format!(
                "periodicity by translation ({direct}) and by Fourier support ({spectral}) disagree for M = {m}"
            )));
        }
        Ok(supported && direct)
    }

    /// Double-precision value of `f(x)`, computed term by term.
    pub fn eval_float(&self, x: &PAdicRational) -> Complex64 {
        self.terms
            .iter()
            .filter(|t| t.support.contains_point(x))
            .map(|t| {
                let phase = rational_to_f64((&t.modulation * x).fractional_part().value());
                t.coef.to_complex() * Complex64::from_polar(1.0, std::f64::consts::TAU * phase)
            })
            .sum()
    }

    /// Smallest `K` such that every term is constant on balls of radius `p^{-K}`.
    pub fn constancy_resolution(&self) -> Option<i64> {
        self.terms
            .iter()
            .map(|t| {
                let by_support = -t.support.radius_exp();
                let by_char = t.modulation.norm_exp().unwrap_or(i64::MIN);
                by_support.max(by_char)
            })
            .max()
    }
}

impl fmt::Display for LCFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({})", t.coef)?;
            if !t.modulation.is_zero() {
                write!(f, "·χ({}·x)", t.modulation)?;
            }
            write!(f, "·1[{}]", t.support)?;
        }
        Ok(())
    }
}

/// Brute-force Riemann sum of `∫ f · conj(g)` over `B_M(0)` on the grid of
/// radius-`p^{-K}` balls, in floating point.
pub fn numeric_oracle(
    f: &LCFunction,
    g: &LCFunction,
    window: i64,
    resolution: i64,
    limits: &Limits,
) -> Result<Complex64> {
    let p = f.prime();
    for h in [f, g] {
        if let Some(k) = h.constancy_resolution() {
            if k > resolution {
                return Err(Error::InvalidInput(format!(
                    "resolution p^-{resolution} is coarser than the constancy radius p^-{k}"
                )));
            }
        }
    }
    let depth = window + resolution;
    limits.check_depth(depth, "numeric oracle grid")?;
    let count = p.checked_pow(depth.max(0) as u32).unwrap_or(u64::MAX);
    let denom = p.pow(window.max(0) as u32);
    let scale = p.rat_pow(window.min(0));
    let cell = rational_to_f64(&p.rat_pow(-resolution));
    let mut total = Complex64::zero();
    for l in 0..count {
        let x = PAdicRational::new(
            BigRational::new(l.into(), denom.clone()) * &scale,
            p,
        );
        total += f.eval_float(&x) * g.eval_float(&x).conj();
    }
    Ok(total * cell)
}

/// Direction of the dilation limit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dilation {
    /// `lim_n f(p^{-n} x)` for `|x|_p >= p^{window}`.
    Expand { window: i64 },
    /// `lim_n f(p^n x)`.
    Contract,
}

/// Subject of [`eventual_dilation_value`].
#[derive(Clone, Copy, Debug)]
pub enum Subject<'a> {
    Function(&'a LCFunction),
    Set(&'a ClopenSet),
}

/// Limit value with the exponent from which it is attained.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EventualValue {
    pub value: CyclotomicNumber,
    /// Expand: the limit holds for every `n > witness`. Contract on a set:
    /// the radius exponent γ of a ball `B_γ(0)` inside (value 1) or
    /// disjoint from (value 0) the set. Contract on a function: a radius on
    /// which `f` is constant around 0. `None` when any exponent works.
    pub witness_exponent: Option<i64>,
}

pub fn eventual_dilation_value(subject: Subject<'_>, direction: Dilation) -> EventualValue {
    let p = match subject {
        Subject::Function(f) => f.prime(),
        Subject::Set(s) => s.prime(),
    };
    let zero = CyclotomicNumber::zero(p);
    let one = CyclotomicNumber::one(p);
    match direction {
        Dilation::Expand { window } => {
            let bound = match subject {
                Subject::Function(f) => f.support_radius(),
                Subject::Set(s) => s.bounding_radius(),
            };
            EventualValue { value: zero, witness_exponent: bound.map(|m| m - window) }
        }
        Dilation::Contract => match subject {
            Subject::Set(s) => {
                if let Some(b) = s.balls().iter().find(|b| b.contains_zero()) {
                    EventualValue { value: one, witness_exponent: Some(b.radius_exp()) }
                } else {
                    let gap = s.balls().iter().filter_map(|b| b.norm_exp()).min();
                    EventualValue { value: zero, witness_exponent: gap.map(|g| g - 1) }
                }
            }
            Subject::Function(f) => {
                let origin = PAdicRational::zero(p);
                let radius = f
                    .terms()
                    .iter()
                    .map(|t| {
                        if t.support.contains_point(&origin) {
                            let by_char = t.modulation.norm_exp().map_or(i64::MAX, |e| -e);
                            t.support.radius_exp().min(by_char)
                        } else {
                            t.support.norm_exp().expect("ball avoids 0") - 1
                        }
                    })
                    .min();
                EventualValue { value: f.eval(&origin), witness_exponent: radius }
            }
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    fn q(s: &str, pr: u64) -> PAdicRational {
        PAdicRational::parse(s, p(pr)).unwrap()
    }

    fn ball(c: &str, r: i64, pr: u64) -> Ball {
        Ball::new(q(c, pr), r)
    }

    fn one(pr: u64) -> CyclotomicNumber {
        CyclotomicNumber::one(p(pr))
    }

    fn ind(c: &str, r: i64, pr: u64) -> LCFunction {
        LCFunction::indicator(&ClopenSet::ball(ball(c, r, pr)))
    }

    /// Kozyrev's wavelet for p = 2: χ(x/2) 1_{Z_2}(x).
    fn kozyrev2() -> LCFunction {
        LCFunction::term(one(2), q("1/2", 2), Ball::integers(p(2)))
    }

    #[test]
    fn eval_examples() {
        assert!(ind("0", 0, 3).eval(&q("0", 3)).is_one());
        assert_eq!(kozyrev2().eval(&q("1", 2)), CyclotomicNumber::from_integer(p(2), -1));
        assert!(kozyrev2().eval(&q("1/4", 2)).is_zero());
        assert!(kozyrev2().eval(&q("2", 2)).is_one());
    }

    #[test]
    fn fourier_examples() {
        for pr in [2, 3, 5] {
            let zp = ind("0", 0, pr);
            assert_eq!(zp.fourier(Direction::Forward), zp);
            assert_eq!(zp.fourier(Direction::Inverse), zp);
        }
        let big = ind("0", 1, 2);
        let expect = ind("0", -1, 2).scale_rational(&BigRational::from_integer(2.into()));
        assert_eq!(big.fourier(Direction::Forward), expect);
        // inverse transform of 1_{1/2 + Z_2} is the Kozyrev wavelet
        let w = ind("1/2", 0, 2);
        assert!(w.fourier(Direction::Inverse).pointwise_eq(&kozyrev2()));
        assert!(w.fourier(Direction::Forward).pointwise_eq(&kozyrev2()));
        assert!(kozyrev2().fourier(Direction::Forward).pointwise_eq(&w));
    }

    #[test]
    fn fourier_matches_direct_integral() {
        // f̂(ξ) = Σ_cells f(x) χ(ξx) p^{-K}, evaluated exactly on a grid
        let pr = 3;
        let f = ind("1/3", -1, pr)
            .add(&LCFunction::term(one(pr), q("1/9", pr), ball("0", 0, pr)))
            .unwrap();
        let fh = f.fourier(Direction::Forward);
        let cells = ClopenSet::ball(ball("0", 1, pr)).refine_to(-5, &Limits::default()).unwrap();
        for xi in ["0", "1/3", "2/9", "5/27", "1", "7/3"] {
            let xi = q(xi, pr);
            let mut acc = Accumulator::new(p(pr));
            for c in &cells {
                let v = f.eval(c.center());
                let rot = character(&(&xi * c.center()));
                acc.add(&(&v * &rot).scale(&p(pr).rat_pow(-5)));
            }
            assert_eq!(fh.eval(&xi), acc.finish(), "ξ = {xi}");
        }
    }

    #[test]
    fn inner_product_examples() {
        assert!(ind("0", 0, 5).inner_product(&ind("0", 0, 5)).unwrap().is_one());
        let psi = kozyrev2();
        let shifted = psi.translate(&q("-1/2", 2));
        assert!(psi.inner_product(&shifted).unwrap().is_zero());
        assert!(psi.norm_squared().is_one());
        let approx =
            numeric_oracle(&psi, &shifted, 1, 4, &Limits::default()).unwrap();
        assert!(approx.norm() < 1e-12);
    }

    #[test]
    fn class_membership_examples() {
        assert!(ind("0", 0, 3).class_membership(0, 0).unwrap());
        assert!(!ind("0", 1, 2).class_membership(0, 0).unwrap());
        assert!(kozyrev2().class_membership(1, 0).unwrap());
        assert!(!kozyrev2().class_membership(0, 0).unwrap());
    }

    #[test]
    fn eventual_values() {
        let two = p(2);
        let s = ClopenSet::ball(ball("1/4", 1, 2));
        let e = eventual_dilation_value(Subject::Set(&s), Dilation::Expand { window: -1 });
        assert!(e.value.is_zero());
        assert_eq!(e.witness_exponent, Some(2 - -1));
        // after the witness the dilates have left the support
        let x = q("1/2", 2).scale(1); // |x| = 1/2 >= 2^-1
        let n0 = e.witness_exponent.unwrap();
        assert!(!s.contains_point(&x.scale(-(n0 + 1))));

        let zp = ClopenSet::integers(two);
        let e = eventual_dilation_value(Subject::Set(&zp), Dilation::Contract);
        assert!(e.value.is_one());
        assert_eq!(e.witness_exponent, Some(0));

        let w = ClopenSet::ball(ball("1/2", 0, 2));
        let e = eventual_dilation_value(Subject::Set(&w), Dilation::Contract);
        assert!(e.value.is_zero());
        assert_eq!(e.witness_exponent, Some(0));
        assert!(w.is_disjoint(&ClopenSet::ball(Ball::around_zero(0, two))).unwrap());
        assert!(w.is_disjoint(&ClopenSet::ball(Ball::around_zero(-1, two))).unwrap());

        let e = eventual_dilation_value(Subject::Function(&kozyrev2()), Dilation::Contract);
        assert!(e.value.is_one());
        let r = e.witness_exponent.unwrap();
        assert!(kozyrev2().eval(&PAdicRational::prime_power(-r, two)).is_one());
    }

    #[test]
    fn atoms_split_nested_supports() {
        let f = ind("0", 0, 2).sub(&ind("0", -1, 2)).unwrap();
        let atoms = f.atoms();
        let nonzero: Vec<_> = atoms.iter().filter(|(_, s)| !s.is_empty()).collect();
        assert_eq!(nonzero.len(), 1);
        assert_eq!(nonzero[0].0, ball("1", -1, 2));
        assert!(f.pointwise_eq(&ind("1", -1, 2)));
        // 1 + χ(x/2) on Z_2 equals 2·1_{2Z_2}
        let g = ind("0", 0, 2).add(&kozyrev2()).unwrap();
        let h = ind("0", -1, 2).scale_rational(&BigRational::from_integer(2.into()));
        assert!(g.pointwise_eq(&h));
        assert_eq!(g.exact_support_radius(), Some(-1));
    }

    #[test]
    fn oracle_rejects_coarse_grid() {
        let f = ind("0", -3, 2);
        assert!(numeric_oracle(&f, &f, 0, 2, &Limits::default()).is_err());
        let v = numeric_oracle(&ind("0", 0, 3), &ind("0", 0, 3), 0, 3, &Limits::default()).unwrap();
        assert!((v.re - 1.0).abs() < 1e-12 && v.im.abs() < 1e-12);
    }

    #[test]
    fn modulation_reduction() {
        // χ(3x/2) = χ(x/2) χ(x) = χ(x/2) on Z_2
        let a = LCFunction::term(one(2), q("3/2", 2), Ball::integers(p(2)));
        assert_eq!(a, kozyrev2());
        // on 1 + 2Z_2, χ(x/2) is the constant χ(1/2) = -1
        let b = LCFunction::term(one(2), q("1/2", 2), ball("1", -1, 2));
        let expect = ind("1", -1, 2).scale_rational(&BigRational::from_integer((-1).into()));
        assert_eq!(b, expect);
    }
}

#[cfg(test)]
mod props {
    use super::*;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    fn arb_function(pr: u64) -> impl Strategy<Value = LCFunction> {
        let p = Prime::new(pr).unwrap();
        prop::collection::vec((0i64..27, 0u32..3, -2i64..2, 0i64..27, 0u32..3, -3i64..4, 0i64..9), 0..4)
            .prop_map(move |raw| {
                let terms = raw.into_iter().map(|(cn, ce, r, tn, te, c, rot)| {
                    let center = PAdicRational::new(
                        BigRational::new(cn.into(), p.pow(ce)),
                        p,
                    );
                    let t = PAdicRational::new(BigRational::new(tn.into(), p.pow(te)), p);
                    let coef = CyclotomicNumber::root_of_unity(p, 2, &BigInt::from(rot))
                        .scale(&BigRational::from_integer(c.into()));
                    CharTerm::new(coef, t, Ball::new(center, r))
                });
                LCFunction::from_terms(p, terms).unwrap()
            })
    }

    fn pair() -> impl Strategy<Value = (LCFunction, LCFunction)> {
        prop_oneof![Just(2u64), Just(3u64)]
            .prop_flat_map(|pr| (arb_function(pr), arb_function(pr)))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn parseval_exact((f, g) in pair()) {
            let lhs = f.inner_product(&g).unwrap();
            let rhs = f.fourier(Direction::Forward)
                .inner_product(&g.fourier(Direction::Forward))
                .unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn fourier_involution((f, _g) in pair()) {
            let back = f.fourier(Direction::Forward).fourier(Direction::Inverse);
            prop_assert!(back.pointwise_eq(&f));
            let back = f.fourier(Direction::Inverse).fourier(Direction::Forward);
            prop_assert!(back.pointwise_eq(&f));
        }

        #[test]
        fn inner_product_matches_riemann_sum((f, g) in pair()) {
            let exact = f.inner_product(&g).unwrap().to_complex();
            let window = f.support_radius().into_iter().chain(g.support_radius()).max().unwrap_or(0);
            let res = f.constancy_resolution().into_iter()
                .chain(g.constancy_resolution()).max().unwrap_or(0).max(-window);
            let approx = numeric_oracle(&f, &g, window, res, &Limits::default()).unwrap();
            prop_assert!((exact - approx).norm() < 1e-9, "{exact} vs {approx}");
        }

        #[test]
        fn eval_is_consistent_with_atoms((f, _g) in pair(), xn in 0i64..81, xe in 0u32..3) {
            let p = f.prime();
            let x = PAdicRational::new(BigRational::new(xn.into(), p.pow(xe)), p);
            let exact = f.eval(&x);
            prop_assert!((exact.to_complex() - f.eval_float(&x)).norm() < 1e-9);
            let from_atoms = f.atoms().into_iter()
                .find(|(b, _)| b.contains_point(&x))
                .map(|(_, sums)| sums.iter().map(|(t, c)| c * &character(&(t * &x))).sum())
                .unwrap_or_else(|| CyclotomicNumber::zero(p));
            prop_assert_eq!(exact, from_atoms);
        }

        #[test]
        fn difference_with_self_is_zero((f, g) in pair()) {
            prop_assert!(f.sub(&f).unwrap().is_zero());
            let s = f.add(&g).unwrap();
            prop_assert!(s.sub(&g).unwrap().pointwise_eq(&f));
        }

        #[test]
        fn translation_preserves_norm((f, _g) in pair(), j in -2i64..3, un in 0i64..9) {
            let p = f.prime();
            let u = PAdicRational::new(BigRational::new(un.into(), p.pow(1)), p);
            let moved = f.dilate_translate(j, &u);
            let expect = f.norm_squared().scale(&p.rat_pow(j));
            prop_assert_eq!(moved.norm_squared(), expect);
        }
    }
}
