//! Compact open subsets of `Q_p` as canonical finite unions of balls.
//!
//! A ball `B_γ(c) = c + p^{-γ} Z_p` is stored with its canonical center, the
//! representative of `c` in `[0, p^{-γ})`-style fractional form. Any two balls
//! are nested or disjoint, so a clopen set has a unique representation as a
//! list of disjoint balls in which no `p` siblings appear together.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::padic::{PAdicRational, Prime};

/// The ball `{x : |x - center|_p <= p^radius_exp}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ball {
    center: PAdicRational,
    radius_exp: i64,
}

impl Ball {
    pub fn new(center: PAdicRational, radius_exp: i64) -> Self {
        Ball { center: center.reduce_mod_ball(radius_exp), radius_exp }
    }

    /// `B_γ(0) = p^{-γ} Z_p`.
    pub fn around_zero(radius_exp: i64, p: Prime) -> Self {
        Ball { center: PAdicRational::zero(p), radius_exp }
    }

    /// `Z_p`.
    pub fn integers(p: Prime) -> Self {
        Self::around_zero(0, p)
    }

    pub fn center(&self) -> &PAdicRational {
        &self.center
    }

    pub fn radius_exp(&self) -> i64 {
        self.radius_exp
    }

    pub fn prime(&self) -> Prime {
        self.center.prime()
    }

    pub fn measure(&self) -> BigRational {
        self.prime().rat_pow(self.radius_exp)
    }

    pub fn contains_point(&self, x: &PAdicRational) -> bool {
        x.within(&self.center, self.radius_exp)
    }

    /// `other ⊆ self`.
    pub fn contains(&self, other: &Ball) -> bool {
        self.radius_exp >= other.radius_exp && self.contains_point(&other.center)
    }

    pub fn is_disjoint(&self, other: &Ball) -> bool {
        !self.contains(other) && !other.contains(self)
    }

    /// The smaller ball when nested, otherwise `None`.
    pub fn intersect(&self, other: &Ball) -> Option<Ball> {
        if self.contains(other) {
            Some(other.clone())
        } else if other.contains(self) {
            Some(self.clone())
        } else {
            None
        }
    }

    pub fn contains_zero(&self) -> bool {
        self.center.is_zero()
    }

    /// `log_p |x|_p`, shared by every point of a ball that avoids 0.
    pub fn norm_exp(&self) -> Option<i64> {
        self.center.norm_exp()
    }

    pub fn parent(&self) -> Ball {
        Ball::new(self.center.clone(), self.radius_exp + 1)
    }

    /// The `p` balls of radius `p^{γ-1}` partitioning this one.
    pub fn children(&self) -> Vec<Ball> {
        let p = self.prime();
        let step = PAdicRational::prime_power(-self.radius_exp, p);
        (0..p.get() as i64)
            .map(|d| {
                let c = &self.center + &(&step * &PAdicRational::from_integer(d, p));
                Ball::new(c, self.radius_exp - 1)
            })
            .collect()
    }

    /// `p^j · self + t`.
    pub fn affine(&self, j: i64, t: &PAdicRational) -> Ball {
        Ball::new(&self.center.scale(j) + t, self.radius_exp - j)
    }

    /// `self ∖ inner` for `inner ⊊ self`, as the siblings along the path down.
    pub fn difference(&self, inner: &Ball) -> Vec<Ball> {
        debug_assert!(self.contains(inner));
        let mut out = Vec::new();
        let mut cur = self.clone();
        while cur.radius_exp > inner.radius_exp {
            let mut next = None;
            for child in cur.children() {
                if child.contains(inner) {
                    next = Some(child);
                } else {
                    out.push(child);
                }
            }
            cur = next.expect("one child contains the inner ball");
        }
        out
    }

    /// All sub-balls of radius `p^radius_exp`.
    pub fn split_to(&self, radius_exp: i64, limit: usize) -> Result<Vec<Ball>> {
        if radius_exp >= self.radius_exp {
            return Ok(vec![self.clone()]);
        }
        let depth = (self.radius_exp - radius_exp) as u32;
        let count = self.prime().checked_pow(depth).unwrap_or(u64::MAX);
        if count > limit as u64 {
            return Err(Error::ResolutionLimit(format!(
                "splitting {self} to radius p^{radius_exp} needs {count} balls"
            )));
        }
        let p = self.prime();
        let step = PAdicRational::prime_power(-self.radius_exp, p);
        Ok((0..count)
            .map(|d| {
                let off = PAdicRational::new(step.value() * BigRational::from_integer(BigInt::from(d)), p);
                Ball::new(&self.center + &off, radius_exp)
            })
            .collect())
    }
}

impl PartialOrd for Ball {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ball {
    fn cmp(&self, other: &Self) -> Ordering {
        self.radius_exp
            .cmp(&other.radius_exp)
            .then_with(|| self.center.cmp(&other.center))
    }
}

impl fmt::Display for Ball {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "B_{}({})", self.radius_exp, self.center)
    }
}

/// Limits on how finely sets may be refined by enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Maximum number of levels a single refinement may descend.
    pub max_resolution: u32,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_resolution: 12 }
    }
}

impl Limits {
    pub const ENV_VAR: &'static str = "PADSET_MAX_RESOLUTION";

    pub fn from_env() -> Result<Self> {
        match std::env::var(Self::ENV_VAR) {
            Ok(v) => v
                .trim()
                .parse()
                .map(|max_resolution| Limits { max_resolution })
                .map_err(|_| Error::InvalidInput(format!("{}={v:?} is not a depth", Self::ENV_VAR))),
            Err(_) => Ok(Self::default()),
        }
    }

    /// Largest number of items one enumeration may produce at prime `p`.
    pub fn max_items(&self, p: Prime) -> usize {
        p.checked_pow(self.max_resolution)
            .and_then(|n| n.to_usize())
            .unwrap_or(usize::MAX)
    }

    pub fn check_depth(&self, depth: i64, what: &str) -> Result<()> {
        if depth > self.max_resolution as i64 {
            return Err(Error::ResolutionLimit(format!(
                "{what} needs depth {depth} > {} (set {} to raise)",
                self.max_resolution,
                Self::ENV_VAR
            )));
        }
        Ok(())
    }
}

/// A compact open subset of `Q_p` in canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ClopenSet {
    p: Prime,
    balls: Vec<Ball>,
}

impl ClopenSet {
    pub fn empty(p: Prime) -> Self {
        ClopenSet { p, balls: Vec::new() }
    }

    pub fn ball(b: Ball) -> Self {
        ClopenSet { p: b.prime(), balls: vec![b] }
    }

    /// `Z_p`.
    pub fn integers(p: Prime) -> Self {
        Self::ball(Ball::integers(p))
    }

    /// Canonical form of an arbitrary list of balls.
    pub fn from_balls(p: Prime, raw: impl IntoIterator<Item = Ball>) -> Result<Self> {
        let raw: Vec<Ball> = raw.into_iter().collect();
        if let Some(b) = raw.iter().find(|b| b.prime() != p) {
            return Err(Error::MixedPrimes(p.get(), b.prime().get()));
        }
        Ok(Self::canonicalize(p, raw))
    }

    fn canonicalize(p: Prime, mut raw: Vec<Ball>) -> Self {
        if raw.is_empty() {
            return Self::empty(p);
        }
        // drop balls covered by a larger one
        raw.sort_by(|a, b| b.cmp(a));
        let top = raw[0].radius_exp;
        let mut kept: HashSet<Ball> = HashSet::new();
        for b in raw {
            let mut anc = b.clone();
            let mut covered = false;
            loop {
                if kept.contains(&anc) {
                    covered = true;
                    break;
                }
                if anc.radius_exp >= top {
                    break;
                }
                anc = anc.parent();
            }
            if !covered {
                kept.insert(b);
            }
        }
        // merge complete sibling families bottom-up
        let mut levels: BTreeMap<i64, HashSet<Ball>> = BTreeMap::new();
        for b in kept {
            levels.entry(b.radius_exp).or_default().insert(b);
        }
        let pu = p.get() as usize;
        let mut out = Vec::new();
        while let Some((&gamma, _)) = levels.iter().next() {
            let level = levels.remove(&gamma).unwrap();
            let mut families: HashMap<Ball, Vec<Ball>> = HashMap::new();
            for b in level {
                families.entry(b.parent()).or_default().push(b);
            }
            for (parent, kids) in families {
                if kids.len() == pu {
                    levels.entry(gamma + 1).or_default().insert(parent);
                } else {
                    out.extend(kids);
                }
            }
        }
        out.sort();
        ClopenSet { p, balls: out }
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn balls(&self) -> &[Ball] {
        &self.balls
    }

    pub fn is_empty(&self) -> bool {
        self.balls.is_empty()
    }

    /// Haar measure with `μ(Z_p) = 1`.
    pub fn measure(&self) -> BigRational {
        self.balls.iter().map(Ball::measure).fold(BigRational::zero(), |a, b| a + b)
    }

    pub fn contains_point(&self, x: &PAdicRational) -> bool {
        self.balls.iter().any(|b| b.contains_point(x))
    }

    /// The canonical ball holding `x`, if any.
    pub fn ball_containing(&self, x: &PAdicRational) -> Option<&Ball> {
        self.balls.iter().find(|b| b.contains_point(x))
    }

    fn check_prime(&self, other: &ClopenSet) -> Result<()> {
        if self.p != other.p {
            return Err(Error::MixedPrimes(self.p.get(), other.p.get()));
        }
        Ok(())
    }

    pub fn union(&self, other: &ClopenSet) -> Result<ClopenSet> {
        self.check_prime(other)?;
        Ok(Self::canonicalize(self.p, self.balls.iter().chain(&other.balls).cloned().collect()))
    }

    pub fn intersect(&self, other: &ClopenSet) -> Result<ClopenSet> {
        self.check_prime(other)?;
        let mut out = Vec::new();
        for a in &self.balls {
            for b in &other.balls {
                if let Some(c) = a.intersect(b) {
                    out.push(c);
                }
            }
        }
        Ok(Self::canonicalize(self.p, out))
    }

    pub fn difference(&self, other: &ClopenSet) -> Result<ClopenSet> {
        self.check_prime(other)?;
        let mut out = Vec::new();
        for s in &self.balls {
            let mut pieces = vec![s.clone()];
            for t in &other.balls {
                if !s.contains(t) && !t.contains(s) {
                    continue;
                }
                let mut next = Vec::with_capacity(pieces.len());
                for q in pieces {
                    if t.contains(&q) {
                        continue;
                    } else if q.contains(t) {
                        next.extend(q.difference(t));
                    } else {
                        next.push(q);
                    }
                }
                pieces = next;
            }
            out.extend(pieces);
        }
        Ok(Self::canonicalize(self.p, out))
    }

    pub fn symmetric_difference(&self, other: &ClopenSet) -> Result<ClopenSet> {
        self.difference(other)?.union(&other.difference(self)?)
    }

    /// Complement relative to a bounding ball.
    pub fn complement_in(&self, bound: &Ball) -> Result<ClopenSet> {
        ClopenSet::ball(bound.clone()).difference(self)
    }

    pub fn is_subset(&self, other: &ClopenSet) -> Result<bool> {
        Ok(self.difference(other)?.is_empty())
    }

    pub fn is_disjoint(&self, other: &ClopenSet) -> Result<bool> {
        Ok(self.intersect(other)?.is_empty())
    }

    /// `p^j · S + t`.
    pub fn affine(&self, j: i64, t: &PAdicRational) -> ClopenSet {
        Self::canonicalize(self.p, self.balls.iter().map(|b| b.affine(j, t)).collect())
    }

    /// `p^j · S`.
    pub fn dilate(&self, j: i64) -> ClopenSet {
        self.affine(j, &PAdicRational::zero(self.p))
    }

    pub fn translate(&self, t: &PAdicRational) -> ClopenSet {
        self.affine(0, t)
    }

    /// Smallest `M` with `S ⊆ B_M(0)`; `None` for the empty set.
    pub fn bounding_radius(&self) -> Option<i64> {
        self.balls
            .iter()
            .map(|b| b.norm_exp().map_or(b.radius_exp, |v| v.max(b.radius_exp)))
            .max()
    }

    /// Smallest radius exponent among the canonical balls.
    pub fn finest_radius(&self) -> Option<i64> {
        self.balls.iter().map(|b| b.radius_exp).min()
    }

    /// All balls of radius `p^radius_exp` making up the set.
    pub fn refine_to(&self, radius_exp: i64, limits: &Limits) -> Result<Vec<Ball>> {
        let cap = limits.max_items(self.p);
        let mut out = Vec::new();
        for b in &self.balls {
            limits.check_depth(b.radius_exp - radius_exp, "refinement")?;
            out.extend(b.split_to(radius_exp, cap)?);
            if out.len() > cap {
                return Err(Error::ResolutionLimit(format!("refinement exceeds {cap} balls")));
            }
        }
        out.sort();
        Ok(out)
    }

    /// Multiplicities `#{j : p^j u ∈ S}` on the unit shell `|u|_p = 1`.
    pub fn dilation_multiplicity(&self) -> DilationProfile {
        if let Some(b) = self.balls.iter().find(|b| b.contains_zero()) {
            return DilationProfile::Infinite { ball: b.clone() };
        }
        let p = self.p;
        let mut pieces: Vec<(Ball, u64)> = (1..p.get() as i64)
            .map(|d| (Ball::new(PAdicRational::from_integer(d, p), -1), 0))
            .collect();
        for b in &self.balls {
            let v = b.norm_exp().expect("ball avoids 0");
            let shell_part = b.affine(v, &PAdicRational::zero(p));
            let mut next = Vec::with_capacity(pieces.len() + 1);
            for (q, count) in pieces {
                if shell_part.contains(&q) {
                    next.push((q, count + 1));
                } else if q.contains(&shell_part) {
                    next.extend(q.difference(&shell_part).into_iter().map(|r| (r, count)));
                    next.push((shell_part.clone(), count + 1));
                } else {
                    next.push((q, count));
                }
            }
            pieces = next;
        }
        let mut by_count: BTreeMap<u64, Vec<Ball>> = BTreeMap::new();
        for (q, c) in pieces {
            by_count.entry(c).or_default().push(q);
        }
        let mut out: Vec<(Ball, u64)> = by_count
            .into_iter()
            .flat_map(|(c, balls)| {
                ClopenSet::canonicalize(p, balls).balls.into_iter().map(move |b| (b, c))
            })
            .collect();
        out.sort();
        DilationProfile::Finite(out)
    }
}

impl fmt::Display for ClopenSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.balls.is_empty() {
            return f.write_str("∅");
        }
        for (i, b) in self.balls.iter().enumerate() {
            if i > 0 {
                f.write_str(" ∪ ")?;
            }
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

/// Dilation multiplicity of a clopen set on the unit shell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DilationProfile {
    /// The set contains a ball around 0, so every `ξ ≠ 0` is hit infinitely often.
    Infinite { ball: Ball },
    /// Disjoint balls covering the unit shell, each with its multiplicity.
    Finite(Vec<(Ball, u64)>),
}

impl DilationProfile {
    pub fn is_infinite(&self) -> bool {
        matches!(self, DilationProfile::Infinite { .. })
    }

    /// A shell ball whose multiplicity differs from `n`.
    pub fn find_not_equal(&self, n: u64) -> Option<(Ball, Option<u64>)> {
        match self {
            DilationProfile::Infinite { ball } => Some((ball.clone(), None)),
            DilationProfile::Finite(pieces) => {
                pieces.iter().find(|(_, c)| *c != n).map(|(b, c)| (b.clone(), Some(*c)))
            }
        }
    }

    /// A shell ball with multiplicity 0, if any.
    pub fn find_uncovered(&self) -> Option<Ball> {
        match self {
            DilationProfile::Infinite { .. } => None,
            DilationProfile::Finite(pieces) => {
                pieces.iter().find(|(_, c)| *c == 0).map(|(b, _)| b.clone())
            }
        }
    }

    /// `Σ_{j∈Z} 1_S(p^j x)` for `x ≠ 0`; `None` when infinite.
    pub fn at(&self, x: &PAdicRational) -> Option<u64> {
        let v = x.valuation().expect("nonzero point");
        let u = x.scale(-v);
        match self {
            DilationProfile::Infinite { .. } => None,
            DilationProfile::Finite(pieces) => Some(
                pieces
                    .iter()
                    .find(|(b, _)| b.contains_point(&u))
                    .map(|(_, c)| *c)
                    .expect("profile covers the unit shell"),
            ),
        }
    }
}
