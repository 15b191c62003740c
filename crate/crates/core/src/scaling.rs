//! Scaling sets: orthonormality of translates, the necessary conditions,
//! filters, refinement coefficients and integer counts.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::cyclotomic::{Accumulator, CyclotomicNumber};
use crate::error::{Error, Result};
use crate::function::{character, Direction, LCFunction};
use crate::padic::{enumerate_translations, PAdicRational, Prime, TranslationKind};
use crate::report::{Check, VerificationReport, Verdict, Witness};
use crate::set::{Ball, ClopenSet, Limits};

/// `Σ_i p^{γ_i} χ(a c_i) [|a| <= p^{-γ_i}]`, i.e. `∫_S χ(aξ) dξ`.
pub fn set_character_integral(s: &ClopenSet, a: &PAdicRational) -> CyclotomicNumber {
    let p = s.prime();
    let na = a.norm_exp();
    let mut acc = Accumulator::new(p);
    for b in s.balls() {
        if na.is_some_and(|e| e > -b.radius_exp()) {
            continue;
        }
        let (k, c) = (a * b.center()).character_exponent();
        acc.add_root(&p.rat_pow(b.radius_exp()), k, &c);
    }
    acc.finish()
}

/// Translations `a ∈ I_p` with `|a|_p <= p^n`, after a resolution check.
fn translations(n: i64, p: Prime, limits: &Limits) -> Result<Vec<PAdicRational>> {
    let n = n.max(0);
    limits.check_depth(n, "translation enumeration")?;
    enumerate_translations(TranslationKind::Bounded, n as u32, p)
}

const MEASURE_ONE: &str = "μ(S) = 1";
const ORTHONORMAL: &str = "⟨1̌_S(·−a), 1̌_S⟩ = δ_{a,0} for all a ∈ I_p";
const INCLUSION: &str = "S ⊆ p⁻¹S";
const DENSITY: &str = "⋃_j p^j S = Q_p";
const COUNT: &str = "#{n ∈ [0, p^{M+N}) : p^{-M} n ∈ S} = p^N";

fn measure_check(s: &ClopenSet) -> Check {
    let m = s.measure();
    Check::from_bool(m.is_one(), "measure", MEASURE_ONE, Witness::rational(&m), "")
}

/// Exact orthonormality of the translates `1̌_S(· − a)`, `a ∈ I_p`.
///
/// `⟨1̌_S(·−a), 1̌_S⟩ = ∫_S χ(aξ) dξ`, which vanishes once `|a|_p` exceeds
/// `p^N` for the finest radius `p^{-N}` of `S`, so only `p^N` values of `a`
/// need checking.
pub fn check_orthonormal_translates(s: &ClopenSet, limits: &Limits) -> Result<VerificationReport> {
    if s.is_empty() {
        return Err(Error::InvalidInput("orthonormality of translates needs a nonempty set".into()));
    }
    let measure = measure_check(s);
    if measure.status != crate::report::Status::Pass {
        let skipped = Check::skipped("character-sums", ORTHONORMAL, "requires μ(S) = 1");
        return Ok(VerificationReport::from_checks(vec![measure, skipped], Verdict::Pass));
    }
    let n = -s.finest_radius().expect("nonempty");
    let mut checks = vec![measure];
    let mut bad = None;
    let mut count = 0usize;
    for a in translations(n, s.prime(), limits)? {
        count += 1;
        if a.is_zero() {
            continue;
        }
        let sum = set_character_integral(s, &a);
        if !sum.is_zero() {
            bad = Some((a, sum));
            break;
        }
    }
    checks.push(match bad {
        None => Check::pass("character-sums", ORTHONORMAL, Witness::integer(count))
            .with_detail(format!("all a ∈ I_p with |a|_p <= p^{}", n.max(0))),
        Some((a, sum)) => Check::fail(
            "character-sums",
            ORTHONORMAL,
            Witness::value(&sum),
            format!("nonzero inner product at a = {a}"),
        ),
    });
    Ok(VerificationReport::from_checks(checks, Verdict::Pass))
}

/// The five necessary conditions for `S` to be a scaling set.
pub fn verify_scaling_set(s: &ClopenSet, limits: &Limits) -> VerificationReport {
    let mut checks = vec![measure_check(s)];
    let measure_ok = s.measure().is_one();

    let ortho = if !measure_ok {
        Check::skipped("orthonormal-translates", ORTHONORMAL, "requires μ(S) = 1")
    } else {
        match check_orthonormal_translates(s, limits) {
            Ok(r) => {
                let sums = r.check("character-sums").expect("present").clone();
                Check { name: "orthonormal-translates".into(), ..sums }
            }
            Err(e) => Check::inconclusive("orthonormal-translates", ORTHONORMAL, Witness::None, e.to_string()),
        }
    };
    let ortho_ok = ortho.status == crate::report::Status::Pass;
    checks.push(ortho);

    let outside = s.difference(&s.dilate(-1)).expect("same prime");
    checks.push(match outside.balls().first() {
        None => Check::pass("refinement-inclusion", INCLUSION, Witness::None),
        Some(b) => Check::fail(
            "refinement-inclusion",
            INCLUSION,
            Witness::point(b.center()),
            "point of S outside p⁻¹S",
        ),
    });

    let profile = s.dilation_multiplicity();
    checks.push(match (profile.is_infinite(), profile.find_uncovered()) {
        (true, _) => Check::pass("dilation-density", DENSITY, Witness::text("0 is interior"))
            .with_detail("infinite multiplicity around 0"),
        (false, None) => Check::pass("dilation-density", DENSITY, Witness::None)
            .with_detail("every point of the unit shell has a dilate in S"),
        (false, Some(b)) => Check::fail(
            "dilation-density",
            DENSITY,
            Witness::ball(&b),
            "no dilate of S meets this ball of the unit shell",
        ),
    });

    checks.push(if !(measure_ok && ortho_ok) {
        Check::skipped("integer-count", COUNT, "stated for scaling functions; requires the two checks above")
    } else {
        integer_count_check(s, limits)
    });

    VerificationReport::from_checks(checks, Verdict::CertifiedNecessary)
}

/// `(M, N)` with `1̌_S ∈ 𝒟_N^M`: `S ⊆ B_M(0)` and `supp 1̌_S ⊆ B_N(0)`.
pub fn test_class(s: &ClopenSet) -> Option<(i64, i64)> {
    let m = s.bounding_radius()?;
    let n = LCFunction::indicator(s).fourier(Direction::Inverse).exact_support_radius()?;
    Some((m.max(0), n.max(0)))
}

fn integer_count_check(s: &ClopenSet, limits: &Limits) -> Check {
    let Some((m, n)) = test_class(s) else {
        return Check::skipped("integer-count", COUNT, "empty set");
    };
    match count_integers(s, m, n, limits) {
        Ok(c) => {
            let expect = s.prime().pow(n as u32);
            Check::from_bool(
                BigInt::from(c) == expect,
                "integer-count",
                COUNT,
                Witness::integer(c),
                format!("M = {m}, N = {n}, p^N = {expect}"),
            )
        }
        Err(e) => Check::inconclusive("integer-count", COUNT, Witness::None, e.to_string()),
    }
}

/// `#{n ∈ [0, p^{M+N}) : p^{-M} n ∈ S}` by enumeration.
pub fn count_integers(s: &ClopenSet, m: i64, n: i64, limits: &Limits) -> Result<u64> {
    if m < 0 || n < 0 {
        return Err(Error::InvalidInput(format!("M = {m}, N = {n} must be nonnegative")));
    }
    limits.check_depth(m + n, "integer count")?;
    let p = s.prime();
    let total = p
        .checked_pow((m + n) as u32)
        .ok_or_else(|| Error::ResolutionLimit(format!("p^{} integers", m + n)))?;
    let scale = p.rat_pow(-m);
    Ok((0..total)
        .filter(|&k| s.contains_point(&PAdicRational::new(BigRational::from_integer(k.into()) * &scale, p)))
        .count() as u64)
}

/// [`count_integers`] with the comparisons against `p^N` and an optional
/// filter degree bound `⌈deg m₀ / (p−1)⌉`.
pub fn count_integers_report(
    s: &ClopenSet,
    m: i64,
    n: i64,
    degree: Option<u64>,
    limits: &Limits,
) -> Result<(u64, VerificationReport)> {
    let c = count_integers(s, m, n, limits)?;
    let pn = s.prime().pow(n as u32);
    let mut checks = vec![
        Check::pass("count", "#{n ∈ [0, p^{M+N}) : p^{-M} n ∈ S}", Witness::integer(c)),
        Check::from_bool(
            BigInt::from(c) == pn,
            "equals-p^N",
            COUNT,
            Witness::integer(c),
            format!("p^N = {pn}"),
        ),
    ];
    if let Some(d) = degree {
        let pm1 = s.prime().get() - 1;
        let bound = d.div_ceil(pm1);
        checks.push(Check::from_bool(
            c <= bound,
            "degree-bound",
            "at most ⌈deg m₀/(p−1)⌉ integers",
            Witness::integer(c),
            format!("bound = {bound}"),
        ));
    }
    Ok((c, VerificationReport::from_checks(checks, Verdict::Pass)))
}

/// `S ⊆ Z_p` for a set containing 0 whose `1̌_S` is a test function.
pub fn check_subset_zp(s: &ClopenSet) -> VerificationReport {
    const ANCHOR: &str = "0 ∈ S and 1̌_S a test function ⇒ S ⊆ Z_p";
    let p = s.prime();
    let zero = PAdicRational::zero(p);
    if !s.contains_point(&zero) {
        return VerificationReport::from_checks(
            vec![Check::inconclusive("hypothesis", ANCHOR, Witness::None, "0 ∉ S")],
            Verdict::Pass,
        );
    }
    let mut checks = Vec::new();
    match test_class(s) {
        Some((m, n)) => checks.push(Check::pass(
            "test-function",
            "1̌_S ∈ 𝒟_N^M",
            Witness::text(format!("M = {m}, N = {n}")),
        )),
        None => checks.push(Check::inconclusive("test-function", "1̌_S ∈ 𝒟_N^M", Witness::None, "empty set")),
    }
    let outside = s.difference(&ClopenSet::integers(p)).expect("same prime");
    checks.push(match outside.balls().first() {
        None => Check::pass("subset-Zp", "S ⊆ Z_p", Witness::None),
        Some(b) => Check::fail("subset-Zp", "S ⊆ Z_p", Witness::point(b.center()), "point of norm > 1"),
    });
    VerificationReport::from_checks(checks, Verdict::Pass)
}

/// Filter status after the bounded search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FilterStatus {
    Realized,
    /// No character sum with `|a|_p <= p^K` meets the constraints.
    Inconclusive,
}

/// Constraints on the scaling filter `m₀` and, when found, a realization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FilterSpec {
    /// `pS`, where `m₀ = 1`.
    pub one_set: ClopenSet,
    /// `S ∖ pS = p(p⁻¹S ∖ S)`, where `m₀ = 0`.
    pub zero_set: ClopenSet,
    /// `Σ (α_a/p) χ(aξ)` restricted to a ball containing `S`.
    pub realization: Option<LCFunction>,
    /// `α_a` of the realization, over all `|a|_p <= p^K`.
    pub coefficients: BTreeMap<PAdicRational, CyclotomicNumber>,
    pub bound: u32,
    pub status: FilterStatus,
}

/// Derives the filter constraints of `S` and solves for `α_a`, `|a|_p <= p^K`.
pub fn extract_filter(s: &ClopenSet, bound: u32, limits: &Limits) -> Result<FilterSpec> {
    let p = s.prime();
    let outside = s.difference(&s.dilate(-1))?;
    if let Some(b) = outside.balls().first() {
        return Err(Error::Precondition {
            reason: "S ⊄ p⁻¹S".into(),
            witness: b.center().to_string(),
        });
    }
    let one_set = s.dilate(1);
    let zero_set = s.dilate(-1).difference(s)?.dilate(1);
    let unknowns = translations(bound as i64, p, limits)?;

    let Some(outer) = s.bounding_radius() else {
        return Ok(FilterSpec {
            one_set,
            zero_set,
            realization: Some(LCFunction::zero(p)),
            coefficients: unknowns.into_iter().map(|a| (a, CyclotomicNumber::zero(p))).collect(),
            bound,
            status: FilterStatus::Realized,
        });
    };
    let finest = [&one_set, &zero_set].iter().filter_map(|x| x.finest_radius()).min().expect("nonempty");
    let rho = finest.min(-(bound as i64));
    limits.check_depth(outer - rho, "filter constraints")?;

    let mut rows = Vec::new();
    for (set, target) in [(&one_set, 1), (&zero_set, 0)] {
        for cell in set.refine_to(rho, limits)? {
            let row: Vec<CyclotomicNumber> =
                unknowns.iter().map(|a| character(&(a * cell.center()))).collect();
            rows.push((row, CyclotomicNumber::from_integer(p, target)));
        }
    }

    let Some(x) = solve(rows, unknowns.len()) else {
        return Ok(FilterSpec {
            one_set,
            zero_set,
            realization: None,
            coefficients: BTreeMap::new(),
            bound,
            status: FilterStatus::Inconclusive,
        });
    };
    let support = Ball::around_zero(outer, p);
    let mut realization = LCFunction::zero(p);
    for (a, xa) in unknowns.iter().zip(&x) {
        realization = realization.add(&LCFunction::term(xa.clone(), a.clone(), support.clone()))?;
    }
    let pq = BigRational::from_integer(p.big());
    let coefficients = unknowns.into_iter().zip(x).map(|(a, xa)| (a, xa.scale(&pq))).collect();
    Ok(FilterSpec {
        one_set,
        zero_set,
        realization: Some(realization),
        coefficients,
        bound,
        status: FilterStatus::Realized,
    })
}

/// Gauss-Jordan elimination over the cyclotomic field; free variables are 0.
fn solve(rows: Vec<(Vec<CyclotomicNumber>, CyclotomicNumber)>, cols: usize) -> Option<Vec<CyclotomicNumber>> {
    let mut m: Vec<(Vec<CyclotomicNumber>, CyclotomicNumber)> = rows;
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(pr) = (r..m.len()).find(|&i| !m[i].0[c].is_zero()) else { continue };
        m.swap(r, pr);
        let inv = m[r].0[c].inverse().expect("nonzero pivot");
        let (row, rhs) = &mut m[r];
        for v in row.iter_mut() {
            *v = &*v * &inv;
        }
        *rhs = &*rhs * &inv;
        let pivot_row = m[r].clone();
        for (i, (row, rhs)) in m.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row.0) {
                if !pv.is_zero() {
                    *v = &*v - &(&f * pv);
                }
            }
            *rhs = &*rhs - &(&f * &pivot_row.1);
        }
        pivots.push(c);
        r += 1;
    }
    if m[r..].iter().any(|(_, rhs)| !rhs.is_zero()) {
        return None;
    }
    let p = m.first().map(|(_, rhs)| rhs.prime())?;
    let mut x = vec![CyclotomicNumber::zero(p); cols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = m[i].1.clone();
    }
    Some(x)
}

/// `α_a = p⟨φ, φ(p⁻¹· − a)⟩` for every `a ∈ I_p`, `|a|_p <= p^K`.
pub fn refinement_coefficients(
    phi: &LCFunction,
    bound: u32,
    limits: &Limits,
) -> Result<BTreeMap<PAdicRational, CyclotomicNumber>> {
    refinement_coefficients_at(phi, &PAdicRational::zero(phi.prime()), bound, limits)
}

/// `α_{a,b} = p⟨φ(· − b), φ(p⁻¹· − a)⟩`.
pub fn refinement_coefficients_at(
    phi: &LCFunction,
    b: &PAdicRational,
    bound: u32,
    limits: &Limits,
) -> Result<BTreeMap<PAdicRational, CyclotomicNumber>> {
    let p = phi.prime();
    let shifted = phi.translate(&-b);
    let pq = BigRational::from_integer(p.big());
    translations(bound as i64, p, limits)?
        .into_iter()
        .map(|a| {
            let fine = phi.dilate_translate(-1, &-&a);
            Ok((a, shifted.inner_product(&fine)?.scale(&pq)))
        })
        .collect()
}

/// `Σ_a α_{a,b} χ((a−b)ξ) = 1` on `S`, with `α_{a,b} = ⟨φ(·−b), φ(·−a)⟩`
/// the coefficients of `φ(·−b)` in the closed span of the `φ(·−a)`.
pub fn verify_translate_identity(
    s: &ClopenSet,
    b: &PAdicRational,
    bound: u32,
    limits: &Limits,
) -> Result<VerificationReport> {
    const ANCHOR: &str = "Σ_{a ∈ I_p} α_{a,b} χ((a−b)ξ) = 1 for ξ ∈ S";
    let p = s.prime();
    if s.is_empty() {
        return Ok(VerificationReport::from_checks(
            vec![Check::pass("translate-identity", ANCHOR, Witness::text("S = ∅")).with_detail("vacuous")],
            Verdict::Pass,
        ));
    }
    // α_{a,b} = ∫_S χ((b−a)ξ) dξ vanishes unless |a − b| <= p^{-finest}
    let needed = (-s.finest_radius().expect("nonempty"))
        .max(b.norm_exp().unwrap_or(0))
        .max(0);
    let coef = |a: &PAdicRational| set_character_integral(s, &(b - a));

    let mut terms = Vec::new();
    for a in translations(bound as i64, p, limits)? {
        let c = coef(&a);
        if c.is_zero() {
            continue;
        }
        for ball in s.balls() {
            terms.push(crate::function::CharTerm::new(c.clone(), &a - b, ball.clone()));
        }
    }
    if (bound as i64) < needed {
        let missing = translations(needed, p, limits)?
            .into_iter()
            .filter(|a| a.norm_exp().unwrap_or(i64::MIN) > bound as i64)
            .find(|a| !coef(a).is_zero());
        if let Some(a) = missing {
            return Ok(VerificationReport::from_checks(
                vec![Check::inconclusive(
                    "translate-identity",
                    ANCHOR,
                    Witness::point(&a),
                    format!("α_{{a,b}} ≠ 0 beyond the bound K = {bound}; K = {needed} suffices"),
                )],
                Verdict::Pass,
            ));
        }
    }
    let lhs = LCFunction::from_terms(p, terms)?;
    let residual = lhs.sub(&LCFunction::indicator(s))?;
    if residual.is_zero() {
        return Ok(VerificationReport::from_checks(
            vec![Check::pass("translate-identity", ANCHOR, Witness::None)
                .with_detail(format!("b = {b}, K = {bound}"))],
            Verdict::Pass,
        ));
    }
    let witness = residual
        .atoms()
        .into_iter()
        .find(|(_, sums)| !sums.is_empty())
        .map(|(ball, _)| ball.center().clone())
        .expect("nonzero residual has a nonzero atom");
    let value = residual.eval(&witness);
    Ok(VerificationReport::from_checks(
        vec![
            Check::fail("translate-identity", ANCHOR, Witness::point(&witness), format!("residual {residual}")),
            Check::fail("residual-value", ANCHOR, Witness::value(&value), format!("residual at ξ = {witness}")),
        ],
        Verdict::Pass,
    ))
}
