//! Multiwavelet sets and generalized scaling sets.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::cyclotomic::CyclotomicNumber;
use crate::error::{Error, Result};
use crate::function::{eventual_dilation_value, Dilation, Direction, LCFunction, Subject};
use crate::padic::{enumerate_translations, PAdicRational, Prime, TranslationKind};
use crate::report::{Check, VerificationReport, Verdict, Witness};
use crate::scaling::{check_orthonormal_translates, verify_scaling_set};
use crate::set::{Ball, ClopenSet, Limits};

const DISJOINT: &str = "W_n ∩ W_m = ∅ for n ≠ m";
const PIECE_MEASURE: &str = "μ(W_n) = 1";
const TOTAL_MEASURE: &str = "μ(W) = L";
const TILING: &str = "Σ_j 1_W(p^j ξ) = 1 a.e.";
const DILATES: &str = "μ(p^j W ∩ p^l W) = p^{-j} δ_{j,l} L";

fn union_all(p: Prime, sets: &[ClopenSet]) -> Result<ClopenSet> {
    sets.iter().try_fold(ClopenSet::empty(p), |acc, s| acc.union(s))
}

fn int_rational(n: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Necessary conditions for `W = ⋃ W_n` to be a multiwavelet set of order
/// `L = #pieces`.
pub fn verify_multiwavelet_set(pieces: &[ClopenSet], limits: &Limits) -> Result<VerificationReport> {
    let first = pieces
        .first()
        .ok_or_else(|| Error::InvalidInput("a multiwavelet set needs at least one piece".into()))?;
    let p = first.prime();
    if let Some(bad) = pieces.iter().find(|s| s.prime() != p) {
        return Err(Error::MixedPrimes(p.get(), bad.prime().get()));
    }
    let order = pieces.len() as u64;
    let mut checks = Vec::new();

    let mut overlap = None;
    'outer: for (i, a) in pieces.iter().enumerate() {
        for (j, b) in pieces.iter().enumerate().skip(i + 1) {
            let meet = a.intersect(b)?;
            if let Some(ball) = meet.balls().first() {
                overlap = Some((i, j, ball.clone()));
                break 'outer;
            }
        }
    }
    checks.push(match overlap {
        None => Check::pass("disjoint", DISJOINT, Witness::None),
        Some((i, j, ball)) => {
            Check::fail("disjoint", DISJOINT, Witness::ball(&ball), format!("pieces {i} and {j} overlap"))
        }
    });

    let bad_piece = pieces.iter().enumerate().find(|(_, s)| !s.measure().is_one());
    checks.push(match bad_piece {
        None => Check::pass("piece-measure", PIECE_MEASURE, Witness::integer(order)),
        Some((i, s)) => Check::fail(
            "piece-measure",
            PIECE_MEASURE,
            Witness::rational(&s.measure()),
            format!("piece {i}"),
        ),
    });
    let w = union_all(p, pieces)?;
    let total = w.measure();
    checks.push(Check::from_bool(
        total == int_rational(order),
        "total-measure",
        TOTAL_MEASURE,
        Witness::rational(&total),
        format!("L = {order}"),
    ));

    for (i, piece) in pieces.iter().enumerate() {
        let name = format!("orthonormal-translates.{i}");
        let check = if piece.is_empty() {
            Check::fail(&name, "⟨1̌_{W_n}(·−a), 1̌_{W_n}⟩ = δ_{a,0}", Witness::text("W_n = ∅"), "empty piece")
        } else if !piece.measure().is_one() {
            Check::skipped(&name, "⟨1̌_{W_n}(·−a), 1̌_{W_n}⟩ = δ_{a,0}", "requires μ(W_n) = 1")
        } else {
            match check_orthonormal_translates(piece, limits) {
                Ok(r) => Check { name, ..r.check("character-sums").expect("present").clone() },
                Err(e) => Check::inconclusive(&name, "⟨1̌_{W_n}(·−a), 1̌_{W_n}⟩ = δ_{a,0}", Witness::None, e.to_string()),
            }
        };
        checks.push(check);
    }

    let profile = w.dilation_multiplicity();
    checks.push(if let crate::set::DilationProfile::Infinite { ball } = &profile {
        Check::fail("dilation-tiling", TILING, Witness::ball(ball), "0 is interior: infinite multiplicity")
    } else {
        match profile.find_not_equal(1) {
            None => Check::pass("dilation-tiling", TILING, Witness::integer(1)),
            Some((ball, n)) => Check::fail(
                "dilation-tiling",
                TILING,
                Witness::ball(&ball),
                format!("multiplicity {}", n.map_or("∞".to_string(), |n| n.to_string())),
            ),
        }
    });

    checks.push(dilate_measure_check(&w, order)?);
    Ok(VerificationReport::from_checks(checks, Verdict::CertifiedNecessary))
}

fn dilate_measure_check(w: &ClopenSet, order: u64) -> Result<Check> {
    let p = w.prime();
    if w.is_empty() {
        return Ok(Check::fail("dilate-measures", DILATES, Witness::text("W = ∅"), "μ(W) = 0 ≠ L"));
    }
    if w.balls().iter().any(|b| b.contains_zero()) {
        let m = w.intersect(&w.dilate(1))?.measure();
        return Ok(Check::fail(
            "dilate-measures",
            DILATES,
            Witness::rational(&m),
            "μ(W ∩ pW) with 0 interior",
        ));
    }
    let norms: Vec<i64> = w.balls().iter().map(|b| b.norm_exp().expect("0 not in W")).collect();
    let span = norms.iter().max().unwrap() - norms.iter().min().unwrap() + 1;
    let l = int_rational(order);
    for j in -span..=span {
        let wj = w.dilate(j);
        for k in -span..=span {
            let got = wj.intersect(&w.dilate(k))?.measure();
            let expect = if j == k { p.rat_pow(-j) * &l } else { BigRational::zero() };
            if got != expect {
                return Ok(Check::fail(
                    "dilate-measures",
                    DILATES,
                    Witness::rational(&got),
                    format!("j = {j}, l = {k}, expected {}", crate::padic::format_rational(&expect)),
                ));
            }
        }
    }
    Ok(Check::pass("dilate-measures", DILATES, Witness::integer(span))
        .with_detail(format!("j, l ∈ [−{span}, {span}]")))
}

/// `μ(S ∩ W) = 0`.
pub fn verify_disjointness(s: &ClopenSet, w: &ClopenSet) -> Result<VerificationReport> {
    const ANCHOR: &str = "μ(S ∩ W) = 0";
    let meet = s.intersect(w)?;
    let check = match meet.balls().first() {
        None => Check::pass("disjoint", ANCHOR, Witness::None),
        Some(b) => Check::fail("disjoint", ANCHOR, Witness::ball(b), format!("μ(S ∩ W) = {}", crate::padic::format_rational(&meet.measure()))),
    };
    Ok(VerificationReport::from_checks(vec![check], Verdict::Pass))
}

/// True when `q` is the measure of some clopen set: `q >= 0` with a power
/// of `p` as denominator.
fn is_clopen_measure(q: &BigRational, p: Prime) -> bool {
    if q.is_negative() {
        return false;
    }
    let mut d = q.denom().clone();
    let pb = p.big();
    while d.is_multiple_of(&pb) {
        d /= &pb;
    }
    d.is_one()
}

fn gss_measure(p: Prime, order: u64) -> BigRational {
    BigRational::new(BigInt::from(order), BigInt::from(p.get() - 1))
}

/// `p⁻¹G ∖ G`.
pub fn wavelet_set_of(g: &ClopenSet) -> ClopenSet {
    g.dilate(-1).difference(g).expect("same prime")
}

/// Splits `W` into `order` pieces of measure 1: unit-or-smaller balls taken
/// largest first, each placed in the first piece with room.
pub fn auto_partition(w: &ClopenSet, order: u64, limits: &Limits) -> Result<Option<Vec<ClopenSet>>> {
    let p = w.prime();
    if w.measure() != int_rational(order) {
        return Ok(None);
    }
    let mut chunks = Vec::new();
    for b in w.balls() {
        if b.radius_exp() > 0 {
            chunks.extend(b.split_to(0, limits.max_items(p))?);
        } else {
            chunks.push(b.clone());
        }
    }
    chunks.sort_by(|a, b| b.radius_exp().cmp(&a.radius_exp()).then_with(|| a.cmp(b)));
    let mut bins: Vec<(BigRational, Vec<Ball>)> = (0..order).map(|_| (BigRational::zero(), Vec::new())).collect();
    for c in chunks {
        let size = c.measure();
        let Some(bin) = bins.iter_mut().find(|(used, _)| (used.clone() + &size) <= BigRational::one()) else {
            return Ok(None);
        };
        bin.0 += size;
        bin.1.push(c);
    }
    bins.into_iter()
        .map(|(_, balls)| ClopenSet::from_balls(p, balls))
        .collect::<Result<Vec<_>>>()
        .map(Some)
}

/// Checks `G` against the definition of a generalized scaling set of order `L`.
pub fn verify_gss(
    g: &ClopenSet,
    order: u64,
    partition: Option<&[ClopenSet]>,
    limits: &Limits,
) -> Result<VerificationReport> {
    const MEASURE: &str = "μ(G) = L/(p−1)";
    let p = g.prime();
    if order == 0 {
        return Err(Error::InvalidInput("order L must be at least 1".into()));
    }
    let target = gss_measure(p, order);
    if !is_clopen_measure(&target, p) {
        return Ok(VerificationReport::from_checks(
            vec![Check::fail(
                "measure",
                MEASURE,
                Witness::rational(&target),
                "L/(p−1) is not the measure of any clopen set",
            )],
            Verdict::CertifiedNecessary,
        ));
    }
    let mut checks = vec![Check::from_bool(
        g.measure() == target,
        "measure",
        MEASURE,
        Witness::rational(&g.measure()),
        format!("L/(p−1) = {}", crate::padic::format_rational(&target)),
    )];

    let w = wavelet_set_of(g);
    let pieces = match partition {
        Some(parts) => {
            let covered = union_all(p, parts)?;
            let diff = covered.symmetric_difference(&w)?;
            checks.push(match diff.balls().first() {
                None => Check::pass("partition", "⋃ W_n = p⁻¹G ∖ G", Witness::integer(parts.len())),
                Some(b) => Check::fail("partition", "⋃ W_n = p⁻¹G ∖ G", Witness::ball(b), "supplied pieces do not cover p⁻¹G ∖ G exactly"),
            });
            Some(parts.to_vec())
        }
        None => {
            let auto = auto_partition(&w, order, limits)?;
            checks.push(match &auto {
                Some(parts) => Check::pass("partition", "p⁻¹G ∖ G split into L unit-measure pieces", Witness::integer(parts.len())),
                None => Check::fail(
                    "partition",
                    "p⁻¹G ∖ G split into L unit-measure pieces",
                    Witness::rational(&w.measure()),
                    format!("μ(p⁻¹G ∖ G) ≠ L = {order}"),
                ),
            });
            auto
        }
    };
    if let Some(pieces) = pieces.filter(|v| !v.is_empty()) {
        let mw = verify_multiwavelet_set(&pieces, limits)?;
        checks.extend(mw.checks.into_iter().map(|c| c.prefixed("multiwavelet")));
    } else {
        checks.push(Check::skipped("multiwavelet", "p⁻¹G ∖ G is a multiwavelet set of order L", "no partition"));
    }
    let nec = gss_necessary_conditions(g, order);
    checks.extend(nec.checks.into_iter().map(|c| c.prefixed("necessary")));
    Ok(VerificationReport::from_checks(checks, Verdict::CertifiedNecessary))
}

/// The necessary conditions (i) `μ(G) = L/(p−1)`, (ii) `G ⊆ p⁻¹G`,
/// (iii) `lim_n 1_G(p^n ξ) = 1`.
pub fn gss_necessary_conditions(g: &ClopenSet, order: u64) -> VerificationReport {
    let p = g.prime();
    let target = gss_measure(p, order);
    let mut checks = vec![Check::from_bool(
        g.measure() == target,
        "measure",
        "μ(G) = L/(p−1)",
        Witness::rational(&g.measure()),
        format!("L/(p−1) = {}", crate::padic::format_rational(&target)),
    )];
    let outside = g.difference(&g.dilate(-1)).expect("same prime");
    checks.push(match outside.balls().first() {
        None => Check::pass("inclusion", "G ⊆ p⁻¹G", Witness::None),
        Some(b) => Check::fail("inclusion", "G ⊆ p⁻¹G", Witness::point(b.center()), "point of G outside p⁻¹G"),
    });
    let limit = eventual_dilation_value(Subject::Set(g), Dilation::Contract);
    const LIMIT: &str = "lim_n 1_G(p^n ξ) = 1";
    checks.push(match limit.witness_exponent {
        Some(gamma) => {
            let ball = Ball::around_zero(gamma, p);
            if limit.value.is_one() {
                Check::pass("eventual-value", LIMIT, Witness::ball(&ball)).with_detail("B_γ(0) ⊆ G")
            } else {
                Check::fail("eventual-value", LIMIT, Witness::ball(&ball), "B_γ(0) ∩ G = ∅, so the limit is 0")
            }
        }
        None => Check::fail("eventual-value", LIMIT, Witness::text("G = ∅"), "the limit is 0"),
    });
    VerificationReport::from_checks(checks, Verdict::CertifiedNecessary)
}

/// `G_J = ⋃_{j=1}^J p^j W` and the exact measure bound `L p^{-J}/(p−1)` on
/// what the remaining dilates add.
pub fn construct_gss(pieces: &[ClopenSet], depth: u32) -> Result<(ClopenSet, BigRational)> {
    let first = pieces
        .first()
        .ok_or_else(|| Error::InvalidInput("no pieces".into()))?;
    if depth == 0 {
        return Err(Error::InvalidInput("depth J must be at least 1".into()));
    }
    let p = first.prime();
    let order = pieces.len() as u64;
    let w = union_all(p, pieces)?;
    let sum: BigRational = pieces.iter().map(|s| s.measure()).sum();
    if w.measure() != sum {
        return Err(Error::Precondition {
            reason: "pieces are not pairwise disjoint".into(),
            witness: crate::padic::format_rational(&(sum - w.measure())),
        });
    }
    if sum != int_rational(order) {
        return Err(Error::Precondition {
            reason: format!("total measure differs from L = {order}"),
            witness: crate::padic::format_rational(&sum),
        });
    }
    let mut g = ClopenSet::empty(p);
    for j in 1..=depth as i64 {
        g = g.union(&w.dilate(j))?;
    }
    let tail = p.rat_pow(-(depth as i64)) * gss_measure(p, order);
    Ok((g, tail))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyKind {
    Kozyrev,
    KhrennikovShelkovich,
}

/// A generated multiwavelet set with its generalized scaling set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Family {
    pub pieces: Vec<ClopenSet>,
    pub g: ClopenSet,
    pub order: u64,
}

/// Kozyrev: pieces `{−n/p}_p + Z_p`, `G = Z_p`, `L = p−1`.
/// Khrennikov–Shelkovich: pieces `{−s}_p + Z_p` for `s ∈ J_{p,m}`,
/// `G = p^{−m+1} Z_p`, `L = (p−1) p^{m−1}`.
pub fn generate_family(kind: FamilyKind, p: Prime, m: Option<u32>) -> Result<Family> {
    let (shifts, g_radius) = match kind {
        FamilyKind::Kozyrev => {
            (enumerate_translations(TranslationKind::LeadingDigit, 1, p)?, 0)
        }
        FamilyKind::KhrennikovShelkovich => {
            let m = m
                .filter(|&m| m >= 1)
                .ok_or_else(|| Error::InvalidInput("khrennikov-shelkovich requires m >= 1".into()))?;
            (enumerate_translations(TranslationKind::LeadingDigit, m, p)?, m as i64 - 1)
        }
    };
    let pieces: Vec<ClopenSet> = shifts
        .iter()
        .map(|s| ClopenSet::ball(Ball::new(-s, 0)))
        .collect();
    let order = pieces.len() as u64;
    Ok(Family { pieces, g: ClopenSet::ball(Ball::around_zero(g_radius, p)), order })
}

/// `p^{j/2} ψ(p^{-j} x − a)` is represented by `(j, a)`; returns the
/// unnormalized dilate-translate and the exact squared normalization `p^j`.
pub fn wavelet_atom(psi: &LCFunction, j: i64, a: &PAdicRational) -> (LCFunction, BigRational) {
    (psi.dilate_translate(-j, &-a), psi.prime().rat_pow(j))
}

/// Unnormalized `⟨ψ(p^{-j}·−a), ψ(p^{-k}·−b)⟩` together with the square
/// `p^{j+k}` of the normalization, so that the normalized inner product is
/// `raw · sqrt(weight)` and vanishes exactly when `raw` does.
pub fn system_inner_product(
    psi: &LCFunction,
    (j, a): (i64, &PAdicRational),
    (k, b): (i64, &PAdicRational),
) -> Result<(CyclotomicNumber, BigRational)> {
    let (f, nf) = wavelet_atom(psi, j, a);
    let (g, ng) = wavelet_atom(psi, k, b);
    Ok((f.inner_product(&g)?, nf * ng))
}

/// Fraction of `‖f‖²` captured by the truncated wavelet system
/// `{p^{j/2} ψ_n(p^{-j}· − a) : |j| <= J₀, |a|_p <= p^{K₀}}`.
///
/// A numerical probe of completeness only; it certifies nothing.
pub fn completeness_energy_ratio(
    f: &LCFunction,
    wavelets: &[LCFunction],
    j_max: i64,
    bound: u32,
) -> Result<f64> {
    let p = f.prime();
    let norm = f.norm_squared().to_complex().re;
    if norm == 0.0 {
        return Err(Error::InvalidInput("zero test function".into()));
    }
    let shifts = enumerate_translations(TranslationKind::Bounded, bound, p)?;
    let mut energy = 0.0;
    for psi in wavelets {
        for j in -j_max..=j_max {
            for a in &shifts {
                let (atom, weight) = wavelet_atom(psi, j, a);
                let c = f.inner_product(&atom)?;
                energy += c.abs_squared().scale(&weight).to_complex().re;
            }
        }
    }
    Ok(energy / norm)
}

/// `ψ_n = 1̌_{W_n}` for each piece.
pub fn wavelets_of(pieces: &[ClopenSet]) -> Vec<LCFunction> {
    pieces
        .iter()
        .map(|w| LCFunction::indicator(w).fourier(Direction::Inverse))
        .collect()
}

/// Outcome of running the scaling-set and GSS verifiers on one set.
#[derive(Clone, Debug, PartialEq)]
pub struct Experiment {
    pub scaling: VerificationReport,
    pub gss: Vec<(u64, VerificationReport)>,
}

impl Experiment {
    /// 0 when the set is certified and some order passes, 1 when certified
    /// and no order passes, 2 when the set is not a certified scaling set.
    pub fn outcome(&self) -> Verdict {
        if !self.scaling.verdict.is_success() {
            Verdict::Inconclusive
        } else if self.gss.iter().any(|(_, r)| r.verdict.is_success()) {
            Verdict::CertifiedNecessary
        } else {
            Verdict::Fail
        }
    }
}

/// Tries whether a scaling set is also a generalized scaling set, for
/// `L = 1, …, (p−1)⌈μ(S)⌉`. Reports what happens without asserting an answer.
pub fn experiment_scaling_implies_gss(s: &ClopenSet, limits: &Limits) -> Result<Experiment> {
    let p = s.prime();
    let scaling = verify_scaling_set(s, limits);
    let m = s.measure();
    let ceil = (m.numer() + m.denom() - BigInt::one()) / m.denom();
    let max_l: u64 = (ceil * BigInt::from(p.get() - 1))
        .try_into()
        .map_err(|_| Error::InvalidInput("measure too large".into()))?;
    let gss = (1..=max_l.max(1))
        .map(|l| Ok((l, verify_gss(s, l, None, limits)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(Experiment { scaling, gss })
}
