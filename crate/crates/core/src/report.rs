//! Verification reports: per-check outcomes with exact witnesses.

use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};

use crate::cyclotomic::{CyclotomicJson, CyclotomicNumber};
use crate::padic::{format_rational, PAdicRational};
use crate::set::Ball;
use num_rational::BigRational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    CertifiedNecessary,
    Inconclusive,
}

impl Verdict {
    /// Pass or certified-necessary.
    pub fn is_success(self) -> bool {
        matches!(self, Verdict::Pass | Verdict::CertifiedNecessary)
    }

    pub fn label(self) -> &'static str {
        match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::CertifiedNecessary => "CERTIFIED-NECESSARY",
            Verdict::Inconclusive => "INCONCLUSIVE",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
    Inconclusive,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIPPED",
            Status::Inconclusive => "INCONCLUSIVE",
        }
    }
}

/// Exact evidence attached to a check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Witness {
    None,
    Point { value: String },
    Ball { center: String, radius_exp: i64 },
    Rational { value: String },
    Value { p: u64, exact: CyclotomicJson, display: String, re: f64, im: f64 },
    Integer { value: String },
    Text { value: String },
}

impl Witness {
    pub fn point(x: &PAdicRational) -> Self {
        Witness::Point { value: x.to_string() }
    }

    pub fn ball(b: &Ball) -> Self {
        Witness::Ball { center: b.center().to_string(), radius_exp: b.radius_exp() }
    }

    pub fn rational(q: &BigRational) -> Self {
        Witness::Rational { value: format_rational(q) }
    }

    pub fn value(c: &CyclotomicNumber) -> Self {
        let z = c.to_complex();
        Witness::Value {
            p: c.prime().get(),
            exact: c.to_json(),
            display: c.to_string(),
            re: z.re,
            im: z.im,
        }
    }

    pub fn integer(n: impl ToString) -> Self {
        Witness::Integer { value: n.to_string() }
    }

    pub fn text(s: impl Into<String>) -> Self {
        Witness::Text { value: s.into() }
    }

    pub fn is_none(&self) -> bool {
        matches!(self, Witness::None)
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::None => f.write_str("-"),
            Witness::Point { value } => write!(f, "x = {value}"),
            Witness::Ball { center, radius_exp } => write!(f, "B_{radius_exp}({center})"),
            Witness::Rational { value } => f.write_str(value),
            Witness::Value { display, re, im, .. } => write!(f, "{display} ≈ {re:+.12}{im:+.12}i"),
            Witness::Integer { value } => f.write_str(value),
            Witness::Text { value } => f.write_str(value),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub witness: Witness,
    /// The mathematical statement this check certifies.
    pub anchor: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

impl Check {
    fn new(name: &str, anchor: &str, status: Status, witness: Witness, detail: String) -> Self {
        Check { name: name.into(), status, witness, anchor: anchor.into(), detail }
    }

    pub fn pass(name: &str, anchor: &str, witness: Witness) -> Self {
        Self::new(name, anchor, Status::Pass, witness, String::new())
    }

    /// A failure always carries evidence.
    pub fn fail(name: &str, anchor: &str, witness: Witness, detail: impl Into<String>) -> Self {
        debug_assert!(!witness.is_none(), "failed check `{name}` without witness");
        Self::new(name, anchor, Status::Fail, witness, detail.into())
    }

    pub fn skipped(name: &str, anchor: &str, reason: impl Into<String>) -> Self {
        Self::new(name, anchor, Status::Skipped, Witness::None, reason.into())
    }

    pub fn inconclusive(name: &str, anchor: &str, witness: Witness, reason: impl Into<String>) -> Self {
        Self::new(name, anchor, Status::Inconclusive, witness, reason.into())
    }

    pub fn from_bool(
        ok: bool,
        name: &str,
        anchor: &str,
        witness: Witness,
        detail: impl Into<String>,
    ) -> Self {
        if ok {
            Self::new(name, anchor, Status::Pass, witness, detail.into())
        } else {
            Self::fail(name, anchor, witness, detail)
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = detail.into();
        self
    }

    pub fn prefixed(mut self, prefix: &str) -> Self {
        self.name = format!("{prefix}.{}", self.name);
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub verdict: Verdict,
    pub checks: Vec<Check>,
}

impl VerificationReport {
    /// Fail if any check failed, else inconclusive if any check was, else
    /// `success`.
    pub fn from_checks(checks: Vec<Check>, success: Verdict) -> Self {
        let verdict = if checks.iter().any(|c| c.status == Status::Fail) {
            Verdict::Fail
        } else if checks.iter().any(|c| c.status == Status::Inconclusive) {
            Verdict::Inconclusive
        } else {
            success
        };
        VerificationReport { verdict, checks }
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failed(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.failed().next()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "verdict: {}", self.verdict.label());
        for c in &self.checks {
            let _ = writeln!(out, "  [{}] {}: {}", c.status.label(), c.name, c.anchor);
            if !c.witness.is_none() {
                let _ = writeln!(out, "      witness: {}", c.witness);
            }
            if !c.detail.is_empty() {
                let _ = writeln!(out, "      {}", c.detail);
            }
        }
        out
    }
}

/// Output format shared by the CLI and FFI.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

pub fn render_report(r: &VerificationReport, format: Format) -> String {
    match format {
        Format::Text => r.render_text(),
        Format::Json => r.to_json(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::Prime;

    fn sample() -> VerificationReport {
        let p = Prime::new(5).unwrap();
        let x = PAdicRational::from_ratio(1, 2, Prime::new(2).unwrap());
        let z = CyclotomicNumber::root_of_unity(p, 2, &7.into());
        VerificationReport::from_checks(
            vec![
                Check::pass("measure", "μ(S) = 1", Witness::text("1")),
                Check::fail("inclusion", "S ⊆ p⁻¹S", Witness::point(&x), "x ∈ S, x ∉ p⁻¹S"),
                Check::fail("sum", "Σ χ(ac) = 0", Witness::value(&z), ""),
                Check::skipped("other", "n/a", "measure failed"),
            ],
            Verdict::CertifiedNecessary,
        )
    }

    #[test]
    fn json_round_trip() {
        let r = sample();
        assert_eq!(VerificationReport::from_json(&r.to_json()).unwrap(), r);
        assert_eq!(r.verdict, Verdict::Fail);
    }

    #[test]
    fn text_has_labels_and_witnesses() {
        let t = sample().render_text();
        assert!(t.contains("[PASS] measure"));
        assert!(t.contains("x = 1/2"));
        assert!(t.contains("verdict: FAIL"));
    }

    #[test]
    fn verdict_precedence() {
        let inc = VerificationReport::from_checks(
            vec![
                Check::pass("a", "", Witness::None),
                Check::inconclusive("b", "", Witness::None, "bound"),
            ],
            Verdict::Pass,
        );
        assert_eq!(inc.verdict, Verdict::Inconclusive);
        let ok = VerificationReport::from_checks(vec![Check::pass("a", "", Witness::None)], Verdict::Pass);
        assert!(ok.verdict.is_success());
    }
}
