//! JSON wire formats for sets, functions and partitions.
//!
//! ```json
//! {"p": 2, "balls": [{"center": "1/2", "radius_exp": 0}]}
//! {"p": 2, "terms": [{"coef": "1", "t": "1/2", "ball": {"center": "0", "radius_exp": 0}}]}
//! {"p": 2, "pieces": [{"balls": [...]}, ...]}
//! ```
//!
//! A coefficient is either a rational string or `{"order_exp": k, "coeffs": [...]}`.

use serde::{Deserialize, Serialize};

use crate::cyclotomic::{CyclotomicJson, CyclotomicNumber};
use crate::error::{Error, Result};
use crate::function::{CharTerm, LCFunction};
use crate::padic::{parse_rational, PAdicRational, Prime};
use crate::set::{Ball, ClopenSet};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BallJson {
    pub center: String,
    pub radius_exp: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SetJson {
    pub p: u64,
    pub balls: Vec<BallJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoefJson {
    Rational(String),
    Cyclotomic(CyclotomicJson),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermJson {
    pub coef: CoefJson,
    #[serde(default = "zero_string")]
    pub t: String,
    pub ball: BallJson,
}

fn zero_string() -> String {
    "0".into()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionJson {
    pub p: u64,
    pub terms: Vec<TermJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PieceJson {
    pub balls: Vec<BallJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartitionJson {
    pub p: u64,
    pub pieces: Vec<PieceJson>,
}

fn parse_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text)
        .map_err(|e| Error::Parse(format!("line {}, column {}: {e}", e.line(), e.column())))
}

fn ball_from(b: &BallJson, p: Prime, at: &str) -> Result<Ball> {
    let c = PAdicRational::parse(&b.center, p)
        .map_err(|e| Error::Parse(format!("{at}.center: {e}")))?;
    Ok(Ball::new(c, b.radius_exp))
}

fn ball_to(b: &Ball) -> BallJson {
    BallJson { center: b.center().to_string(), radius_exp: b.radius_exp() }
}

fn balls_from(balls: &[BallJson], p: Prime, at: &str) -> Result<ClopenSet> {
    let parsed = balls
        .iter()
        .enumerate()
        .map(|(i, b)| ball_from(b, p, &format!("{at}balls[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    ClopenSet::from_balls(p, parsed)
}

pub fn set_from_json(text: &str) -> Result<ClopenSet> {
    let raw: SetJson = parse_json(text)?;
    balls_from(&raw.balls, Prime::new(raw.p)?, "")
}

pub fn set_to_json(s: &ClopenSet) -> String {
    let raw = SetJson { p: s.prime().get(), balls: s.balls().iter().map(ball_to).collect() };
    serde_json::to_string(&raw).expect("serializable")
}

pub fn function_from_json(text: &str) -> Result<LCFunction> {
    let raw: FunctionJson = parse_json(text)?;
    let p = Prime::new(raw.p)?;
    let terms = raw
        .terms
        .iter()
        .enumerate()
        .map(|(i, t)| {
            let at = format!("terms[{i}]");
            let coef = match &t.coef {
                CoefJson::Rational(s) => CyclotomicNumber::from_rational(
                    p,
                    parse_rational(s).map_err(|e| Error::Parse(format!("{at}.coef: {e}")))?,
                ),
                CoefJson::Cyclotomic(c) => CyclotomicNumber::from_json(p, c)
                    .map_err(|e| Error::Parse(format!("{at}.coef: {e}")))?,
            };
            let m = PAdicRational::parse(&t.t, p).map_err(|e| Error::Parse(format!("{at}.t: {e}")))?;
            Ok(CharTerm::new(coef, m, ball_from(&t.ball, p, &format!("{at}.ball"))?))
        })
        .collect::<Result<Vec<_>>>()?;
    LCFunction::from_terms(p, terms)
}

pub fn function_to_json(f: &LCFunction) -> String {
    let terms = f
        .terms()
        .iter()
        .map(|t| TermJson {
            coef: match t.coef().as_rational() {
                Some(q) => CoefJson::Rational(crate::padic::format_rational(q)),
                None => CoefJson::Cyclotomic(t.coef().to_json()),
            },
            t: t.modulation().to_string(),
            ball: ball_to(t.support()),
        })
        .collect();
    serde_json::to_string(&FunctionJson { p: f.prime().get(), terms }).expect("serializable")
}

pub fn partition_from_json(text: &str) -> Result<Vec<ClopenSet>> {
    let raw: PartitionJson = parse_json(text)?;
    let p = Prime::new(raw.p)?;
    raw.pieces
        .iter()
        .enumerate()
        .map(|(i, piece)| balls_from(&piece.balls, p, &format!("pieces[{i}].")))
        .collect()
}

pub fn partition_to_json(pieces: &[ClopenSet]) -> Result<String> {
    let p = pieces
        .first()
        .ok_or_else(|| Error::InvalidInput("empty partition".into()))?
        .prime();
    let raw = PartitionJson {
        p: p.get(),
        pieces: pieces
            .iter()
            .map(|s| PieceJson { balls: s.balls().iter().map(ball_to).collect() })
            .collect(),
    };
    Ok(serde_json::to_string(&raw).expect("serializable"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function::Direction;

    #[test]
    fn set_round_trip() {
        let s = set_from_json(r#"{"p":2,"balls":[{"center":"1/2","radius_exp":0},{"center":"0","radius_exp":-1}]}"#)
            .unwrap();
        assert_eq!(s.balls().len(), 2);
        assert_eq!(set_from_json(&set_to_json(&s)).unwrap(), s);
    }

    #[test]
    fn function_round_trip() {
        let f = function_from_json(
            r#"{"p":3,"terms":[{"coef":"2/3","t":"1/9","ball":{"center":"0","radius_exp":0}},
                {"coef":{"order_exp":1,"coeffs":["0","1","0"]},"ball":{"center":"1/3","radius_exp":-1}}]}"#,
        )
        .unwrap();
        assert_eq!(function_from_json(&function_to_json(&f)).unwrap(), f);
        let g = f.fourier(Direction::Forward);
        assert_eq!(function_from_json(&function_to_json(&g)).unwrap(), g);
    }

    #[test]
    fn errors_carry_locations() {
        let e = set_from_json(r#"{"p":4,"balls":[]}"#).unwrap_err();
        assert_eq!(e, Error::NotPrime(4));
        let e = set_from_json(r#"{"p":2,"balls":[{"center":"x","radius_exp":0}]}"#).unwrap_err();
        assert!(e.to_string().contains("balls[0].center"), "{e}");
        let e = set_from_json(r#"{"p":2,"balls":[}"#).unwrap_err();
        assert!(e.to_string().contains("line 1"), "{e}");
        let e = function_from_json(r#"{"p":2,"terms":[{"coef":"1","t":"1/0","ball":{"center":"0","radius_exp":0}}]}"#)
            .unwrap_err();
        assert!(e.to_string().contains("terms[0].t"), "{e}");
    }

    #[test]
    fn partition_round_trip() {
        let parts = partition_from_json(
            r#"{"p":3,"pieces":[{"balls":[{"center":"1/3","radius_exp":0}]},{"balls":[{"center":"2/3","radius_exp":0}]}]}"#,
        )
        .unwrap();
        assert_eq!(parts.len(), 2);
        assert_eq!(partition_from_json(&partition_to_json(&parts).unwrap()).unwrap(), parts);
    }
}
