//! Text and JSON forms of [`MultiPoly`].
//!
//! Text: `3/2*c[a(1,2)]^2*z[3,3]^-1 - cp[a(2,2)] + 7`.
//! JSON: `{"terms":[{"coeff":"3/2","vars":[{"v":"c:a(1,2)","e":2}]}]}`.

use num_bigint::BigInt;
use num_traits::Zero as _;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{parse_q, q_to_string, MultiPoly, Ring, VarId, Q};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodecError {
    #[error("unexpected input at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: &'static str },
    #[error("bad coefficient {0:?}")]
    Coeff(String),
    #[error("bad variable {0:?}")]
    Var(String),
    #[error("negative exponent on {0}")]
    NegativeExponent(VarId),
    #[error("exponent overflow")]
    Overflow,
    #[error("malformed JSON: {0}")]
    Json(String),
}

const MAX_EXP: i64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VarPowJson {
    pub v: String,
    pub e: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub coeff: String,
    pub vars: Vec<VarPowJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyJson {
    pub terms: Vec<TermJson>,
}

pub fn poly_to_json(p: &MultiPoly) -> PolyJson {
    PolyJson {
        terms: p
            .terms()
            .map(|(m, c)| TermJson {
                coeff: q_to_string(c),
                vars: m.iter().map(|(v, e)| VarPowJson { v: v.tag(), e: *e as i64 }).collect(),
            })
            .collect(),
    }
}

fn build_term(c: Q, vars: Vec<(VarId, i64)>) -> Result<MultiPoly, CodecError> {
    let mut acc: std::collections::BTreeMap<VarId, i64> = Default::default();
    for (v, e) in vars {
        let slot = acc.entry(v).or_insert(0);
        *slot = slot.checked_add(e).ok_or(CodecError::Overflow)?;
        if slot.abs() > MAX_EXP {
            return Err(CodecError::Overflow);
        }
    }
    let mut out = Vec::new();
    for (v, e) in acc {
        if e < 0 && !v.is_diag_z() {
            return Err(CodecError::NegativeExponent(v));
        }
        if e != 0 {
            out.push((v, e as i32));
        }
    }
    Ok(MultiPoly::monomial(c, out))
}

pub fn parse_poly_json(s: &str) -> Result<MultiPoly, CodecError> {
    let doc: PolyJson = serde_json::from_str(s).map_err(|e| CodecError::Json(e.to_string()))?;
    let mut p = MultiPoly::zero();
    for t in doc.terms {
        let c = parse_q(&t.coeff).ok_or_else(|| CodecError::Coeff(t.coeff.clone()))?;
        let mut vars = Vec::with_capacity(t.vars.len());
        for vp in t.vars {
            let v = VarId::parse_tag(&vp.v).ok_or_else(|| CodecError::Var(vp.v.clone()))?;
            if vp.e.abs() > MAX_EXP {
                return Err(CodecError::Overflow);
            }
            vars.push((v, vp.e));
        }
        p = Ring::add(&p, &build_term(c, vars)?);
    }
    Ok(p)
}

struct Cursor<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        self.ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn err(&self, msg: &'static str) -> CodecError {
        CodecError::Syntax { pos: self.pos, msg }
    }

    fn digits(&mut self) -> Result<&'a str, CodecError> {
        self.ws();
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected digits"));
        }
        Ok(std::str::from_utf8(&self.s[start..self.pos]).expect("ascii digits"))
    }

    fn until(&mut self, close: u8) -> Result<&'a str, CodecError> {
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c == close {
                let inner = std::str::from_utf8(&self.s[start..self.pos]).map_err(|_| self.err("invalid utf-8"))?;
                self.pos += 1;
                return Ok(inner);
            }
            self.pos += 1;
        }
        Err(self.err("unterminated bracket"))
    }

    fn var(&mut self) -> Result<VarId, CodecError> {
        self.ws();
        let rest = &self.s[self.pos..];
        let (tag, skip) = if rest.starts_with(b"cp[") {
            ("cp", 3)
        } else if rest.starts_with(b"c[") {
            ("c", 2)
        } else if rest.starts_with(b"z[") {
            ("z", 2)
        } else {
            return Err(self.err("expected coefficient or variable"));
        };
        self.pos += skip;
        // root names contain ')' but never ']'
        let inner = self.until(b']')?;
        VarId::parse_tag(&format!("{tag}:{inner}")).ok_or_else(|| CodecError::Var(inner.to_string()))
    }

    fn exponent(&mut self) -> Result<i64, CodecError> {
        if !self.eat(b'^') {
            return Ok(1);
        }
        let neg = self.eat(b'-');
        let d = self.digits()?;
        let e: i64 = d.parse().map_err(|_| CodecError::Overflow)?;
        if e > MAX_EXP {
            return Err(CodecError::Overflow);
        }
        Ok(if neg { -e } else { e })
    }

    fn term(&mut self) -> Result<MultiPoly, CodecError> {
        let mut coeff = Q::one();
        let mut vars = Vec::new();
        loop {
            self.ws();
            if self.peek().is_some_and(|c| c.is_ascii_digit()) {
                let n: BigInt = self.digits()?.parse().map_err(|_| self.err("bad integer"))?;
                let mut x = Q::from_integer(n);
                if self.eat(b'/') {
                    let d: BigInt = self.digits()?.parse().map_err(|_| self.err("bad integer"))?;
                    if d.is_zero() {
                        return Err(CodecError::Coeff("zero denominator".into()));
                    }
                    x /= Q::from_integer(d);
                }
                coeff *= x;
            } else {
                let v = self.var()?;
                let e = self.exponent()?;
                vars.push((v, e));
            }
            if !self.eat(b'*') {
                break;
            }
        }
        build_term(coeff, vars)
    }
}

pub fn parse_poly_text(s: &str) -> Result<MultiPoly, CodecError> {
    let mut cur = Cursor { s: s.as_bytes(), pos: 0 };
    let mut p = MultiPoly::zero();
    let mut first = true;
    loop {
        cur.ws();
        if cur.peek().is_none() {
            if first {
                return Err(cur.err("empty polynomial"));
            }
            break;
        }
        let neg = if cur.eat(b'-') {
            true
        } else if cur.eat(b'+') || first {
            false
        } else {
            return Err(cur.err("expected + or -"));
        };
        let t = cur.term()?;
        p = if neg { Ring::sub(&p, &t) } else { Ring::add(&p, &t) };
        first = false;
    }
    Ok(p)
}
