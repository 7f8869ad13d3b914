//! Rigorous checking of polynomial identities among C-finite sequences.
//!
//! An identity `L(P(a, b, ...))(n) = 0` where `P` is a polynomial in shifted
//! sequence values and `L` a constant-coefficient operator is itself a
//! C-finite sequence whose order is bounded by the closure theorems. Checking
//! that many consecutive values, past every validity offset, proves it.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::exact::{Rational, Ring};
use crate::seq::{expand_terms, CoeffRingKind, RecurrenceSystem, ShiftOperator};

/// `coefficient * prod name(n + shift)`, one factor per power.
#[derive(Clone, Debug, PartialEq)]
pub struct ClaimTerm {
    pub coefficient: Rational,
    pub factors: Vec<(String, i64)>,
}

/// `operator` applied to the sum of `terms` vanishes for every `n >= from`.
#[derive(Clone, Debug, PartialEq)]
pub struct IdentityClaim {
    pub terms: Vec<ClaimTerm>,
    pub operator: Option<ShiftOperator>,
    pub from: i64,
}

impl IdentityClaim {
    pub fn new(terms: Vec<ClaimTerm>, from: i64) -> Self {
        IdentityClaim {
            terms,
            operator: None,
            from,
        }
    }

    pub fn with_operator(mut self, op: ShiftOperator) -> Self {
        self.operator = Some(op);
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Proven,
    /// First index at which the expression does not vanish.
    Refuted(i64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProofCertificate {
    pub order_bound: usize,
    /// How the bound was assembled, one product of orders per monomial.
    pub trace: String,
    pub terms_checked: usize,
    pub first_index: i64,
    pub verdict: Verdict,
}

impl fmt::Display for ProofCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "order bound: {} = {}", self.order_bound, self.trace)?;
        writeln!(
            f,
            "checked: n = {}..{} ({} terms)",
            self.first_index,
            self.first_index + self.terms_checked as i64 - 1,
            self.terms_checked
        )?;
        match self.verdict {
            Verdict::Proven => write!(f, "verdict: proven"),
            Verdict::Refuted(n) => write!(f, "verdict: refuted at n = {n}"),
        }
    }
}

/// Monomials with identical factor multisets are merged in order of first
/// appearance, keeping those whose coefficients cancel: the bound is taken
/// over the written expression.
fn group(terms: &[ClaimTerm]) -> Vec<(Vec<(String, i64)>, Rational)> {
    let mut out: Vec<(Vec<(String, i64)>, Rational)> = Vec::new();
    for t in terms {
        let mut key = t.factors.clone();
        key.sort();
        match out.iter_mut().find(|(k, _)| *k == key) {
            Some((_, c)) => *c += &t.coefficient,
            None => out.push((key, t.coefficient.clone())),
        }
    }
    out
}

/// Proves or refutes a claim about the named constant-coefficient sequences.
pub fn prove_identity(
    claim: &IdentityClaim,
    sequences: &BTreeMap<String, RecurrenceSystem>,
) -> Result<ProofCertificate> {
    if let Some(op) = &claim.operator {
        if op.ring() != CoeffRingKind::Constant {
            return Err(Error::UnboundableExpression(
                "outer operator must have constant coefficients".into(),
            ));
        }
    }
    let groups = group(&claim.terms);
    let lookup = |name: &str| -> Result<&RecurrenceSystem> {
        let rs = sequences
            .get(name)
            .ok_or_else(|| Error::UnknownCoefficient(name.to_string()))?;
        if rs.operator.ring() != CoeffRingKind::Constant {
            return Err(Error::UnboundableExpression(format!(
                "{name} does not have constant coefficients; products of such sequences have no a priori order bound"
            )));
        }
        Ok(rs)
    };

    let mut bound = 0usize;
    let mut parts = Vec::new();
    let mut validity = claim.from;
    let mut max_shift = 0i64;
    for (key, _) in &groups {
        let mut prod = 1usize;
        let mut orders = Vec::new();
        for (name, shift) in key {
            let rs = lookup(name)?;
            prod *= rs.order();
            orders.push(rs.order().to_string());
            validity = validity.max(rs.validity_offset);
            if claim.from + shift < rs.start {
                return Err(Error::InvalidInput(format!(
                    "{name}({}) is before the first index",
                    claim.from + shift
                )));
            }
            max_shift = max_shift.max(*shift);
        }
        bound += prod;
        parts.push(if orders.is_empty() {
            "1".to_string()
        } else {
            orders.join("*")
        });
    }
    let outer = claim.operator.as_ref().map_or(0, |op| op.order());
    let first = claim.from;
    let last = validity + bound as i64 - 1;
    let count = (last - first + 1).max(0) as usize;

    let mut values: BTreeMap<&str, Vec<Rational>> = BTreeMap::new();
    let top = last + outer as i64 + max_shift;
    for (key, _) in &groups {
        for (name, _) in key {
            if !values.contains_key(name.as_str()) {
                let rs = lookup(name)?;
                let n = (top - rs.start + 1).max(0) as usize;
                values.insert(name.as_str(), expand_terms(rs, n)?.terms);
            }
        }
    }
    let value_at = |name: &str, idx: i64| -> Rational {
        let rs = &sequences[name];
        values[name][(idx - rs.start) as usize].clone()
    };
    let expr = |n: i64| -> Rational {
        groups.iter().fold(Rational::zero(), |acc, (key, c)| {
            let p = key
                .iter()
                .fold(c.clone(), |p, (name, s)| p * value_at(name, n + s));
            acc + p
        })
    };
    let mut verdict = Verdict::Proven;
    for n in first..=last {
        let v = match &claim.operator {
            None => expr(n),
            Some(op) => {
                let c = op.const_coeffs().unwrap();
                c.iter().enumerate().fold(Rational::zero(), |acc, (i, ci)| {
                    acc + ci * expr(n + i as i64)
                })
            }
        };
        if !v.is_zero() {
            verdict = Verdict::Refuted(n);
            break;
        }
    }
    Ok(ProofCertificate {
        order_bound: bound,
        trace: parts.join(" + "),
        terms_checked: count,
        first_index: first,
        verdict,
    })
}

struct Lexer<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(&format!("expected `{}`", c as char)))
        }
    }

    fn err(&self, msg: &str) -> Error {
        Error::SyntaxError {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn integer(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| Error::SyntaxError {
                pos: start,
                msg: "expected an integer".into(),
            })
    }

    fn ident(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len()
            && (self.s[self.pos].is_ascii_alphanumeric() || self.s[self.pos] == b'_')
        {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a name"));
        }
        Ok(std::str::from_utf8(&self.s[start..self.pos])
            .unwrap()
            .to_string())
    }

    /// `name(n)`, `name(n+k)` or `name(n-k)`.
    fn factor(&mut self, name: String) -> Result<(String, i64)> {
        self.expect(b'(')?;
        if self.ident()? != "n" {
            return Err(self.err("index must be n plus a constant"));
        }
        let shift = if self.eat(b'+') {
            self.integer()?
        } else if self.eat(b'-') {
            -self.integer()?
        } else {
            0
        };
        self.expect(b')')?;
        Ok((name, shift))
    }

    fn term(&mut self, sign: bool) -> Result<ClaimTerm> {
        let mut coefficient = if sign {
            -Rational::one()
        } else {
            Rational::one()
        };
        let mut factors = Vec::new();
        loop {
            match self.peek() {
                Some(c) if c.is_ascii_digit() => {
                    let p = self.integer()?;
                    let q = if self.eat(b'/') { self.integer()? } else { 1 };
                    if q == 0 {
                        return Err(self.err("zero denominator"));
                    }
                    coefficient *= Rational::new(p.into(), q.into());
                }
                Some(c) if c.is_ascii_alphabetic() => {
                    let name = self.ident()?;
                    let f = self.factor(name)?;
                    let e = if self.eat(b'^') { self.integer()? } else { 1 };
                    for _ in 0..e {
                        factors.push(f.clone());
                    }
                }
                Some(b'(') => return Err(self.err("parentheses are only allowed around indices")),
                _ => return Err(self.err("expected a number or a sequence value")),
            }
            if !self.eat(b'*') {
                return Ok(ClaimTerm {
                    coefficient,
                    factors,
                });
            }
        }
    }
}

/// Parses a sum of monomials such as
/// `a(n+1) - a(n)*a(n+1) + 2*a(n+2)^2`.
pub fn parse_claim(text: &str) -> Result<Vec<ClaimTerm>> {
    let mut lx = Lexer {
        s: text.as_bytes(),
        pos: 0,
    };
    let mut out = Vec::new();
    let mut sign = lx.eat(b'-');
    if !sign {
        lx.eat(b'+');
    }
    loop {
        out.push(lx.term(sign)?);
        if lx.eat(b'+') {
            sign = false;
        } else if lx.eat(b'-') {
            sign = true;
        } else if lx.peek().is_none() {
            return Ok(out);
        } else {
            return Err(lx.err("expected `+`, `-` or end of input"));
        }
    }
}
