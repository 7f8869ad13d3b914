//! Plain-text notation for shift operators and exponential polynomials.
//!
//! Operators are polynomials in `N` whose coefficients are expressions in `n`:
//! `N^4 - 2*N^3 + 2*N - 1`, `(n+2) + 2*N - n*N^2`, `N^2 - N - 2^n`,
//! `N - F(n+2)`. Named coefficients such as `F` are resolved through a
//! registry of closed forms. Algebraic numbers are written
//! `[a + b*t | t^2 - t - 1]`, meaning `a + b*t` in `Q[t]/(t^2 - t - 1)`.
//! Symbols commute: `N^2*n` and `n*N^2` denote the same operator.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exact::rational::parse_rational;
use crate::exact::{ExpPoly, Field, Nf, NumberField, Poly, Rational, Ring};
use crate::seq::{CoeffRingKind, ShiftOperator};

/// Named coefficient sequences available to the parser, by closed form.
pub type CoeffRegistry = BTreeMap<String, ExpPoly>;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Sym(char),
}

fn lex(s: &str) -> Result<Vec<(Tok, usize)>> {
    let mut out = Vec::new();
    let cs: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let st = i;
            while i < cs.len() && cs[i].is_ascii_digit() {
                i += 1;
            }
            out.push((Tok::Num(cs[st..i].iter().collect()), st));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let st = i;
            while i < cs.len() && (cs[i].is_ascii_alphanumeric() || cs[i] == '_') {
                i += 1;
            }
            out.push((Tok::Ident(cs[st..i].iter().collect()), st));
        } else if "+-*/^()[]|,".contains(c) {
            out.push((Tok::Sym(c), i));
            i += 1;
        } else {
            return Err(Error::SyntaxError {
                pos: i,
                msg: format!("unexpected character `{c}`"),
            });
        }
    }
    Ok(out)
}

/// Polynomial in `N` with exponential-polynomial coefficients (commutative).
#[derive(Clone, Debug)]
struct OpVal(Vec<ExpPoly>);

impl OpVal {
    fn scalar(e: ExpPoly) -> Self {
        OpVal(vec![e])
    }
    fn add(&self, o: &Self) -> Self {
        let n = self.0.len().max(o.0.len());
        OpVal(
            (0..n)
                .map(|i| {
                    let a = self.0.get(i).cloned().unwrap_or_default();
                    let b = o.0.get(i).cloned().unwrap_or_default();
                    a.add(&b)
                })
                .collect(),
        )
    }
    fn neg(&self) -> Self {
        OpVal(self.0.iter().map(|e| e.neg()).collect())
    }
    fn mul(&self, o: &Self) -> Self {
        let mut out = vec![ExpPoly::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        OpVal(out)
    }
    fn as_scalar(&self) -> Option<ExpPoly> {
        if self.0.iter().skip(1).all(|e| e.is_zero()) {
            Some(self.0.first().cloned().unwrap_or_default())
        } else {
            None
        }
    }
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
    registry: &'a CoeffRegistry,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: &str) -> Result<T> {
        let pos = self.toks.get(self.pos).map_or(self.end, |t| t.1);
        Err(Error::SyntaxError {
            pos,
            msg: msg.to_string(),
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(&format!("expected `{c}`"))
        }
    }

    fn expr(&mut self) -> Result<OpVal> {
        let mut acc = if self.eat('-') {
            self.term()?.neg()
        } else {
            self.term()?
        };
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?);
            } else if self.eat('-') {
                acc = acc.add(&self.term()?.neg());
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<OpVal> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.unary()?);
            } else if self.eat('/') {
                let d = self.unary()?;
                let c = d.as_scalar().and_then(|e| e.as_constant());
                match c.and_then(|c| c.inverse()) {
                    Some(inv) => acc = OpVal(acc.0.iter().map(|e| e.scale(&inv)).collect()),
                    None => return self.err("division only by nonzero constants"),
                }
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<OpVal> {
        if self.eat('-') {
            return Ok(self.unary()?.neg());
        }
        self.power()
    }

    fn int(&mut self) -> Result<i64> {
        let neg = self.eat('-');
        match self.peek().cloned() {
            Some(Tok::Num(s)) => {
                self.pos += 1;
                let v: i64 = s.parse().map_err(|_| Error::SyntaxError {
                    pos: self.toks[self.pos - 1].1,
                    msg: "integer too large".into(),
                })?;
                Ok(if neg { -v } else { v })
            }
            _ => self.err("expected an integer"),
        }
    }

    /// Parses `n`, `n+k`, `n-k` inside an argument list or exponent.
    fn n_offset(&mut self) -> Result<i64> {
        match self.peek() {
            Some(Tok::Ident(s)) if s == "n" => self.pos += 1,
            _ => return self.err("expected `n`"),
        }
        if self.eat('+') {
            self.int()
        } else if self.eat('-') {
            Ok(-self.int()?)
        } else {
            Ok(0)
        }
    }

    fn power(&mut self) -> Result<OpVal> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        // exponent: integer, n, (n+k) or (integer)
        let save = self.pos;
        let exp_n: Option<i64> = match self.peek().cloned() {
            // a bare `^n` takes no offset: `2^n + 1` is not `2^(n+1)`
            Some(Tok::Ident(s)) if s == "n" => {
                self.pos += 1;
                Some(0)
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                if matches!(self.peek(), Some(Tok::Ident(s)) if s == "n") {
                    let k = self.n_offset()?;
                    self.expect(')')?;
                    Some(k)
                } else {
                    self.pos = save;
                    None
                }
            }
            _ => None,
        };
        if let Some(k) = exp_n {
            let b = base.as_scalar().and_then(|e| e.as_constant());
            return match b {
                Some(b) if !b.is_zero() => Ok(OpVal::scalar(
                    ExpPoly::geometric(b.clone()).scale(&b.powi(k)),
                )),
                _ => self.err("only nonzero constants can be raised to the power n"),
            };
        }
        let e = if self.eat('(') {
            let v = self.int()?;
            self.expect(')')?;
            v
        } else {
            self.int()?
        };
        if e < 0 {
            return self.err("negative exponents are not supported");
        }
        let mut acc = OpVal::scalar(ExpPoly::constant(Rational::one()));
        for _ in 0..e {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<OpVal> {
        match self.peek().cloned() {
            Some(Tok::Num(s)) => {
                self.pos += 1;
                let r = parse_rational(&s).unwrap();
                Ok(OpVal::scalar(ExpPoly::constant(r)))
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let v = self.expr()?;
                self.expect(')')?;
                Ok(v)
            }
            Some(Tok::Sym('[')) => {
                self.pos += 1;
                let v = self.algebraic()?;
                Ok(OpVal::scalar(ExpPoly::from_nf(v)))
            }
            Some(Tok::Ident(s)) if s == "n" => {
                self.pos += 1;
                Ok(OpVal::scalar(ExpPoly::n()))
            }
            Some(Tok::Ident(s)) if s == "N" => {
                self.pos += 1;
                Ok(OpVal(vec![
                    ExpPoly::zero(),
                    ExpPoly::constant(Rational::one()),
                ]))
            }
            Some(Tok::Ident(s)) => {
                let at = self.toks[self.pos].1;
                self.pos += 1;
                let Some(e) = self.registry.get(&s) else {
                    return Err(Error::UnknownCoefficient(s));
                };
                let e = e.clone();
                if !self.eat('(') {
                    return Err(Error::SyntaxError {
                        pos: at,
                        msg: format!("expected `{s}(n+k)`"),
                    });
                }
                let k = self.n_offset()?;
                self.expect(')')?;
                Ok(OpVal::scalar(e.shift(k)))
            }
            _ => self.err("unexpected token"),
        }
    }

    /// `[ p(t) | m(t) ]`
    fn algebraic(&mut self) -> Result<Nf> {
        let rep = self.tpoly()?;
        self.expect('|')?;
        let m = self.tpoly()?;
        self.expect(']')?;
        let field = NumberField::new(&m)?;
        Ok(Nf::in_field(&field, rep.into_coeffs()))
    }

    fn tpoly(&mut self) -> Result<Poly<Rational>> {
        let mut acc = if self.eat('-') {
            self.tterm()?.neg()
        } else {
            self.tterm()?
        };
        loop {
            if self.eat('+') {
                acc = acc.add(&self.tterm()?);
            } else if self.eat('-') {
                acc = acc.sub(&self.tterm()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn tterm(&mut self) -> Result<Poly<Rational>> {
        let mut acc = self.tpow()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.tpow()?);
            } else if self.eat('/') {
                let d = self.tpow()?;
                if d.deg0() != 0 || d.is_zero() {
                    return self.err("division only by nonzero constants");
                }
                acc = acc.scale(&d.coeff(0).recip());
            } else {
                return Ok(acc);
            }
        }
    }

    fn tpow(&mut self) -> Result<Poly<Rational>> {
        let base = match self.peek().cloned() {
            Some(Tok::Num(s)) => {
                self.pos += 1;
                Poly::constant(parse_rational(&s).unwrap())
            }
            Some(Tok::Ident(s)) if s == "t" => {
                self.pos += 1;
                Poly::x()
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let v = self.tpoly()?;
                self.expect(')')?;
                v
            }
            Some(Tok::Sym('-')) => {
                self.pos += 1;
                return Ok(self.tpow()?.neg());
            }
            _ => return self.err("expected a polynomial in t"),
        };
        if self.eat('^') {
            let e = self.int()?;
            if e < 0 {
                return self.err("negative exponents are not supported");
            }
            return Ok(base.pow(e as u32));
        }
        Ok(base)
    }
}

fn parse_opval(text: &str, registry: &CoeffRegistry) -> Result<OpVal> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: text.len(),
        registry,
    };
    let v = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("unexpected trailing input");
    }
    Ok(v)
}

/// Parses an operator. The coefficient ring is the smallest one containing
/// every coefficient; `expected` rejects anything larger with
/// [`Error::MixedRing`].
pub fn parse_operator(
    text: &str,
    registry: &CoeffRegistry,
    expected: Option<CoeffRingKind>,
) -> Result<ShiftOperator> {
    let v = parse_opval(text, registry)?;
    for c in &v.0 {
        c.field().map_err(|e| Error::MixedRing(e.to_string()))?;
    }
    let op = ShiftOperator::exppoly(v.0)?.demoted();
    if let Some(want) = expected {
        if op.ring() > want {
            return Err(Error::MixedRing(format!(
                "operator needs {:?} coefficients but {want:?} was requested",
                op.ring()
            )));
        }
        return Ok(promote(&op, want));
    }
    Ok(op)
}

/// The same operator viewed in a larger coefficient ring.
pub fn promote(op: &ShiftOperator, ring: CoeffRingKind) -> ShiftOperator {
    match ring {
        CoeffRingKind::Constant => op.clone(),
        CoeffRingKind::PolyInN => match op.poly_coeffs() {
            Some(p) => ShiftOperator::PolyInN(p),
            None => op.clone(),
        },
        CoeffRingKind::ExpPolyCoeff => ShiftOperator::ExpPolyCoeff(op.exp_coeffs()),
    }
}

/// Parses an exponential polynomial in `n` (no `N`).
pub fn parse_exppoly(text: &str, registry: &CoeffRegistry) -> Result<ExpPoly> {
    let v = parse_opval(text, registry)?;
    v.as_scalar().ok_or_else(|| Error::SyntaxError {
        pos: 0,
        msg: "unexpected `N`".into(),
    })
}

fn is_single_term(e: &ExpPoly) -> bool {
    e.term_count() == 1
        && e.terms()
            .all(|(_, p)| p.coeffs().iter().filter(|c| !c.is_zero()).count() == 1)
}

fn leading_negative(e: &ExpPoly) -> bool {
    is_single_term(e)
        && e.terms().all(|(_, p)| {
            p.coeffs()
                .iter()
                .find(|c| !c.is_zero())
                .is_some_and(|c| c.rational_signum() < 0)
        })
}

/// Canonical text for an operator, highest power of `N` first.
pub fn format_operator(op: &ShiftOperator) -> String {
    let cs = op.exp_coeffs();
    let mut out = String::new();
    for (i, c) in cs.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let mono = match i {
            0 => String::new(),
            1 => "N".to_string(),
            _ => format!("N^{i}"),
        };
        let (neg, body) = if leading_negative(c) {
            (true, c.neg())
        } else {
            (false, c.clone())
        };
        let simple = is_single_term(&body);
        let btxt = body.to_string();
        let piece = if mono.is_empty() {
            if simple {
                btxt
            } else {
                format!("({btxt})")
            }
        } else if body.as_constant().is_some_and(|x| x.is_one()) {
            mono
        } else if simple && !btxt.contains('/') {
            format!("{btxt}*{mono}")
        } else {
            format!("({btxt})*{mono}")
        };
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        out.push_str(&piece);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}
