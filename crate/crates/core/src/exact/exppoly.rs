//! Exponential polynomials `sum_i p_i(n) * alpha_i^n` with algebraic bases.
//!
//! The map from bases to polynomial parts is kept canonical (distinct nonzero
//! bases, nonzero parts, bases sorted by the total order on [`Nf`]), so
//! structural equality is mathematical equality.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed};

use super::matrix::Matrix;
use super::numfield::{Nf, NumberField};
use super::poly::Poly;
use super::rational::{format_rational, Rational};
use super::ring::{Field, Ring};
use crate::error::Result;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ExpPoly {
    terms: BTreeMap<Nf, Poly<Nf>>,
}

impl ExpPoly {
    pub fn zero() -> Self {
        ExpPoly {
            terms: BTreeMap::new(),
        }
    }

    /// `poly(n) * base^n`.
    pub fn term(base: Nf, poly: Poly<Nf>) -> Self {
        assert!(!base.is_zero(), "zero base in exponential polynomial");
        let mut terms = BTreeMap::new();
        if !poly.is_zero() {
            terms.insert(base, poly);
        }
        ExpPoly { terms }
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_nf(Nf::rational(c))
    }

    pub fn from_nf(c: Nf) -> Self {
        Self::term(Nf::one(), Poly::constant(c))
    }

    /// A polynomial in `n` (base one).
    pub fn from_poly(p: &Poly<Rational>) -> Self {
        Self::term(Nf::one(), p.map(|c| Nf::rational(c.clone())))
    }

    /// `base^n`.
    pub fn geometric(base: Nf) -> Self {
        Self::term(base, Poly::constant(Nf::one()))
    }

    /// The sequence `n`.
    pub fn n() -> Self {
        Self::term(Nf::one(), Poly::x())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Nf, &Poly<Nf>)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn bases(&self) -> Vec<Nf> {
        self.terms.keys().cloned().collect()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Maximal degree of the polynomial parts (0 for the zero element).
    pub fn degree(&self) -> usize {
        self.terms.values().map(|p| p.deg0()).max().unwrap_or(0)
    }

    /// Single term `c*b^n` with constant `c`: invertible in the ring.
    pub fn is_unit(&self) -> bool {
        self.terms.len() == 1 && self.degree() == 0
    }

    /// `Some(c)` when the element is the constant sequence `c`.
    pub fn as_constant(&self) -> Option<Nf> {
        match self.terms.len() {
            0 => Some(Nf::zero()),
            1 => {
                let (b, p) = self.terms.iter().next().unwrap();
                (b.is_one() && p.deg0() == 0).then(|| p.coeff(0))
            }
            _ => None,
        }
    }

    /// `Some(p)` when every base is one and all coefficients are rational.
    pub fn as_rational_poly(&self) -> Option<Poly<Rational>> {
        match self.terms.len() {
            0 => Some(Poly::zero()),
            1 => {
                let (b, p) = self.terms.iter().next().unwrap();
                if !b.is_one() {
                    return None;
                }
                let cs: Option<Vec<Rational>> =
                    p.coeffs().iter().map(|c| c.to_rational()).collect();
                cs.map(Poly::new)
            }
            _ => None,
        }
    }

    /// The single number field all bases and coefficients live in.
    pub fn field(&self) -> Result<Option<Arc<NumberField>>> {
        let mut f: Option<Arc<NumberField>> = None;
        for (b, p) in &self.terms {
            f = Nf::join_fields(f.as_ref(), b.field())?;
            for c in p.coeffs() {
                f = Nf::join_fields(f.as_ref(), c.field())?;
            }
        }
        Ok(f)
    }

    fn insert_add(terms: &mut BTreeMap<Nf, Poly<Nf>>, base: Nf, p: Poly<Nf>) {
        if p.is_zero() {
            return;
        }
        match terms.get_mut(&base) {
            Some(q) => {
                let s = q.add(&p);
                if s.is_zero() {
                    terms.remove(&base);
                } else {
                    *q = s;
                }
            }
            None => {
                terms.insert(base, p);
            }
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (b, p) in &o.terms {
            Self::insert_add(&mut terms, b.clone(), p.clone());
        }
        ExpPoly { terms }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        ExpPoly {
            terms: self
                .terms
                .iter()
                .map(|(b, p)| (b.clone(), p.neg()))
                .collect(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut terms = BTreeMap::new();
        for (a, p) in &self.terms {
            for (b, q) in &o.terms {
                Self::insert_add(&mut terms, a.times(b), p.mul(q));
            }
        }
        ExpPoly { terms }
    }

    pub fn scale(&self, c: &Nf) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        ExpPoly {
            terms: self
                .terms
                .iter()
                .map(|(b, p)| (b.clone(), p.scale(c)))
                .collect(),
        }
    }

    /// `E(n + k)`.
    pub fn shift(&self, k: i64) -> Self {
        if k == 0 {
            return self.clone();
        }
        let kk = Nf::from_i64(k);
        ExpPoly {
            terms: self
                .terms
                .iter()
                .map(|(b, p)| {
                    (
                        b.clone(),
                        p.compose_linear(&Nf::one(), &kk).scale(&b.powi(k)),
                    )
                })
                .collect(),
        }
    }

    /// `E(m*n + j)`.
    pub fn dilate(&self, m: u64, j: i64) -> Self {
        let mm = Nf::from_i64(m as i64);
        let jj = Nf::from_i64(j);
        let mut terms = BTreeMap::new();
        for (b, p) in &self.terms {
            let np = p.compose_linear(&mm, &jj).scale(&b.powi(j));
            Self::insert_add(&mut terms, b.pow(m), np);
        }
        ExpPoly { terms }
    }

    pub fn eval(&self, n: i64) -> Nf {
        let nn = Nf::from_i64(n);
        self.terms.iter().fold(Nf::zero(), |acc, (b, p)| {
            acc.plus(&p.eval(&nn).times(&b.powi(n)))
        })
    }

    pub fn eval_rational(&self, n: i64) -> Option<Rational> {
        self.eval(n).to_rational()
    }

    /// Exact quotient `self / d` when it is again an exponential polynomial
    /// whose bases are ratios of bases of the operands. `None` otherwise.
    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        if d.terms.len() == 1 {
            let (beta, q) = d.terms.iter().next().unwrap();
            let binv = beta.inverse()?;
            let mut terms = BTreeMap::new();
            for (a, p) in &self.terms {
                let qt = if q.deg0() == 0 {
                    p.scale(&q.coeff(0).inverse()?)
                } else {
                    p.exact_div(q)?
                };
                Self::insert_add(&mut terms, a.times(&binv), qt);
            }
            return Some(ExpPoly { terms });
        }
        if self == d {
            return Some(Self::from_nf(Nf::one()));
        }
        let mut cands: Vec<Nf> = Vec::new();
        for a in self.terms.keys() {
            for b in d.terms.keys() {
                cands.push(a.times(&b.inverse()?));
            }
        }
        cands.sort();
        cands.dedup();
        let deg = self.degree().checked_sub(d.degree())?;
        let unknowns: Vec<(Nf, usize)> = cands
            .iter()
            .flat_map(|g| (0..=deg).map(move |i| (g.clone(), i)))
            .collect();
        if unknowns.len() > 256 {
            return None;
        }
        let cols: Vec<ExpPoly> = unknowns
            .iter()
            .map(|(g, i)| d.mul(&Self::term(g.clone(), Poly::monomial(Nf::one(), *i))))
            .collect();
        let mut keys: BTreeMap<(Nf, usize), usize> = BTreeMap::new();
        for e in cols.iter().chain(std::iter::once(self)) {
            for (b, p) in &e.terms {
                for k in 0..p.coeffs().len() {
                    let len = keys.len();
                    keys.entry((b.clone(), k)).or_insert(len);
                }
            }
        }
        let coeff_vec = |e: &ExpPoly| {
            let mut v = vec![Nf::zero(); keys.len()];
            for (b, p) in &e.terms {
                for (k, c) in p.coeffs().iter().enumerate() {
                    v[keys[&(b.clone(), k)]] = c.clone();
                }
            }
            v
        };
        let colv: Vec<Vec<Nf>> = cols.iter().map(coeff_vec).collect();
        let rhs = coeff_vec(self);
        let data: Vec<Vec<Nf>> = (0..keys.len())
            .map(|r| colv.iter().map(|c| c[r].clone()).collect())
            .collect();
        let m = Matrix::new(keys.len(), unknowns.len(), data);
        let x = m.solve(&rhs)?;
        let mut out = Self::zero();
        for ((g, i), c) in unknowns.iter().zip(x) {
            if !c.is_zero() {
                out = out.add(&Self::term(g.clone(), Poly::monomial(c, *i)));
            }
        }
        (out.mul(d) == *self).then_some(out)
    }

    /// True when the element vanishes identically on some residue class
    /// `n = p*k + j` with `p <= max_period`.
    pub fn vanishes_on_residue_class(&self, max_period: u64) -> bool {
        if self.is_zero() {
            return true;
        }
        (2..=max_period).any(|p| (0..p as i64).any(|j| self.dilate(p, j).is_zero()))
    }
}

impl Ring for ExpPoly {
    fn zero() -> Self {
        ExpPoly::zero()
    }
    fn one() -> Self {
        ExpPoly::from_nf(Nf::one())
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn plus(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn minus(&self, o: &Self) -> Self {
        self.sub(o)
    }
    fn times(&self, o: &Self) -> Self {
        self.mul(o)
    }
    fn negate(&self) -> Self {
        self.neg()
    }
    fn from_i64(v: i64) -> Self {
        ExpPoly::from_nf(Nf::from_i64(v))
    }
}

fn base_text(b: &Nf) -> String {
    match b.to_rational() {
        Some(r) if r.is_integer() && r.is_positive() => format!("{}^n", r.numer()),
        Some(r) => format!("({})^n", format_rational(&r)),
        None => format!("{b}^n"),
    }
}

fn mono_text(k: usize, base: &Nf) -> String {
    let mut parts = Vec::new();
    match k {
        0 => {}
        1 => parts.push("n".to_string()),
        _ => parts.push(format!("n^{k}")),
    }
    if !base.is_one() {
        parts.push(base_text(base));
    }
    parts.join("*")
}

impl fmt::Display for ExpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut out = String::new();
        for (base, p) in &self.terms {
            for (k, c) in p.coeffs().iter().enumerate().rev() {
                if c.is_zero() {
                    continue;
                }
                let mono = mono_text(k, base);
                match c.to_rational() {
                    Some(r) => {
                        let neg = r.is_negative();
                        let a = r.abs();
                        out.push_str(match (out.is_empty(), neg) {
                            (true, true) => "-",
                            (true, false) => "",
                            (false, true) => " - ",
                            (false, false) => " + ",
                        });
                        let (num, den) = (a.numer().clone(), a.denom().clone());
                        let body = if mono.is_empty() {
                            num.to_string()
                        } else if num.is_one() {
                            mono
                        } else {
                            format!("{num}*{mono}")
                        };
                        out.push_str(&body);
                        if !den.is_one() {
                            out.push_str(&format!("/{den}"));
                        }
                    }
                    None => {
                        if !out.is_empty() {
                            out.push_str(" + ");
                        }
                        if mono.is_empty() {
                            out.push_str(&c.to_string());
                        } else {
                            out.push_str(&format!("{c}*{mono}"));
                        }
                    }
                }
            }
        }
        f.write_str(&out)
    }
}

impl fmt::Debug for ExpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
