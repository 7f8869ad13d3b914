//! Sequences, shift operators and recurrence systems.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::frac::CoeffRing;
use crate::exact::roots::first_index_past_roots;
use crate::exact::{ExpPoly, Poly, Rational, Ring};

/// Finite list of exact terms; `terms[i]` is the value at index `offset + i`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sequence {
    #[serde(with = "crate::format::json::rational_vec")]
    pub terms: Vec<Rational>,
    pub offset: i64,
}

impl Sequence {
    pub fn new(terms: Vec<Rational>, offset: i64) -> Self {
        Sequence { terms, offset }
    }

    pub fn from_ints(v: &[i64]) -> Self {
        Sequence::new(v.iter().map(|&x| Rational::from_i64(x)).collect(), 0)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Value at absolute index `n`, if stored.
    pub fn get(&self, n: i64) -> Option<&Rational> {
        let i = n.checked_sub(self.offset)?;
        if i < 0 {
            return None;
        }
        self.terms.get(i as usize)
    }

    /// Last stored absolute index.
    pub fn last_index(&self) -> i64 {
        self.offset + self.terms.len() as i64 - 1
    }
}

/// Ring of the coefficients of a [`ShiftOperator`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CoeffRingKind {
    Constant,
    PolyInN,
    ExpPolyCoeff,
}

/// `sum_i c_i(n) N^i`, where `N` shifts the index by one.
#[derive(Clone, PartialEq)]
pub enum ShiftOperator {
    Constant(Vec<Rational>),
    PolyInN(Vec<Poly<Rational>>),
    ExpPolyCoeff(Vec<ExpPoly>),
}

fn trim<T>(mut v: Vec<T>, is_zero: impl Fn(&T) -> bool) -> Result<Vec<T>> {
    while v.last().is_some_and(&is_zero) {
        v.pop();
    }
    if v.is_empty() {
        return Err(Error::InvalidInput("zero operator".into()));
    }
    Ok(v)
}

impl ShiftOperator {
    pub fn constant(c: Vec<Rational>) -> Result<Self> {
        Ok(ShiftOperator::Constant(trim(c, |x| x.is_zero())?))
    }

    pub fn poly(c: Vec<Poly<Rational>>) -> Result<Self> {
        Ok(ShiftOperator::PolyInN(trim(c, |x| x.is_zero())?))
    }

    pub fn exppoly(c: Vec<ExpPoly>) -> Result<Self> {
        Ok(ShiftOperator::ExpPolyCoeff(trim(c, |x| x.is_zero())?))
    }

    /// Constant-coefficient operator from integer coefficients, low to high.
    pub fn from_ints(c: &[i64]) -> Self {
        Self::constant(c.iter().map(|&v| Rational::from_i64(v)).collect())
            .expect("nonzero operator")
    }

    pub fn ring(&self) -> CoeffRingKind {
        match self {
            ShiftOperator::Constant(_) => CoeffRingKind::Constant,
            ShiftOperator::PolyInN(_) => CoeffRingKind::PolyInN,
            ShiftOperator::ExpPolyCoeff(_) => CoeffRingKind::ExpPolyCoeff,
        }
    }

    pub fn order(&self) -> usize {
        self.len() - 1
    }

    fn len(&self) -> usize {
        match self {
            ShiftOperator::Constant(c) => c.len(),
            ShiftOperator::PolyInN(c) => c.len(),
            ShiftOperator::ExpPolyCoeff(c) => c.len(),
        }
    }

    /// Maximal coefficient degree in `n`.
    pub fn degree(&self) -> usize {
        match self {
            ShiftOperator::Constant(_) => 0,
            ShiftOperator::PolyInN(c) => c.iter().map(|p| p.deg0()).max().unwrap_or(0),
            ShiftOperator::ExpPolyCoeff(c) => c.iter().map(|p| p.degree()).max().unwrap_or(0),
        }
    }

    /// Coefficients as exponential polynomials (always possible).
    pub fn exp_coeffs(&self) -> Vec<ExpPoly> {
        match self {
            ShiftOperator::Constant(c) => c.iter().map(|x| ExpPoly::constant(x.clone())).collect(),
            ShiftOperator::PolyInN(c) => c.iter().map(ExpPoly::from_poly).collect(),
            ShiftOperator::ExpPolyCoeff(c) => c.clone(),
        }
    }

    /// Coefficients as polynomials in `n`, if they are.
    pub fn poly_coeffs(&self) -> Option<Vec<Poly<Rational>>> {
        match self {
            ShiftOperator::Constant(c) => {
                Some(c.iter().map(|x| Poly::constant(x.clone())).collect())
            }
            ShiftOperator::PolyInN(c) => Some(c.clone()),
            ShiftOperator::ExpPolyCoeff(c) => c.iter().map(|e| e.as_rational_poly()).collect(),
        }
    }

    /// Coefficients as rational constants, if they are.
    pub fn const_coeffs(&self) -> Option<Vec<Rational>> {
        let p = self.poly_coeffs()?;
        p.iter()
            .map(|x| (x.deg0() == 0).then(|| x.coeff(0)))
            .collect()
    }

    /// The same operator in the smallest ring containing its coefficients.
    pub fn demoted(&self) -> Self {
        if let Some(c) = self.const_coeffs() {
            return ShiftOperator::Constant(c);
        }
        if let Some(p) = self.poly_coeffs() {
            return ShiftOperator::PolyInN(p);
        }
        self.clone()
    }

    /// Value of coefficient `i` at index `n`.
    pub fn coeff_at(&self, i: usize, n: i64) -> Result<Rational> {
        match self {
            ShiftOperator::Constant(c) => Ok(c[i].clone()),
            ShiftOperator::PolyInN(c) => Ok(c[i].eval(&Rational::from_i64(n))),
            ShiftOperator::ExpPolyCoeff(c) => {
                let v = c[i].eval(n);
                v.to_rational()
                    .ok_or_else(|| Error::NonRational(format!("coefficient {i} at n = {n}: {v}")))
            }
        }
    }

    /// `sum_i c_i(n) a_{n+i}` for the stored sequence, if all terms are present.
    pub fn apply_at(&self, s: &Sequence, n: i64) -> Result<Option<Rational>> {
        let mut acc = Rational::zero();
        for i in 0..self.len() {
            let Some(a) = s.get(n + i as i64) else {
                return Ok(None);
            };
            if !a.is_zero() {
                acc += self.coeff_at(i, n)? * a;
            }
        }
        Ok(Some(acc))
    }

    /// The operator with `n` replaced by `n + k`.
    pub fn shift_n(&self, k: i64) -> Self {
        match self {
            ShiftOperator::Constant(c) => ShiftOperator::Constant(c.clone()),
            ShiftOperator::PolyInN(c) => {
                ShiftOperator::PolyInN(c.iter().map(|p| p.shift(k)).collect())
            }
            ShiftOperator::ExpPolyCoeff(c) => {
                ShiftOperator::ExpPolyCoeff(c.iter().map(|p| p.shift(k)).collect())
            }
        }
    }

    /// Whether two operators agree up to a nonzero scalar factor from the
    /// coefficient ring's constants.
    pub fn proportional(&self, o: &Self) -> bool {
        let a = self.exp_coeffs();
        let b = o.exp_coeffs();
        if a.len() != b.len() {
            return false;
        }
        let top_a = a.last().unwrap();
        let top_b = b.last().unwrap();
        for (x, y) in a.iter().zip(&b) {
            if x.mul(top_b) != y.mul(top_a) {
                return false;
            }
        }
        match top_a.exact_div(top_b) {
            Some(r) => r.as_constant().is_some(),
            None => false,
        }
    }
}

/// Conversion between operators and coefficient vectors in a given ring.
pub trait OperatorRing: CoeffRing + Sized {
    fn from_operator(op: &ShiftOperator) -> Option<Vec<Self>>;
    fn into_operator(v: Vec<Self>) -> Result<ShiftOperator>;
}

impl OperatorRing for Rational {
    fn from_operator(op: &ShiftOperator) -> Option<Vec<Self>> {
        op.const_coeffs()
    }
    fn into_operator(v: Vec<Self>) -> Result<ShiftOperator> {
        ShiftOperator::constant(v)
    }
}

impl OperatorRing for Poly<Rational> {
    fn from_operator(op: &ShiftOperator) -> Option<Vec<Self>> {
        op.poly_coeffs()
    }
    fn into_operator(v: Vec<Self>) -> Result<ShiftOperator> {
        ShiftOperator::poly(v)
    }
}

impl OperatorRing for ExpPoly {
    fn from_operator(op: &ShiftOperator) -> Option<Vec<Self>> {
        Some(op.exp_coeffs())
    }
    fn into_operator(v: Vec<Self>) -> Result<ShiftOperator> {
        ShiftOperator::exppoly(v)
    }
}

/// Operator plus initial values. `initials[0]` is the value at index `start`
/// and the relation is asserted for every `n >= validity_offset`, so
/// `initials.len() == order + validity_offset - start`.
#[derive(Clone, PartialEq)]
pub struct RecurrenceSystem {
    pub operator: ShiftOperator,
    pub initials: Vec<Rational>,
    pub start: i64,
    pub validity_offset: i64,
}

impl RecurrenceSystem {
    pub fn new(
        operator: ShiftOperator,
        initials: Vec<Rational>,
        start: i64,
        validity_offset: i64,
    ) -> Result<Self> {
        if validity_offset < start {
            return Err(Error::InvalidInput(
                "validity offset precedes the first initial".into(),
            ));
        }
        let need = operator.order() as i64 + validity_offset - start;
        if initials.len() as i64 != need {
            return Err(Error::InvalidInput(format!(
                "expected {need} initial values, got {}",
                initials.len()
            )));
        }
        Ok(RecurrenceSystem {
            operator,
            initials,
            start,
            validity_offset,
        })
    }

    /// System starting at index 0 whose validity offset is chosen from the
    /// leading coefficient; `terms` must contain enough values.
    pub fn from_terms(operator: ShiftOperator, terms: &[Rational]) -> Result<Self> {
        let v = leading_validity_offset(&operator)?;
        let need = operator.order() + v as usize;
        if terms.len() < need {
            return Err(Error::InsufficientData(format!(
                "{need} initial values required"
            )));
        }
        Self::new(operator, terms[..need].to_vec(), 0, v)
    }

    pub fn order(&self) -> usize {
        self.operator.order()
    }

    /// First `count` terms starting at `start`.
    pub fn expand(&self, count: usize) -> Result<Sequence> {
        expand_terms(self, count)
    }

    /// System for `b_n = a_{n+k}`.
    pub fn advance(&self, k: usize) -> Result<Self> {
        let k_i = k as i64;
        let op = self.operator.shift_n(k_i);
        let v = (self.validity_offset - k_i).max(self.start);
        let need = op.order() + (v - self.start) as usize;
        let terms = self.expand(k + need)?;
        Self::new(op, terms.terms[k..k + need].to_vec(), self.start, v)
    }
}

/// Expands `count` terms from `rs.start`. Errors with
/// [`Error::LeadingCoefficientZero`] when a value cannot be determined.
pub fn expand_terms(rs: &RecurrenceSystem, count: usize) -> Result<Sequence> {
    let r = rs.order();
    let mut terms: Vec<Rational> = rs.initials.iter().take(count).cloned().collect();
    let mut n = rs.validity_offset;
    while terms.len() < count {
        let lead = rs.operator.coeff_at(r, n)?;
        if lead.is_zero() {
            return Err(Error::LeadingCoefficientZero(n));
        }
        let base = (n - rs.start) as usize;
        let mut acc = Rational::zero();
        for i in 0..r {
            let a = &terms[base + i];
            if !a.is_zero() {
                acc += rs.operator.coeff_at(i, n)? * a;
            }
        }
        terms.push(-acc / lead);
        n += 1;
    }
    Ok(Sequence::new(terms, rs.start))
}

/// Checks `op` against `s` for every `n >= from` with all needed terms stored.
/// Returns the first failing index, or `None` when all checks pass.
pub fn verify_annihilates(op: &ShiftOperator, s: &Sequence, from: i64) -> Result<Option<i64>> {
    let from = from.max(s.offset);
    let last = s.last_index() - op.order() as i64;
    if last < from {
        return Err(Error::InsufficientData("no index left to check".into()));
    }
    for n in from..=last {
        let v = op.apply_at(s, n)?.expect("terms present");
        if !v.is_zero() {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

/// Number of probed indices for exponential-polynomial leading coefficients.
pub const LEADING_PROBE: i64 = 200;

/// First `n0 >= 0` such that the leading coefficient is nonzero for all
/// `n >= n0`. For exponential-polynomial coefficients zeros are probed on
/// `0..=200` and periodic vanishing is rejected.
pub fn leading_validity_offset(op: &ShiftOperator) -> Result<i64> {
    match op {
        ShiftOperator::Constant(_) => Ok(0),
        ShiftOperator::PolyInN(c) => Ok(first_index_past_roots(c.last().unwrap()) as i64),
        ShiftOperator::ExpPolyCoeff(c) => exp_leading_offset(c.last().unwrap()),
    }
}

pub(crate) fn exp_leading_offset(lead: &ExpPoly) -> Result<i64> {
    if let Some(p) = lead.as_rational_poly() {
        return Ok(first_index_past_roots(&p) as i64);
    }
    if lead.vanishes_on_residue_class(6) {
        return Err(Error::LeadingAlwaysZero(0));
    }
    let mut last = -1;
    for n in 0..=LEADING_PROBE {
        if lead.eval(n).is_zero() {
            last = n;
        }
    }
    Ok(last + 1)
}

impl fmt::Debug for ShiftOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::format::text::format_operator(self))
    }
}

impl fmt::Display for ShiftOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::format::text::format_operator(self))
    }
}

impl fmt::Debug for RecurrenceSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "RecurrenceSystem {{ {}, initials {:?}, start {}, valid from {} }}",
            self.operator,
            self.initials
                .iter()
                .map(crate::exact::rational::format_rational)
                .collect::<Vec<_>>(),
            self.start,
            self.validity_offset
        )
    }
}
