//! Algebraic number fields `Q[t]/(m(t))` and their elements.
//!
//! An element whose representation is a constant is stored without a field,
//! so rationals compare equal no matter which field produced them.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_traits::Signed;

use super::poly::Poly;
use super::rational::{format_rational, q, Rational};
use super::ring::{Field, Ring};
use super::roots::{is_squarefree, rational_roots};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NumberField {
    /// Monic defining polynomial, coefficients low to high.
    minpoly: Vec<Rational>,
}

impl NumberField {
    /// Builds `Q[t]/(m)`. `m` is made monic; it must have degree at least two,
    /// no rational roots and no repeated factors.
    pub fn new(m: &Poly<Rational>) -> Result<Arc<Self>> {
        let d = m.degree().unwrap_or(0);
        if d < 2 {
            return Err(Error::UnsupportedField(format!(
                "defining polynomial {} has degree < 2",
                m.to_string_var("t")
            )));
        }
        if !rational_roots(m).is_empty() || !is_squarefree(m) {
            return Err(Error::UnsupportedField(format!(
                "defining polynomial {} is reducible",
                m.to_string_var("t")
            )));
        }
        Ok(Arc::new(NumberField {
            minpoly: m.monic().into_coeffs(),
        }))
    }

    pub fn minpoly(&self) -> Poly<Rational> {
        Poly::new(self.minpoly.clone())
    }

    pub fn minpoly_coeffs(&self) -> &[Rational] {
        &self.minpoly
    }

    pub fn degree(&self) -> usize {
        self.minpoly.len() - 1
    }

    /// The class of `t`.
    pub fn generator(self: &Arc<Self>) -> Nf {
        Nf::in_field(self, vec![q(0), q(1)])
    }
}

impl fmt::Debug for NumberField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q[t]/({})", self.minpoly().to_string_var("t"))
    }
}

/// An element of a number field (or of Q when `field` is `None`).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Nf {
    field: Option<Arc<NumberField>>,
    rep: Vec<Rational>,
}

impl Nf {
    pub fn rational(r: Rational) -> Self {
        let rep = if r.is_zero() { vec![] } else { vec![r] };
        Nf { field: None, rep }
    }

    /// Element of `field` with representation `rep` (low to high in `t`),
    /// reduced modulo the defining polynomial.
    pub fn in_field(field: &Arc<NumberField>, rep: Vec<Rational>) -> Self {
        let p = Poly::new(rep);
        let r = if p.deg0() >= field.degree() {
            p.divrem(&field.minpoly()).1
        } else {
            p
        };
        Self::normalize(Some(field.clone()), r.into_coeffs())
    }

    fn normalize(field: Option<Arc<NumberField>>, mut rep: Vec<Rational>) -> Self {
        while rep.last().is_some_and(|c| c.is_zero()) {
            rep.pop();
        }
        if rep.len() <= 1 {
            Nf { field: None, rep }
        } else {
            Nf { field, rep }
        }
    }

    pub fn field(&self) -> Option<&Arc<NumberField>> {
        self.field.as_ref()
    }

    pub fn rep(&self) -> &[Rational] {
        &self.rep
    }

    pub fn to_rational(&self) -> Option<Rational> {
        match self.rep.len() {
            0 => Some(Rational::zero()),
            1 if self.field.is_none() => Some(self.rep[0].clone()),
            _ => None,
        }
    }

    pub fn is_rational(&self) -> bool {
        self.field.is_none()
    }

    /// Common field of two elements; `Err` when they live in different
    /// nontrivial fields.
    pub fn join_fields(
        a: Option<&Arc<NumberField>>,
        b: Option<&Arc<NumberField>>,
    ) -> Result<Option<Arc<NumberField>>> {
        match (a, b) {
            (None, x) | (x, None) => Ok(x.cloned()),
            (Some(x), Some(y)) if x == y => Ok(Some(x.clone())),
            (Some(x), Some(y)) => Err(Error::UnsupportedField(format!(
                "elements of {x:?} and {y:?} cannot be combined"
            ))),
        }
    }

    fn pick_field(&self, o: &Self) -> Option<Arc<NumberField>> {
        Self::join_fields(self.field.as_ref(), o.field.as_ref()).unwrap_or_else(|e| panic!("{e}"))
    }

    /// Image under `t -> -m1 - t` for a quadratic field (identity on Q).
    pub fn conjugate(&self) -> Self {
        let Some(f) = &self.field else {
            return self.clone();
        };
        assert_eq!(f.degree(), 2, "conjugation only for quadratic fields");
        let m1 = &f.minpoly[1];
        // a + b t  ->  a + b(-m1 - t)
        let a = &self.rep[0];
        let b = &self.rep[1];
        Nf::in_field(f, vec![a - b * m1, -b.clone()])
    }

    /// Monic minimal polynomial over Q (degree 1 or 2).
    pub fn minimal_polynomial(&self) -> Poly<Rational> {
        match self.to_rational() {
            Some(r) => Poly::new(vec![-r, q(1)]),
            None => {
                let c = self.conjugate();
                let tr = self.plus(&c).to_rational().expect("rational trace");
                let nm = self.times(&c).to_rational().expect("rational norm");
                Poly::new(vec![nm, -tr, q(1)])
            }
        }
    }

    /// Integer power, negative exponents allowed for nonzero elements.
    pub fn powi(&self, e: i64) -> Self {
        if e >= 0 {
            self.pow(e as u64)
        } else {
            self.inverse().expect("inverse of zero").pow((-e) as u64)
        }
    }

    /// Sign of a rational element (0 for irrational ones).
    pub fn rational_signum(&self) -> i32 {
        match self.to_rational() {
            Some(r) if r.is_positive() => 1,
            Some(r) if r.is_negative() => -1,
            _ => 0,
        }
    }

    /// Lowest-order nonzero rational component, used to fix signs.
    pub fn first_component(&self) -> Rational {
        self.rep
            .iter()
            .find(|c| !c.is_zero())
            .cloned()
            .unwrap_or_else(Rational::zero)
    }
}

impl Ring for Nf {
    fn zero() -> Self {
        Nf {
            field: None,
            rep: vec![],
        }
    }
    fn one() -> Self {
        Nf::rational(Rational::one())
    }
    fn is_zero(&self) -> bool {
        self.rep.is_empty()
    }
    fn plus(&self, o: &Self) -> Self {
        let field = self.pick_field(o);
        let n = self.rep.len().max(o.rep.len());
        let z = Rational::zero();
        let rep = (0..n)
            .map(|i| self.rep.get(i).unwrap_or(&z) + o.rep.get(i).unwrap_or(&z))
            .collect();
        Self::normalize(field, rep)
    }
    fn minus(&self, o: &Self) -> Self {
        self.plus(&o.negate())
    }
    fn times(&self, o: &Self) -> Self {
        if self.field.is_none() && o.field.is_none() {
            return match (self.rep.first(), o.rep.first()) {
                (Some(a), Some(b)) => Nf::rational(a * b),
                _ => Nf::zero(),
            };
        }
        let field = self.pick_field(o).expect("field present");
        let p = Poly::new(self.rep.clone()).mul(&Poly::new(o.rep.clone()));
        Nf::in_field(&field, p.into_coeffs())
    }
    fn negate(&self) -> Self {
        Nf {
            field: self.field.clone(),
            rep: self.rep.iter().map(|c| -c).collect(),
        }
    }
    fn from_i64(v: i64) -> Self {
        Nf::rational(q(v))
    }
}

impl Field for Nf {
    fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        match &self.field {
            None => Some(Nf::rational(self.rep[0].recip())),
            Some(f) => {
                let (g, u, _) = Poly::new(self.rep.clone()).xgcd(&f.minpoly());
                debug_assert_eq!(g.deg0(), 0);
                Some(Nf::in_field(f, u.into_coeffs()))
            }
        }
    }
}

impl PartialOrd for Nf {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Total order: rationals first (by value), then by defining polynomial and
/// representation coefficients.
impl Ord for Nf {
    fn cmp(&self, o: &Self) -> Ordering {
        match (&self.field, &o.field) {
            (None, None) => {
                let a = self.rep.first().cloned().unwrap_or_else(Rational::zero);
                let b = o.rep.first().cloned().unwrap_or_else(Rational::zero);
                a.cmp(&b)
            }
            (None, Some(_)) => Ordering::Less,
            (Some(_), None) => Ordering::Greater,
            (Some(f), Some(g)) => f.cmp(g).then_with(|| {
                let n = self.rep.len().max(o.rep.len());
                let z = Rational::zero();
                for i in 0..n {
                    let c = self
                        .rep
                        .get(i)
                        .unwrap_or(&z)
                        .cmp(o.rep.get(i).unwrap_or(&z));
                    if c != Ordering::Equal {
                        return c;
                    }
                }
                Ordering::Equal
            }),
        }
    }
}

impl fmt::Display for Nf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.field, self.to_rational()) {
            (_, Some(r)) => f.write_str(&format_rational(&r)),
            (Some(k), None) => write!(
                f,
                "[{} | {}]",
                Poly::new(self.rep.clone()).to_string_var("t"),
                k.minpoly().to_string_var("t")
            ),
            (None, None) => unreachable!(),
        }
    }
}

impl fmt::Debug for Nf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
