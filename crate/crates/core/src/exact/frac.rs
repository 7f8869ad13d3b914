//! Coefficient rings for recurrences in `n` and their fraction fields.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Signed;

use super::exppoly::ExpPoly;
use super::numfield::Nf;
use super::poly::Poly;
use super::rational::Rational;
use super::ring::{Field, Ring};

/// A commutative ring of sequences indexed by `n` (constants, polynomials in
/// `n`, exponential polynomials) supporting index substitutions.
pub trait CoeffRing: Ring + Send + Sync {
    /// `c(n + k)`.
    fn shift_n(&self, k: i64) -> Self;
    /// `c(m * n)`.
    fn dilate_n(&self, m: u64) -> Self;
    /// Value at an integer point.
    fn eval_nf(&self, n: i64) -> Nf;
    /// Exact quotient when one can be found.
    fn exact_quotient(&self, d: &Self) -> Option<Self>;
    /// Polynomial degree in `n`.
    fn degree_n(&self) -> usize;
    /// Cancels detectable common factors of a fraction.
    fn reduce_fraction(num: &mut Self, den: &mut Self);
    /// A common multiple of the given denominators.
    fn common_multiple(dens: &[Self]) -> Self {
        let mut acc = Self::one();
        for d in dens {
            if d.exact_quotient(&acc).is_some() {
                acc = d.clone();
            } else if acc.exact_quotient(d).is_none() {
                acc = acc.times(d);
            }
        }
        acc
    }
    /// Removes common content from a coefficient vector and fixes its sign so
    /// the last nonzero entry is "positive".
    fn normalize_vector(v: &mut [Self]);
}

impl CoeffRing for Rational {
    fn shift_n(&self, _: i64) -> Self {
        self.clone()
    }
    fn dilate_n(&self, _: u64) -> Self {
        self.clone()
    }
    fn eval_nf(&self, _: i64) -> Nf {
        Nf::rational(self.clone())
    }
    fn exact_quotient(&self, d: &Self) -> Option<Self> {
        self.divide(d)
    }
    fn degree_n(&self) -> usize {
        0
    }
    fn reduce_fraction(num: &mut Self, den: &mut Self) {
        *num = &*num / &*den;
        *den = Rational::one();
    }
    fn common_multiple(_: &[Self]) -> Self {
        Rational::one()
    }
    fn normalize_vector(v: &mut [Self]) {
        if let Some(top) = v.iter().rev().find(|x| !x.is_zero()).cloned() {
            for x in v.iter_mut() {
                *x = &*x / &top;
            }
        }
    }
}

/// Divides an integer-valued rational polynomial vector by its content.
fn primitive_rational_polys(v: &mut [Poly<Rational>]) {
    let mut l = BigInt::from(1);
    for p in v.iter() {
        for c in p.coeffs() {
            l = l.lcm(c.denom());
        }
    }
    let mut g = BigInt::from(0);
    for p in v.iter() {
        for c in p.coeffs() {
            g = g.gcd(&(c * Rational::from_integer(l.clone())).to_integer());
        }
    }
    if g == BigInt::from(0) {
        return;
    }
    let s = Rational::new(l, g);
    for p in v.iter_mut() {
        *p = p.scale(&s);
    }
}

impl CoeffRing for Poly<Rational> {
    fn shift_n(&self, k: i64) -> Self {
        self.shift(k)
    }
    fn dilate_n(&self, m: u64) -> Self {
        self.compose_linear(&Rational::from_i64(m as i64), &Rational::zero())
    }
    fn eval_nf(&self, n: i64) -> Nf {
        Nf::rational(self.eval(&Rational::from_i64(n)))
    }
    fn exact_quotient(&self, d: &Self) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        self.exact_div(d)
    }
    fn degree_n(&self) -> usize {
        self.deg0()
    }
    fn reduce_fraction(num: &mut Self, den: &mut Self) {
        if num.is_zero() {
            *den = Poly::one();
            return;
        }
        let g = num.gcd(den);
        let lc = den.exact_div(&g).unwrap().leading();
        *num = num.exact_div(&g).unwrap().scale(&lc.recip());
        *den = den.exact_div(&g).unwrap().scale(&lc.recip());
    }
    fn common_multiple(dens: &[Self]) -> Self {
        dens.iter().fold(Poly::one(), |acc, d| acc.lcm(d))
    }
    fn normalize_vector(v: &mut [Self]) {
        let g = v.iter().fold(Poly::zero(), |acc, p| acc.gcd(p));
        if g.is_zero() {
            return;
        }
        for p in v.iter_mut() {
            *p = p.exact_div(&g).unwrap();
        }
        primitive_rational_polys(v);
        if let Some(top) = v.iter().rev().find(|p| !p.is_zero()) {
            if top.leading().is_negative() {
                for p in v.iter_mut() {
                    *p = p.neg();
                }
            }
        }
    }
}

impl CoeffRing for ExpPoly {
    fn shift_n(&self, k: i64) -> Self {
        self.shift(k)
    }
    fn dilate_n(&self, m: u64) -> Self {
        self.dilate(m, 0)
    }
    fn eval_nf(&self, n: i64) -> Nf {
        self.eval(n)
    }
    fn exact_quotient(&self, d: &Self) -> Option<Self> {
        self.exact_div(d)
    }
    fn degree_n(&self) -> usize {
        self.degree()
    }
    fn reduce_fraction(num: &mut Self, den: &mut Self) {
        if num.is_zero() {
            *den = ExpPoly::one();
            return;
        }
        if let Some(q) = num.exact_div(den) {
            *num = q;
            *den = ExpPoly::one();
        } else if let Some(q) = den.exact_div(num) {
            *num = ExpPoly::one();
            *den = q;
        }
    }
    fn normalize_vector(v: &mut [Self]) {
        // Repeatedly divide through by an entry that divides all others,
        // as long as that makes the vector strictly smaller. Units are skipped:
        // dividing by `b^n` only relabels bases and never terminates.
        let size = |v: &[ExpPoly]| {
            v.iter()
                .map(|x| x.term_count() * (x.degree() + 1))
                .sum::<usize>()
        };
        loop {
            let mut order: Vec<usize> = (0..v.len()).filter(|&i| !v[i].is_zero()).collect();
            order.sort_by_key(|&i| (v[i].term_count(), v[i].degree()));
            let mut changed = false;
            for &i in &order {
                let d = v[i].clone();
                if d.is_unit() {
                    continue;
                }
                let qs: Option<Vec<ExpPoly>> = v.iter().map(|x| x.exact_div(&d)).collect();
                if let Some(qs) = qs.filter(|qs| size(qs) < size(v)) {
                    v.clone_from_slice(&qs);
                    changed = true;
                    break;
                }
            }
            if !changed {
                break;
            }
        }
        let Some(top) = v.iter().rev().find(|x| !x.is_zero()).cloned() else {
            return;
        };
        let scale = match top.as_constant() {
            Some(c) => c.inverse().unwrap(),
            None => {
                let lead = top.terms().last().map(|(_, p)| p.leading()).unwrap();
                if lead.first_component().is_negative() {
                    Nf::from_i64(-1)
                } else {
                    Nf::one()
                }
            }
        };
        for x in v.iter_mut() {
            *x = x.scale(&scale);
        }
    }
}

/// Fraction `num / den` over a coefficient ring. Equality is decided by
/// cross-multiplication, so representations need not be reduced.
#[derive(Clone, Debug)]
pub struct Frac<R> {
    pub num: R,
    pub den: R,
}

impl<R: CoeffRing> Frac<R> {
    pub fn new(mut num: R, mut den: R) -> Self {
        assert!(!den.is_zero(), "fraction with zero denominator");
        R::reduce_fraction(&mut num, &mut den);
        Frac { num, den }
    }

    pub fn from_ring(r: R) -> Self {
        Frac {
            num: r,
            den: R::one(),
        }
    }

    pub fn shift_n(&self, k: i64) -> Self {
        Frac {
            num: self.num.shift_n(k),
            den: self.den.shift_n(k),
        }
    }

    pub fn dilate_n(&self, m: u64) -> Self {
        Frac {
            num: self.num.dilate_n(m),
            den: self.den.dilate_n(m),
        }
    }

    pub fn eval_nf(&self, n: i64) -> Option<Nf> {
        self.num.eval_nf(n).divide(&self.den.eval_nf(n))
    }
}

impl<R: CoeffRing> PartialEq for Frac<R> {
    fn eq(&self, o: &Self) -> bool {
        self.num.times(&o.den) == o.num.times(&self.den)
    }
}

impl<R: CoeffRing> Ring for Frac<R> {
    fn zero() -> Self {
        Frac {
            num: R::zero(),
            den: R::one(),
        }
    }
    fn one() -> Self {
        Frac {
            num: R::one(),
            den: R::one(),
        }
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn plus(&self, o: &Self) -> Self {
        if self.num.is_zero() {
            return o.clone();
        }
        if o.num.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            return Frac::new(self.num.plus(&o.num), self.den.clone());
        }
        Frac::new(
            self.num.times(&o.den).plus(&o.num.times(&self.den)),
            self.den.times(&o.den),
        )
    }
    fn minus(&self, o: &Self) -> Self {
        self.plus(&o.negate())
    }
    fn times(&self, o: &Self) -> Self {
        if self.num.is_zero() || o.num.is_zero() {
            return Self::zero();
        }
        Frac::new(self.num.times(&o.num), self.den.times(&o.den))
    }
    fn negate(&self) -> Self {
        Frac {
            num: self.num.negate(),
            den: self.den.clone(),
        }
    }
    fn from_i64(v: i64) -> Self {
        Self::from_ring(R::from_i64(v))
    }
}

impl<R: CoeffRing> Field for Frac<R> {
    fn inverse(&self) -> Option<Self> {
        if self.num.is_zero() {
            None
        } else {
            Some(Frac::new(self.den.clone(), self.num.clone()))
        }
    }
}
