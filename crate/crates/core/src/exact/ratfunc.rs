//! Rational functions over Q in one variable, kept in lowest terms with a
//! monic denominator.

use std::fmt;

use super::poly::Poly;
use super::rational::Rational;
use super::ring::{Field, Ring};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Poly<Rational>,
    den: Poly<Rational>,
}

impl RatFunc {
    pub fn new(num: Poly<Rational>, den: Poly<Rational>) -> Self {
        assert!(!den.is_zero(), "rational function with zero denominator");
        if num.is_zero() {
            return RatFunc {
                num,
                den: Poly::one(),
            };
        }
        let g = num.gcd(&den);
        let (mut n, mut d) = (num.exact_div(&g).unwrap(), den.exact_div(&g).unwrap());
        let lc = d.leading().recip();
        n = n.scale(&lc);
        d = d.scale(&lc);
        RatFunc { num: n, den: d }
    }

    pub fn from_poly(p: Poly<Rational>) -> Self {
        RatFunc {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn num(&self) -> &Poly<Rational> {
        &self.num
    }

    pub fn den(&self) -> &Poly<Rational> {
        &self.den
    }

    pub fn is_poly(&self) -> bool {
        self.den.deg0() == 0
    }

    /// Value at `x`, or `None` at a pole.
    pub fn eval(&self, x: &Rational) -> Option<Rational> {
        let d = self.den.eval(x);
        if num_traits::Zero::is_zero(&d) {
            None
        } else {
            Some(self.num.eval(x) / d)
        }
    }

    /// `f(x + k)`.
    pub fn shift(&self, k: i64) -> Self {
        RatFunc::new(self.num.shift(k), self.den.shift(k))
    }

    /// `f(m*x)`.
    pub fn dilate(&self, m: u64) -> Self {
        let a = super::rational::q(m as i64);
        let z = super::rational::q(0);
        RatFunc::new(
            self.num.compose_linear(&a, &z),
            self.den.compose_linear(&a, &z),
        )
    }

    pub fn derivative(&self) -> Self {
        let n = self
            .num
            .derivative()
            .mul(&self.den)
            .sub(&self.num.mul(&self.den.derivative()));
        RatFunc::new(n, self.den.mul(&self.den))
    }
}

impl Ring for RatFunc {
    fn zero() -> Self {
        RatFunc {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }
    fn one() -> Self {
        RatFunc {
            num: Poly::one(),
            den: Poly::one(),
        }
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn plus(&self, o: &Self) -> Self {
        if self.den == o.den {
            return RatFunc::new(self.num.add(&o.num), self.den.clone());
        }
        RatFunc::new(
            self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            self.den.mul(&o.den),
        )
    }
    fn minus(&self, o: &Self) -> Self {
        self.plus(&o.negate())
    }
    fn times(&self, o: &Self) -> Self {
        RatFunc::new(self.num.mul(&o.num), self.den.mul(&o.den))
    }
    fn negate(&self) -> Self {
        RatFunc {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }
    fn from_i64(v: i64) -> Self {
        Self::constant(super::rational::q(v))
    }
}

impl Field for RatFunc {
    fn inverse(&self) -> Option<Self> {
        if self.num.is_zero() {
            None
        } else {
            Some(RatFunc::new(self.den.clone(), self.num.clone()))
        }
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({})/({})",
            self.num.to_string_var("n"),
            self.den.to_string_var("n")
        )
    }
}
