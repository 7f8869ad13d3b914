//! Helpers around arbitrary-precision rationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::ring::{Field, Ring};

pub type Rational = BigRational;

pub fn q(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn qq(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn from_bigint(v: BigInt) -> Rational {
    Rational::from_integer(v)
}

/// Parses `p`, `-p` or `p/q`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some((a, b)) = s.split_once('/') {
        let n: BigInt = a.trim().parse().ok()?;
        let d: BigInt = b.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        Some(Rational::new(n, d))
    } else {
        s.parse::<BigInt>().ok().map(Rational::from_integer)
    }
}

pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Natural logarithm of |x| for a big integer, without overflowing `f64`.
pub fn ln_abs_int(x: &BigInt) -> f64 {
    let x = x.abs();
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 60;
    let top: BigInt = &x >> shift;
    top.to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
}

/// Natural logarithm of |r|; `-inf` for zero.
pub fn ln_abs(r: &Rational) -> f64 {
    if Zero::is_zero(r) {
        return f64::NEG_INFINITY;
    }
    ln_abs_int(r.numer()) - ln_abs_int(r.denom())
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        let sign = if r.is_negative() { -1.0 } else { 1.0 };
        sign * ln_abs(r).exp()
    })
}

/// Integer primitive form of a rational vector: multiplies by the lcm of the
/// denominators and divides by the gcd of the numerators. Signs are kept.
pub fn clear_denominators(v: &[Rational]) -> Vec<BigInt> {
    let mut l = BigInt::one();
    for x in v {
        l = l.lcm(x.denom());
    }
    let ints: Vec<BigInt> = v
        .iter()
        .map(|x| (x * Rational::from_integer(l.clone())).to_integer())
        .collect();
    let mut g = BigInt::zero();
    for x in &ints {
        g = g.gcd(x);
    }
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}

impl Ring for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn negate(&self) -> Self {
        -self
    }
    fn from_i64(v: i64) -> Self {
        q(v)
    }
}

impl Field for Rational {
    fn inverse(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
}
