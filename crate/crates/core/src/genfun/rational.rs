//! Rational generating functions of polynomial and C-finite sequences.

use std::fmt;

use crate::error::{Error, Result};
use crate::exact::{Field, Poly, Rational, Ring};
use crate::seq::{expand_terms, CoeffRingKind, RecurrenceSystem, ShiftOperator};

/// `numerator / denominator` in lowest terms with `denominator(0) = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalGF {
    numerator: Poly<Rational>,
    denominator: Poly<Rational>,
}

impl RationalGF {
    pub fn new(numerator: Poly<Rational>, denominator: Poly<Rational>) -> Result<Self> {
        if denominator.is_zero() {
            return Err(Error::InvalidInput("zero denominator".into()));
        }
        let g = numerator.gcd(&denominator);
        let (mut num, mut den) = if g.degree().unwrap_or(0) > 0 {
            (
                numerator.exact_div(&g).unwrap(),
                denominator.exact_div(&g).unwrap(),
            )
        } else {
            (numerator, denominator)
        };
        let d0 = den.coeff(0);
        if d0.is_zero() {
            return Err(Error::DenominatorVanishesAtZero);
        }
        let s = d0.inverse().unwrap();
        num = num.scale(&s);
        den = den.scale(&s);
        Ok(RationalGF {
            numerator: num,
            denominator: den,
        })
    }

    pub fn numerator(&self) -> &Poly<Rational> {
        &self.numerator
    }

    pub fn denominator(&self) -> &Poly<Rational> {
        &self.denominator
    }

    /// First `count` power-series coefficients.
    pub fn series(&self, count: usize) -> Vec<Rational> {
        let d = self.denominator.coeffs();
        let mut out: Vec<Rational> = Vec::with_capacity(count);
        for n in 0..count {
            let mut v = self.numerator.coeff(n);
            for i in 1..d.len().min(n + 1) {
                v -= &d[i] * &out[n - i];
            }
            out.push(v);
        }
        out
    }
}

impl fmt::Display for RationalGF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})/({})", self.numerator, self.denominator)
    }
}

fn binomial(n: u64, k: u64) -> Rational {
    (0..k).fold(Rational::one(), |acc, i| {
        acc * Rational::from_i64((n - i) as i64) / Rational::from_i64((i + 1) as i64)
    })
}

/// Generating function `P(x) / (1 - x)^(k+1)` of `n -> a(n)` for a polynomial
/// `a` of degree `k`.
pub fn genfun_polynomial(a: &Poly<Rational>) -> RationalGF {
    let Some(k) = a.degree() else {
        return RationalGF::new(Poly::zero(), Poly::constant(Rational::one())).unwrap();
    };
    let vals: Vec<Rational> = (0..=k)
        .map(|n| a.eval(&Rational::from_i64(n as i64)))
        .collect();
    let mut num = vec![Rational::zero(); k + 1];
    for n in 0..=k {
        for i in 0..=n {
            let b = binomial(k as u64 + 1, i as u64);
            let term = b * &vals[n - i];
            if i % 2 == 0 {
                num[n] += term;
            } else {
                num[n] -= term;
            }
        }
    }
    let den = Poly::new(vec![Rational::one(), -Rational::one()]).pow(k as u32 + 1);
    RationalGF::new(Poly::new(num), den).unwrap()
}

/// Generating function of a constant-coefficient recurrence system whose
/// first initial value sits at index 0.
///
/// The denominator is the reversed characteristic polynomial. The numerator is
/// the product of the denominator with the series truncated below degree
/// `order + validity_offset`, which for `validity_offset = 0` is the classical
/// double sum over initial values.
pub fn genfun_cfinite(rs: &RecurrenceSystem) -> Result<RationalGF> {
    let Some(c) = rs.operator.const_coeffs() else {
        return Err(Error::InvalidInput(
            "constant-coefficient recurrence expected".into(),
        ));
    };
    if rs.start != 0 {
        return Err(Error::InvalidInput(
            "initial values must start at index 0".into(),
        ));
    }
    let r = c.len() - 1;
    let den = Poly::new(c).reverse(r);
    let cut = r + rs.validity_offset as usize;
    let terms = expand_terms(rs, cut)?.terms;
    let num = den.mul(&Poly::new(terms)).truncate(cut);
    RationalGF::new(num, den)
}

/// Recurrence system with constant coefficients for the series of `g`.
/// A polynomial part (numerator degree at least the denominator degree) is
/// absorbed into a larger validity offset.
pub fn cfinite_from_rational(g: &RationalGF) -> Result<RecurrenceSystem> {
    let den = &g.denominator;
    let r = den.deg0();
    let coeffs = den.reverse(r).into_coeffs();
    let lead = coeffs[r].clone();
    let coeffs: Vec<Rational> = coeffs.iter().map(|c| c / &lead).collect();
    let v = match g.numerator.degree() {
        Some(d) if d >= r => d - r + 1,
        _ => 0,
    };
    let op = ShiftOperator::constant(coeffs)?;
    debug_assert_eq!(op.ring(), CoeffRingKind::Constant);
    RecurrenceSystem::new(op, g.series(r + v), 0, v as i64)
}
