//! Dense univariate polynomials over a ring, coefficients stored low to high.

use std::fmt;

use super::rational::{format_rational, Rational};
use super::ring::{Field, Ring};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly<F> {
    coeffs: Vec<F>,
}

impl<F: Ring> Poly<F> {
    pub fn new(mut coeffs: Vec<F>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: F) -> Self {
        Poly::new(vec![c])
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        Poly::new(vec![F::zero(), F::one()])
    }

    /// `c * x^k`.
    pub fn monomial(c: F, k: usize) -> Self {
        let mut v = vec![F::zero(); k + 1];
        v[k] = c;
        Poly::new(v)
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<F> {
        self.coeffs
    }

    /// Coefficient of `x^i` (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> F {
        self.coeffs.get(i).cloned().unwrap_or_else(F::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to 0.
    pub fn deg0(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn leading(&self) -> F {
        self.coeffs.last().cloned().unwrap_or_else(F::zero)
    }

    pub fn eval(&self, x: &F) -> F {
        let mut acc = F::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.times(x).plus(c);
        }
        acc
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i).plus(&o.coeff(i))).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i).minus(&o.coeff(i))).collect())
    }

    pub fn neg(&self) -> Self {
        Poly {
            coeffs: self.coeffs.iter().map(|c| c.negate()).collect(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![F::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].plus(&a.times(b));
            }
        }
        Poly::new(out)
    }

    pub fn scale(&self, c: &F) -> Self {
        Poly::new(self.coeffs.iter().map(|a| a.times(c)).collect())
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Poly::constant(F::one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Multiplies by `x^k`.
    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![F::zero(); k];
        v.extend(self.coeffs.iter().cloned());
        Poly::new(v)
    }

    /// `p(x)` composed with `a*x + b`.
    pub fn compose_linear(&self, a: &F, b: &F) -> Self {
        let lin = Poly::new(vec![b.clone(), a.clone()]);
        let mut acc = Poly::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(&lin).add(&Poly::constant(c.clone()));
        }
        acc
    }

    /// `p(x + k)`.
    pub fn shift(&self, k: i64) -> Self {
        if k == 0 {
            return self.clone();
        }
        self.compose_linear(&F::one(), &F::from_i64(k))
    }

    pub fn derivative(&self) -> Self {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.times(&F::from_i64(i as i64)))
                .collect(),
        )
    }

    /// Reverses coefficients with respect to degree `d`: `x^d p(1/x)`.
    pub fn reverse(&self, d: usize) -> Self {
        Poly::new((0..=d).map(|i| self.coeff(d - i)).collect())
    }

    /// Truncates to terms of degree `< n`.
    pub fn truncate(&self, n: usize) -> Self {
        Poly::new(self.coeffs.iter().take(n).cloned().collect())
    }

    pub fn map<G: Ring>(&self, f: impl Fn(&F) -> G) -> Poly<G> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }

    /// Falling factorial `(x + t)_j = (x+t)(x+t-1)...(x+t-j+1)`.
    pub fn falling(t: i64, j: usize) -> Self {
        let mut acc = Poly::constant(F::one());
        for i in 0..j as i64 {
            acc = acc.mul(&Poly::new(vec![F::from_i64(t - i), F::one()]));
        }
        acc
    }
}

impl<F: Field> Poly<F> {
    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let dl = d.leading().inverse().expect("nonzero leading coefficient");
        let dd = d.deg0();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut quot = vec![F::zero(); r.len() - dd];
        for i in (dd..r.len()).rev() {
            let c = r[i].times(&dl);
            if c.is_zero() {
                continue;
            }
            for (j, b) in d.coeffs.iter().enumerate() {
                r[i - dd + j] = r[i - dd + j].minus(&c.times(b));
            }
            quot[i - dd] = c;
        }
        (Poly::new(quot), Poly::new(r))
    }

    /// Exact quotient, or `None` when `d` does not divide `self`.
    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        let (q, r) = self.divrem(d);
        r.is_zero().then_some(q)
    }

    pub fn monic(&self) -> Self {
        match self.leading().inverse() {
            Some(inv) => self.scale(&inv),
            None => self.clone(),
        }
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, o: &Self) -> Self {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn lcm(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let g = self.gcd(o);
        self.mul(o).divrem(&g).0.monic()
    }

    /// Extended Euclid: returns `(g, u, v)` with `u*self + v*o = g`, `g` monic.
    pub fn xgcd(&self, o: &Self) -> (Self, Self, Self) {
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (Poly::constant(F::one()), Poly::zero());
        let (mut t0, mut t1) = (Poly::zero(), Poly::constant(F::one()));
        while !r1.is_zero() {
            let (qt, r) = r0.divrem(&r1);
            r0 = std::mem::replace(&mut r1, r);
            let s = s0.sub(&qt.mul(&s1));
            s0 = std::mem::replace(&mut s1, s);
            let t = t0.sub(&qt.mul(&t1));
            t0 = std::mem::replace(&mut t1, t);
        }
        let inv = r0.leading().inverse().unwrap_or_else(F::one);
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }

    /// Interpolates through `(x_i, y_i)` (Newton form).
    pub fn interpolate(points: &[(F, F)]) -> Self {
        let n = points.len();
        let mut dd: Vec<F> = points.iter().map(|p| p.1.clone()).collect();
        for level in 1..n {
            for i in (level..n).rev() {
                let num = dd[i].minus(&dd[i - 1]);
                let den = points[i].0.minus(&points[i - level].0);
                dd[i] = num.divide(&den).expect("distinct nodes");
            }
        }
        let mut acc = Poly::zero();
        for i in (0..n).rev() {
            acc = acc
                .mul(&Poly::new(vec![points[i].0.negate(), F::one()]))
                .add(&Poly::constant(dd[i].clone()));
        }
        acc
    }
}

impl<F: Ring> Ring for Poly<F> {
    fn zero() -> Self {
        Poly::zero()
    }
    fn one() -> Self {
        Poly::constant(F::one())
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
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
        Poly::constant(F::from_i64(v))
    }
}

impl Poly<Rational> {
    /// Human-readable form in the variable `var`, highest degree first.
    pub fn to_string_var(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if num_traits::Zero::is_zero(c) {
                continue;
            }
            let neg = num_traits::Signed::is_negative(c);
            let a = num_traits::Signed::abs(c);
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            let one = num_traits::One::is_one(&a);
            if mono.is_empty() {
                out.push_str(&format_rational(&a));
            } else if one {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{}*{}", format_rational(&a), mono));
            }
        }
        out
    }
}

impl<F: fmt::Debug> fmt::Debug for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly{:?}", self.coeffs)
    }
}

impl fmt::Display for Poly<Rational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_var("x"))
    }
}

/// Shorthand for a rational polynomial from integer coefficients, low to high.
pub fn qpoly(c: &[i64]) -> Poly<Rational> {
    Poly::new(c.iter().map(|&v| super::rational::q(v)).collect())
}
