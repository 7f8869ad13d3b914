//! Rational roots and square-free decomposition over Q.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::poly::Poly;
use super::rational::{clear_denominators, Rational};

/// Positive divisors of `n` (by trial division).
fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    if n.is_zero() {
        return vec![];
    }
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            small.push(d.clone());
            let other = &n / &d;
            if other != d {
                large.push(other);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

/// Distinct rational roots with multiplicities, in increasing order.
pub fn rational_roots(p: &Poly<Rational>) -> Vec<(Rational, usize)> {
    if p.degree().unwrap_or(0) == 0 {
        return vec![];
    }
    let mut out = Vec::new();
    let mut cur = p.clone();
    let mut zero_mult = 0;
    while cur.coeff(0).is_zero() && !cur.is_zero() {
        cur = Poly::new(cur.coeffs()[1..].to_vec());
        zero_mult += 1;
    }
    if zero_mult > 0 {
        out.push((Rational::zero(), zero_mult));
    }
    if cur.deg0() > 0 {
        let ints = clear_denominators(cur.coeffs());
        let a0 = ints[0].clone();
        let an = ints.last().unwrap().clone();
        let ps = divisors(&a0);
        let qs = divisors(&an);
        let mut cands: Vec<Rational> = Vec::new();
        for pn in &ps {
            for qd in &qs {
                let r = Rational::new(pn.clone(), qd.clone());
                cands.push(r.clone());
                cands.push(-r);
            }
        }
        cands.sort();
        cands.dedup();
        for c in cands {
            let mut m = 0;
            loop {
                if cur.deg0() == 0 {
                    break;
                }
                let lin = Poly::new(vec![-c.clone(), Rational::one()]);
                match cur.exact_div(&lin) {
                    Some(qt) => {
                        cur = qt;
                        m += 1;
                    }
                    None => break,
                }
            }
            if m > 0 {
                out.push((c, m));
            }
        }
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

/// Nonnegative integer roots of `p`.
pub fn nonnegative_integer_roots(p: &Poly<Rational>) -> Vec<u64> {
    rational_roots(p)
        .into_iter()
        .filter(|(r, _)| r.is_integer() && !r.is_negative())
        .filter_map(|(r, _)| r.to_integer().to_u64())
        .collect()
}

pub fn is_squarefree(p: &Poly<Rational>) -> bool {
    p.gcd(&p.derivative()).deg0() == 0
}

/// Yun's square-free decomposition of a nonzero polynomial: monic factors
/// `f_i` (nonconstant) with multiplicities such that `p = c * prod f_i^i`.
pub fn squarefree_decomposition(p: &Poly<Rational>) -> Vec<(Poly<Rational>, usize)> {
    let mut out = Vec::new();
    if p.deg0() == 0 {
        return out;
    }
    let f = p.monic();
    let a0 = f.gcd(&f.derivative());
    let mut b = f.exact_div(&a0).unwrap();
    let mut c = f.derivative().exact_div(&a0).unwrap();
    let mut d = c.sub(&b.derivative());
    let mut i = 1;
    while b.deg0() > 0 {
        let a = b.gcd(&d);
        if a.deg0() > 0 {
            out.push((a.clone(), i));
        }
        b = b.exact_div(&a).unwrap();
        c = d.exact_div(&a).unwrap();
        d = c.sub(&b.derivative());
        i += 1;
    }
    let _ = c;
    out
}

/// Largest absolute value at a sample point for which divisor enumeration in
/// [`quadratic_factor`] is attempted.
const KRONECKER_LIMIT: i64 = 1 << 40;

/// A monic quadratic factor over Q of a polynomial without rational roots,
/// found by Kronecker's method on the values at -1, 0 and 1. `None` when
/// there is none or the values are too large to enumerate.
pub fn quadratic_factor(p: &Poly<Rational>) -> Option<Poly<Rational>> {
    if p.deg0() < 4 {
        return None;
    }
    let ints = clear_denominators(p.coeffs());
    let ip = Poly::new(
        ints.iter()
            .map(|c| Rational::from_integer(c.clone()))
            .collect(),
    );
    let vals: Vec<BigInt> = [-1i64, 0, 1]
        .iter()
        .map(|&x| {
            ip.eval(&Rational::from_integer(BigInt::from(x)))
                .to_integer()
        })
        .collect();
    if vals
        .iter()
        .any(|v| v.is_zero() || v.abs() > BigInt::from(KRONECKER_LIMIT))
    {
        return None;
    }
    let signed = |v: &BigInt| -> Vec<BigInt> {
        divisors(v)
            .into_iter()
            .flat_map(|d| [d.clone(), -d])
            .collect()
    };
    let (dm, d0, d1) = (signed(&vals[0]), signed(&vals[1]), signed(&vals[2]));
    let two = BigInt::from(2);
    for c in &d0 {
        for g1 in &d1 {
            for gm in &dm {
                let s = g1 + gm;
                let t = g1 - gm;
                if !(&s % &two).is_zero() || !(&t % &two).is_zero() {
                    continue;
                }
                let a = &s / &two - c;
                if a.is_zero() || a.is_negative() {
                    continue;
                }
                let b = &t / &two;
                let g = Poly::new(vec![
                    Rational::from_integer(c.clone()),
                    Rational::from_integer(b),
                    Rational::from_integer(a),
                ]);
                if p.exact_div(&g).is_some() {
                    return Some(g.monic());
                }
            }
        }
    }
    None
}

/// Smallest integer `>= ` the largest nonnegative root plus one, i.e. the first
/// `n0` such that `p(n) != 0` for all integers `n >= n0`.
pub fn first_index_past_roots(p: &Poly<Rational>) -> u64 {
    nonnegative_integer_roots(p)
        .into_iter()
        .max()
        .map_or(0, |r| r + 1)
}
