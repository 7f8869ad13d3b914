//! Product of D-finite power series: if `A` and `B` satisfy linear ODEs of
//! orders `r` and `s`, every derivative of `AB` lies in the span of
//! `A^(i) B^(j)`, `i < r`, `j < s`, over rational functions in `x`.

use super::space::find_relation;
use crate::error::{Error, Result};
use crate::exact::{Frac, Poly, Rational, Ring};
use crate::genfun::DiffEquation;

type RatX = Frac<Poly<Rational>>;

fn d_dx(f: &RatX) -> RatX {
    let num = f
        .num
        .derivative()
        .times(&f.den)
        .minus(&f.num.times(&f.den.derivative()));
    Frac::new(num, f.den.times(&f.den))
}

/// Row `l` expresses `A^(l)` in the basis `A, ..., A^(r-1)`.
fn derivative_rows(q: &[Poly<Rational>], count: usize) -> Vec<Vec<RatX>> {
    let r = q.len() - 1;
    let top: Vec<RatX> = q[..r]
        .iter()
        .map(|c| Frac::new(c.negate(), q[r].clone()))
        .collect();
    let mut rows: Vec<Vec<RatX>> = Vec::with_capacity(count);
    for l in 0..count {
        if l < r {
            let mut e = vec![Frac::zero(); r];
            e[l] = Frac::one();
            rows.push(e);
            continue;
        }
        let prev = &rows[l - 1];
        let mut e: Vec<RatX> = prev.iter().map(d_dx).collect();
        for i in 0..r {
            if prev[i].is_zero() {
                continue;
            }
            if i + 1 < r {
                e[i + 1] = e[i + 1].plus(&prev[i]);
            } else {
                for (x, t) in e.iter_mut().zip(&top) {
                    *x = x.plus(&prev[i].times(t));
                }
            }
        }
        rows.push(e);
    }
    rows
}

fn plain_coeffs(d: &DiffEquation) -> Result<Vec<Poly<Rational>>> {
    if !d.is_plain() || !d.is_homogeneous() {
        return Err(Error::InvalidInput(
            "homogeneous equation without dilations expected".into(),
        ));
    }
    (0..=d.order())
        .map(|j| {
            d.rational_coeff(j)
                .ok_or_else(|| Error::InvalidInput("rational coefficients expected".into()))
        })
        .collect()
}

fn binomial(n: usize, k: usize) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
}

/// Homogeneous ODE of order at most `rs` satisfied by the product of any
/// solutions of two homogeneous ODEs of orders `r` and `s`.
pub fn holonomic_cauchy(a: &DiffEquation, b: &DiffEquation) -> Result<DiffEquation> {
    let qa = plain_coeffs(a)?;
    let qb = plain_coeffs(b)?;
    let (r, s) = (qa.len() - 1, qb.len() - 1);
    if r == 0 || s == 0 {
        // an order-0 homogeneous equation forces the series to vanish
        return Ok(DiffEquation::holonomic(&[Poly::one()], &Poly::zero())?.normalized());
    }
    let count = r * s + 1;
    let ra = derivative_rows(&qa, count);
    let rb = derivative_rows(&qb, count);
    let rows: Vec<Vec<RatX>> = (0..count)
        .map(|k| {
            let mut row = vec![Frac::zero(); r * s];
            for l in 0..=k {
                let c = Frac::from_ring(Poly::constant(Rational::from_i64(binomial(k, l))));
                for i in 0..r {
                    if ra[l][i].is_zero() {
                        continue;
                    }
                    let ci = c.times(&ra[l][i]);
                    for j in 0..s {
                        if !rb[k - l][j].is_zero() {
                            row[i * s + j] = row[i * s + j].plus(&ci.times(&rb[k - l][j]));
                        }
                    }
                }
            }
            row
        })
        .collect();
    let rel = find_relation(&rows, 0, |_| true)?;
    let mut coeffs = rel.coeffs;
    while coeffs.last().is_some_and(|c| c.is_zero()) {
        coeffs.pop();
    }
    if coeffs.len() - 1 > r * s {
        return Err(Error::BoundViolation(format!(
            "product equation of order {} exceeds {}",
            coeffs.len() - 1,
            r * s
        )));
    }
    Ok(DiffEquation::holonomic(&coeffs, &Poly::zero())?.normalized())
}
