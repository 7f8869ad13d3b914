//! Closed forms: binomial expansions of polynomial sequences and
//! exponential-polynomial solutions of constant-coefficient recurrences.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exact::rational::format_rational;
use crate::exact::roots::{quadratic_factor, rational_roots, squarefree_decomposition};
use crate::exact::{ExpPoly, Matrix, Nf, NumberField, Poly, Rational, Ring};
use crate::guess::guess_polynomial;
use crate::seq::{expand_terms, RecurrenceSystem, Sequence, ShiftOperator};

/// `a_n = sum_i d_i * binom(n, i)`.
#[derive(Clone, Debug, PartialEq)]
pub struct BinomialForm {
    pub coefficients: Vec<Rational>,
}

impl BinomialForm {
    pub fn eval(&self, n: i64) -> Rational {
        let mut acc = Rational::zero();
        let mut binom = Rational::one();
        for (i, d) in self.coefficients.iter().enumerate() {
            acc += d * &binom;
            binom = binom * Rational::from_i64(n - i as i64) / Rational::from_i64(i as i64 + 1);
        }
        acc
    }
}

impl fmt::Display for BinomialForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coefficients
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, d)| !d.is_zero())
            .map(|(i, d)| {
                if d.is_one() {
                    format!("C(n,{i})")
                } else {
                    format!("{}*C(n,{i})", format_rational(d))
                }
            })
            .collect();
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

/// Finite differences at the first index of a sequence fitting a polynomial
/// of degree at most `k`. The sequence is taken to start at `n = 0`.
pub fn poly_binomial_form(s: &Sequence, k: usize) -> Result<BinomialForm> {
    let fitted = guess_polynomial(s, k).map_err(|_| Error::NotPolynomial(k))?;
    let deg = fitted
        .polynomial
        .as_ref()
        .and_then(|p| p.degree())
        .unwrap_or(0);
    let mut row: Vec<Rational> = s.terms[..=deg.min(s.len() - 1)].to_vec();
    let mut out = Vec::with_capacity(row.len());
    while !row.is_empty() {
        out.push(row[0].clone());
        row = row.windows(2).map(|w| &w[1] - &w[0]).collect();
    }
    while out.len() > 1 && out.last().is_some_and(|d| d.is_zero()) {
        out.pop();
    }
    Ok(BinomialForm { coefficients: out })
}

/// Closed form of a constant-coefficient recurrence. `expression` equals the
/// sequence for every index from `valid_from` on; earlier values (caused by a
/// zero characteristic root or a late validity offset) are kept in
/// `exceptional`, starting at the system's first index.
#[derive(Clone, Debug, PartialEq)]
pub struct CFiniteClosedForm {
    pub expression: ExpPoly,
    pub valid_from: i64,
    pub exceptional: Vec<Rational>,
}

/// Roots of a characteristic polynomial with `T(0) != 0`, each with its
/// multiplicity; irrational roots come in conjugate pairs over one quadratic
/// field.
pub(crate) fn characteristic_roots(t: &Poly<Rational>) -> Result<Vec<(Nf, usize)>> {
    let mut roots: Vec<(Nf, usize)> = Vec::new();
    let mut rest = t.monic();
    for (r, m) in rational_roots(t) {
        rest = rest
            .exact_div(&Poly::new(vec![-r.clone(), Rational::one()]).pow(m as u32))
            .unwrap();
        roots.push((Nf::rational(r), m));
    }
    let mut quadratics: Vec<(Poly<Rational>, usize)> = Vec::new();
    for (f, m) in squarefree_decomposition(&rest) {
        let mut f = f;
        while f.deg0() > 2 {
            let Some(g) = quadratic_factor(&f) else {
                return Err(Error::UnsupportedFactorization(format!(
                    "irreducible factor {} of degree {}",
                    f.to_string_var("N"),
                    f.deg0()
                )));
            };
            f = f.exact_div(&g).unwrap();
            quadratics.push((g, m));
        }
        if f.deg0() == 2 {
            quadratics.push((f.monic(), m));
        } else if f.deg0() == 1 {
            unreachable!("rational roots removed");
        }
    }
    let mut field: Option<Arc<NumberField>> = None;
    for (g, m) in quadratics {
        let k = NumberField::new(&g)?;
        if let Some(f0) = &field {
            if f0.minpoly() != g {
                return Err(Error::UnsupportedFactorization(format!(
                    "roots in two different quadratic fields ({} and {})",
                    f0.minpoly().to_string_var("t"),
                    g.to_string_var("t")
                )));
            }
        }
        let t = k.generator();
        let conj = t.conjugate();
        field = Some(k);
        roots.push((t, m));
        roots.push((conj, m));
    }
    Ok(roots)
}

fn strip_zero_roots(c: &[Rational]) -> (Vec<Rational>, usize) {
    let v = c.iter().take_while(|x| x.is_zero()).count();
    (c[v..].to_vec(), v)
}

/// Exponential-polynomial closed form of a constant-coefficient recurrence.
pub fn cfinite_closed_form(rs: &RecurrenceSystem) -> Result<CFiniteClosedForm> {
    let Some(c) = rs.operator.const_coeffs() else {
        return Err(Error::InvalidInput(
            "constant-coefficient recurrence expected".into(),
        ));
    };
    let (reduced, zeros) = strip_zero_roots(&c);
    let t = Poly::new(reduced);
    let r = t.deg0();
    let w = rs.validity_offset + zeros as i64;
    let skip = (w - rs.start) as usize;
    let terms = expand_terms(rs, skip + r + 8)?.terms;
    let roots = characteristic_roots(&t)?;

    // unknowns c_{alpha, j} for n^j alpha^n
    let unknowns: Vec<(Nf, usize)> = roots
        .iter()
        .flat_map(|(a, m)| (0..*m).map(move |j| (a.clone(), j)))
        .collect();
    debug_assert_eq!(unknowns.len(), r);
    let expression = if r == 0 {
        ExpPoly::zero()
    } else {
        let rows: Vec<Vec<Nf>> = (0..r as i64)
            .map(|i| {
                let n = w + i;
                unknowns
                    .iter()
                    .map(|(a, j)| Nf::from_i64(n).pow(*j as u64).times(&a.powi(n)))
                    .collect()
            })
            .collect();
        let m = Matrix::from_rows(rows);
        let rhs: Vec<Nf> = terms[skip..skip + r]
            .iter()
            .map(|x| Nf::rational(x.clone()))
            .collect();
        let sol = m
            .solve(&rhs)
            .ok_or_else(|| Error::InvalidInput("singular initial-value system".into()))?;
        debug_assert_eq!(m.rank(), r);
        let mut by_base: BTreeMap<Nf, Vec<Nf>> = BTreeMap::new();
        for ((a, j), v) in unknowns.iter().zip(sol) {
            let e = by_base.entry(a.clone()).or_default();
            e.resize(j + 1, Nf::zero());
            e[*j] = v;
        }
        by_base.into_iter().fold(ExpPoly::zero(), |acc, (a, cs)| {
            acc.add(&ExpPoly::term(a, Poly::new(cs)))
        })
    };
    for (i, x) in terms.iter().enumerate().skip(skip) {
        let n = rs.start + i as i64;
        if expression.eval(n) != Nf::rational(x.clone()) {
            return Err(Error::InvalidInput(format!(
                "closed form disagrees with the recurrence at n = {n}"
            )));
        }
    }
    Ok(CFiniteClosedForm {
        expression,
        valid_from: w,
        exceptional: terms[..skip].to_vec(),
    })
}

/// Constant-coefficient recurrence with initial values at `0..order` for an
/// exponential polynomial; conjugate bases share one quadratic factor.
pub fn closed_form_to_recurrence(e: &ExpPoly) -> Result<RecurrenceSystem> {
    let mut factors: BTreeMap<Vec<Rational>, usize> = BTreeMap::new();
    for (a, p) in e.terms() {
        let m = a.minimal_polynomial().into_coeffs();
        let k = p.deg0() + 1;
        let slot = factors.entry(m).or_insert(0);
        *slot = (*slot).max(k);
    }
    let t = factors
        .iter()
        .fold(Poly::constant(Rational::one()), |acc, (m, k)| {
            acc.mul(&Poly::new(m.clone()).pow(*k as u32))
        });
    let r = t.deg0();
    let initials = (0..r as i64)
        .map(|n| {
            e.eval_rational(n)
                .ok_or_else(|| Error::NonRational(format!("value at n = {n}")))
        })
        .collect::<Result<Vec<_>>>()?;
    RecurrenceSystem::new(ShiftOperator::constant(t.into_coeffs())?, initials, 0, 0)
}
