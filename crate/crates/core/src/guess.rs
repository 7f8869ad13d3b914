//! Fitting polynomial, C-finite and holonomic recurrences to finite data.
//!
//! Every guesser fits the smallest admissible shape on a window of terms and
//! then checks the result on all remaining terms. A shape is only tried when
//! at least `margin` terms are left over for that check.

use crate::error::{Error, Result};
use crate::exact::frac::CoeffRing;
use crate::exact::{Matrix, Poly, Rational, Ring};
use crate::seq::{
    leading_validity_offset, verify_annihilates, RecurrenceSystem, Sequence, ShiftOperator,
};

#[derive(Clone, Debug)]
pub struct GuessOptions {
    /// Minimum number of held-out terms per shape.
    pub margin: usize,
    /// Shape `(order, degree)` the sequence is known to satisfy; when the data
    /// covers the fitting window of this shape the result is marked proven.
    pub known_shape: Option<(usize, usize)>,
}

impl Default for GuessOptions {
    fn default() -> Self {
        GuessOptions {
            margin: 5,
            known_shape: None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct GuessReport {
    pub system: RecurrenceSystem,
    /// Closed form, for polynomial guesses.
    pub polynomial: Option<Poly<Rational>>,
    /// `(order, degree)` of the accepted shape.
    pub shape: (usize, usize),
    pub terms_used_for_fit: usize,
    pub terms_verified: usize,
    pub proven: bool,
    /// Set when the input was identically zero and a trivial answer returned.
    pub degenerate: bool,
}

fn all_zero(s: &Sequence) -> bool {
    s.terms.iter().all(|t| t.is_zero())
}

fn trivial(s: &Sequence, op: ShiftOperator) -> Result<GuessReport> {
    let system = RecurrenceSystem::new(op, vec![Rational::zero()], s.offset, s.offset)?;
    Ok(GuessReport {
        system,
        polynomial: Some(Poly::zero()),
        shape: (1, 0),
        terms_used_for_fit: 1,
        terms_verified: s.len().saturating_sub(1),
        proven: false,
        degenerate: true,
    })
}

/// `(N - 1)^(d+1)` as a constant-coefficient operator.
pub fn difference_operator(d: usize) -> ShiftOperator {
    let p = Poly::new(vec![Rational::from_i64(-1), Rational::one()]).pow(d as u32 + 1);
    ShiftOperator::constant(p.into_coeffs()).unwrap()
}

/// Smallest-degree polynomial `p` with `p(n) = a_n` on all data, degree `<= k`.
pub fn guess_polynomial(s: &Sequence, k: usize) -> Result<GuessReport> {
    if s.len() < k + 2 {
        return Err(Error::InsufficientData(format!(
            "{} terms needed for degree {k}",
            k + 2
        )));
    }
    if all_zero(s) {
        return trivial(
            s,
            ShiftOperator::constant(vec![Rational::zero(), Rational::one()])?,
        );
    }
    let pts: Vec<(Rational, Rational)> = s
        .terms
        .iter()
        .enumerate()
        .map(|(i, t)| (Rational::from_i64(s.offset + i as i64), t.clone()))
        .collect();
    for d in 0..=k {
        let p = Poly::interpolate(&pts[..d + 1]);
        if pts[d + 1..].iter().all(|(x, y)| p.eval(x) == *y) {
            let system = RecurrenceSystem::new(
                difference_operator(d),
                s.terms[..d + 1].to_vec(),
                s.offset,
                s.offset,
            )?;
            return Ok(GuessReport {
                system,
                polynomial: Some(p),
                shape: (d + 1, 0),
                terms_used_for_fit: d + 1,
                terms_verified: s.len() - d - 1,
                proven: false,
                degenerate: false,
            });
        }
    }
    Err(Error::NullSpaceEmpty(format!(
        "no polynomial of degree <= {k}"
    )))
}

/// Smallest-order monic constant-coefficient recurrence of order `<= r`.
pub fn guess_cfinite(s: &Sequence, r: usize, opts: &GuessOptions) -> Result<GuessReport> {
    if s.len() < 2 + opts.margin {
        return Err(Error::InsufficientData(format!(
            "{} terms needed",
            2 + opts.margin
        )));
    }
    if all_zero(s) {
        return trivial(
            s,
            ShiftOperator::constant(vec![Rational::zero(), Rational::one()])?,
        );
    }
    let a = &s.terms;
    let mut skipped = false;
    for d in 1..=r {
        if a.len() < 2 * d + opts.margin {
            skipped = true;
            break;
        }
        let h = Matrix::from_rows((0..d).map(|n| a[n..n + d].to_vec()).collect());
        let rhs: Vec<Rational> = (0..d).map(|n| -a[n + d].clone()).collect();
        let Some(mut c) = h.solve(&rhs) else { continue };
        c.push(Rational::one());
        let op = ShiftOperator::constant(c)?;
        if verify_annihilates(&op, s, s.offset)?.is_none() {
            let system = RecurrenceSystem::new(op, a[..d].to_vec(), s.offset, s.offset)?;
            let proven = opts.known_shape.is_some_and(|(ko, _)| a.len() >= 2 * ko);
            return Ok(GuessReport {
                system,
                polynomial: None,
                shape: (d, 0),
                terms_used_for_fit: 2 * d,
                terms_verified: a.len() - 2 * d,
                proven,
                degenerate: false,
            });
        }
    }
    if skipped {
        return Err(Error::InsufficientData(format!(
            "not enough terms to check every order <= {r} with margin {}",
            opts.margin
        )));
    }
    Err(Error::NullSpaceEmpty(format!(
        "no C-finite recurrence of order <= {r}"
    )))
}

/// Number of terms the holonomic fit of shape `(r, k)` consumes.
pub fn holonomic_fit_length(r: usize, k: usize) -> usize {
    (r + 1) * (k + 1) + r
}

/// Shapes `(order, degree)` in search order: fewest unknowns first, then
/// smallest order.
pub fn holonomic_shapes(r: usize, k: usize) -> Vec<(usize, usize)> {
    let mut v: Vec<(usize, usize)> = (1..=r).flat_map(|o| (0..=k).map(move |d| (o, d))).collect();
    v.sort_by_key(|&(o, d)| ((o + 1) * (d + 1), o));
    v
}

/// Smallest holonomic recurrence with order `<= r` and degree `<= k`.
pub fn guess_holonomic(
    s: &Sequence,
    r: usize,
    k: usize,
    opts: &GuessOptions,
) -> Result<GuessReport> {
    if s.len() < holonomic_fit_length(1, 0) + opts.margin {
        return Err(Error::InsufficientData(
            "too few terms for any shape".into(),
        ));
    }
    if all_zero(s) {
        return trivial(s, ShiftOperator::poly(vec![Poly::zero(), Poly::one()])?);
    }
    let a = &s.terms;
    let mut skipped = false;
    for (ro, kd) in holonomic_shapes(r, k) {
        let fit = holonomic_fit_length(ro, kd);
        if a.len() < fit + opts.margin {
            skipped = true;
            continue;
        }
        let eqs = (ro + 1) * (kd + 1);
        let rows: Vec<Vec<Rational>> = (0..eqs)
            .map(|e| {
                let n = Rational::from_i64(s.offset + e as i64);
                let mut row = Vec::with_capacity(eqs);
                for i in 0..=ro {
                    let mut pw = Rational::one();
                    for _ in 0..=kd {
                        row.push(&pw * &a[e + i]);
                        pw = &pw * &n;
                    }
                }
                row
            })
            .collect();
        for v in Matrix::from_rows(rows).kernel() {
            let mut cs: Vec<Poly<Rational>> =
                v.chunks(kd + 1).map(|c| Poly::new(c.to_vec())).collect();
            Poly::normalize_vector(&mut cs);
            let Ok(op) = ShiftOperator::poly(cs) else {
                continue;
            };
            if op.order() == 0 {
                continue;
            }
            if verify_annihilates(&op, s, s.offset)?.is_some() {
                continue;
            }
            let v0 = leading_validity_offset(&op)?.max(s.offset);
            let need = op.order() + (v0 - s.offset) as usize;
            if a.len() < need {
                return Err(Error::InsufficientData(
                    "initial values past the leading roots".into(),
                ));
            }
            let proven = opts
                .known_shape
                .is_some_and(|(kr, kk)| a.len() >= holonomic_fit_length(kr, kk));
            let shape = (op.order(), op.degree());
            let system = RecurrenceSystem::new(op, a[..need].to_vec(), s.offset, v0)?;
            return Ok(GuessReport {
                system,
                polynomial: None,
                shape,
                terms_used_for_fit: fit,
                terms_verified: a.len() - fit,
                proven,
                degenerate: false,
            });
        }
    }
    if skipped {
        return Err(Error::InsufficientData(format!(
            "not enough terms to check every shape up to ({r}, {k}) with margin {}",
            opts.margin
        )));
    }
    Err(Error::NullSpaceEmpty(format!(
        "no holonomic recurrence of order <= {r} and degree <= {k}"
    )))
}

/// Whether the recurrence reproduces every stored term.
pub fn reproduces(rs: &RecurrenceSystem, s: &Sequence) -> Result<bool> {
    let e = rs.expand(s.len())?;
    Ok(e.terms == s.terms)
}
