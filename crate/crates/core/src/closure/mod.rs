//! Recurrences for sums, products, Cauchy products, partial sums and linear
//! subsequences of sequences given by recurrences, and rigorous identity
//! checking driven by the resulting order bounds.

mod cauchy;
mod cfinite;
mod prove;
pub mod space;

pub use cauchy::holonomic_cauchy;
pub use cfinite::{
    cfinite_combine_gf, cfinite_subsequence, cfinite_termwise, poly_closure, polynomial_system,
};
pub use prove::{parse_claim, prove_identity, ClaimTerm, IdentityClaim, ProofCertificate, Verdict};

use std::fmt;

use crate::error::{Error, Result};
use crate::exact::{CoeffRing, ExpPoly, Frac, Poly, Rational, Ring};
use crate::genfun::{diff_to_holonomic, holonomic_to_diff, homogenize, RationalGF};
use crate::seq::{
    expand_terms, leading_validity_offset, verify_annihilates, CoeffRingKind, OperatorRing,
    RecurrenceSystem, ShiftOperator,
};
use space::{dilate_rows, find_relation, reduction_rows, Relation};

/// Default number of extra orders tried when every null vector of the first
/// dependent rows has a leading coefficient vanishing on a residue class.
pub const MAX_BUMP: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClosureKind {
    Add,
    TermWise,
    Cauchy,
    PartialSum,
    Subsequence(u64),
}

impl ClosureKind {
    pub fn is_binary(self) -> bool {
        matches!(
            self,
            ClosureKind::Add | ClosureKind::TermWise | ClosureKind::Cauchy
        )
    }

    /// Worst-case order of the combined recurrence for operands of orders
    /// `r` and `s` (Cauchy product over C-finite sequences).
    pub fn order_bound(self, r: usize, s: usize) -> usize {
        match self {
            ClosureKind::Add | ClosureKind::Cauchy => r + s,
            ClosureKind::TermWise => r * s,
            ClosureKind::PartialSum => r + 1,
            ClosureKind::Subsequence(_) => r,
        }
    }
}

impl fmt::Display for ClosureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClosureKind::Add => f.write_str("add"),
            ClosureKind::TermWise => f.write_str("termwise"),
            ClosureKind::Cauchy => f.write_str("cauchy"),
            ClosureKind::PartialSum => f.write_str("partial-sum"),
            ClosureKind::Subsequence(m) => write!(f, "subsequence({m})"),
        }
    }
}

/// Result of a closure computation on recurrence systems.
#[derive(Clone, Debug)]
pub struct ClosureOutcome {
    pub system: RecurrenceSystem,
    /// Generating function, for constant-coefficient results obtained that way.
    pub gf: Option<RationalGF>,
    /// Worst-case order guaranteed by the closure theorems, when one applies.
    pub order_bound: Option<usize>,
    /// Largest entry degree of the cleared substitution matrix.
    pub matrix_degree: Option<usize>,
    /// Extra orders used to obtain a leading coefficient without periodic zeros.
    pub bumped: usize,
}

fn rows_for<R: CoeffRing>(
    kind: ClosureKind,
    a: &[R],
    b: Option<&[R]>,
    extra: usize,
) -> Result<Vec<Vec<Frac<R>>>> {
    let r = a.len() - 1;
    let need_b = || b.ok_or_else(|| Error::InvalidInput(format!("{kind} needs two operands")));
    Ok(match kind {
        ClosureKind::Add => {
            let b = need_b()?;
            let count = r + b.len() - 1 + 1 + extra;
            let ra = reduction_rows(a, count);
            let rb = reduction_rows(b, count);
            ra.into_iter()
                .zip(rb)
                .map(|(mut x, y)| {
                    x.extend(y);
                    x
                })
                .collect()
        }
        ClosureKind::TermWise => {
            let b = need_b()?;
            let count = r * (b.len() - 1) + 1 + extra;
            let ra = reduction_rows(a, count);
            let rb = reduction_rows(b, count);
            ra.iter()
                .zip(&rb)
                .map(|(x, y)| {
                    x.iter()
                        .flat_map(|u| y.iter().map(move |v| u.times(v)))
                        .collect()
                })
                .collect()
        }
        ClosureKind::PartialSum => {
            let count = r + 2 + extra;
            let ra = reduction_rows(a, count);
            let mut acc = vec![Frac::zero(); r];
            let mut rows = Vec::with_capacity(count);
            for (k, row) in ra.iter().enumerate() {
                if k > 0 {
                    acc = acc.iter().zip(row).map(|(x, y)| x.plus(y)).collect();
                }
                let mut full = vec![Frac::one()];
                full.extend(acc.iter().cloned());
                rows.push(full);
            }
            rows
        }
        ClosureKind::Subsequence(m) => {
            if m == 0 {
                return Err(Error::InvalidInput(
                    "subsequence step must be positive".into(),
                ));
            }
            let count = r + 1 + extra;
            let ra = reduction_rows(a, (count - 1) * m as usize + 1);
            let picked: Vec<Vec<Frac<R>>> =
                (0..count).map(|t| ra[t * m as usize].clone()).collect();
            dilate_rows(&picked, m)
        }
        ClosureKind::Cauchy => {
            return Err(Error::InvalidInput(
                "Cauchy products are not built from shift rows".into(),
            ))
        }
    })
}

/// Drops vanishing low coefficients: `sum_{i>=k} p_i(n) c_{n+i}` becomes a
/// relation starting at `c_n` valid `k` indices later.
fn strip_low<R: CoeffRing>(mut p: Vec<R>) -> (Vec<R>, usize) {
    let k = p.iter().take_while(|c| c.is_zero()).count();
    if k == 0 {
        return (p, 0);
    }
    p.drain(..k);
    (p.into_iter().map(|c| c.shift_n(-(k as i64))).collect(), k)
}

fn solve<R: OperatorRing>(
    kind: ClosureKind,
    a: &ShiftOperator,
    b: Option<&ShiftOperator>,
    max_bump: usize,
    acceptable: impl Fn(&R) -> bool,
) -> Result<(ShiftOperator, Relation<R>, usize)> {
    let conv = |op: &ShiftOperator| {
        R::from_operator(op).ok_or_else(|| {
            Error::MixedRing(format!(
                "operator {op} has an incompatible coefficient ring"
            ))
        })
    };
    let ca = conv(a)?;
    let cb = b.map(conv).transpose()?;
    let rows = rows_for(kind, &ca, cb.as_deref(), max_bump)?;
    let rel = find_relation(&rows, max_bump, acceptable)?;
    let (coeffs, low) = strip_low(rel.coeffs.clone());
    Ok((R::into_operator(coeffs)?, rel, low))
}

fn check_bound(
    kind: ClosureKind,
    a: &ShiftOperator,
    b: Option<&ShiftOperator>,
    got: usize,
) -> Result<usize> {
    let bound = kind.order_bound(a.order(), b.map_or(0, |b| b.order()));
    if got > bound {
        return Err(Error::BoundViolation(format!(
            "{kind}: order {got} exceeds {bound}"
        )));
    }
    Ok(bound)
}

/// Operator with polynomial coefficients for a sum, term-wise product, partial
/// sum or linear subsequence of holonomic sequences.
pub fn holonomic_combine(
    kind: ClosureKind,
    a: &ShiftOperator,
    b: Option<&ShiftOperator>,
) -> Result<ShiftOperator> {
    let (op, _, _) = solve::<Poly<Rational>>(kind, a, b, 0, |_| true)?;
    check_bound(kind, a, b, op.order())?;
    Ok(op)
}

/// Operator with exponential-polynomial coefficients for the same
/// operations on C²-finite sequences, raising the order when needed to avoid
/// a leading coefficient with periodic zeros.
pub fn c2_combine(
    kind: ClosureKind,
    a: &ShiftOperator,
    b: Option<&ShiftOperator>,
) -> Result<ShiftOperator> {
    if kind == ClosureKind::Cauchy {
        return Err(c2_cauchy_error());
    }
    let (op, _, _) = solve::<ExpPoly>(kind, a, b, MAX_BUMP, |l| !l.vanishes_on_residue_class(6))?;
    Ok(op)
}

fn c2_cauchy_error() -> Error {
    Error::Unimplemented(
        "Cauchy product of C^2-finite sequences: no constructive procedure is available".into(),
    )
}

/// Terms `0..count` of the combined sequence computed directly from the
/// operands.
pub fn combined_terms(
    kind: ClosureKind,
    a: &RecurrenceSystem,
    b: Option<&RecurrenceSystem>,
    count: usize,
) -> Result<Vec<Rational>> {
    let m = match kind {
        ClosureKind::Subsequence(m) => m.max(1) as usize,
        _ => 1,
    };
    let ta = expand_terms(a, (count.max(1) - 1) * m + 1)?.terms;
    let tb = match b {
        Some(b) => Some(expand_terms(b, count)?.terms),
        None => None,
    };
    let need_b = || {
        tb.as_ref()
            .ok_or_else(|| Error::InvalidInput(format!("{kind} needs two operands")))
    };
    Ok(match kind {
        ClosureKind::Add => ta
            .iter()
            .zip(need_b()?)
            .map(|(x, y)| x + y)
            .take(count)
            .collect(),
        ClosureKind::TermWise => ta
            .iter()
            .zip(need_b()?)
            .map(|(x, y)| x * y)
            .take(count)
            .collect(),
        ClosureKind::Cauchy => {
            let tb = need_b()?;
            (0..count)
                .map(|n| (0..=n).fold(Rational::zero(), |acc, i| acc + &ta[i] * &tb[n - i]))
                .collect()
        }
        ClosureKind::PartialSum => ta
            .iter()
            .take(count)
            .scan(Rational::zero(), |s, x| {
                *s += x;
                Some(s.clone())
            })
            .collect(),
        ClosureKind::Subsequence(_) => (0..count).map(|n| ta[n * m].clone()).collect(),
    })
}

fn operand_validity(kind: ClosureKind, a: &RecurrenceSystem, b: Option<&RecurrenceSystem>) -> i64 {
    let v = a.validity_offset.max(b.map_or(0, |b| b.validity_offset));
    match kind {
        ClosureKind::Subsequence(m) => (v + m as i64 - 1) / m as i64,
        _ => v,
    }
}

/// Attaches initial values from the directly computed combined sequence and
/// verifies the operator on further terms.
fn attach(
    kind: ClosureKind,
    a: &RecurrenceSystem,
    b: Option<&RecurrenceSystem>,
    operator: ShiftOperator,
    valid_from: i64,
) -> Result<RecurrenceSystem> {
    let need = operator.order() + valid_from as usize;
    let terms = combined_terms(kind, a, b, need + operator.order() + 20)?;
    let seq = crate::seq::Sequence::new(terms.clone(), 0);
    if let Some(n) = verify_annihilates(&operator, &seq, valid_from)? {
        return Err(Error::NullSpaceEmpty(format!(
            "combined operator fails at n = {n}"
        )));
    }
    RecurrenceSystem::new(operator, terms[..need].to_vec(), 0, valid_from)
}

fn require_start(a: &RecurrenceSystem, b: Option<&RecurrenceSystem>) -> Result<()> {
    if a.start != 0 || b.is_some_and(|b| b.start != 0) {
        return Err(Error::InvalidInput("operands must start at index 0".into()));
    }
    Ok(())
}

/// Computes the recurrence system of a combined sequence. Operands of
/// different classes are promoted to the larger one; constant-coefficient
/// sums, Cauchy products and partial sums go through generating functions.
pub fn combine(
    kind: ClosureKind,
    a: &RecurrenceSystem,
    b: Option<&RecurrenceSystem>,
) -> Result<ClosureOutcome> {
    require_start(a, b)?;
    if kind.is_binary() != b.is_some() {
        return Err(Error::InvalidInput(format!(
            "{kind} takes {} operand(s)",
            if kind.is_binary() { 2 } else { 1 }
        )));
    }
    let class = a
        .operator
        .ring()
        .max(b.map_or(CoeffRingKind::Constant, |b| b.operator.ring()));
    let base_v = operand_validity(kind, a, b);
    match class {
        CoeffRingKind::Constant => match kind {
            ClosureKind::Add | ClosureKind::Cauchy | ClosureKind::PartialSum => {
                let ga = crate::genfun::genfun_cfinite(a)?;
                let gb = b.map(crate::genfun::genfun_cfinite).transpose()?;
                let (gf, system) = cfinite_combine_gf(kind, &ga, gb.as_ref())?;
                let bound = check_bound(kind, &a.operator, b.map(|b| &b.operator), system.order())?;
                Ok(ClosureOutcome {
                    system,
                    gf: Some(gf),
                    order_bound: Some(bound),
                    matrix_degree: None,
                    bumped: 0,
                })
            }
            _ => {
                let (op, rel, low) =
                    solve::<Rational>(kind, &a.operator, b.map(|b| &b.operator), 0, |_| true)?;
                let bound = check_bound(kind, &a.operator, b.map(|b| &b.operator), op.order())?;
                let system = attach(kind, a, b, op, base_v + low as i64)?;
                Ok(ClosureOutcome {
                    system,
                    gf: None,
                    order_bound: Some(bound),
                    matrix_degree: Some(rel.matrix_degree),
                    bumped: 0,
                })
            }
        },
        CoeffRingKind::PolyInN => {
            if kind == ClosureKind::Cauchy {
                return holonomic_cauchy_systems(a, b.unwrap());
            }
            let (op, rel, low) =
                solve::<Poly<Rational>>(kind, &a.operator, b.map(|b| &b.operator), 0, |_| true)?;
            let bound = check_bound(kind, &a.operator, b.map(|b| &b.operator), op.order())?;
            let v = (base_v + low as i64).max(leading_validity_offset(&op)?);
            let system = attach(kind, a, b, op, v)?;
            Ok(ClosureOutcome {
                system,
                gf: None,
                order_bound: Some(bound),
                matrix_degree: Some(rel.matrix_degree),
                bumped: 0,
            })
        }
        CoeffRingKind::ExpPolyCoeff => {
            if kind == ClosureKind::Cauchy {
                return Err(c2_cauchy_error());
            }
            let (op, rel, low) =
                solve::<ExpPoly>(kind, &a.operator, b.map(|b| &b.operator), MAX_BUMP, |l| {
                    !l.vanishes_on_residue_class(6)
                })?;
            let bound = kind.order_bound(a.order(), b.map_or(0, |b| b.order()));
            if rel.bumped == 0 && op.order() > bound {
                return Err(Error::BoundViolation(format!(
                    "{kind}: order {} exceeds {bound}",
                    op.order()
                )));
            }
            let v = (base_v + low as i64).max(leading_validity_offset(&op)?);
            let system = attach(kind, a, b, op, v)?;
            Ok(ClosureOutcome {
                system,
                gf: None,
                order_bound: (rel.bumped == 0).then_some(bound),
                matrix_degree: Some(rel.matrix_degree),
                bumped: rel.bumped,
            })
        }
    }
}

fn holonomic_cauchy_systems(a: &RecurrenceSystem, b: &RecurrenceSystem) -> Result<ClosureOutcome> {
    let promote = |s: &RecurrenceSystem| -> Result<RecurrenceSystem> {
        let op = ShiftOperator::poly(s.operator.poly_coeffs().unwrap())?;
        RecurrenceSystem::new(op, s.initials.clone(), s.start, s.validity_offset)
    };
    let da = homogenize(&holonomic_to_diff(&promote(a)?)?);
    let db = homogenize(&holonomic_to_diff(&promote(b)?)?);
    let e = holonomic_cauchy(&da, &db)?;
    let rec = diff_to_holonomic(&e)?;
    let system = attach(
        ClosureKind::Cauchy,
        a,
        Some(b),
        rec.operator,
        rec.valid_from,
    )?;
    Ok(ClosureOutcome {
        system,
        gf: None,
        // the product bound applies to the differential equation, not the recurrence
        order_bound: None,
        matrix_degree: None,
        bumped: 0,
    })
}
