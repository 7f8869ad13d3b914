use super::{solve, ClosureKind};
use crate::error::{Error, Result};
use crate::exact::{Poly, Rational, Ring};
use crate::genfun::{cfinite_from_rational, RationalGF};
use crate::seq::{RecurrenceSystem, ShiftOperator};

/// Sum, Cauchy product or partial sum of constant-coefficient sequences on
/// the level of rational generating functions.
pub fn cfinite_combine_gf(
    kind: ClosureKind,
    a: &RationalGF,
    b: Option<&RationalGF>,
) -> Result<(RationalGF, RecurrenceSystem)> {
    let (pa, da) = (a.numerator(), a.denominator());
    let need_b = || b.ok_or_else(|| Error::InvalidInput(format!("{kind} needs two operands")));
    let gf = match kind {
        ClosureKind::Add => {
            let b = need_b()?;
            RationalGF::new(
                pa.mul(b.denominator()).add(&b.numerator().mul(da)),
                da.mul(b.denominator()),
            )?
        }
        ClosureKind::Cauchy => {
            let b = need_b()?;
            RationalGF::new(pa.mul(b.numerator()), da.mul(b.denominator()))?
        }
        ClosureKind::PartialSum => RationalGF::new(
            pa.clone(),
            da.mul(&Poly::new(vec![Rational::one(), -Rational::one()])),
        )?,
        _ => {
            return Err(Error::InvalidInput(format!(
                "{kind} is not a generating-function operation"
            )))
        }
    };
    let system = cfinite_from_rational(&gf)?;
    Ok((gf, system))
}

/// Constant-coefficient operator annihilating the term-wise product.
pub fn cfinite_termwise(a: &ShiftOperator, b: &ShiftOperator) -> Result<ShiftOperator> {
    let (op, _, _) = solve::<Rational>(ClosureKind::TermWise, a, Some(b), 0, |_| true)?;
    super::check_bound(ClosureKind::TermWise, a, Some(b), op.order())?;
    Ok(op)
}

/// Constant-coefficient operator annihilating `n -> a(m n)`.
pub fn cfinite_subsequence(m: u64, a: &ShiftOperator) -> Result<ShiftOperator> {
    let kind = ClosureKind::Subsequence(m);
    let (op, _, _) = solve::<Rational>(kind, a, None, 0, |_| true)?;
    super::check_bound(kind, a, None, op.order())?;
    Ok(op)
}

/// The operator `(N - 1)^(k+1)` with initial values `p(0..=k)`.
pub fn polynomial_system(p: &Poly<Rational>) -> Result<RecurrenceSystem> {
    let k = p.deg0();
    let op = Poly::new(vec![-Rational::one(), Rational::one()]).pow(k as u32 + 1);
    let initials = (0..=k as i64)
        .map(|n| p.eval(&Rational::from_i64(n)))
        .collect();
    RecurrenceSystem::new(ShiftOperator::constant(op.into_coeffs())?, initials, 0, 0)
}

fn fit(values: impl Iterator<Item = (i64, Rational)>) -> Poly<Rational> {
    let pts: Vec<(Rational, Rational)> = values.map(|(n, v)| (Rational::from_i64(n), v)).collect();
    Poly::interpolate(&pts)
}

/// Closure operations on polynomial sequences, returning the polynomial of
/// the combined sequence.
pub fn poly_closure(
    kind: ClosureKind,
    p: &Poly<Rational>,
    q: Option<&Poly<Rational>>,
) -> Result<Poly<Rational>> {
    let need_q = || q.ok_or_else(|| Error::InvalidInput(format!("{kind} needs two operands")));
    let at = |f: &Poly<Rational>, n: i64| f.eval(&Rational::from_i64(n));
    let k = p.deg0();
    let (out, bound) = match kind {
        ClosureKind::Add => {
            let q = need_q()?;
            (p.add(q), k.max(q.deg0()))
        }
        ClosureKind::TermWise => {
            let q = need_q()?;
            (p.mul(q), k + q.deg0())
        }
        ClosureKind::PartialSum => {
            let vals = (0..=k as i64 + 1).scan(Rational::zero(), |s, n| {
                *s += at(p, n);
                Some((n, s.clone()))
            });
            (fit(vals), k + 1)
        }
        ClosureKind::Cauchy => {
            let q = need_q()?;
            let d = k + q.deg0() + 1;
            let vals = (0..=d as i64).map(|n| {
                (
                    n,
                    (0..=n).fold(Rational::zero(), |acc, i| acc + at(p, i) * at(q, n - i)),
                )
            });
            (fit(vals), d)
        }
        ClosureKind::Subsequence(m) => {
            let m = Rational::from_i64(m as i64);
            (p.compose_linear(&m, &Rational::zero()), k)
        }
    };
    if out.degree().is_some_and(|d| d > bound) {
        return Err(Error::BoundViolation(format!(
            "{kind}: degree {} exceeds {bound}",
            out.deg0()
        )));
    }
    Ok(out)
}
