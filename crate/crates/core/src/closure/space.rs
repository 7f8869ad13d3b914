//! Solution-space construction of annihilating operators.
//!
//! Each row expresses one shift of the combined sequence as a linear
//! combination (with coefficients in the fraction field of a coefficient
//! ring) of a fixed finite basis. A left null vector of the first dependent
//! rows gives the combined recurrence. Dependence is detected by evaluating at
//! sample points; the null vector itself is computed exactly by Cramer's rule
//! with division-free determinants and then verified exactly.

use crate::error::{Error, Result};
use crate::exact::{CoeffRing, Frac, Matrix, Nf, Ring};

/// Integer sample points used to detect linear dependence of rows. The first
/// four are consecutive so that every residue class mod 2, 3 and 4 is hit:
/// exponential coefficients such as `1 + (-1)^n` vanish on whole classes.
const SAMPLES: [i64; 6] = [1009, 1010, 1011, 1012, 2027, 3041];

/// Row `k` expresses `a_{n+k}` in the basis `a_n, ..., a_{n+r-1}` for the
/// operator with coefficients `c` (low to high).
pub fn reduction_rows<R: CoeffRing>(c: &[R], count: usize) -> Vec<Vec<Frac<R>>> {
    let r = c.len() - 1;
    let mut rows: Vec<Vec<Frac<R>>> = Vec::with_capacity(count);
    for k in 0..count {
        if k < r {
            let mut e = vec![Frac::zero(); r];
            e[k] = Frac::one();
            rows.push(e);
            continue;
        }
        let shift = (k - r) as i64;
        let lead = c[r].shift_n(shift);
        let mut e = vec![Frac::zero(); r];
        for (i, ci) in c.iter().enumerate().take(r) {
            if ci.is_zero() {
                continue;
            }
            let f = Frac::new(ci.shift_n(shift).negate(), lead.clone());
            for (x, y) in e.iter_mut().zip(&rows[k - r + i]) {
                if !y.is_zero() {
                    *x = x.plus(&f.times(y));
                }
            }
        }
        rows.push(e);
    }
    rows
}

/// Rows with the `n`-dependence substituted by `n -> m n`.
pub fn dilate_rows<R: CoeffRing>(rows: &[Vec<Frac<R>>], m: u64) -> Vec<Vec<Frac<R>>> {
    rows.iter()
        .map(|row| row.iter().map(|x| x.dilate_n(m)).collect())
        .collect()
}

/// A null vector of the first `t + 1` rows.
#[derive(Clone, Debug)]
pub struct Relation<R> {
    pub coeffs: Vec<R>,
    /// Largest degree in the index variable among the cleared matrix entries.
    pub matrix_degree: usize,
    /// How many orders beyond the first dependent row were needed.
    pub bumped: usize,
}

/// Clears denominators column by column.
fn clear_columns<R: CoeffRing>(rows: &[Vec<Frac<R>>]) -> Result<Vec<Vec<R>>> {
    let d = rows.first().map_or(0, |r| r.len());
    let mut out: Vec<Vec<R>> = vec![Vec::with_capacity(d); rows.len()];
    for j in 0..d {
        let dens: Vec<R> = rows.iter().map(|r| r[j].den.clone()).collect();
        let l = R::common_multiple(&dens);
        for (i, row) in rows.iter().enumerate() {
            let x = &row[j];
            let v = if x.num.is_zero() {
                R::zero()
            } else {
                let q = l.exact_quotient(&x.den).ok_or_else(|| {
                    Error::NullSpaceEmpty("denominator does not divide the column multiple".into())
                })?;
                x.num.times(&q)
            };
            out[i].push(v);
        }
    }
    Ok(out)
}

fn evaluated<R: CoeffRing>(m: &[Vec<R>], rows: &[usize], n: i64) -> Matrix<Nf> {
    Matrix::from_rows(
        rows.iter()
            .map(|&i| m[i].iter().map(|x| x.eval_nf(n)).collect())
            .collect(),
    )
}

/// Generic rank of the selected rows, and independent columns at a point
/// realizing it.
fn rank_info<R: CoeffRing>(m: &[Vec<R>], rows: &[usize]) -> (usize, Vec<usize>) {
    let mut best = (0, vec![]);
    if rows.is_empty() || m[0].is_empty() {
        return best;
    }
    for n in SAMPLES {
        let (_, piv) = evaluated(m, rows, n).rref();
        if piv.len() > best.0 {
            best = (piv.len(), piv);
        }
        if best.0 == rows.len() {
            break;
        }
    }
    best
}

/// Cramer's rule: coefficients `P` over `basis ∪ {top}` with
/// `P_top = det(A)`, `P_s = -det(A with row s replaced by row top)`.
fn cramer<R: CoeffRing>(m: &[Vec<R>], basis: &[usize], cols: &[usize], top: usize) -> Vec<R> {
    let a = Matrix::from_rows(
        basis
            .iter()
            .map(|&i| cols.iter().map(|&j| m[i][j].clone()).collect())
            .collect(),
    );
    let mut p = vec![R::zero(); top + 1];
    p[top] = if basis.is_empty() { R::one() } else { a.det() };
    for (s, &row) in basis.iter().enumerate() {
        let mut data = a.data().to_vec();
        data[s] = cols.iter().map(|&j| m[top][j].clone()).collect();
        p[row] = Matrix::from_rows(data).det().negate();
    }
    p
}

fn annihilates<R: CoeffRing>(m: &[Vec<R>], p: &[R]) -> bool {
    let d = m.first().map_or(0, |r| r.len());
    (0..d).all(|j| {
        p.iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .fold(R::zero(), |acc, (i, c)| acc.plus(&c.times(&m[i][j])))
            .is_zero()
    })
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Null vector of the first dependent rows. When `acceptable` rejects the
/// leading coefficient, higher orders up to `max_bump` extra rows are tried,
/// choosing row subsets in lexicographic order.
pub fn find_relation<R: CoeffRing>(
    rows: &[Vec<Frac<R>>],
    max_bump: usize,
    acceptable: impl Fn(&R) -> bool,
) -> Result<Relation<R>> {
    let m = clear_columns(rows)?;
    let matrix_degree = m
        .iter()
        .flatten()
        .filter(|x| !x.is_zero())
        .map(|x| x.degree_n())
        .max()
        .unwrap_or(0);
    let mut t = None;
    for k in 0..m.len() {
        let idx: Vec<usize> = (0..=k).collect();
        if rank_info(&m, &idx).0 <= k {
            t = Some(k);
            break;
        }
    }
    let t =
        t.ok_or_else(|| Error::NullSpaceEmpty(format!("rows 0..{} are independent", m.len())))?;
    let basis: Vec<usize> = (0..t).collect();
    let (_, cols) = rank_info(&m, &basis);
    let mut p = cramer(&m, &basis, &cols, t);
    if !annihilates(&m, &p) {
        return Err(Error::NullSpaceEmpty(
            "candidate null vector failed exact verification".into(),
        ));
    }
    if acceptable(&p[t]) {
        R::normalize_vector(&mut p);
        return Ok(Relation {
            coeffs: p,
            matrix_degree,
            bumped: 0,
        });
    }
    for top in t + 1..=(t + max_bump).min(m.len() - 1) {
        let below: Vec<usize> = (0..top).collect();
        let (rho, _) = rank_info(&m, &below);
        for s in subsets(top, rho) {
            let (rk, cols) = rank_info(&m, &s);
            if rk < rho {
                continue;
            }
            let lead = {
                let a = Matrix::from_rows(
                    s.iter()
                        .map(|&i| cols.iter().map(|&j| m[i][j].clone()).collect())
                        .collect(),
                );
                a.det()
            };
            if lead.is_zero() || !acceptable(&lead) {
                continue;
            }
            let mut p = cramer(&m, &s, &cols, top);
            if annihilates(&m, &p) {
                R::normalize_vector(&mut p);
                return Ok(Relation {
                    coeffs: p,
                    matrix_degree,
                    bumped: top - t,
                });
            }
        }
    }
    Err(Error::LeadingAlwaysZero(max_bump))
}
