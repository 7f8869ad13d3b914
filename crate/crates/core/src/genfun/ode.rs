//! Linear differential equations with dilated arguments for generating
//! functions of recurrences with polynomial or exponential-polynomial
//! coefficients.
//!
//! An equation is `sum_alpha sum_j q_{alpha,j}(x) D_j^alpha f = R(x)` with
//! `D_j^alpha f = d^j/dx^j [f(alpha x)]`. Differentiating the whole equation
//! maps `q D_j^alpha` to `q' D_j^alpha + q D_{j+1}^alpha`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Signed;

use crate::error::{Error, Result};
use crate::exact::{ExpPoly, Field, Nf, Poly, Rational, Ring};
use crate::seq::{
    exp_leading_offset, expand_terms, leading_validity_offset, verify_annihilates,
    RecurrenceSystem, ShiftOperator,
};

#[derive(Clone, Debug, PartialEq)]
pub struct DiffEquation {
    lhs: BTreeMap<Nf, Vec<Poly<Nf>>>,
    rhs: Poly<Nf>,
}

fn add_into(map: &mut BTreeMap<Nf, Vec<Poly<Nf>>>, alpha: &Nf, j: usize, p: &Poly<Nf>) {
    if p.is_zero() {
        return;
    }
    let v = map.entry(alpha.clone()).or_default();
    if v.len() <= j {
        v.resize(j + 1, Poly::zero());
    }
    v[j] = v[j].add(p);
}

fn trim(map: BTreeMap<Nf, Vec<Poly<Nf>>>) -> BTreeMap<Nf, Vec<Poly<Nf>>> {
    map.into_iter()
        .filter_map(|(a, mut v)| {
            while v.last().is_some_and(|p| p.is_zero()) {
                v.pop();
            }
            (!v.is_empty()).then_some((a, v))
        })
        .collect()
}

fn nf_poly(p: &Poly<Rational>) -> Poly<Nf> {
    p.map(|c| Nf::rational(c.clone()))
}

impl DiffEquation {
    /// Builds an equation from `(alpha, derivative order, coefficient)`
    /// triples; repeated keys are summed.
    pub fn from_terms(
        terms: impl IntoIterator<Item = (Nf, usize, Poly<Nf>)>,
        rhs: Poly<Nf>,
    ) -> Result<Self> {
        let mut lhs = BTreeMap::new();
        for (a, j, p) in terms {
            if a.is_zero() {
                return Err(Error::InvalidInput("dilation base must be nonzero".into()));
            }
            add_into(&mut lhs, &a, j, &p);
        }
        let lhs = trim(lhs);
        if lhs.is_empty() {
            return Err(Error::ZeroEquation);
        }
        Ok(DiffEquation { lhs, rhs })
    }

    /// `sum_j coeffs[j](x) f^(j)(x) = rhs(x)` with rational coefficients.
    pub fn holonomic(coeffs: &[Poly<Rational>], rhs: &Poly<Rational>) -> Result<Self> {
        Self::from_terms(
            coeffs
                .iter()
                .enumerate()
                .map(|(j, p)| (Nf::one(), j, nf_poly(p))),
            nf_poly(rhs),
        )
    }

    pub fn bases(&self) -> Vec<Nf> {
        self.lhs.keys().cloned().collect()
    }

    /// Coefficient of `D_j^alpha f` (zero when absent).
    pub fn coeff(&self, alpha: &Nf, j: usize) -> Poly<Nf> {
        self.lhs
            .get(alpha)
            .and_then(|v| v.get(j))
            .cloned()
            .unwrap_or_else(Poly::zero)
    }

    /// Coefficient of `f^(j)(x)` when every entry is rational.
    pub fn rational_coeff(&self, j: usize) -> Option<Poly<Rational>> {
        to_rational_poly(&self.coeff(&Nf::one(), j))
    }

    pub fn rhs(&self) -> &Poly<Nf> {
        &self.rhs
    }

    pub fn rational_rhs(&self) -> Option<Poly<Rational>> {
        to_rational_poly(&self.rhs)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.rhs.is_zero()
    }

    /// Whether the only dilation base is 1.
    pub fn is_plain(&self) -> bool {
        self.lhs.len() == 1 && self.lhs.contains_key(&Nf::one())
    }

    /// Highest derivative index present.
    pub fn order(&self) -> usize {
        self.lhs.values().map(|v| v.len() - 1).max().unwrap()
    }

    /// Highest degree in `x` among left-hand coefficients.
    pub fn coeff_degree(&self) -> usize {
        self.entries().map(|(_, _, p)| p.deg0()).max().unwrap()
    }

    fn entries(&self) -> impl Iterator<Item = (&Nf, usize, &Poly<Nf>)> {
        self.lhs.iter().flat_map(|(a, v)| {
            v.iter()
                .enumerate()
                .filter(|(_, p)| !p.is_zero())
                .map(move |(j, p)| (a, j, p))
        })
    }

    fn scaled(&self, s: &Nf) -> Self {
        DiffEquation {
            lhs: self
                .lhs
                .iter()
                .map(|(a, v)| (a.clone(), v.iter().map(|p| p.scale(s)).collect()))
                .collect(),
            rhs: self.rhs.scale(s),
        }
    }

    /// Clears rational content and fixes the sign of the coefficient at the
    /// largest base, highest derivative and highest power of `x`.
    pub fn normalized(&self) -> Self {
        let comps: Vec<&Rational> = self
            .entries()
            .flat_map(|(_, _, p)| p.coeffs().iter())
            .chain(self.rhs.coeffs().iter())
            .flat_map(|c| c.rep().iter())
            .collect();
        let mut l = BigInt::from(1);
        for c in &comps {
            l = l.lcm(c.denom());
        }
        let mut g = BigInt::from(0);
        for c in &comps {
            g = g.gcd(&(*c * Rational::from_integer(l.clone())).to_integer());
        }
        let mut s = Rational::new(l, g);
        let (_, v) = self.lhs.iter().next_back().unwrap();
        let top = v.last().unwrap().leading();
        if top.first_component().is_negative() {
            s = -s;
        }
        self.scaled(&Nf::rational(s))
    }

    /// Equality up to a nonzero constant factor.
    pub fn proportional(&self, o: &DiffEquation) -> bool {
        let mine: Vec<_> = self.entries().collect();
        let theirs: Vec<_> = o.entries().collect();
        if mine.len() != theirs.len() {
            return false;
        }
        let (_, _, p) = mine[0];
        let (_, _, q) = theirs[0];
        let Some(s) = q.leading().divide(&p.leading()) else {
            return false;
        };
        let scaled = self.scaled(&s);
        scaled.lhs == o.lhs && scaled.rhs == o.rhs
    }

    /// Derivative of both sides.
    pub fn derivative(&self) -> Self {
        let mut lhs = BTreeMap::new();
        for (a, j, p) in self.entries() {
            add_into(&mut lhs, a, j, &p.derivative());
            add_into(&mut lhs, a, j + 1, p);
        }
        DiffEquation {
            lhs: trim(lhs),
            rhs: self.rhs.derivative(),
        }
    }

    /// Coefficients of `x^N` in `lhs - rhs` applied to the truncated series
    /// `sum a_m x^m`, for every `N` whose coefficient is fully determined.
    pub fn residual(&self, a: &[Rational]) -> Vec<Nf> {
        let dmax = self
            .entries()
            .flat_map(|(_, j, p)| (0..p.coeffs().len()).map(move |s| j as i64 - s as i64))
            .max()
            .unwrap();
        let last = a.len() as i64 - 1 - dmax;
        let mut out = Vec::new();
        for big_n in 0..=last.max(-1) {
            let mut acc = self.rhs.coeff(big_n as usize).negate();
            for (alpha, j, p) in self.entries() {
                for (s, c) in p.coeffs().iter().enumerate() {
                    let m = big_n + j as i64 - s as i64;
                    if c.is_zero() || m < j as i64 {
                        continue;
                    }
                    let ff =
                        (0..j as i64).fold(Rational::one(), |f, i| f * Rational::from_i64(m - i));
                    let am = &a[m as usize];
                    if am.is_zero() {
                        continue;
                    }
                    let v = c.times(&alpha.pow(m as u64)).times(&Nf::rational(ff * am));
                    acc = acc.plus(&v);
                }
            }
            out.push(acc);
        }
        out
    }

    /// Whether the truncated series satisfies the equation wherever checkable.
    pub fn satisfied_by(&self, a: &[Rational]) -> bool {
        self.residual(a).iter().all(|v| v.is_zero())
    }
}

fn to_rational_poly(p: &Poly<Nf>) -> Option<Poly<Rational>> {
    let c: Option<Vec<Rational>> = p.coeffs().iter().map(|c| c.to_rational()).collect();
    c.map(Poly::new)
}

fn fmt_nf_poly(p: &Poly<Nf>) -> String {
    if let Some(r) = to_rational_poly(p) {
        return r.to_string_var("x");
    }
    let parts: Vec<String> = p
        .coeffs()
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| match i {
            0 => format!("{c}"),
            1 => format!("{c}*x"),
            _ => format!("{c}*x^{i}"),
        })
        .collect();
    parts.join(" + ")
}

impl fmt::Display for DiffEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (a, j, p) in self.entries() {
            let d = match j {
                0 => "f".to_string(),
                1 => "f'".to_string(),
                2 => "f''".to_string(),
                _ => format!("f^({j})"),
            };
            let arg = if a.is_one() {
                "x".to_string()
            } else {
                format!("{a}*x")
            };
            parts.push(format!("({})*{d}({arg})", fmt_nf_poly(p)));
        }
        write!(f, "{} = {}", parts.join(" + "), fmt_nf_poly(&self.rhs))
    }
}

/// Coefficients `c_0..c_s` with `(m - t)^s = sum_j c_j (m)_j`, obtained by
/// back substitution in the unitriangular falling-factorial basis and cached.
fn falling_basis(s: usize, t: usize) -> Vec<Rational> {
    type Cache = RwLock<HashMap<(usize, usize), Vec<Rational>>>;
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(v) = cache.read().unwrap().get(&(s, t)) {
        return v.clone();
    }
    let mut rest = Poly::new(vec![Rational::from_i64(-(t as i64)), Rational::one()]).pow(s as u32);
    let mut c = vec![Rational::zero(); s + 1];
    for j in (0..=s).rev() {
        c[j] = rest.coeff(j);
        rest = rest.sub(&Poly::falling(0, j).scale(&c[j]));
    }
    debug_assert!(rest.is_zero());
    cache.write().unwrap().insert((s, t), c.clone());
    c
}

/// Per shift index `t`, the coefficient `p_t(n)` as a map from base to
/// polynomial factor.
type CoeffMaps = Vec<BTreeMap<Nf, Poly<Nf>>>;

fn coeff_maps(op: &ShiftOperator) -> CoeffMaps {
    op.exp_coeffs()
        .iter()
        .map(|e| e.terms().map(|(b, p)| (b.clone(), p.clone())).collect())
        .collect()
}

fn check_start(rs: &RecurrenceSystem) -> Result<Vec<Rational>> {
    if rs.start != 0 {
        return Err(Error::InvalidInput(
            "initial values must start at index 0".into(),
        ));
    }
    let r = rs.order();
    let v = rs.validity_offset;
    let terms = expand_terms(rs, r + v as usize + r.max(1))?;
    if v > 0 {
        if let Some(n) = verify_annihilates(&rs.operator, &terms, 0)? {
            if n < v {
                return Err(Error::InvalidInput(format!(
                    "relation fails at n = {n}; generating function equation needs it from n = 0"
                )));
            }
        }
    }
    Ok(terms.terms)
}

fn rec_to_diff(maps: &CoeffMaps, a: &[Rational]) -> Result<DiffEquation> {
    let r = maps.len() - 1;
    let mut lhs = BTreeMap::new();
    let mut rhs = Poly::zero();
    for (t, map) in maps.iter().enumerate() {
        for (alpha, p) in map {
            let scale_t = alpha.powi(-(t as i64));
            for (s, b) in p.coeffs().iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let bb = b.times(&scale_t);
                for (j, c) in falling_basis(s, t).iter().enumerate() {
                    if !c.is_zero() {
                        let mono = Poly::monomial(bb.times(&Nf::rational(c.clone())), j + r - t);
                        add_into(&mut lhs, alpha, j, &mono);
                    }
                }
                for (m, am) in a.iter().enumerate().take(t) {
                    if am.is_zero() {
                        continue;
                    }
                    let w = Ring::pow(&Rational::from_i64(m as i64 - t as i64), s as u64) * am;
                    let v = bb.times(&alpha.pow(m as u64)).times(&Nf::rational(w));
                    rhs = rhs.add(&Poly::monomial(v, m + r - t));
                }
            }
        }
    }
    let lhs = trim(lhs);
    if lhs.is_empty() {
        return Err(Error::ZeroEquation);
    }
    let k = maps
        .iter()
        .flat_map(|m| m.values())
        .map(|p| p.deg0())
        .max()
        .unwrap_or(0);
    let d = DiffEquation { lhs, rhs };
    if d.order() > k || d.coeff_degree() > r + k || d.rhs.degree().is_some_and(|e| e + 1 > r) {
        return Err(Error::BoundViolation(format!(
            "equation {d} exceeds order {k} / degree {}",
            r + k
        )));
    }
    Ok(d.normalized())
}

/// Differential equation for the generating function of a recurrence with
/// polynomial coefficients. The relation must hold from `n = 0` on the given
/// initial values.
pub fn holonomic_to_diff(rs: &RecurrenceSystem) -> Result<DiffEquation> {
    if rs.operator.poly_coeffs().is_none() {
        return Err(Error::InvalidInput(
            "polynomial coefficients expected".into(),
        ));
    }
    let a = check_start(rs)?;
    rec_to_diff(&coeff_maps(&rs.operator), &a)
}

/// Functional-differential equation with dilated arguments for a recurrence
/// with exponential-polynomial coefficients.
pub fn c2_to_diff(rs: &RecurrenceSystem) -> Result<DiffEquation> {
    for e in rs.operator.exp_coeffs() {
        e.field()?;
    }
    let a = check_start(rs)?;
    rec_to_diff(&coeff_maps(&rs.operator), &a)
}

/// Differentiates until the right-hand side vanishes. Homogeneous input is
/// returned as is.
pub fn homogenize(d: &DiffEquation) -> DiffEquation {
    let Some(deg) = d.rhs.degree() else {
        return d.clone();
    };
    let mut out = d.clone();
    for _ in 0..=deg {
        out = out.derivative();
    }
    out.normalized()
}

/// As [`homogenize`], for equations over several dilation bases.
pub fn c2_homogenize(d: &DiffEquation) -> DiffEquation {
    homogenize(d)
}

/// Recurrence read off a homogeneous equation: the operator and the first
/// index from which the relation determines the next term.
#[derive(Clone, Debug, PartialEq)]
pub struct DerivedRecurrence {
    pub operator: ShiftOperator,
    pub valid_from: i64,
}

impl DerivedRecurrence {
    /// Attaches initial values taken from the start of `terms` (index 0).
    pub fn with_terms(&self, terms: &[Rational]) -> Result<RecurrenceSystem> {
        let need = self.operator.order() + self.valid_from as usize;
        if terms.len() < need {
            return Err(Error::InsufficientData(format!(
                "{need} initial values required"
            )));
        }
        RecurrenceSystem::new(
            self.operator.clone(),
            terms[..need].to_vec(),
            0,
            self.valid_from,
        )
    }
}

/// Coefficient list `C_d` (d from `dmin`) of the recurrence in `N`, where
/// `x^s D_t^alpha f` contributes `b (N+d)_t alpha^(N+d) a_{N+d}` with `d = t - s`.
fn diff_to_coeffs(d: &DiffEquation) -> Result<(Vec<ExpPoly>, i64)> {
    if !d.is_homogeneous() {
        return Err(Error::InvalidInput("homogeneous equation expected".into()));
    }
    let mut by_d: BTreeMap<i64, ExpPoly> = BTreeMap::new();
    for (alpha, t, p) in d.entries() {
        for (s, b) in p.coeffs().iter().enumerate() {
            if b.is_zero() {
                continue;
            }
            let dd = t as i64 - s as i64;
            let ff = Poly::<Rational>::falling(dd, t).map(|c| Nf::rational(c.clone()));
            let term = ExpPoly::term(alpha.clone(), ff.scale(&b.times(&alpha.powi(dd))));
            let e = by_d.entry(dd).or_insert_with(ExpPoly::zero);
            *e = e.add(&term);
        }
    }
    by_d.retain(|_, e| !e.is_zero());
    let (Some(&lo), Some(&hi)) = (by_d.keys().next(), by_d.keys().next_back()) else {
        return Err(Error::ZeroEquation);
    };
    let coeffs: Vec<ExpPoly> = (lo..=hi)
        .map(|dd| {
            by_d.get(&dd)
                .map(|e| e.shift(-lo))
                .unwrap_or_else(ExpPoly::zero)
        })
        .collect();
    Ok((coeffs, lo.max(0)))
}

fn scale_rational_content(coeffs: &mut [ExpPoly]) {
    let comps: Vec<Rational> = coeffs
        .iter()
        .flat_map(|e| {
            e.terms().flat_map(|(_, p)| {
                p.coeffs()
                    .iter()
                    .flat_map(|c| c.rep().iter().cloned())
                    .collect::<Vec<_>>()
            })
        })
        .collect();
    let mut l = BigInt::from(1);
    for c in &comps {
        l = l.lcm(c.denom());
    }
    let mut g = BigInt::from(0);
    for c in &comps {
        g = g.gcd(&(c * Rational::from_integer(l.clone())).to_integer());
    }
    let top = coeffs.last().unwrap();
    let sign_neg = top
        .terms()
        .last()
        .is_some_and(|(_, p)| p.leading().first_component().is_negative());
    let mut s = Rational::new(l, g);
    if sign_neg {
        s = -s;
    }
    let s = Nf::rational(s);
    for e in coeffs.iter_mut() {
        *e = e.scale(&s);
    }
}

/// Recurrence with polynomial coefficients for the series solutions of a
/// homogeneous equation without dilations.
pub fn diff_to_holonomic(d: &DiffEquation) -> Result<DerivedRecurrence> {
    if !d.is_plain() {
        return Err(Error::InvalidInput("equation has dilated arguments".into()));
    }
    let (mut coeffs, v) = diff_to_coeffs(d)?;
    scale_rational_content(&mut coeffs);
    let polys = coeffs
        .iter()
        .map(|e| {
            e.as_rational_poly()
                .ok_or_else(|| Error::InvalidInput("irrational coefficient".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    let operator = ShiftOperator::poly(polys)?;
    let (r, k) = (d.order(), d.coeff_degree());
    if operator.order() > r + k || operator.degree() > r {
        return Err(Error::BoundViolation(format!(
            "operator {operator} exceeds order {} / degree {r}",
            r + k
        )));
    }
    let valid_from = v.max(leading_validity_offset(&operator)?);
    Ok(DerivedRecurrence {
        operator,
        valid_from,
    })
}

/// Recurrence with exponential-polynomial coefficients for the series
/// solutions of a homogeneous equation with dilated arguments.
pub fn diff_to_c2(d: &DiffEquation) -> Result<DerivedRecurrence> {
    for a in d.bases() {
        if a.field().is_some_and(|f| f.degree() > 2) {
            return Err(Error::UnsupportedField(format!("base {a}")));
        }
    }
    let (mut coeffs, v) = diff_to_coeffs(d)?;
    scale_rational_content(&mut coeffs);
    let lead = coeffs.last().unwrap().clone();
    let operator = ShiftOperator::exppoly(coeffs)?;
    let (r, k) = (d.order(), d.coeff_degree());
    if operator.order() > r + k || operator.degree() > r {
        return Err(Error::BoundViolation(format!(
            "operator {operator} exceeds order {} / degree {r}",
            r + k
        )));
    }
    let valid_from = v.max(exp_leading_offset(&lead)?);
    Ok(DerivedRecurrence {
        operator,
        valid_from,
    })
}
