//! Formal series solutions of recurrences with polynomial coefficients.
//!
//! Solutions are sought in the form
//! `y(n) = K (n/e)^(mu0 n) lambda^n n^theta (1 + c_1/n + c_2/n^2 + ...)`,
//! i.e. `exp(mu0 n ln n + mu1 n) n^theta` with `lambda = exp(mu0 + mu1)`.
//! Substituting into `sum_i p_i(n) y(n+i) = 0` and dividing by `y(n)` turns
//! the problem into power series identities in `z = 1/n`, solved exactly.

use std::fmt;

use crate::closedform::characteristic_roots;
use crate::error::{Error, Result};
use crate::exact::rational::{format_rational, to_f64};
use crate::exact::{Field, Nf, Poly, Rational, Ring};
use crate::seq::ShiftOperator;

#[derive(Clone, Debug, PartialEq)]
pub struct AsymptoticForm {
    pub mu0: i64,
    pub lambda: Nf,
    pub theta: Nf,
    /// Ramification index; only 1 is handled.
    pub rho: u32,
    /// Exponent of the sub-exponential factor; only 0 is handled.
    pub beta: Rational,
    /// `c_1, ..., c_m`.
    pub series: Vec<Nf>,
}

impl AsymptoticForm {
    /// `ln` of the template without `K` at a real point, when every
    /// parameter is rational and `lambda > 0`.
    pub fn ln_template(&self, n: f64) -> Option<f64> {
        let lambda = to_f64(&self.lambda.to_rational()?);
        let theta = to_f64(&self.theta.to_rational()?);
        if lambda <= 0.0 {
            return None;
        }
        let mut s = 1.0;
        for (j, c) in self.series.iter().enumerate() {
            s += to_f64(&c.to_rational()?) / n.powi(j as i32 + 1);
        }
        if s <= 0.0 {
            return None;
        }
        let mu0 = self.mu0 as f64;
        Some(mu0 * n * (n.ln() - 1.0) + n * lambda.ln() + theta * n.ln() + s.ln())
    }
}

impl fmt::Display for AsymptoticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("K")?;
        match self.mu0 {
            0 => {}
            1 => f.write_str(" * (n/e)^n")?,
            m => write!(f, " * (n/e)^({m}*n)")?,
        }
        if !self.lambda.is_one() {
            write!(f, " * ({})^n", self.lambda)?;
        }
        if !self.theta.is_zero() {
            write!(f, " * n^({})", self.theta)?;
        }
        if !self.series.is_empty() {
            f.write_str(" * (1")?;
            for (j, c) in self.series.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let pow = if j == 0 {
                    "n".to_string()
                } else {
                    format!("n^{}", j + 1)
                };
                match c.to_rational() {
                    Some(r) if r < Rational::from_i64(0) => {
                        write!(f, " - ({})/{pow}", format_rational(&-r))?
                    }
                    _ => write!(f, " + ({c})/{pow}")?,
                }
            }
            write!(f, " + O(n^-{}))", self.series.len() + 1)?;
        }
        Ok(())
    }
}

/// Truncated power series in `z` over a number field.
#[derive(Clone, Debug)]
struct Series(Vec<Nf>);

impl Series {
    fn zero(len: usize) -> Self {
        Series(vec![Nf::zero(); len])
    }

    fn one(len: usize) -> Self {
        let mut s = Self::zero(len);
        if len > 0 {
            s.0[0] = Nf::one();
        }
        s
    }

    fn len(&self) -> usize {
        self.0.len()
    }

    fn mul(&self, o: &Series) -> Series {
        let n = self.len();
        let mut out = Series::zero(n);
        for (i, a) in self.0.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (j, b) in o.0.iter().take(n - i).enumerate() {
                out.0[i + j] = out.0[i + j].plus(&a.times(b));
            }
        }
        out
    }

    fn add_scaled(&mut self, o: &Series, c: &Nf) {
        for (x, y) in self.0.iter_mut().zip(&o.0) {
            *x = x.plus(&c.times(y));
        }
    }

    /// `exp(g)` for `g(0) = 0`.
    fn exp(g: &Series) -> Series {
        let n = g.len();
        let mut f = Series::one(n);
        for m in 1..n {
            let mut acc = Nf::zero();
            for k in 1..=m {
                acc = acc.plus(&Nf::from_i64(k as i64).times(&g.0[k]).times(&f.0[m - k]));
            }
            f.0[m] = acc.times(&Nf::rational(Rational::new(1.into(), (m as i64).into())));
        }
        f
    }

    /// `(1 + a z)^e` for a number-field exponent.
    fn binomial(a: i64, e: &Nf, len: usize) -> Series {
        let mut s = Series::one(len);
        let mut c = Nf::one();
        let az = Nf::from_i64(a);
        for m in 1..len {
            c = c
                .times(&e.minus(&Nf::from_i64(m as i64 - 1)))
                .times(&Nf::rational(Rational::new(1.into(), (m as i64).into())))
                .times(&az);
            s.0[m] = c.clone();
        }
        s
    }
}

/// Points `(i, deg p_i)` and leading data of a recurrence.
struct Shape {
    coeffs: Vec<Poly<Rational>>,
}

impl Shape {
    fn new(op: &ShiftOperator) -> Result<Self> {
        let coeffs = op
            .poly_coeffs()
            .ok_or_else(|| Error::InvalidInput("polynomial coefficients expected".into()))?;
        if coeffs.len() < 2 {
            return Err(Error::InvalidInput(
                "operator of order at least 1 expected".into(),
            ));
        }
        Ok(Shape { coeffs })
    }

    fn points(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, p)| !p.is_zero())
            .map(|(i, p)| (i as i64, p.deg0() as i64))
    }

    /// `max_i (deg p_i + mu0 i)`.
    fn top(&self, mu0: i64) -> i64 {
        self.points().map(|(i, d)| d + mu0 * i).max().unwrap()
    }

    /// `sum over the dominant indices of lc(p_i) x^i`.
    fn characteristic(&self, mu0: i64) -> Poly<Rational> {
        let top = self.top(mu0);
        let mut c = vec![Rational::from_i64(0); self.coeffs.len()];
        for (i, d) in self.points() {
            if d + mu0 * i == top {
                c[i as usize] = self.coeffs[i as usize].leading();
            }
        }
        Poly::new(c)
    }

    /// `lambda^i p_i(n) n^(mu0 i) / n^top` as a series in `z`.
    fn scaled_coeff(&self, i: usize, mu0: i64, lambda: &Nf, len: usize) -> Series {
        let p = &self.coeffs[i];
        let mut s = Series::zero(len);
        if p.is_zero() {
            return s;
        }
        let gap = (self.top(mu0) - p.deg0() as i64 - mu0 * i as i64) as usize;
        let li = lambda.powi(i as i64);
        for k in 0..=p.deg0() {
            if gap + k < len {
                s.0[gap + k] = li.times(&Nf::rational(p.coeff(p.deg0() - k)));
            }
        }
        s
    }

    /// `y(n+i) / y(n)` divided by `n^(mu0 i) lambda^i`, without the trailing
    /// series.
    fn ratio(i: usize, mu0: i64, theta: &Nf, len: usize) -> Series {
        let k = Rational::from_i64(i as i64);
        // mu0 * ((n+i) ln(1 + i/n) - i) = mu0 * sum_j (-1)^(j+1) i^(j+1) / (j (j+1)) z^j
        let mut g = Series::zero(len);
        for j in 1..len {
            let sign = if j % 2 == 1 { 1 } else { -1 };
            let v = Ring::pow(&k, j as u64 + 1) * Rational::from_i64(mu0 * sign)
                / Rational::from_i64((j * (j + 1)) as i64);
            g.0[j] = Nf::rational(v);
        }
        Series::exp(&g).mul(&Series::binomial(i as i64, theta, len))
    }

    /// `S(n+i)` for `S = 1 + sum_j c_j z^j`.
    fn shifted_series(i: usize, c: &[Nf], len: usize) -> Series {
        let mut s = Series::one(len);
        for (j, cj) in c.iter().enumerate() {
            let j = j + 1;
            if j >= len || cj.is_zero() {
                continue;
            }
            // z^j (1 + i z)^(-j)
            let b = Series::binomial(i as i64, &Nf::from_i64(-(j as i64)), len - j);
            for (t, v) in b.0.iter().enumerate() {
                s.0[j + t] = s.0[j + t].plus(&cj.times(v));
            }
        }
        s
    }

    /// `sum_i lambda^i p_i(n) y(n+i) / (y(n) n^top)` up to `z^(len-1)`.
    fn residual(&self, form: &AsymptoticForm, c: &[Nf], len: usize) -> Series {
        let mut total = Series::zero(len);
        for i in 0..self.coeffs.len() {
            let term = self
                .scaled_coeff(i, form.mu0, &form.lambda, len)
                .mul(&Self::ratio(i, form.mu0, &form.theta, len))
                .mul(&Self::shifted_series(i, c, len));
            total.add_scaled(&term, &Nf::one());
        }
        total
    }
}

/// Integer values of `mu0` at which at least two terms balance, ascending.
fn balancing_mu0(shape: &Shape) -> Result<Vec<i64>> {
    let pts: Vec<(i64, i64)> = shape.points().collect();
    let mut out: Vec<i64> = Vec::new();
    for (a, &(i, di)) in pts.iter().enumerate() {
        for &(j, dj) in &pts[a + 1..] {
            // d_i + mu i = d_j + mu j
            let (num, den) = (di - dj, j - i);
            let exact = num % den == 0;
            let mu_floor = num.div_euclid(den);
            // a non-integer value only matters if it is a genuine hull edge
            let is_edge = |mu_num: Rational| {
                let e = |(k, d): (i64, i64)| {
                    Rational::from_i64(d) + mu_num.clone() * Rational::from_i64(k)
                };
                let top = pts.iter().map(|&p| e(p)).max().unwrap();
                e((i, di)) == top
            };
            let mu = Rational::new(num.into(), den.into());
            if !is_edge(mu) {
                continue;
            }
            if !exact {
                return Err(Error::UnsupportedCase(format!(
                    "dominant balance needs mu0 = {num}/{den}, which requires ramification"
                )));
            }
            if !out.contains(&mu_floor) {
                out.push(mu_floor);
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Leading parameters of every formal series solution in the supported
/// subclass, sorted by `(mu0, lambda, theta)`.
pub fn bt_leading(op: &ShiftOperator) -> Result<Vec<AsymptoticForm>> {
    let shape = Shape::new(op)?;
    let mut forms = Vec::new();
    for mu0 in balancing_mu0(&shape)? {
        let chi = shape.characteristic(mu0);
        let low = chi
            .coeffs()
            .iter()
            .take_while(|c| num_traits::Zero::is_zero(*c))
            .count();
        let reduced = Poly::new(chi.coeffs()[low..].to_vec());
        let roots = characteristic_roots(&reduced).map_err(|e| match e {
            Error::UnsupportedFactorization(m) => Error::UnsupportedCase(format!("lambda: {m}")),
            other => other,
        })?;
        let dchi = chi.map(|c| Nf::rational(c.clone())).derivative();
        for (lambda, mult) in roots {
            if mult > 1 {
                return Err(Error::UnsupportedCase(format!(
                    "lambda = {lambda} is a repeated root; the solutions need ramification or logarithms"
                )));
            }
            // z^1 balance: theta * lambda chi'(lambda) + rest = 0
            let probe = |theta: Nf| {
                let f = AsymptoticForm {
                    mu0,
                    lambda: lambda.clone(),
                    theta,
                    rho: 1,
                    beta: Rational::from_i64(0),
                    series: vec![],
                };
                shape.residual(&f, &[], 2).0[1].clone()
            };
            let rest = probe(Nf::zero());
            let slope = lambda.times(&dchi.eval(&lambda));
            let theta = rest
                .negate()
                .divide(&slope)
                .expect("simple root has nonzero derivative");
            debug_assert!(probe(theta.clone()).is_zero());
            forms.push(AsymptoticForm {
                mu0,
                lambda,
                theta,
                rho: 1,
                beta: Rational::from_i64(0),
                series: vec![],
            });
        }
    }
    forms.sort_by(|a, b| (a.mu0, &a.lambda, &a.theta).cmp(&(b.mu0, &b.lambda, &b.theta)));
    Ok(forms)
}

/// Determines `c_1, ..., c_m` by undetermined coefficients.
pub fn bt_refine(form: &AsymptoticForm, op: &ShiftOperator, m: usize) -> Result<AsymptoticForm> {
    if form.rho != 1 || !num_traits::Zero::is_zero(&form.beta) {
        return Err(Error::UnsupportedCase(
            "only rho = 1 and beta = 0 are supported".into(),
        ));
    }
    let shape = Shape::new(op)?;
    let head = shape.residual(form, &[], 2);
    if let Some(k) = head.0.iter().position(|c| !c.is_zero()) {
        return Err(Error::InconsistentSystem(format!(
            "leading balance fails at order n^-{k}"
        )));
    }
    let chi = shape
        .characteristic(form.mu0)
        .map(|c| Nf::rational(c.clone()));
    let slope = form.lambda.times(&chi.derivative().eval(&form.lambda));
    let mut c: Vec<Nf> = Vec::with_capacity(m);
    for j in 1..=m {
        // c_j enters the z^(j+1) equation with coefficient -j lambda chi'(lambda)
        c.push(Nf::zero());
        let r = shape.residual(form, &c, j + 2).0[j + 1].clone();
        let coef = slope.times(&Nf::from_i64(-(j as i64)));
        let cj = r
            .negate()
            .divide(&coef)
            .ok_or_else(|| Error::InconsistentSystem(format!("coefficient of c_{j} vanishes")))?;
        c[j - 1] = cj;
    }
    let check = shape.residual(form, &c, m + 2);
    if let Some(k) = check.0.iter().position(|x| !x.is_zero()) {
        return Err(Error::InconsistentSystem(format!(
            "series equation at order n^-{k} cannot be met"
        )));
    }
    Ok(AsymptoticForm {
        series: c,
        ..form.clone()
    })
}

/// Coefficients of `z^0, ..., z^(len-1)` left after substituting the form
/// (with its series) into the recurrence; all zero up to `z^(m+1)` for a
/// refined form with `m` series terms.
pub fn series_residual(form: &AsymptoticForm, op: &ShiftOperator, len: usize) -> Result<Vec<Nf>> {
    Ok(Shape::new(op)?.residual(form, &form.series, len).0)
}
