//! Recurrences whose coefficients are themselves C-finite sequences, kept in
//! exponential-polynomial closed form.

use std::collections::BTreeMap;
use std::sync::RwLock;

use crate::closedform::cfinite_closed_form;
use crate::error::{Error, Result};
use crate::exact::rational::ln_abs;
use crate::exact::ExpPoly;
use crate::format::text::{parse_operator, CoeffRegistry};
use crate::seq::{expand_terms, CoeffRingKind, RecurrenceSystem, ShiftOperator};

/// Closed form of a C-finite recurrence, for use as a coefficient. The
/// recurrence must be described by its closed form from its first index on.
pub fn register_coefficient(rs: &RecurrenceSystem) -> Result<ExpPoly> {
    let cf = cfinite_closed_form(rs)?;
    if !cf.exceptional.is_empty() || rs.start != 0 {
        return Err(Error::InvalidInput(
            "coefficient sequence must equal its closed form from index 0".into(),
        ));
    }
    Ok(cf.expression)
}

/// Highest polynomial degree over the terms; `None` for the zero expression.
pub fn deg(e: &ExpPoly) -> Option<usize> {
    e.terms().map(|(_, p)| p.deg0()).max()
}

#[derive(Clone, Debug, PartialEq)]
pub struct RegisteredCoefficient {
    pub recurrence: Option<RecurrenceSystem>,
    pub closed_form: ExpPoly,
}

/// Named coefficient sequences. Registration takes a write lock, lookups a
/// read lock; entries are never removed.
#[derive(Debug, Default)]
pub struct CoefficientRegistry {
    entries: RwLock<BTreeMap<String, RegisteredCoefficient>>,
}

impl CoefficientRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    /// Registers a C-finite recurrence under `name`, returning its closed form.
    pub fn register(&self, name: &str, rs: &RecurrenceSystem) -> Result<ExpPoly> {
        let closed_form = register_coefficient(rs)?;
        self.insert(
            name,
            RegisteredCoefficient {
                recurrence: Some(rs.clone()),
                closed_form: closed_form.clone(),
            },
        )?;
        Ok(closed_form)
    }

    /// Registers an exponential polynomial given directly.
    pub fn register_closed_form(&self, name: &str, e: ExpPoly) -> Result<()> {
        e.field()?;
        self.insert(
            name,
            RegisteredCoefficient {
                recurrence: None,
                closed_form: e,
            },
        )
    }

    fn insert(&self, name: &str, entry: RegisteredCoefficient) -> Result<()> {
        let mut map = self.entries.write().unwrap();
        match map.get(name) {
            Some(old) if old.closed_form != entry.closed_form => Err(Error::InvalidInput(format!(
                "coefficient {name} already registered differently"
            ))),
            Some(_) => Ok(()),
            None => {
                map.insert(name.to_string(), entry);
                Ok(())
            }
        }
    }

    pub fn get(&self, name: &str) -> Option<RegisteredCoefficient> {
        self.entries.read().unwrap().get(name).cloned()
    }

    /// Name to closed-form map understood by the operator parser.
    pub fn closed_forms(&self) -> CoeffRegistry {
        self.entries
            .read()
            .unwrap()
            .iter()
            .map(|(k, v)| (k.clone(), v.closed_form.clone()))
            .collect()
    }
}

/// A recurrence with exponential-polynomial coefficients together with the
/// coefficient sequences its text form refers to.
#[derive(Clone, Debug, PartialEq)]
pub struct C2System {
    pub system: RecurrenceSystem,
    pub coefficients: BTreeMap<String, RegisteredCoefficient>,
    /// Largest polynomial degree among all coefficient terms.
    pub degree: usize,
}

impl C2System {
    pub fn new(
        system: RecurrenceSystem,
        coefficients: BTreeMap<String, RegisteredCoefficient>,
    ) -> Self {
        let degree = system
            .operator
            .exp_coeffs()
            .iter()
            .filter_map(deg)
            .max()
            .unwrap_or(0);
        C2System {
            system,
            coefficients,
            degree,
        }
    }

    /// Parses `operator` against the registry and attaches `initials` from
    /// index 0; the validity offset follows the leading coefficient.
    pub fn parse(
        operator: &str,
        initials: &[crate::exact::Rational],
        registry: &CoefficientRegistry,
    ) -> Result<Self> {
        let op = parse_operator(operator, &registry.closed_forms(), None)?;
        let op = ShiftOperator::exppoly(op.exp_coeffs())?;
        debug_assert_eq!(op.ring(), CoeffRingKind::ExpPolyCoeff);
        let system = RecurrenceSystem::from_terms(op, initials)?;
        let names: Vec<&str> = operator
            .split(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
            .filter(|w| !w.is_empty())
            .collect();
        let coefficients = names
            .into_iter()
            .filter_map(|k| registry.get(k).map(|v| (k.to_string(), v)))
            .collect();
        Ok(C2System::new(system, coefficients))
    }
}

/// Least-squares fit `ln|a_n| ~ quadratic n^2 + linear n + constant` on the
/// tail of the expansion.
#[derive(Clone, Debug, PartialEq)]
pub struct GrowthReport {
    pub quadratic: f64,
    pub linear: f64,
    pub constant: f64,
    /// `exp(quadratic)`, the base of the `alpha^(n^2)` growth law.
    pub alpha: f64,
    /// Root-mean-square residual of the fit.
    pub residual: f64,
    pub points: usize,
}

/// Fits the growth of `|a_n|` for `n` in the upper half of `0..=n_max`,
/// skipping zero terms.
pub fn growth_probe(rs: &RecurrenceSystem, n_max: usize) -> Result<GrowthReport> {
    let terms = expand_terms(rs, (n_max as i64 + 1 - rs.start).max(0) as usize)?;
    let lo = (n_max / 2) as i64;
    let pts: Vec<(f64, f64)> = (lo..=n_max as i64)
        .filter_map(|n| {
            terms
                .get(n)
                .filter(|v| !num_traits::Zero::is_zero(*v))
                .map(|v| (n as f64, ln_abs(v)))
        })
        .collect();
    if pts.is_empty() {
        return Err(Error::ZeroTail);
    }
    if pts.len() < 3 {
        return Err(Error::InsufficientData(
            "fewer than three nonzero tail terms".into(),
        ));
    }
    // normal equations in the scaled variable u = n / n_max for conditioning
    let scale = n_max as f64;
    let mut ata = [[0.0f64; 3]; 3];
    let mut aty = [0.0f64; 3];
    for &(n, y) in &pts {
        let u = n / scale;
        let row = [u * u, u, 1.0];
        for i in 0..3 {
            for j in 0..3 {
                ata[i][j] += row[i] * row[j];
            }
            aty[i] += row[i] * y;
        }
    }
    let sol = solve3(ata, aty).ok_or_else(|| Error::InsufficientData("degenerate fit".into()))?;
    let (quadratic, linear, constant) = (sol[0] / (scale * scale), sol[1] / scale, sol[2]);
    let ss: f64 = pts
        .iter()
        .map(|&(n, y)| {
            let e = y - (quadratic * n * n + linear * n + constant);
            e * e
        })
        .sum();
    Ok(GrowthReport {
        quadratic,
        linear,
        constant,
        alpha: quadratic.exp(),
        residual: (ss / pts.len() as f64).sqrt(),
        points: pts.len(),
    })
}

fn solve3(mut a: [[f64; 3]; 3], mut b: [f64; 3]) -> Option<[f64; 3]> {
    for c in 0..3 {
        let p = (c..3).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs()))?;
        if a[p][c].abs() < 1e-300 {
            return None;
        }
        a.swap(c, p);
        b.swap(c, p);
        for r in 0..3 {
            if r != c {
                let f = a[r][c] / a[c][c];
                let pivot = a[c];
                for (x, y) in a[r].iter_mut().zip(pivot).skip(c) {
                    *x -= f * y;
                }
                b[r] -= f * b[c];
            }
        }
    }
    Some([b[0] / a[0][0], b[1] / a[1][1], b[2] / a[2][2]])
}
