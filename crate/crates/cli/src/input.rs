//! Turning flags into sequences, recurrences and coefficient registries.

use std::collections::BTreeMap;
use std::path::Path;

use ansatzkit::c2::CoefficientRegistry;
use ansatzkit::closedform::closed_form_to_recurrence;
use ansatzkit::exact::rational::{format_rational, parse_rational};
use ansatzkit::format::bfile::{parse_bfile, parse_csv};
use ansatzkit::format::json::{sequence_from_json, system_from_json};
use ansatzkit::format::text::{parse_exppoly, parse_operator, CoeffRegistry};
use ansatzkit::guess::{
    guess_cfinite, guess_holonomic, guess_polynomial, GuessOptions, GuessReport,
};
use ansatzkit::{CoeffRingKind, Error, Rational, RecurrenceSystem, Sequence};

use crate::args::{Class, Common, RecInput, SeqInput};
use crate::error::{CliError, CliResult};
use crate::oeis;

pub enum Loaded {
    Terms(Sequence),
    System(RecurrenceSystem),
}

pub fn read_file(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(path.display(), e))
}

fn load_file(path: &Path) -> CliResult<Loaded> {
    let text = read_file(path)?;
    if !text.trim_start().starts_with('{') {
        return Ok(Loaded::Terms(parse_bfile(&text)?));
    }
    let v: serde_json::Value = serde_json::from_str(&text).map_err(|e| Error::ParseError {
        line: e.line(),
        msg: e.to_string(),
    })?;
    if v.get("class").is_some() {
        Ok(Loaded::System(system_from_json(&v)?))
    } else {
        Ok(Loaded::Terms(sequence_from_json(&v)?))
    }
}

fn load_terms(
    oeis_id: &Option<String>,
    terms: &Option<String>,
    file: &Option<std::path::PathBuf>,
) -> CliResult<Option<Loaded>> {
    Ok(if let Some(id) = oeis_id {
        Some(Loaded::Terms(oeis::fetch(id)?))
    } else if let Some(t) = terms {
        Some(Loaded::Terms(parse_csv(t)?))
    } else if let Some(p) = file {
        Some(load_file(p)?)
    } else {
        None
    })
}

pub fn sequence(input: &SeqInput) -> CliResult<Sequence> {
    match load_terms(&input.oeis, &input.terms, &input.file)? {
        Some(Loaded::Terms(s)) => Ok(s),
        Some(Loaded::System(_)) => Err(CliError::Usage(
            "expected sequence terms, found a recurrence".into(),
        )),
        None => Err(CliError::Usage("no input given".into())),
    }
}

pub fn parse_values(csv: &str) -> CliResult<Vec<Rational>> {
    csv.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| {
            parse_rational(s)
                .ok_or_else(|| CliError::Usage(format!("bad initial value `{}`", s.trim())))
        })
        .collect()
}

pub fn format_values(v: &[Rational]) -> String {
    v.iter().map(format_rational).collect::<Vec<_>>().join(",")
}

pub fn ring_of(class: Class) -> CoeffRingKind {
    match class {
        Class::Poly | Class::Cfinite => CoeffRingKind::Constant,
        Class::Holonomic => CoeffRingKind::PolyInN,
        Class::C2 => CoeffRingKind::ExpPolyCoeff,
    }
}

pub fn class_of(ring: CoeffRingKind) -> Class {
    match ring {
        CoeffRingKind::Constant => Class::Cfinite,
        CoeffRingKind::PolyInN => Class::Holonomic,
        CoeffRingKind::ExpPolyCoeff => Class::C2,
    }
}

/// Recurrence from operator text and exactly the initial values it needs.
pub fn system_from_text(
    op: &str,
    initials: &str,
    names: &CoeffRegistry,
    class: Option<Class>,
) -> CliResult<RecurrenceSystem> {
    let op = parse_operator(op, names, class.map(ring_of))?;
    let values = parse_values(initials)?;
    let rs = RecurrenceSystem::from_terms(op, &values).map_err(|e| match e {
        Error::InsufficientData(m) => CliError::Usage(m),
        e => e.into(),
    })?;
    if rs.initials.len() != values.len() {
        return Err(CliError::Usage(format!(
            "expected {} initial values, got {}",
            rs.initials.len(),
            values.len()
        )));
    }
    Ok(rs)
}

pub fn guess(s: &Sequence, common: &Common) -> CliResult<GuessReport> {
    let opts = GuessOptions {
        margin: common.margin,
        known_shape: None,
    };
    Ok(match common.class.unwrap_or(Class::Cfinite) {
        Class::Poly => guess_polynomial(s, common.max_degree)?,
        Class::Cfinite => guess_cfinite(s, common.max_order, &opts)?,
        Class::Holonomic => guess_holonomic(s, common.max_order, common.max_degree, &opts)?,
        Class::C2 => {
            return Err(CliError::Usage(
                "guessing is available for poly, cfinite and holonomic".into(),
            ))
        }
    })
}

/// The recurrence named by `--op`/`--initials`, a JSON system file, or one
/// guessed from sequence terms.
pub fn recurrence(
    input: &RecInput,
    initials: &Option<String>,
    common: &Common,
    coeffs: &Coefficients,
) -> CliResult<RecurrenceSystem> {
    if let Some(op) = &input.op {
        let init = initials
            .as_deref()
            .ok_or_else(|| CliError::Usage("--op needs --initials".into()))?;
        return system_from_text(op, init, &coeffs.names()?, common.class);
    }
    match load_terms(&input.oeis, &input.terms, &input.file)? {
        Some(Loaded::System(rs)) => Ok(rs),
        Some(Loaded::Terms(s)) => {
            let mut s = s;
            // recurrences are indexed from 0; OEIS offsets are dropped here
            s.offset = 0;
            Ok(guess(&s, common)?.system)
        }
        None => Err(CliError::Usage("no input given".into())),
    }
}

/// Coefficient sequences declared with `--coeff`.
pub struct Coefficients {
    pub systems: BTreeMap<String, RecurrenceSystem>,
    registry: CoefficientRegistry,
    pending: Vec<(String, RecurrenceSystem)>,
}

impl Coefficients {
    pub fn parse(specs: &[String]) -> CliResult<Self> {
        let registry = CoefficientRegistry::new();
        let mut systems = BTreeMap::new();
        let mut pending = Vec::new();
        for spec in specs {
            let (name, body) = spec
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("`{spec}` is not of the form NAME=SPEC")))?;
            let name = name.trim().to_string();
            if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                return Err(CliError::Usage(format!("bad coefficient name `{name}`")));
            }
            let rs = if let Some(rest) = body.strip_prefix("cfinite:") {
                let (op, init) = rest.split_once(';').ok_or_else(|| {
                    CliError::Usage(format!("`{spec}`: expected OPERATOR;INITIALS"))
                })?;
                let rs = system_from_text(op, init, &CoeffRegistry::new(), Some(Class::Cfinite))?;
                pending.push((name.clone(), rs.clone()));
                rs
            } else {
                let text = body.strip_prefix("exppoly:").unwrap_or(body);
                let e = parse_exppoly(text, &registry.closed_forms())?;
                let rs = closed_form_to_recurrence(&e)?;
                registry.register_closed_form(&name, e)?;
                rs
            };
            systems.insert(name, rs);
        }
        Ok(Coefficients {
            systems,
            registry,
            pending,
        })
    }

    /// Closed forms for the operator parser. C-finite declarations are only
    /// converted here, so commands that never parse a coefficient name do not
    /// need closed forms to exist.
    pub fn names(&self) -> CliResult<CoeffRegistry> {
        for (name, rs) in &self.pending {
            self.registry.register(name, rs)?;
        }
        Ok(self.registry.closed_forms())
    }
}
