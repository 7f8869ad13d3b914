//! JSON documents. Rationals are written as strings (`"3/4"`) so big
//! integers survive; algebraic numbers as `{"minpoly": [...], "rep": [...]}`.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exact::rational::{format_rational, parse_rational};
use crate::exact::{ExpPoly, Nf, NumberField, Poly, Rational, Ring};
use crate::genfun::DiffEquation;
use crate::seq::{CoeffRingKind, RecurrenceSystem, Sequence, ShiftOperator};

fn bad(msg: &str) -> Error {
    Error::ParseError {
        line: 0,
        msg: msg.to_string(),
    }
}

pub mod rational_vec {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::exact::rational::{format_rational, parse_rational};
    use crate::exact::Rational;

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(format_rational))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let raw: Vec<String> = Vec::deserialize(d)?;
        raw.iter()
            .map(|s| {
                parse_rational(s)
                    .ok_or_else(|| serde::de::Error::custom(format!("bad rational {s}")))
            })
            .collect()
    }
}

pub fn rational_to_json(r: &Rational) -> Value {
    Value::String(format_rational(r))
}

pub fn rational_from_json(v: &Value) -> Result<Rational> {
    v.as_str()
        .and_then(parse_rational)
        .ok_or_else(|| bad("expected a rational string"))
}

fn rationals_to_json(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(rational_to_json).collect())
}

fn rationals_from_json(v: &Value) -> Result<Vec<Rational>> {
    v.as_array()
        .ok_or_else(|| bad("expected an array"))?
        .iter()
        .map(rational_from_json)
        .collect()
}

pub fn nf_to_json(x: &Nf) -> Value {
    match (x.field(), x.to_rational()) {
        (_, Some(r)) => rational_to_json(&r),
        (Some(f), None) => json!({
            "minpoly": rationals_to_json(f.minpoly_coeffs()),
            "rep": rationals_to_json(x.rep()),
        }),
        (None, None) => unreachable!(),
    }
}

pub fn nf_from_json(v: &Value) -> Result<Nf> {
    if v.is_string() {
        return Ok(Nf::rational(rational_from_json(v)?));
    }
    let m = rationals_from_json(v.get("minpoly").ok_or_else(|| bad("missing minpoly"))?)?;
    let rep = rationals_from_json(v.get("rep").ok_or_else(|| bad("missing rep"))?)?;
    if m.len() <= 2 {
        // degree-one defining polynomial: the field is Q
        let p = Poly::new(rep);
        let root = if m.len() == 2 {
            -m[0].clone() / m[1].clone()
        } else {
            Rational::zero()
        };
        return Ok(Nf::rational(p.eval(&root)));
    }
    let f = NumberField::new(&Poly::new(m))?;
    Ok(Nf::in_field(&f, rep))
}

fn base_to_json(b: &Nf) -> Value {
    match (b.field(), b.to_rational()) {
        (_, Some(r)) => json!({"minpoly": ["0", "1"], "rep": [format_rational(&r)]}),
        _ => nf_to_json(b),
    }
}

pub fn exppoly_to_json(e: &ExpPoly) -> Value {
    Value::Array(
        e.terms()
            .map(|(b, p)| {
                json!({
                    "base": base_to_json(b),
                    "poly": Value::Array(p.coeffs().iter().map(nf_to_json).collect()),
                })
            })
            .collect(),
    )
}

pub fn exppoly_from_json(v: &Value) -> Result<ExpPoly> {
    let mut acc = ExpPoly::zero();
    for t in v
        .as_array()
        .ok_or_else(|| bad("expected an array of terms"))?
    {
        let b = nf_from_json(t.get("base").ok_or_else(|| bad("missing base"))?)?;
        let cs: Result<Vec<Nf>> = t
            .get("poly")
            .and_then(|p| p.as_array())
            .ok_or_else(|| bad("missing poly"))?
            .iter()
            .map(nf_from_json)
            .collect();
        if b.is_zero() {
            return Err(bad("zero base"));
        }
        acc = acc.add(&ExpPoly::term(b, Poly::new(cs?)));
    }
    Ok(acc)
}

pub fn class_name(ring: CoeffRingKind) -> &'static str {
    match ring {
        CoeffRingKind::Constant => "cfinite",
        CoeffRingKind::PolyInN => "holonomic",
        CoeffRingKind::ExpPolyCoeff => "c2",
    }
}

pub fn operator_to_json(op: &ShiftOperator) -> Value {
    match op {
        ShiftOperator::Constant(c) => rationals_to_json(c),
        ShiftOperator::PolyInN(c) => {
            Value::Array(c.iter().map(|p| rationals_to_json(p.coeffs())).collect())
        }
        ShiftOperator::ExpPolyCoeff(c) => Value::Array(c.iter().map(exppoly_to_json).collect()),
    }
}

pub fn operator_from_json(ring: CoeffRingKind, v: &Value) -> Result<ShiftOperator> {
    let arr = v.as_array().ok_or_else(|| bad("coeffs must be an array"))?;
    match ring {
        CoeffRingKind::Constant => ShiftOperator::constant(rationals_from_json(v)?),
        CoeffRingKind::PolyInN => ShiftOperator::poly(
            arr.iter()
                .map(|p| rationals_from_json(p).map(Poly::new))
                .collect::<Result<_>>()?,
        ),
        CoeffRingKind::ExpPolyCoeff => {
            ShiftOperator::exppoly(arr.iter().map(exppoly_from_json).collect::<Result<_>>()?)
        }
    }
}

/// `{"class", "order", "coeffs", "initials", "offset", "validity_offset"}`.
pub fn system_to_json(rs: &RecurrenceSystem) -> Value {
    json!({
        "class": class_name(rs.operator.ring()),
        "order": rs.order(),
        "coeffs": operator_to_json(&rs.operator),
        "initials": rationals_to_json(&rs.initials),
        "offset": rs.start,
        "validity_offset": rs.validity_offset,
    })
}

pub fn system_from_json(v: &Value) -> Result<RecurrenceSystem> {
    let ring = match v.get("class").and_then(|c| c.as_str()) {
        Some("cfinite") | Some("poly") => CoeffRingKind::Constant,
        Some("holonomic") => CoeffRingKind::PolyInN,
        Some("c2") => CoeffRingKind::ExpPolyCoeff,
        _ => return Err(bad("unknown class")),
    };
    let op = operator_from_json(ring, v.get("coeffs").ok_or_else(|| bad("missing coeffs"))?)?;
    let init = rationals_from_json(v.get("initials").ok_or_else(|| bad("missing initials"))?)?;
    let start = v.get("offset").and_then(|x| x.as_i64()).unwrap_or(0);
    let valid = v
        .get("validity_offset")
        .and_then(|x| x.as_i64())
        .unwrap_or(start);
    RecurrenceSystem::new(op, init, start, valid)
}

pub fn sequence_to_json(s: &Sequence) -> Value {
    json!({"terms": rationals_to_json(&s.terms), "offset": s.offset})
}

pub fn sequence_from_json(v: &Value) -> Result<Sequence> {
    let terms = rationals_from_json(v.get("terms").ok_or_else(|| bad("missing terms"))?)?;
    Ok(Sequence::new(
        terms,
        v.get("offset").and_then(|x| x.as_i64()).unwrap_or(0),
    ))
}

fn nf_poly_to_json(p: &Poly<Nf>) -> Value {
    Value::Array(p.coeffs().iter().map(nf_to_json).collect())
}

fn nf_poly_from_json(v: &Value) -> Result<Poly<Nf>> {
    let cs = v
        .as_array()
        .ok_or_else(|| bad("expected a coefficient array"))?;
    Ok(Poly::new(
        cs.iter().map(nf_from_json).collect::<Result<_>>()?,
    ))
}

/// `{"class": "ode", "terms": [{"base", "derivative", "poly"}], "rhs"}`,
/// one term per nonzero coefficient of `d^j/dx^j f(base x)`.
pub fn diff_to_json(d: &DiffEquation) -> Value {
    let mut terms = Vec::new();
    for b in d.bases() {
        for j in 0..=d.order() {
            let p = d.coeff(&b, j);
            if !p.is_zero() {
                terms.push(
                    json!({"base": nf_to_json(&b), "derivative": j, "poly": nf_poly_to_json(&p)}),
                );
            }
        }
    }
    json!({"class": "ode", "terms": terms, "rhs": nf_poly_to_json(d.rhs())})
}

pub fn diff_from_json(v: &Value) -> Result<DiffEquation> {
    let terms = v
        .get("terms")
        .and_then(|t| t.as_array())
        .ok_or_else(|| bad("missing terms"))?;
    let parsed = terms
        .iter()
        .map(|t| {
            let b = nf_from_json(t.get("base").ok_or_else(|| bad("missing base"))?)?;
            let j = t
                .get("derivative")
                .and_then(|x| x.as_u64())
                .ok_or_else(|| bad("missing derivative"))?;
            let p = nf_poly_from_json(t.get("poly").ok_or_else(|| bad("missing poly"))?)?;
            Ok((b, j as usize, p))
        })
        .collect::<Result<Vec<_>>>()?;
    let rhs = nf_poly_from_json(v.get("rhs").ok_or_else(|| bad("missing rhs"))?)?;
    DiffEquation::from_terms(parsed, rhs)
}

/// Stable pretty-printed form (object keys are sorted).
pub fn to_string(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}
