use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use ansatzkit::asymptotics::{bt_leading, bt_refine, AsymptoticForm};
use ansatzkit::closedform::{cfinite_closed_form, poly_binomial_form};
use ansatzkit::closure::{
    combine, parse_claim, prove_identity, ClosureKind, IdentityClaim, Verdict,
};
use ansatzkit::format::bfile::write_bfile;
use ansatzkit::format::json::{
    diff_to_json, exppoly_to_json, nf_to_json, rational_to_json, sequence_to_json, system_to_json,
    to_string,
};
use ansatzkit::format::text::parse_operator;
use ansatzkit::genfun::{
    c2_homogenize, c2_to_diff, genfun_cfinite, genfun_polynomial, holonomic_to_diff, homogenize,
    RationalGF,
};
use ansatzkit::{CoeffRingKind, Poly, Rational, RecurrenceSystem};
use serde_json::{json, Value};

use crate::args::{
    AsymptoticsArgs, Class, ClosureArgs, Common, FetchArgs, GenfunArgs, GuessArgs, Kind, ProveArgs,
    RecurrenceArgs,
};
use crate::error::{CliError, CliResult};
use crate::input::{self, class_of, format_values, system_from_text, Coefficients};
use crate::oeis;

fn write_json(path: &Option<std::path::PathBuf>, v: &Value) -> CliResult<()> {
    if let Some(p) = path {
        let mut text = to_string(v);
        text.push('\n');
        std::fs::write(p, text).map_err(|e| CliError::io(Path::new(p).display(), e))?;
    }
    Ok(())
}

fn poly_json(p: &Poly<Rational>) -> Value {
    Value::Array(p.coeffs().iter().map(rational_to_json).collect())
}

fn gf_json(g: &RationalGF) -> Value {
    json!({"class": "rational", "numerator": poly_json(g.numerator()), "denominator": poly_json(g.denominator())})
}

fn describe_system(out: &mut String, rs: &RecurrenceSystem) {
    writeln!(out, "operator: {}", rs.operator).unwrap();
    writeln!(out, "initials: {}", format_values(&rs.initials)).unwrap();
    writeln!(out, "offset: {}", rs.start).unwrap();
    if rs.validity_offset != rs.start {
        writeln!(out, "valid from: n = {}", rs.validity_offset).unwrap();
    }
}

pub fn fetch(args: &FetchArgs) -> CliResult<String> {
    let s = oeis::fetch(&args.oeis)?;
    write_json(&args.json, &sequence_to_json(&s))?;
    Ok(write_bfile(&s))
}

pub fn guess(args: &GuessArgs) -> CliResult<String> {
    let s = input::sequence(&args.input)?;
    let report = input::guess(&s, &args.common)?;
    let mut out = String::new();
    describe_system(&mut out, &report.system);
    if let Some(p) = &report.polynomial {
        writeln!(out, "polynomial: {p}").unwrap();
    }
    writeln!(
        out,
        "shape: order {}, degree {}",
        report.shape.0, report.shape.1
    )
    .unwrap();
    writeln!(
        out,
        "terms: {} fitted, {} verified",
        report.terms_used_for_fit, report.terms_verified
    )
    .unwrap();
    if report.degenerate {
        writeln!(out, "note: all terms are zero").unwrap();
    }
    write_json(&args.common.json, &system_to_json(&report.system))?;
    Ok(out)
}

fn coefficients(common: &Common) -> CliResult<Coefficients> {
    Coefficients::parse(&common.coeff)
}

fn load(rec: &RecurrenceArgs) -> CliResult<RecurrenceSystem> {
    input::recurrence(
        &rec.input,
        &rec.initials,
        &rec.common,
        &coefficients(&rec.common)?,
    )
}

fn class(rec: &RecurrenceArgs, rs: &RecurrenceSystem) -> Class {
    rec.common
        .class
        .unwrap_or_else(|| class_of(rs.operator.ring()))
}

pub fn genfun(args: &GenfunArgs) -> CliResult<String> {
    let rec = &args.rec;
    if rec.common.class == Some(Class::Poly) && rec.input.op.is_none() {
        let rs = load(rec)?;
        let s = rs.expand(rec.common.max_degree + 2 + rec.common.margin)?;
        let report = ansatzkit::guess::guess_polynomial(&s, rec.common.max_degree)?;
        let g = genfun_polynomial(report.polynomial.as_ref().expect("polynomial guess"));
        write_json(&rec.common.json, &gf_json(&g))?;
        return Ok(format!("f(x) = {g}\n"));
    }
    let rs = load(rec)?;
    let (d, name) = match class(rec, &rs) {
        Class::Poly | Class::Cfinite => {
            let g = genfun_cfinite(&rs)?;
            write_json(&rec.common.json, &gf_json(&g))?;
            return Ok(format!("f(x) = {g}\n"));
        }
        Class::Holonomic => {
            let d = holonomic_to_diff(&rs)?;
            (
                if args.homogenize { homogenize(&d) } else { d },
                "holonomic",
            )
        }
        Class::C2 => {
            let d = c2_to_diff(&rs)?;
            (
                if args.homogenize {
                    c2_homogenize(&d)
                } else {
                    d
                },
                "c2",
            )
        }
    };
    write_json(&rec.common.json, &diff_to_json(&d))?;
    Ok(format!("equation ({name}): {d}\n"))
}

pub fn closedform(rec: &RecurrenceArgs) -> CliResult<String> {
    let rs = load(rec)?;
    match class(rec, &rs) {
        Class::Poly => {
            let s = rs.expand(rec.common.max_degree + 2 + rec.common.margin)?;
            let form = poly_binomial_form(&s, rec.common.max_degree)?;
            let coeffs: Vec<Value> = form.coefficients.iter().map(rational_to_json).collect();
            write_json(
                &rec.common.json,
                &json!({"class": "binomial", "coefficients": coeffs}),
            )?;
            Ok(format!("a(n) = {form}\n"))
        }
        Class::Cfinite => {
            let cf = cfinite_closed_form(&rs)?;
            let mut out = format!("a(n) = {}\n", cf.expression);
            if cf.valid_from != rs.start {
                writeln!(out, "valid from: n = {}", cf.valid_from).unwrap();
                writeln!(out, "earlier values: {}", format_values(&cf.exceptional)).unwrap();
            }
            let exceptional: Vec<Value> = cf.exceptional.iter().map(rational_to_json).collect();
            write_json(
                &rec.common.json,
                &json!({"expression": exppoly_to_json(&cf.expression), "valid_from": cf.valid_from, "exceptional": exceptional}),
            )?;
            Ok(out)
        }
        c => Err(CliError::Usage(format!(
            "closed forms are available for poly and cfinite, not {c:?}"
        ))),
    }
}

pub fn closure(args: &ClosureArgs) -> CliResult<String> {
    let rec = &args.rec;
    let kind = match args.kind {
        Kind::Add => ClosureKind::Add,
        Kind::Termwise => ClosureKind::TermWise,
        Kind::Cauchy => ClosureKind::Cauchy,
        Kind::PartialSum => ClosureKind::PartialSum,
        Kind::Subsequence => ClosureKind::Subsequence(args.step),
    };
    let coeffs = coefficients(&rec.common)?;
    let a = input::recurrence(&rec.input, &rec.initials, &rec.common, &coeffs)?;
    let b = match (&args.op2, &args.initials2) {
        (Some(op), Some(init)) => Some(system_from_text(
            op,
            init,
            &coeffs.names()?,
            rec.common.class,
        )?),
        _ => None,
    };
    if kind.is_binary() != b.is_some() {
        return Err(CliError::Usage(if kind.is_binary() {
            format!("{kind} needs a second operand (--op2, --initials2)")
        } else {
            format!("{kind} takes a single operand")
        }));
    }
    let outcome = combine(kind, &a, b.as_ref())?;
    let mut out = String::new();
    describe_system(&mut out, &outcome.system);
    if let Some(bound) = outcome.order_bound {
        writeln!(out, "order bound: {bound}").unwrap();
    }
    if let Some(g) = &outcome.gf {
        writeln!(out, "f(x) = {g}").unwrap();
    }
    if outcome.bumped > 0 {
        writeln!(
            out,
            "order raised by {} to avoid a vanishing leading coefficient",
            outcome.bumped
        )
        .unwrap();
    }
    write_json(&rec.common.json, &system_to_json(&outcome.system))?;
    Ok(out)
}

fn form_json(f: &AsymptoticForm) -> Value {
    json!({
        "mu0": f.mu0,
        "lambda": nf_to_json(&f.lambda),
        "theta": nf_to_json(&f.theta),
        "series": f.series.iter().map(nf_to_json).collect::<Vec<_>>(),
    })
}

pub fn asymptotics(args: &AsymptoticsArgs) -> CliResult<String> {
    let rs = load(&args.rec)?;
    if rs.operator.ring() == CoeffRingKind::ExpPolyCoeff {
        return Err(CliError::Usage(
            "asymptotic expansions need polynomial coefficients".into(),
        ));
    }
    let mut out = String::new();
    let mut forms = Vec::new();
    for f in bt_leading(&rs.operator)? {
        let f = if args.refine > 0 {
            bt_refine(&f, &rs.operator, args.refine)?
        } else {
            f
        };
        writeln!(out, "{f}").unwrap();
        forms.push(form_json(&f));
    }
    write_json(&args.rec.common.json, &Value::Array(forms))?;
    Ok(out)
}

/// Runs the prover; a refutation is reported and turned into exit code 1.
pub fn prove(args: &ProveArgs) -> (String, CliResult<()>) {
    let run = || -> CliResult<(String, Option<i64>)> {
        let coeffs = coefficients(&args.common)?;
        let mut claim = IdentityClaim::new(parse_claim(&args.claim)?, args.from);
        if let Some(op) = &args.outer {
            claim = claim.with_operator(parse_operator(
                op,
                &BTreeMap::new(),
                Some(CoeffRingKind::Constant),
            )?);
        }
        let cert = prove_identity(&claim, &coeffs.systems)?;
        let mut out = String::new();
        if args.bound_report {
            writeln!(out, "{cert}").unwrap();
        } else {
            writeln!(out, "order bound: {}", cert.order_bound).unwrap();
        }
        let refuted = match cert.verdict {
            Verdict::Proven => {
                writeln!(out, "PROVEN").unwrap();
                None
            }
            Verdict::Refuted(n) => {
                writeln!(out, "REFUTED at n = {n}").unwrap();
                Some(n)
            }
        };
        let verdict = match cert.verdict {
            Verdict::Proven => json!("proven"),
            Verdict::Refuted(n) => json!({"refuted_at": n}),
        };
        write_json(
            &args.common.json,
            &json!({
                "order_bound": cert.order_bound,
                "trace": cert.trace,
                "first_index": cert.first_index,
                "terms_checked": cert.terms_checked,
                "verdict": verdict,
            }),
        )?;
        Ok((out, refuted))
    };
    match run() {
        Ok((out, None)) => (out, Ok(())),
        Ok((out, Some(n))) => (
            out,
            Err(CliError::Failure(format!("identity fails at n = {n}"))),
        ),
        Err(e) => (String::new(), Err(e)),
    }
}
