//! OEIS b-file text: `index value` per line, `#` comments and blank lines
//! ignored, indices consecutive.

use crate::error::{Error, Result};
use crate::exact::rational::{format_rational, parse_rational};
use crate::seq::Sequence;

pub fn parse_bfile(text: &str) -> Result<Sequence> {
    let mut terms = Vec::new();
    let mut offset = None;
    let mut next = 0i64;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |msg: &str| Error::ParseError {
            line: i + 1,
            msg: msg.to_string(),
        };
        let mut parts = line.split_whitespace();
        let idx: i64 = parts
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| err("bad index"))?;
        let val = parts
            .next()
            .and_then(parse_rational)
            .ok_or_else(|| err("bad value"))?;
        if parts.next().is_some() {
            return Err(err("trailing fields"));
        }
        match offset {
            None => {
                offset = Some(idx);
                next = idx;
            }
            Some(_) if idx != next => return Err(err("indices are not consecutive")),
            _ => {}
        }
        terms.push(val);
        next += 1;
    }
    Ok(Sequence::new(terms, offset.unwrap_or(0)))
}

pub fn write_bfile(s: &Sequence) -> String {
    let mut out = String::new();
    for (i, t) in s.terms.iter().enumerate() {
        out.push_str(&format!("{} {}\n", s.offset + i as i64, format_rational(t)));
    }
    out
}

/// Comma-separated list of rationals.
pub fn parse_csv(text: &str) -> Result<Sequence> {
    let terms: Result<Vec<_>> = text
        .split(',')
        .enumerate()
        .filter(|(_, s)| !s.trim().is_empty())
        .map(|(i, s)| {
            parse_rational(s).ok_or_else(|| Error::ParseError {
                line: 1,
                msg: format!("bad value #{}: `{}`", i + 1, s.trim()),
            })
        })
        .collect();
    Ok(Sequence::new(terms?, 0))
}
