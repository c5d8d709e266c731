//! Tab-separated quadruple file parsing for the ICEWS and YAGO15K
//! layouts.

use std::io::{BufRead, BufReader, Read};

use super::{DataError, RawQuadruple, NO_TIME};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DatasetFormat {
    /// Four tab-separated fields: head, relation, tail, ISO date.
    Icews,
    /// Three fields (timeless fact) or five fields (fact, time modifier,
    /// quoted date literal). The modifier is folded into the relation
    /// name as `<relation>@<modifier>`.
    Yago15k,
}

impl DatasetFormat {
    pub fn parse_name(name: &str) -> Option<Self> {
        match name.to_ascii_lowercase().as_str() {
            "icews" => Some(DatasetFormat::Icews),
            "yago15k" | "yago" => Some(DatasetFormat::Yago15k),
            _ => None,
        }
    }
}

/// Sort key of a time literal: wildcard month/day parse as 0, and the
/// [`NO_TIME`] sentinel orders after every date.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct TimeKey {
    pub year: i32,
    pub month: u8,
    pub day: u8,
}

impl TimeKey {
    pub const NO_TIME: TimeKey = TimeKey { year: i32::MAX, month: u8::MAX, day: u8::MAX };
}

/// Parse a date literal such as `2014-10-18` or `1999-##-##`.
///
/// Surrounding double quotes are stripped. [`NO_TIME`] maps to the
/// maximal key so it sorts last.
pub fn parse_time_literal(literal: &str) -> Result<TimeKey, String> {
    if literal == NO_TIME {
        return Ok(TimeKey::NO_TIME);
    }
    let trimmed = literal.trim_matches('"');
    let mut parts = trimmed.split('-');
    let (Some(y), Some(m), Some(d), None) = (parts.next(), parts.next(), parts.next(), parts.next())
    else {
        return Err(format!("expected YEAR-MM-DD date literal, got {literal:?}"));
    };
    let year: i32 = y
        .parse()
        .map_err(|_| format!("invalid year {y:?} in date literal {literal:?}"))?;
    let month = parse_date_part(m, 12).ok_or_else(|| {
        format!("invalid month {m:?} in date literal {literal:?}")
    })?;
    let day = parse_date_part(d, 31).ok_or_else(|| {
        format!("invalid day {d:?} in date literal {literal:?}")
    })?;
    Ok(TimeKey { year, month, day })
}

fn parse_date_part(part: &str, max: u8) -> Option<u8> {
    if part == "##" {
        return Some(0);
    }
    part.parse::<u8>().ok().filter(|v| (1..=max).contains(v))
}

/// Strip one layer of angle brackets, as used by some YAGO exports.
fn strip_brackets(token: &str) -> &str {
    token
        .strip_prefix('<')
        .and_then(|t| t.strip_suffix('>'))
        .unwrap_or(token)
}

const YAGO_MODIFIERS: [&str; 2] = ["occursSince", "occursUntil"];

/// Parse one fact per line from a tab-separated UTF-8 stream.
///
/// Empty lines are skipped. Any malformed line fails with its 1-based
/// line number.
pub fn parse_quadruple_file<R: Read>(
    source: R,
    format: DatasetFormat,
) -> Result<Vec<RawQuadruple>, DataError> {
    let reader = BufReader::new(source);
    let mut quads = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line_no = i + 1;
        let line = line.map_err(|e| DataError::Parse { line: line_no, msg: e.to_string() })?;
        if line.trim().is_empty() {
            continue;
        }
        quads.push(parse_line(&line, format, line_no)?);
    }
    Ok(quads)
}

fn parse_line(
    line: &str,
    format: DatasetFormat,
    line_no: usize,
) -> Result<RawQuadruple, DataError> {
    let err = |msg: String| DataError::Parse { line: line_no, msg };
    let fields: Vec<&str> = line.split('\t').map(str::trim).collect();
    let quad = match (format, fields.as_slice()) {
        (DatasetFormat::Icews, [h, r, t, time]) => RawQuadruple {
            head: (*h).to_string(),
            relation: (*r).to_string(),
            tail: (*t).to_string(),
            time_literal: (*time).trim_matches('"').to_string(),
        },
        (DatasetFormat::Icews, f) => {
            return Err(err(format!("expected 4 tab-separated fields, got {}", f.len())));
        }
        (DatasetFormat::Yago15k, [h, r, t]) => RawQuadruple {
            head: (*h).to_string(),
            relation: (*r).to_string(),
            tail: (*t).to_string(),
            time_literal: NO_TIME.to_string(),
        },
        (DatasetFormat::Yago15k, [h, r, t, modifier, time]) => {
            let modifier = strip_brackets(modifier);
            if !YAGO_MODIFIERS.contains(&modifier) {
                return Err(err(format!("unknown time modifier token {modifier:?}")));
            }
            RawQuadruple {
                head: (*h).to_string(),
                relation: format!("{r}@{modifier}"),
                tail: (*t).to_string(),
                time_literal: (*time).trim_matches('"').to_string(),
            }
        }
        (DatasetFormat::Yago15k, f) => {
            return Err(err(format!("expected 3 or 5 tab-separated fields, got {}", f.len())));
        }
    };
    if quad.head.is_empty() || quad.relation.is_empty() || quad.tail.is_empty() {
        return Err(err("empty head, relation, or tail field".to_string()));
    }
    if quad.time_literal != NO_TIME {
        parse_time_literal(&quad.time_literal).map_err(err)?;
    }
    Ok(quad)
}
