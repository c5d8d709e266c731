//! Vocabulary construction over all raw splits.

use std::collections::BTreeSet;

use super::parse::{parse_time_literal, TimeKey};
use super::{vocab_from_parts, DataError, RawQuadruple, Vocab, NO_TIME};

/// Build the entity/relation/timestamp vocabularies over raw quadruples
/// from every split.
///
/// Entities and relations are ordered lexicographically (so ids are
/// independent of file order); one reciprocal relation is appended per
/// source relation. Timestamps are ordered chronologically by
/// `(year, month, day)` with wildcard parts as 0 and [`NO_TIME`] last.
pub fn build_vocab(raw: &[RawQuadruple]) -> Result<Vocab, DataError> {
    let mut entities = BTreeSet::new();
    let mut relations = BTreeSet::new();
    let mut timestamps = BTreeSet::new();
    for quad in raw {
        entities.insert(quad.head.clone());
        entities.insert(quad.tail.clone());
        relations.insert(quad.relation.clone());
        timestamps.insert(quad.time_literal.clone());
    }

    let mut keyed: Vec<(TimeKey, String)> = timestamps
        .into_iter()
        .map(|lit| {
            let key = parse_time_literal(&lit)
                .map_err(|msg| DataError::Parse { line: 0, msg })?;
            Ok((key, lit))
        })
        .collect::<Result<_, DataError>>()?;
    keyed.sort(); // (key, literal) pairs: chronological, literal tie-break
    let timestamps: Vec<String> = keyed.into_iter().map(|(_, lit)| lit).collect();
    debug_assert!(
        timestamps.iter().position(|t| t == NO_TIME).map_or(true, |i| i + 1 == timestamps.len()),
        "NO_TIME must sort last"
    );

    Ok(vocab_from_parts(
        entities.into_iter().collect(),
        relations.into_iter().collect(),
        timestamps,
    ))
}
