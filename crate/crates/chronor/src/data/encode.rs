//! Integer encoding of raw quadruples against a fixed vocabulary.

use super::{DataError, Dataset, Quadruple, RawQuadruple, Split, Vocab};

/// Encode raw facts under `vocab`.
///
/// The train split stores each fact twice: forward and as its
/// reciprocal `(t, r⁻¹, h, τ)`, so head prediction reduces to tail
/// prediction. Valid and test splits store forward quads only;
/// reciprocal queries are formed at evaluation time.
pub fn encode_dataset(
    raw: &[RawQuadruple],
    vocab: &Vocab,
    split: Split,
) -> Result<Dataset, DataError> {
    let mut quads = Vec::with_capacity(if split == Split::Train { 2 * raw.len() } else { raw.len() });
    for rq in raw {
        let quad = encode_quadruple(rq, vocab)?;
        quads.push(quad);
        if split == Split::Train {
            quads.push(vocab.reciprocal_quad(quad));
        }
    }
    Ok(Dataset { quads, split })
}

fn encode_quadruple(raw: &RawQuadruple, vocab: &Vocab) -> Result<Quadruple, DataError> {
    let unknown = |kind: &'static str, value: &str| DataError::UnknownTerm {
        kind,
        value: value.to_string(),
    };
    Ok(Quadruple {
        head: vocab.entity_id(&raw.head).ok_or_else(|| unknown("entity", &raw.head))?,
        relation: vocab
            .relation_id(&raw.relation)
            .ok_or_else(|| unknown("relation", &raw.relation))?,
        tail: vocab.entity_id(&raw.tail).ok_or_else(|| unknown("entity", &raw.tail))?,
        time: vocab
            .timestamp_id(&raw.time_literal)
            .ok_or_else(|| unknown("timestamp", &raw.time_literal))?,
    })
}

/// Decode an encoded quadruple back to strings. Reciprocal relations
/// decode to their stored `…^-1` names.
pub fn decode_quadruple(quad: Quadruple, vocab: &Vocab) -> RawQuadruple {
    RawQuadruple {
        head: vocab.entity_name(quad.head).to_string(),
        relation: vocab.relation_name(quad.relation).to_string(),
        tail: vocab.entity_name(quad.tail).to_string(),
        time_literal: vocab.timestamp_literal(quad.time).to_string(),
    }
}
