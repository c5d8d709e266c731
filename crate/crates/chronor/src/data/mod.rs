//! Quadruple datasets: parsing, vocabularies, integer encoding, filter
//! indexes, synthetic graphs, and the on-disk formats.

mod encode;
mod filter;
mod io;
mod parse;
mod synthetic;
mod vocab;

pub use encode::{decode_quadruple, encode_dataset};
pub use filter::build_filter_index;
pub use io::{load_dataset, load_filter_index, load_vocab, save_dataset, save_filter_index, save_vocab};
pub use parse::{parse_quadruple_file, parse_time_literal, DatasetFormat, TimeKey};
pub use synthetic::generate_synthetic_kg;
pub use vocab::build_vocab;

use std::collections::HashMap;

use thiserror::Error;

/// Sentinel time literal for facts without temporal scope.
pub const NO_TIME: &str = "NO_TIME";

#[derive(Debug, Error)]
pub enum DataError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{kind} not in vocabulary: {value:?}")]
    UnknownTerm { kind: &'static str, value: String },
    #[error("infeasible synthetic graph: requested {requested} facts but only {possible} distinct quadruples exist")]
    Infeasible { requested: u64, possible: u64 },
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("{path}: {msg}")]
    Format { path: String, msg: String },
}

/// One fact as read from a dataset file, before integer encoding.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RawQuadruple {
    pub head: String,
    pub relation: String,
    pub tail: String,
    /// A date literal such as `2014-10-18` or `1999-##-##`, or [`NO_TIME`].
    pub time_literal: String,
}

/// One integer-encoded fact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Quadruple {
    pub head: u32,
    pub relation: u32,
    pub tail: u32,
    pub time: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Split {
    Train,
    Valid,
    Test,
}

impl Split {
    pub fn name(self) -> &'static str {
        match self {
            Split::Train => "train",
            Split::Valid => "valid",
            Split::Test => "test",
        }
    }
}

/// Bidirectional string↔index maps for entities, relations, and
/// timestamps.
///
/// The relation list holds every source relation followed by one
/// reciprocal per source relation, so its length is twice the source
/// count. Timestamps are sorted chronologically with [`NO_TIME`], when
/// present, last.
#[derive(Debug, Clone)]
pub struct Vocab {
    entities: Vec<String>,
    relations: Vec<String>,
    timestamps: Vec<String>,
    entity_idx: HashMap<String, u32>,
    relation_idx: HashMap<String, u32>,
    timestamp_idx: HashMap<String, u32>,
    num_source_relations: usize,
    has_no_time: bool,
}

impl Vocab {
    pub fn entity_count(&self) -> usize {
        self.entities.len()
    }

    /// Total relation count including reciprocals.
    pub fn relation_count(&self) -> usize {
        self.relations.len()
    }

    pub fn num_source_relations(&self) -> usize {
        self.num_source_relations
    }

    pub fn timestamp_count(&self) -> usize {
        self.timestamps.len()
    }

    /// Length of the chronological chain used for temporal smoothness;
    /// excludes the [`NO_TIME`] sentinel.
    pub fn timestamp_chain_len(&self) -> usize {
        self.timestamps.len() - usize::from(self.has_no_time)
    }

    pub fn has_no_time(&self) -> bool {
        self.has_no_time
    }

    pub fn entity_id(&self, name: &str) -> Option<u32> {
        self.entity_idx.get(name).copied()
    }

    pub fn relation_id(&self, name: &str) -> Option<u32> {
        self.relation_idx.get(name).copied()
    }

    pub fn timestamp_id(&self, literal: &str) -> Option<u32> {
        self.timestamp_idx.get(literal).copied()
    }

    pub fn entity_name(&self, id: u32) -> &str {
        &self.entities[id as usize]
    }

    pub fn relation_name(&self, id: u32) -> &str {
        &self.relations[id as usize]
    }

    pub fn timestamp_literal(&self, id: u32) -> &str {
        &self.timestamps[id as usize]
    }

    /// Map a relation id to its reciprocal (and back).
    pub fn reciprocal_relation(&self, relation: u32) -> u32 {
        let half = self.num_source_relations as u32;
        if relation < half {
            relation + half
        } else {
            relation - half
        }
    }

    /// The reciprocal twin of a quadruple: `(t, r±|R|, h, τ)`.
    pub fn reciprocal_quad(&self, quad: Quadruple) -> Quadruple {
        Quadruple {
            head: quad.tail,
            relation: self.reciprocal_relation(quad.relation),
            tail: quad.head,
            time: quad.time,
        }
    }

    pub fn entities(&self) -> &[String] {
        &self.entities
    }

    pub fn relations(&self) -> &[String] {
        &self.relations
    }

    pub fn timestamps(&self) -> &[String] {
        &self.timestamps
    }
}

/// An encoded split of a dataset.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub quads: Vec<Quadruple>,
    pub split: Split,
}

impl Dataset {
    pub fn len(&self) -> usize {
        self.quads.len()
    }

    pub fn is_empty(&self) -> bool {
        self.quads.is_empty()
    }
}

/// Map from `(head, relation, timestamp)` to every tail known true for
/// that key across all splits, forward and reciprocal.
#[derive(Debug, Clone, Default)]
pub struct FilterIndex {
    map: HashMap<(u32, u32, u32), Vec<u32>>,
}

impl FilterIndex {
    /// Known true tails for a query key; empty for unseen keys. The
    /// returned slice is sorted ascending.
    pub fn tails(&self, head: u32, relation: u32, time: u32) -> &[u32] {
        self.map
            .get(&(head, relation, time))
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    pub fn contains(&self, head: u32, relation: u32, time: u32, tail: u32) -> bool {
        self.tails(head, relation, time).binary_search(&tail).is_ok()
    }

    pub fn key_count(&self) -> usize {
        self.map.len()
    }

    pub(crate) fn insert(&mut self, head: u32, relation: u32, time: u32, tail: u32) {
        self.map.entry((head, relation, time)).or_default().push(tail);
    }

    pub(crate) fn finalize(&mut self) {
        for tails in self.map.values_mut() {
            tails.sort_unstable();
            tails.dedup();
        }
    }

    /// Deterministic (sorted) iteration over keys and tail sets.
    pub fn sorted_entries(&self) -> Vec<(&(u32, u32, u32), &Vec<u32>)> {
        let mut entries: Vec<_> = self.map.iter().collect();
        entries.sort_unstable_by_key(|(k, _)| **k);
        entries
    }

    pub(crate) fn from_map(map: HashMap<(u32, u32, u32), Vec<u32>>) -> Self {
        FilterIndex { map }
    }
}

pub(crate) fn vocab_from_parts(
    entities: Vec<String>,
    source_relations: Vec<String>,
    timestamps: Vec<String>,
) -> Vocab {
    let mut relations = source_relations.clone();
    relations.extend(source_relations.iter().map(|r| format!("{r}^-1")));
    let has_no_time = timestamps.last().map(|t| t == NO_TIME).unwrap_or(false);
    let index_of = |names: &[String]| -> HashMap<String, u32> {
        names
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i as u32))
            .collect()
    };
    Vocab {
        entity_idx: index_of(&entities),
        relation_idx: index_of(&relations),
        timestamp_idx: index_of(&timestamps),
        num_source_relations: source_relations.len(),
        entities,
        relations,
        timestamps,
        has_no_time,
    }
}
