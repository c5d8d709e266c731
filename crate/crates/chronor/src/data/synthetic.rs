//! Deterministic synthetic knowledge graphs for tests and demos.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::HashSet;

use super::{DataError, RawQuadruple};

/// Generate `num_facts` distinct raw quadruples over synthetic
/// vocabularies `e0..`, `r0..`, and a chronological date sequence.
///
/// Deterministic for a fixed seed. While `num_facts` allows it, every
/// entity, relation, and timestamp appears in at least one fact.
pub fn generate_synthetic_kg(
    num_entities: usize,
    num_relations: usize,
    num_timestamps: usize,
    num_facts: usize,
    seed: u64,
) -> Result<Vec<RawQuadruple>, DataError> {
    assert!(num_entities >= 1 && num_relations >= 1 && num_timestamps >= 1 && num_facts >= 1);
    let possible = (num_entities as u64)
        .saturating_mul(num_entities as u64)
        .saturating_mul(num_relations as u64)
        .saturating_mul(num_timestamps as u64);
    if num_facts as u64 > possible {
        return Err(DataError::Infeasible { requested: num_facts as u64, possible });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen: HashSet<(usize, usize, usize, usize)> = HashSet::new();
    let mut facts = Vec::with_capacity(num_facts);
    let mut push = |key: (usize, usize, usize, usize),
                    seen: &mut HashSet<_>,
                    facts: &mut Vec<RawQuadruple>| {
        if seen.insert(key) {
            facts.push(RawQuadruple {
                head: format!("e{}", key.0),
                relation: format!("r{}", key.1),
                tail: format!("e{}", key.2),
                time_literal: date_literal(key.3),
            });
            true
        } else {
            false
        }
    };

    // Coverage pass: cycle through every entity, relation, and timestamp.
    let coverage = num_entities.max(num_relations).max(num_timestamps);
    'cover: for i in 0..coverage {
        if facts.len() == num_facts {
            break;
        }
        let (h, r, t) = (i % num_entities, i % num_relations, i % num_timestamps);
        for offset in 1..=num_entities {
            let tail = (i + offset) % num_entities;
            if push((h, r, tail, t), &mut seen, &mut facts) {
                continue 'cover;
            }
        }
        // Every tail for this (h, r, τ) already emitted; coverage of h/r/τ holds.
    }

    // Fill pass: rejection-sample the remainder. Dense requests (more
    // than half of the key space) enumerate and shuffle instead, since
    // rejection degenerates there.
    if (num_facts as u64) * 2 > possible {
        use rand::seq::SliceRandom;
        let mut keys: Vec<(usize, usize, usize, usize)> = Vec::with_capacity(possible as usize);
        for h in 0..num_entities {
            for r in 0..num_relations {
                for t in 0..num_entities {
                    for tau in 0..num_timestamps {
                        keys.push((h, r, t, tau));
                    }
                }
            }
        }
        keys.shuffle(&mut rng);
        for key in keys {
            if facts.len() == num_facts {
                break;
            }
            push(key, &mut seen, &mut facts);
        }
    } else {
        while facts.len() < num_facts {
            let key = (
                rng.random_range(0..num_entities),
                rng.random_range(0..num_relations),
                rng.random_range(0..num_entities),
                rng.random_range(0..num_timestamps),
            );
            push(key, &mut seen, &mut facts);
        }
    }
    Ok(facts)
}

/// Chronologically increasing date literal for timestamp index `i`.
fn date_literal(i: usize) -> String {
    let year = 2000 + i / 372;
    let month = (i % 372) / 31 + 1;
    let day = i % 31 + 1;
    format!("{year:04}-{month:02}-{day:02}")
}
