//! Time-aware filter index over all splits.

use super::{Dataset, FilterIndex, Vocab};

/// Build the filter index over every provided split.
///
/// For each stored quad `(h, r, t, τ)` the key `(h, r, τ)` gains tail
/// `t`, and the reciprocal key `(t, r±|R|, τ)` gains `h`, so both query
/// directions filter against all known facts regardless of which splits
/// store reciprocals explicitly.
pub fn build_filter_index(splits: &[&Dataset], vocab: &Vocab) -> FilterIndex {
    let mut index = FilterIndex::default();
    for dataset in splits {
        for quad in &dataset.quads {
            index.insert(quad.head, quad.relation, quad.time, quad.tail);
            let twin = vocab.reciprocal_quad(*quad);
            index.insert(twin.head, twin.relation, twin.time, twin.tail);
        }
    }
    index.finalize();
    index
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use super::super::{
        build_vocab, encode_dataset, generate_synthetic_kg, Quadruple, Split,
    };
    use super::*;

    fn mini_vocab(num_relations: usize) -> Vocab {
        let raw: Vec<_> = (0..num_relations)
            .map(|r| super::super::RawQuadruple {
                head: "e0".into(),
                relation: format!("r{r}"),
                tail: "e1".into(),
                time_literal: "2000-01-01".into(),
            })
            .collect();
        // Pad entities/timestamps so arbitrary ids below stay in range.
        build_vocab(&raw).unwrap()
    }

    #[test]
    fn single_fact_indexes_forward_and_reciprocal() {
        let vocab = mini_vocab(2);
        let ds = Dataset {
            quads: vec![Quadruple { head: 0, relation: 1, tail: 1, time: 0 }],
            split: Split::Test,
        };
        let index = build_filter_index(&[&ds], &vocab);
        assert_eq!(index.tails(0, 1, 0), &[1]);
        assert_eq!(index.tails(1, 3, 0), &[0]); // reciprocal of r1 is id 3
        assert_eq!(index.key_count(), 2);
    }

    #[test]
    fn unseen_key_is_empty() {
        let vocab = mini_vocab(1);
        let index = build_filter_index(&[], &vocab);
        assert!(index.tails(5, 5, 5).is_empty());
    }

    #[test]
    fn shared_key_accumulates_tails() {
        let vocab = mini_vocab(1);
        let ds = Dataset {
            quads: vec![
                Quadruple { head: 0, relation: 0, tail: 2, time: 3 },
                Quadruple { head: 0, relation: 0, tail: 5, time: 3 },
                Quadruple { head: 0, relation: 0, tail: 2, time: 3 },
            ],
            split: Split::Train,
        };
        let index = build_filter_index(&[&ds], &vocab);
        assert_eq!(index.tails(0, 0, 3), &[2, 5]);
    }

    #[test]
    fn matches_brute_force_scan_on_synthetic_kg() {
        let raw = generate_synthetic_kg(20, 4, 6, 300, 99).unwrap();
        let vocab = build_vocab(&raw).unwrap();
        let (a, rest) = raw.split_at(200);
        let (b, c) = rest.split_at(50);
        let train = encode_dataset(a, &vocab, Split::Train).unwrap();
        let valid = encode_dataset(b, &vocab, Split::Valid).unwrap();
        let test = encode_dataset(c, &vocab, Split::Test).unwrap();
        let index = build_filter_index(&[&train, &valid, &test], &vocab);

        // Oracle: exhaustive scan over all quads in both directions.
        let mut all: Vec<Quadruple> = Vec::new();
        for ds in [&train, &valid, &test] {
            for q in &ds.quads {
                all.push(*q);
                all.push(vocab.reciprocal_quad(*q));
            }
        }
        let keys: BTreeSet<(u32, u32, u32)> =
            all.iter().map(|q| (q.head, q.relation, q.time)).collect();
        assert_eq!(index.key_count(), keys.len());
        for (h, r, t) in keys {
            let expected: BTreeSet<u32> = all
                .iter()
                .filter(|q| q.head == h && q.relation == r && q.time == t)
                .map(|q| q.tail)
                .collect();
            let got: BTreeSet<u32> = index.tails(h, r, t).iter().copied().collect();
            assert_eq!(got, expected, "key ({h},{r},{t})");
        }
        // Every test quad's own tail is in its filter set.
        for q in &test.quads {
            assert!(index.contains(q.head, q.relation, q.time, q.tail));
        }
    }
}
