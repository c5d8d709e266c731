//! On-disk formats for encoded datasets, vocabularies, and filter
//! indexes.
//!
//! Encoded dataset (`.tkgd`): magic `TKGD`, version `u32`, then counts
//! (entities, relations incl. reciprocals, timestamps, quads) as
//! little-endian `u32`, then one `(head, relation, tail, time)` record
//! of four little-endian `u32` per quad.
//!
//! Filter index (`.tkgf`): magic `TKGF`, version `u32`, key count
//! `u32`, then per key (sorted ascending): head, relation, time, tail
//! count, tails — all little-endian `u32`.
//!
//! Vocabulary: JSON with entity/source-relation/timestamp string lists;
//! reciprocal relation names are reconstructed on load.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{vocab_from_parts, DataError, Dataset, FilterIndex, Quadruple, Split, Vocab};

const DATASET_MAGIC: &[u8; 4] = b"TKGD";
const FILTER_MAGIC: &[u8; 4] = b"TKGF";
const FORMAT_VERSION: u32 = 1;

fn format_err(path: &Path, msg: impl Into<String>) -> DataError {
    DataError::Format { path: path.display().to_string(), msg: msg.into() }
}

struct Reader<R> {
    inner: R,
}

impl<R: Read> Reader<R> {
    fn u32(&mut self, path: &Path, field: &str) -> Result<u32, DataError> {
        let mut buf = [0u8; 4];
        self.inner
            .read_exact(&mut buf)
            .map_err(|_| format_err(path, format!("truncated file while reading {field}")))?;
        Ok(u32::from_le_bytes(buf))
    }
}

/// Write an encoded split.
pub fn save_dataset(dataset: &Dataset, vocab: &Vocab, path: &Path) -> Result<(), DataError> {
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(DATASET_MAGIC)?;
    w.write_all(&FORMAT_VERSION.to_le_bytes())?;
    for count in [
        vocab.entity_count(),
        vocab.relation_count(),
        vocab.timestamp_count(),
        dataset.quads.len(),
    ] {
        w.write_all(&(count as u32).to_le_bytes())?;
    }
    for q in &dataset.quads {
        for id in [q.head, q.relation, q.tail, q.time] {
            w.write_all(&id.to_le_bytes())?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Load an encoded split and validate each id against `vocab`.
pub fn load_dataset(path: &Path, vocab: &Vocab, split: Split) -> Result<Dataset, DataError> {
    let mut r = Reader { inner: BufReader::new(File::open(path)?) };
    let mut magic = [0u8; 4];
    r.inner
        .read_exact(&mut magic)
        .map_err(|_| format_err(path, "truncated file while reading magic"))?;
    if &magic != DATASET_MAGIC {
        return Err(format_err(path, format!("bad magic {magic:?}, expected \"TKGD\"")));
    }
    let version = r.u32(path, "version")?;
    if version != FORMAT_VERSION {
        return Err(format_err(path, format!("unsupported version {version}")));
    }
    let entities = r.u32(path, "entity count")?;
    let relations = r.u32(path, "relation count")?;
    let timestamps = r.u32(path, "timestamp count")?;
    let quad_count = r.u32(path, "quad count")?;
    for (name, got, want) in [
        ("entity count", entities as usize, vocab.entity_count()),
        ("relation count", relations as usize, vocab.relation_count()),
        ("timestamp count", timestamps as usize, vocab.timestamp_count()),
    ] {
        if got != want {
            return Err(format_err(path, format!("{name} {got} does not match vocabulary {want}")));
        }
    }
    let mut quads = Vec::with_capacity(quad_count as usize);
    for i in 0..quad_count {
        let field = format!("quad {i}");
        let q = Quadruple {
            head: r.u32(path, &field)?,
            relation: r.u32(path, &field)?,
            tail: r.u32(path, &field)?,
            time: r.u32(path, &field)?,
        };
        if q.head >= entities || q.tail >= entities || q.relation >= relations || q.time >= timestamps
        {
            return Err(format_err(path, format!("quad {i} has out-of-range id")));
        }
        quads.push(q);
    }
    let mut trailing = [0u8; 1];
    if r.inner.read(&mut trailing)? != 0 {
        return Err(format_err(path, "trailing bytes after quad records"));
    }
    Ok(Dataset { quads, split })
}

#[derive(Serialize, Deserialize)]
struct VocabFile {
    entities: Vec<String>,
    source_relations: Vec<String>,
    timestamps: Vec<String>,
}

pub fn save_vocab(vocab: &Vocab, path: &Path) -> Result<(), DataError> {
    let file = VocabFile {
        entities: vocab.entities().to_vec(),
        source_relations: vocab.relations()[..vocab.num_source_relations()].to_vec(),
        timestamps: vocab.timestamps().to_vec(),
    };
    let w = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(w, &file).map_err(|e| format_err(path, e.to_string()))?;
    Ok(())
}

pub fn load_vocab(path: &Path) -> Result<Vocab, DataError> {
    let r = BufReader::new(File::open(path)?);
    let file: VocabFile =
        serde_json::from_reader(r).map_err(|e| format_err(path, e.to_string()))?;
    Ok(vocab_from_parts(file.entities, file.source_relations, file.timestamps))
}

pub fn save_filter_index(index: &FilterIndex, path: &Path) -> Result<(), DataError> {
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(FILTER_MAGIC)?;
    w.write_all(&FORMAT_VERSION.to_le_bytes())?;
    let entries = index.sorted_entries();
    w.write_all(&(entries.len() as u32).to_le_bytes())?;
    for ((head, relation, time), tails) in entries {
        for id in [*head, *relation, *time, tails.len() as u32] {
            w.write_all(&id.to_le_bytes())?;
        }
        for t in tails {
            w.write_all(&t.to_le_bytes())?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn load_filter_index(path: &Path) -> Result<FilterIndex, DataError> {
    let mut r = Reader { inner: BufReader::new(File::open(path)?) };
    let mut magic = [0u8; 4];
    r.inner
        .read_exact(&mut magic)
        .map_err(|_| format_err(path, "truncated file while reading magic"))?;
    if &magic != FILTER_MAGIC {
        return Err(format_err(path, format!("bad magic {magic:?}, expected \"TKGF\"")));
    }
    let version = r.u32(path, "version")?;
    if version != FORMAT_VERSION {
        return Err(format_err(path, format!("unsupported version {version}")));
    }
    let key_count = r.u32(path, "key count")?;
    let mut map = HashMap::with_capacity(key_count as usize);
    for i in 0..key_count {
        let field = format!("key {i}");
        let head = r.u32(path, &field)?;
        let relation = r.u32(path, &field)?;
        let time = r.u32(path, &field)?;
        let len = r.u32(path, &field)?;
        let mut tails = Vec::with_capacity(len as usize);
        for _ in 0..len {
            tails.push(r.u32(path, &field)?);
        }
        map.insert((head, relation, time), tails);
    }
    Ok(FilterIndex::from_map(map))
}
