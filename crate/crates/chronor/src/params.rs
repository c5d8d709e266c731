//! Embedding tables, initialization, and checkpoint persistence.
//!
//! Checkpoint format (`.ckpt`): magic `CHRN`, version `u32`, config
//! block (entity/relation/timestamp counts, `n`, `k`, `n_r`, `n_τ` as
//! little-endian `u32`; `init_std` as `f64`; `seed` as `u64`), then the
//! entity, relation, time, and static-rotor tables as little-endian
//! `f64` in row-major order, then a CRC32 of all preceding bytes.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use ndarray::Array2;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::data::Vocab;

const CHECKPOINT_MAGIC: &[u8; 4] = b"CHRN";
const CHECKPOINT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum ParamsError {
    #[error("invalid model config: {0}")]
    Config(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("{path}: checkpoint load failed at {field}: {msg}")]
    Load { path: String, field: &'static str, msg: String },
}

/// Shape and initialization parameters of a model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelConfig {
    /// Number of entities.
    pub entities: usize,
    /// Number of relations including reciprocals.
    pub relations: usize,
    /// Number of timestamps.
    pub timestamps: usize,
    /// Embedding rows per element.
    pub n: usize,
    /// Rotor dimension.
    pub k: usize,
    /// Relation rows of the `[r|τ]` rotor.
    pub n_r: usize,
    /// Time rows of the `[r|τ]` rotor.
    pub n_t: usize,
    /// Standard deviation of the normal initializer.
    pub init_std: f64,
    /// Seed for the initializer.
    pub seed: u64,
}

impl ModelConfig {
    pub fn new(vocab: &Vocab, n: usize, k: usize, n_r: usize, init_std: f64, seed: u64) -> Self {
        ModelConfig {
            entities: vocab.entity_count(),
            relations: vocab.relation_count(),
            timestamps: vocab.timestamp_count(),
            n,
            k,
            n_r,
            n_t: n.saturating_sub(n_r),
            init_std,
            seed,
        }
    }

    /// Split `n` into `(n_r, n_t)` from a target ratio `n_r / n_τ`.
    pub fn split_rows(n: usize, ratio: f64) -> (usize, usize) {
        assert!(n >= 2, "need at least two rows to split");
        assert!(ratio > 0.0 && ratio.is_finite(), "ratio must be positive");
        let n_r = ((n as f64) * ratio / (1.0 + ratio)).round() as usize;
        let n_r = n_r.clamp(1, n - 1);
        (n_r, n - n_r)
    }

    pub fn validate(&self) -> Result<(), ParamsError> {
        let fail = |msg: String| Err(ParamsError::Config(msg));
        if self.entities == 0 || self.relations == 0 || self.timestamps == 0 {
            return fail("entity, relation, and timestamp counts must be nonzero".into());
        }
        if !(self.k == 2 || self.k == 3) {
            return fail(format!("rotor dimension k must be 2 or 3, got {}", self.k));
        }
        if self.n_r == 0 || self.n_t == 0 || self.n_r + self.n_t != self.n {
            return fail(format!(
                "row split n_r={} + n_t={} must equal n={} with both nonzero",
                self.n_r, self.n_t, self.n
            ));
        }
        if !self.init_std.is_finite() || self.init_std < 0.0 {
            return fail(format!("init_std must be finite and nonnegative, got {}", self.init_std));
        }
        Ok(())
    }

    /// Total number of trainable scalars:
    /// `(|E|·n + |R|·n_r + |T|·n_τ + |R|·n) · k`.
    pub fn param_count(&self) -> usize {
        (self.entities * self.n
            + self.relations * self.n_r
            + self.timestamps * self.n_t
            + self.relations * self.n)
            * self.k
    }
}

/// The four embedding tables. Each row is one element's `rows × k`
/// matrix, flattened row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams {
    pub entity: Array2<f64>,
    pub relation: Array2<f64>,
    pub time: Array2<f64>,
    /// The per-relation static rotor `r₂`.
    pub static_rotor: Array2<f64>,
}

impl ModelParams {
    /// Slices of all four tables, paired with their names, in checkpoint
    /// order.
    pub fn tables(&self) -> [(&'static str, &Array2<f64>); 4] {
        [
            ("entity", &self.entity),
            ("relation", &self.relation),
            ("time", &self.time),
            ("static_rotor", &self.static_rotor),
        ]
    }

    pub fn all_finite(&self) -> bool {
        self.tables()
            .iter()
            .all(|(_, t)| t.iter().all(|v| v.is_finite()))
    }
}

/// Initialize all tables i.i.d. normal with mean 0 and `config.init_std`.
///
/// Sampling order is fixed (entity, relation, time, static rotor;
/// row-major within each), so a seed pins every bit of the result.
pub fn init_model(config: &ModelConfig) -> Result<ModelParams, ParamsError> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut table = |rows: usize, cols: usize| -> Array2<f64> {
        if config.init_std == 0.0 {
            return Array2::zeros((rows, cols));
        }
        let normal = Normal::new(0.0, config.init_std).expect("validated std");
        Array2::from_shape_fn((rows, cols), |_| normal.sample(&mut rng))
    };
    Ok(ModelParams {
        entity: table(config.entities, config.n * config.k),
        relation: table(config.relations, config.n_r * config.k),
        time: table(config.timestamps, config.n_t * config.k),
        static_rotor: table(config.relations, config.n * config.k),
    })
}

struct CrcWriter<W: Write> {
    inner: W,
    hasher: crc32fast::Hasher,
}

impl<W: Write> CrcWriter<W> {
    fn write(&mut self, bytes: &[u8]) -> std::io::Result<()> {
        self.hasher.update(bytes);
        self.inner.write_all(bytes)
    }
}

pub fn save_checkpoint(
    params: &ModelParams,
    config: &ModelConfig,
    path: &Path,
) -> Result<(), ParamsError> {
    let mut w = CrcWriter { inner: BufWriter::new(File::create(path)?), hasher: crc32fast::Hasher::new() };
    w.write(CHECKPOINT_MAGIC)?;
    w.write(&CHECKPOINT_VERSION.to_le_bytes())?;
    for v in [
        config.entities,
        config.relations,
        config.timestamps,
        config.n,
        config.k,
        config.n_r,
        config.n_t,
    ] {
        w.write(&(v as u32).to_le_bytes())?;
    }
    w.write(&config.init_std.to_le_bytes())?;
    w.write(&config.seed.to_le_bytes())?;
    for (_, table) in params.tables() {
        for v in table.iter() {
            w.write(&v.to_le_bytes())?;
        }
    }
    let crc = w.hasher.finalize();
    w.inner.write_all(&crc.to_le_bytes())?;
    w.inner.flush()?;
    Ok(())
}

struct CrcReader<R: Read> {
    inner: R,
    hasher: crc32fast::Hasher,
    path: String,
}

impl<R: Read> CrcReader<R> {
    fn err(&self, field: &'static str, msg: impl Into<String>) -> ParamsError {
        ParamsError::Load { path: self.path.clone(), field, msg: msg.into() }
    }

    fn bytes<const N: usize>(&mut self, field: &'static str) -> Result<[u8; N], ParamsError> {
        let mut buf = [0u8; N];
        self.inner
            .read_exact(&mut buf)
            .map_err(|_| self.err(field, "truncated file"))?;
        self.hasher.update(&buf);
        Ok(buf)
    }

    fn u32(&mut self, field: &'static str) -> Result<u32, ParamsError> {
        Ok(u32::from_le_bytes(self.bytes::<4>(field)?))
    }

    fn f64(&mut self, field: &'static str) -> Result<f64, ParamsError> {
        Ok(f64::from_le_bytes(self.bytes::<8>(field)?))
    }
}

pub fn load_checkpoint(path: &Path) -> Result<(ModelParams, ModelConfig), ParamsError> {
    let mut r = CrcReader {
        inner: BufReader::new(File::open(path)?),
        hasher: crc32fast::Hasher::new(),
        path: path.display().to_string(),
    };
    let magic = r.bytes::<4>("magic")?;
    if &magic != CHECKPOINT_MAGIC {
        return Err(r.err("magic", format!("bad magic {magic:?}, expected \"CHRN\"")));
    }
    let version = r.u32("version")?;
    if version != CHECKPOINT_VERSION {
        return Err(r.err("version", format!("unsupported version {version}")));
    }
    let config = ModelConfig {
        entities: r.u32("entities")? as usize,
        relations: r.u32("relations")? as usize,
        timestamps: r.u32("timestamps")? as usize,
        n: r.u32("n")? as usize,
        k: r.u32("k")? as usize,
        n_r: r.u32("n_r")? as usize,
        n_t: r.u32("n_t")? as usize,
        init_std: r.f64("init_std")?,
        seed: u64::from_le_bytes(r.bytes::<8>("seed")?),
    };
    config
        .validate()
        .map_err(|e| r.err("config", e.to_string()))?;

    let shapes = [
        ("entity", config.entities, config.n * config.k),
        ("relation", config.relations, config.n_r * config.k),
        ("time", config.timestamps, config.n_t * config.k),
        ("static_rotor", config.relations, config.n * config.k),
    ];
    let mut tables = Vec::with_capacity(4);
    for (field, rows, cols) in shapes {
        let mut data = Vec::with_capacity(rows * cols);
        for _ in 0..rows * cols {
            data.push(r.f64(field)?);
        }
        let table = Array2::from_shape_vec((rows, cols), data)
            .map_err(|e| r.err(field, e.to_string()))?;
        tables.push(table);
    }

    let expected_crc = r.hasher.clone().finalize();
    let mut crc_buf = [0u8; 4];
    r.inner
        .read_exact(&mut crc_buf)
        .map_err(|_| r.err("crc", "truncated file"))?;
    let stored_crc = u32::from_le_bytes(crc_buf);
    if stored_crc != expected_crc {
        return Err(r.err(
            "crc",
            format!("checksum mismatch: stored {stored_crc:#010x}, computed {expected_crc:#010x}"),
        ));
    }
    let mut trailing = [0u8; 1];
    if r.inner.read(&mut trailing)? != 0 {
        return Err(r.err("crc", "trailing bytes after checksum"));
    }

    let mut it = tables.into_iter();
    let params = ModelParams {
        entity: it.next().unwrap(),
        relation: it.next().unwrap(),
        time: it.next().unwrap(),
        static_rotor: it.next().unwrap(),
    };
    Ok((params, config))
}
