//! ChronoR: temporal knowledge-graph completion with k-dimensional
//! rotation-scaling embeddings.
//!
//! A temporal knowledge graph is a set of quadruples `(head, relation,
//! tail, timestamp)`. This crate learns dense representations for
//! entities, relations, and timestamps such that the head of a true
//! fact, transformed by a rotation-and-scaling operator parameterized
//! by the fact's relation and timestamp, lands near its tail under the
//! trace inner product. Training minimizes a full-softmax negative
//! log-likelihood with an entrywise 4-norm regularizer and a temporal
//! smoothness penalty, optimized with AdaGrad. Evaluation reports
//! time-aware filtered MRR and Hits@{1,3,10}.
//!
//! Modules:
//! - [`data`]: dataset parsing, vocabularies, encoding, filter indexes,
//!   synthetic graphs, and on-disk formats.
//! - [`rotor`]: the rotation-scaling operator and scoring function.
//! - [`params`]: embedding tables, initialization, checkpoints.
//! - [`train`]: loss, analytic gradients, AdaGrad, and the fit loop.
//! - [`eval`]: filtered ranking and metric aggregation.

pub mod data;
pub mod eval;
pub mod params;
pub mod rotor;
pub mod train;

pub use data::{Dataset, FilterIndex, Quadruple, RawQuadruple, Split, Vocab};
pub use eval::MetricsReport;
pub use params::{ModelConfig, ModelParams};
pub use train::{LossBreakdown, TrainConfig};
