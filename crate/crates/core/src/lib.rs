//! Exact diameter and radius computation for unweighted connected graphs,
//! organised around spanning paths of low stabbing number.
//!
//! The pipeline: build interval representations of distance balls along a
//! spanning path of the relevant neighbourhood hypergraph, then answer
//! "diameter at most k?" by interval-cover checks. Paths for large radii are
//! obtained without materialising the (dense) neighbourhood hypergraphs, by
//! combining block-partitioned reweighting paths, epsilon-net grouping and
//! r-divisions. Answers are always exact; randomness and tunables only affect
//! running time.
//!
//! The `harness` module provides seeded graph generators, oracle
//! cross-validation and a benchmark runner; brute-force counterparts of every
//! structural quantity (stabbing numbers, trace counts, VC-dimension,
//! division excess) live next to the fast paths so each bound can be checked
//! on real instances.

pub mod config;
pub mod diameter;
pub mod divisions;
pub mod graph;
pub mod harness;
pub mod hypergraph;
pub mod stabbing;
pub mod stats;

mod error;
mod exec;

pub use config::{AlgoConfig, NetLogForm, SeparatorProvider};
pub use error::Error;
pub use graph::Graph;
pub use hypergraph::Hypergraph;
pub use stabbing::{IntervalSet, SpanningPath, StabSet};
pub use stats::WorkCounter;

pub type Result<T> = std::result::Result<T, Error>;
