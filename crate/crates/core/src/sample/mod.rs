//! Exact spanning-tree samplers and the oracles used to check them.

mod conditioned;
mod enumerate;
mod kruskal;
mod rng;
mod sampler;
mod sequential;
mod tree;
mod union_find;
mod walk;
mod walks;

pub use conditioned::{condition_network, conditioned_law, conditioned_sample, ConditionedNetwork};
pub use enumerate::{enumerate_spanning_trees, ENUMERATION_LIMIT};
pub use kruskal::{kruskal_min, max_st};
pub use rng::{mix64, RngStream};
pub use sampler::{
    aldous_broder_sample, sequential_sample, wilson_sample, Sampler, SamplerKind, PILOT_STEPS,
};
pub(crate) use tree::edge_mask;
pub use tree::SpanningTree;
pub use union_find::UnionFind;
pub use walk::WalkTables;
pub use walks::STEP_LIMIT;

use thiserror::Error;

use crate::netcore::NetworkError;

#[derive(Debug, Error)]
pub enum SampleError {
    #[error("not a spanning tree: {0}")]
    NotSpanningTree(String),
    #[error("random walk exceeded {steps} steps")]
    StepLimit { steps: u64 },
    #[error("network has {n} vertices; at most {max} supported here")]
    TooLarge { n: usize, max: usize },
    #[error("invalid constraint: {0}")]
    InvalidConstraint(String),
    #[error("invalid labels: {0}")]
    InvalidLabels(String),
    #[error(transparent)]
    Network(#[from] NetworkError),
}
