//! Local statistics of spanning trees: canonical rooted-tree patterns, ball
//! censuses around uniform roots, the Poisson(1) Galton–Watson reference law
//! and the compatible-tuple sum that approximates ball probabilities.

mod ball;
mod census;
mod pattern;
mod theorem;

pub use ball::{ball, ball_with_cap, Ball, BALL_CAP};
pub use census::{census, paired_census, CensusPlan, LocalCensus, PairedCensus, TreeSource};
pub use pattern::{enumerate_patterns, pgw_reference_probability, ReferenceProbability, RootedTreePattern};
pub use theorem::{
    b_value, b_values, f_value, random_t_tuple, theorem_sum, typical_conductance_set, typical_neighbors,
    SumMode, TheoremSum, TupleDraw, TupleSampler, TypicalNeighbors, EXHAUSTIVE_MAX_K, EXHAUSTIVE_MAX_N,
};

use thiserror::Error;

use crate::env::EnvError;
use crate::netcore::NetworkError;
use crate::resist::SolverError;
use crate::sample::SampleError;

#[derive(Debug, Error)]
pub enum LocalError {
    #[error("not a tree: {0}")]
    NotATree(String),
    #[error("tree has depth {depth}, above radius {radius}")]
    RadiusExceeded { depth: usize, radius: usize },
    #[error("incompatible tuple: {0}")]
    InvalidTuple(String),
    #[error("exhaustive sum needs n ≤ 30 or k ≤ 3 (n = {n}, k = {k})")]
    SizeGuard { n: usize, k: usize },
    #[error("{0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Sample(#[from] SampleError),
    #[error(transparent)]
    Env(#[from] EnvError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Network(#[from] NetworkError),
}
