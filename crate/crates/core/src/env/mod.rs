//! The random environment `c_β(e) = exp(−β U_e)` with i.i.d. uniform labels,
//! and its comparison with the minimum spanning tree of the labels.
//!
//! Everything that depends on β is computed from labels or log-conductances,
//! since `exp(−β U)` underflows for β beyond a few hundred.

mod environment;
mod mst;

pub use environment::{mu, read_environment, write_environment, Environment};
pub use mst::{
    external_path_maxima, mst_path_max, significant_edges, tree_symmetric_difference,
    SignificantEdges,
};

use thiserror::Error;

use crate::netcore::NetworkError;
use crate::sample::SampleError;

#[derive(Debug, Error)]
pub enum EnvError {
    #[error("beta must be finite and nonnegative, got {0}")]
    InvalidBeta(f64),
    #[error("label of edge {edge} is {value}; labels lie in [0, 1]")]
    LabelOutOfRange { edge: usize, value: f64 },
    #[error("edge {0} belongs to the tree")]
    EdgeInTree(usize),
    #[error("epsilon must lie in (0, 1), got {0}")]
    InvalidEpsilon(f64),
    #[error("the maximum spanning tree is not unique: edge {edge} ties its path maximum")]
    NonUniqueMst { edge: usize },
    #[error("trees have {0} and {1} vertices")]
    SizeMismatch(usize, usize),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Sample(#[from] SampleError),
    #[error(transparent)]
    Network(#[from] NetworkError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
