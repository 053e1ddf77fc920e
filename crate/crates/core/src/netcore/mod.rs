//! Electric networks, the graph families used in the experiments, and
//! finite-parameter checks of the almost-regular / almost-balanced conditions.

mod balance;
mod generators;
mod io;
mod network;

pub use balance::{balance_report, BalanceReport};
pub use generators::{
    connected_graphs_up_to_isomorphism, gen_complete, gen_expander_chain_with_leaves,
    gen_glued_triangle_chain, gen_path, gen_random_connected, gen_regular_plus_pendants,
};
pub use io::{read_network, write_network};
pub use network::{log_sum_exp, ElectricNetwork, Topology};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum NetworkError {
    #[error("network must have at least one vertex")]
    Empty,
    #[error("self-loop at vertex {vertex}")]
    SelfLoop { vertex: usize },
    #[error("duplicate edge ({u}, {v})")]
    DuplicateEdge { u: usize, v: usize },
    #[error("edge {edge} has conductance {value}; conductances must be positive and finite")]
    NonpositiveConductance { edge: usize, value: f64 },
    #[error("vertex {vertex} out of range for {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("network is disconnected ({components} components)")]
    Disconnected { components: usize },
    #[error("expected {expected} entries, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
