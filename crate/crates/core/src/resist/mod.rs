//! Effective resistances, Kirchhoff edge probabilities, matrix-tree partition
//! functions and commute times.

mod dense;
mod iterative;
pub(crate) mod kron;
mod solver;
mod window;

pub use solver::{
    nash_williams_bound, partition_function_log, KirchhoffProbability, NashWilliamsBound,
    ResistanceSolver, SolverMode, DEFAULT_TOLERANCE, DENSE_LIMIT, GROUND,
};
pub(crate) use window::descending_order;
pub use window::{windowed_edge_probabilities, WINDOW};

use serde::Serialize;
use thiserror::Error;

use crate::netcore::{ElectricNetwork, NetworkError};

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("Laplacian factorization failed at pivot {pivot}")]
    NotPositiveDefinite { pivot: usize },
    #[error("iterative solve stopped after {iterations} iterations at relative residual {residual:e}")]
    NotConverged { iterations: usize, residual: f64 },
    #[error("conductances span {range:.1} log units; linear solves would underflow")]
    DynamicRange { range: f64 },
    #[error("current injections sum to {total:e}, not zero")]
    UnbalancedDemand { total: f64 },
    #[error("vertex {vertex} out of range for {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("not an edge: {0}")]
    NotAnEdge(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Network(#[from] NetworkError),
}

/// How a table of edge probabilities was computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MarginalMethod {
    Dense,
    Iterative,
    Windowed,
}

#[derive(Debug, Clone, Serialize)]
pub struct EdgeMarginals {
    pub probabilities: Vec<f64>,
    pub method: MarginalMethod,
    /// Values that came out of the linear solve slightly outside `[0, 1]`.
    pub clamped: usize,
}

impl EdgeMarginals {
    /// `Σ_e p_e²`: the expected overlap of two independent trees.
    pub fn overlap(&self) -> f64 {
        self.probabilities.iter().map(|p| p * p).sum()
    }
}

/// Kirchhoff probabilities of every edge, choosing the method per network.
///
/// A linear solve is tried first when conductances are representable after
/// rescaling. Its output is accepted only if every raw value lies within
/// `1e-9` of `[0, 1]` and Foster's identity holds to `1e-9 (n − 1)`; otherwise
/// the windowed Kron route is used, whose error does not depend on the
/// conductance spread.
pub fn edge_marginals(net: &ElectricNetwork, mode: SolverMode) -> EdgeMarginals {
    let n = net.vertex_count();
    if let Ok(solver) = ResistanceSolver::new(net, mode) {
        if let Ok(raw) = solver.raw_edge_products() {
            let sum: f64 = raw.iter().sum();
            let in_range = raw.iter().all(|&p| (-1e-9..=1.0 + 1e-9).contains(&p));
            if in_range && (sum - (n - 1) as f64).abs() <= 1e-9 * (n - 1).max(1) as f64 {
                let clamped = raw.iter().filter(|&&p| !(0.0..=1.0).contains(&p)).count();
                return EdgeMarginals {
                    probabilities: raw.into_iter().map(|p| p.clamp(0.0, 1.0)).collect(),
                    method: match mode {
                        SolverMode::Dense => MarginalMethod::Dense,
                        SolverMode::Iterative { .. } => MarginalMethod::Iterative,
                    },
                    clamped,
                };
            }
        }
    }
    EdgeMarginals {
        probabilities: windowed_edge_probabilities(net, WINDOW),
        method: MarginalMethod::Windowed,
        clamped: 0,
    }
}
