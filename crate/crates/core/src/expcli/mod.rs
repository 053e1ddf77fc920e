//! Experiment plumbing: configuration, the overlap, length and census
//! experiments, and the verification suites behind the command-line tool.

mod compare;
mod config;
mod output;
mod sweeps;
mod verify;

pub use compare::{census_compare, default_typical_window, write_comparisons, CensusComparison};
pub use config::{parse_beta_grid, ExperimentConfig, GraphSpec, OutputFormat};
pub use output::{header_lines, write_sweep, SweepRow, VERSION};
pub use sweeps::{
    component_count_integral, length_sweep, overlap_exact, overlap_sweep, row_seed, small_beta_length,
    total_length, ZETA3,
};
pub use verify::{
    association_checks, balance_checks, identity_checks, length_identity_checks, markov_exact_checks,
    markov_rejection_checks, max_st_checks, oracle_checks, verify, Check, Suite, VerifyReport,
};

use thiserror::Error;

use crate::env::EnvError;
use crate::localstat::LocalError;
use crate::netcore::NetworkError;
use crate::resist::SolverError;
use crate::sample::SampleError;

#[derive(Debug, Error)]
pub enum ExpError {
    #[error("configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Network(#[from] NetworkError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Sample(#[from] SampleError),
    #[error(transparent)]
    Env(#[from] EnvError),
    #[error(transparent)]
    Local(#[from] LocalError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
