//! Weighted spanning trees on finite electric networks.
//!
//! The crate is organised bottom-up:
//!
//! * [`netcore`]: networks, generators and balance checks;
//! * [`resist`]: effective resistances, Kirchhoff probabilities and the
//!   matrix-tree partition function;
//! * [`sample`]: exact tree samplers (Wilson, Aldous–Broder, a sequential
//!   sampler for extreme conductance spreads), Kruskal, enumeration and
//!   conditioned sampling;
//! * [`env`]: the random environment `c(e) = exp(−β U_e)` and its comparison
//!   with the minimum spanning tree;
//! * [`localstat`]: rooted-tree patterns, r-ball censuses and the local
//!   reference laws;
//! * [`expcli`]: experiment configuration, sweeps and verification suites.

pub mod netcore;
pub mod resist;
pub mod sample;
pub mod env;
pub mod localstat;
pub mod stats;
pub mod expcli;
