use std::cell::RefCell;

use rand::RngCore;

use super::sequential::sequential_edges;
use super::walk::WalkTables;
use super::walks::{aldous_broder_edges, wilson_edges, WalkScratch, STEP_LIMIT};
use super::{RngStream, SampleError, SpanningTree};
use crate::netcore::ElectricNetwork;
use crate::resist::kron::KronReducer;
use crate::resist::{descending_order, WINDOW};

/// Walk steps a trial Wilson run may take before [`SamplerKind::Auto`]
/// switches a network to the sequential sampler.
pub const PILOT_STEPS: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SamplerKind {
    Wilson,
    AldousBroder,
    Sequential,
    /// Wilson if a trial run on an independent stream finishes within
    /// [`PILOT_STEPS`], otherwise sequential.
    Auto,
}

impl std::str::FromStr for SamplerKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "wilson" => Ok(SamplerKind::Wilson),
            "aldous-broder" | "ab" => Ok(SamplerKind::AldousBroder),
            "sequential" => Ok(SamplerKind::Sequential),
            "auto" => Ok(SamplerKind::Auto),
            other => Err(format!("unknown sampler `{other}`")),
        }
    }
}

#[derive(Debug, Clone)]
enum Engine {
    Walk { tables: WalkTables, wilson: bool },
    Sequential { order: Vec<usize> },
}

/// An exact sampler of `P(T) ∝ Π_{e∈T} c(e)` for one network, with its
/// per-network tables prepared once.
///
/// All randomness comes from the stream passed to each call, so a given
/// `(network, seed, stream)` always yields the same tree.
#[derive(Debug, Clone)]
pub struct Sampler {
    net: ElectricNetwork,
    kind: SamplerKind,
    engine: Engine,
    step_limit: u64,
}

thread_local! {
    static REDUCER: RefCell<KronReducer> = RefCell::new(KronReducer::default());
    static SCRATCH: RefCell<WalkScratch> = RefCell::new(WalkScratch::default());
}

impl Sampler {
    /// `pilot` is only read for [`SamplerKind::Auto`]; it must be independent
    /// of the streams later passed to [`sample`](Self::sample), which keeps the
    /// choice of engine independent of the tree drawn.
    pub fn new<R: RngCore + ?Sized>(net: &ElectricNetwork, kind: SamplerKind, pilot: &mut R) -> Self {
        let walk = |wilson| Engine::Walk {
            tables: WalkTables::new(net),
            wilson,
        };
        let (engine, resolved) = match kind {
            SamplerKind::Wilson => (walk(true), kind),
            SamplerKind::AldousBroder => (walk(false), kind),
            SamplerKind::Sequential => (Self::sequential_engine(net), kind),
            SamplerKind::Auto if has_trap(net) => (Self::sequential_engine(net), SamplerKind::Sequential),
            SamplerKind::Auto => {
                let tables = WalkTables::new(net);
                let mut out = Vec::new();
                let fits = wilson_edges(
                    &tables,
                    net.vertex_count(),
                    pilot,
                    PILOT_STEPS,
                    &mut WalkScratch::default(),
                    &mut out,
                )
                .is_ok();
                if fits {
                    (Engine::Walk { tables, wilson: true }, SamplerKind::Wilson)
                } else {
                    (Self::sequential_engine(net), SamplerKind::Sequential)
                }
            }
        };
        Sampler {
            net: net.clone(),
            kind: resolved,
            engine,
            step_limit: STEP_LIMIT,
        }
    }

    fn sequential_engine(net: &ElectricNetwork) -> Engine {
        Engine::Sequential {
            order: descending_order(net.log_conductances()),
        }
    }

    /// Lowers the walk-step circuit breaker (default 10^10).
    pub fn with_step_limit(mut self, limit: u64) -> Self {
        self.step_limit = limit;
        self
    }

    pub fn network(&self) -> &ElectricNetwork {
        &self.net
    }

    /// The engine in use; never `Auto`.
    pub fn kind(&self) -> SamplerKind {
        self.kind
    }

    /// Writes the edge indices of one tree into `out` (unsorted).
    pub fn sample_edges<R: RngCore + ?Sized>(
        &self,
        rng: &mut R,
        out: &mut Vec<usize>,
    ) -> Result<(), SampleError> {
        let n = self.net.vertex_count();
        match &self.engine {
            Engine::Walk { tables, wilson } => SCRATCH.with(|s| {
                let scratch = &mut s.borrow_mut();
                if *wilson {
                    wilson_edges(tables, n, rng, self.step_limit, scratch, out)
                } else {
                    aldous_broder_edges(tables, n, rng, self.step_limit, scratch, out)
                }
                .map(|_| ())
            }),
            Engine::Sequential { order } => REDUCER.with(|r| {
                let mut reducer = r.borrow_mut();
                reducer.ensure_capacity(n);
                sequential_edges(&self.net, order, WINDOW, &mut reducer, rng, out)
            }),
        }
    }

    pub fn sample<R: RngCore + ?Sized>(&self, rng: &mut R) -> Result<SpanningTree, SampleError> {
        let mut edges = Vec::with_capacity(self.net.vertex_count());
        self.sample_edges(rng, &mut edges)?;
        SpanningTree::new(&self.net, edges)
    }
}

/// True if two vertices other than the Wilson root are each other's strongest
/// neighbor and the walk leaves the pair with probability below
/// `1/PILOT_STEPS` per step. Such a pair would exhaust the pilot anyway.
fn has_trap(net: &ElectricNetwork) -> bool {
    let n = net.vertex_count();
    let mut strongest = vec![usize::MAX; n];
    let mut escape = vec![1.0; n];
    for v in 0..n {
        let row = net.neighbors(v);
        let Some(&(u, e)) = row
            .iter()
            .max_by(|a, b| net.log_conductance(a.1 as usize).total_cmp(&net.log_conductance(b.1 as usize)))
        else {
            continue;
        };
        let top = net.log_conductance(e as usize);
        let rest: f64 = row
            .iter()
            .filter(|&&(_, f)| f != e)
            .map(|&(_, f)| (net.log_conductance(f as usize) - top).exp())
            .sum();
        strongest[v] = u as usize;
        escape[v] = rest / (1.0 + rest);
    }
    (1..n).any(|v| {
        let u = strongest[v];
        u != 0 && u < n && strongest[u] == v && escape[v] + escape[u] < 1.0 / PILOT_STEPS as f64
    })
}

/// One tree by Wilson's algorithm rooted at vertex 0.
pub fn wilson_sample(net: &ElectricNetwork, rng: &mut RngStream) -> Result<SpanningTree, SampleError> {
    Sampler::new(net, SamplerKind::Wilson, rng).sample(rng)
}

/// One tree from the first-entrance edges of a covering walk started at 0.
pub fn aldous_broder_sample(net: &ElectricNetwork, rng: &mut RngStream) -> Result<SpanningTree, SampleError> {
    Sampler::new(net, SamplerKind::AldousBroder, rng).sample(rng)
}

/// One tree by sequential Kirchhoff decisions in decreasing-conductance order.
pub fn sequential_sample(net: &ElectricNetwork, rng: &mut RngStream) -> Result<SpanningTree, SampleError> {
    Sampler::new(net, SamplerKind::Sequential, rng).sample(rng)
}
