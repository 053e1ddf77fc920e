//! The compatible-tuple representation of ball probabilities.
//!
//! For a pattern `T` with BFS parents `p(j)`, an ordered tuple `v_1..v_k` of
//! distinct vertices is compatible when every `(v_{p(j)}, v_j)` is an edge.
//! Its weight is `F_c(T(v)) Π_{j≥2} c(v_{p(j)}, v_j) / |Stab_T|` with
//! `F_c = (1/n) exp(−Σ_{j≤t} b(v_j)) (Σ_{j>t} C_{v_j}) / Π_j C_{v_j}`.

use rand::distributions::{Distribution, WeightedIndex};
use rand::Rng;
use rayon::prelude::*;

use super::pattern::RootedTreePattern;
use super::LocalError;
use crate::netcore::{log_sum_exp, ElectricNetwork};
use crate::resist::ResistanceSolver;
use crate::sample::{RngStream, WalkTables};
use crate::stats::{mean_and_standard_error, pairwise_sum};

/// `b(v) = Σ_{u∼v} c(u,v)/C_u`.
pub fn b_value(net: &ElectricNetwork, v: usize) -> f64 {
    net.neighbors(v)
        .iter()
        .map(|&(u, e)| (net.log_conductance(e as usize) - net.log_strength(u as usize)).exp())
        .sum()
}

pub fn b_values(net: &ElectricNetwork) -> Vec<f64> {
    (0..net.vertex_count()).map(|v| b_value(net, v)).collect()
}

/// Vertices with `C_v ∈ [γ, Kγ]`, compared in log space.
pub fn typical_conductance_set(net: &ElectricNetwork, gamma: f64, k: f64) -> Result<Vec<bool>, LocalError> {
    if !(gamma > 0.0) || !(k >= 1.0) {
        return Err(LocalError::InvalidArgument(format!("need gamma > 0 and K ≥ 1, got {gamma}, {k}")));
    }
    let (lo, hi) = (gamma.ln(), (k * gamma).ln());
    Ok((0..net.vertex_count())
        .map(|v| {
            let l = net.log_strength(v);
            l >= lo && l <= hi
        })
        .collect())
}

fn check_compatible(net: &ElectricNetwork, tuple: &[usize], pattern: &RootedTreePattern) -> Result<Vec<usize>, LocalError> {
    let n = net.vertex_count();
    if tuple.len() != pattern.k() {
        return Err(LocalError::InvalidTuple(format!(
            "tuple has {} vertices, pattern has {}",
            tuple.len(),
            pattern.k()
        )));
    }
    let mut seen = std::collections::HashSet::with_capacity(tuple.len());
    for &v in tuple {
        if v >= n {
            return Err(LocalError::InvalidTuple(format!("vertex {v} out of range")));
        }
        if !seen.insert(v) {
            return Err(LocalError::InvalidTuple(format!("vertex {v} repeated")));
        }
    }
    (1..tuple.len())
        .map(|j| {
            let p = tuple[pattern.parent(j).expect("non-root has a parent")];
            net.edge_between(p, tuple[j])
                .ok_or_else(|| LocalError::InvalidTuple(format!("({p}, {}) is not an edge", tuple[j])))
        })
        .collect()
}

fn log_f(net: &ElectricNetwork, b: &[f64], tuple: &[usize], t: usize) -> f64 {
    let outer = log_sum_exp(tuple[t..].iter().map(|&v| net.log_strength(v)));
    -(net.vertex_count() as f64).ln() - tuple[..t].iter().map(|&v| b[v]).sum::<f64>() + outer
        - tuple.iter().map(|&v| net.log_strength(v)).sum::<f64>()
}

/// `F_c(T(v))` for a compatible tuple (zero when `k = t`).
pub fn f_value(net: &ElectricNetwork, tuple: &[usize], pattern: &RootedTreePattern) -> Result<f64, LocalError> {
    check_compatible(net, tuple, pattern)?;
    let b: Vec<f64> = b_values(net);
    Ok(log_f(net, &b, tuple, pattern.t()).exp())
}

/// A tuple drawn by the random-neighbor exploration of a pattern, with the
/// exact probability of drawing it.
#[derive(Debug, Clone, PartialEq)]
pub struct TupleDraw {
    pub vertices: Vec<usize>,
    /// Edge used to reach each non-root vertex.
    pub edges: Vec<usize>,
    pub probability: f64,
    pub log_probability: f64,
}

/// Draws `X_1 ∼ π` (`π(v) ∝ C_v`) and each later `X_j` as a neighbor of
/// `X_{p(j)}` chosen proportionally to conductance. Vertices may repeat.
#[derive(Debug, Clone)]
pub struct TupleSampler {
    net: ElectricNetwork,
    root: WeightedIndex<f64>,
    tables: WalkTables,
    log_total: f64,
}

impl TupleSampler {
    pub fn new(net: &ElectricNetwork) -> Self {
        let logs: Vec<f64> = (0..net.vertex_count()).map(|v| net.log_strength(v)).collect();
        let max = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let root = WeightedIndex::new(logs.iter().map(|l| (l - max).exp())).expect("strengths are positive");
        TupleSampler {
            net: net.clone(),
            root,
            tables: WalkTables::new(net),
            log_total: log_sum_exp(logs.iter().copied()),
        }
    }

    pub fn draw<R: Rng + ?Sized>(&self, pattern: &RootedTreePattern, rng: &mut R) -> TupleDraw {
        let k = pattern.k();
        let mut vertices = Vec::with_capacity(k);
        let mut edges = Vec::with_capacity(k.saturating_sub(1));
        let v1 = self.root.sample(rng);
        vertices.push(v1);
        let mut logp = self.net.log_strength(v1) - self.log_total;
        for j in 1..k {
            let from = vertices[pattern.parent(j).expect("non-root has a parent")];
            let (to, e) = self.tables.step(from, rng);
            logp += self.net.log_conductance(e) - self.net.log_strength(from);
            vertices.push(to);
            edges.push(e);
        }
        TupleDraw {
            vertices,
            edges,
            probability: logp.exp(),
            log_probability: logp,
        }
    }
}

/// One draw of the random pattern tuple on `net`.
pub fn random_t_tuple<R: Rng + ?Sized>(net: &ElectricNetwork, pattern: &RootedTreePattern, rng: &mut R) -> TupleDraw {
    TupleSampler::new(net).draw(pattern, rng)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SumMode {
    /// Every compatible tuple; allowed for `n ≤ 30` or `k ≤ 3`.
    Exhaustive,
    /// Importance sampling with the random pattern tuple as proposal.
    MonteCarlo { samples: usize, seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TheoremSum {
    pub value: f64,
    /// Zero in exhaustive mode.
    pub std_error: f64,
    /// Compatible tuples visited (exhaustive) or accepted draws (Monte Carlo).
    pub hits: u64,
}

/// Exhaustive mode size guard.
pub const EXHAUSTIVE_MAX_N: usize = 30;
pub const EXHAUSTIVE_MAX_K: usize = 3;

const MC_BLOCK: usize = 4096;

/// `Σ_{v ∈ C^T(W)} F_c(T(v)) Π c(v_{p(j)}, v_j) / |Stab_T|` over compatible
/// tuples inside `W = {v : C_v ∈ [γ, Kγ]}`.
pub fn theorem_sum(
    net: &ElectricNetwork,
    pattern: &RootedTreePattern,
    gamma: f64,
    k_ratio: f64,
    mode: SumMode,
) -> Result<TheoremSum, LocalError> {
    let inside = typical_conductance_set(net, gamma, k_ratio)?;
    let b = b_values(net);
    let k = pattern.k();
    let t = pattern.t();
    if t == k || k > net.vertex_count() {
        return Ok(TheoremSum {
            value: 0.0,
            std_error: 0.0,
            hits: 0,
        });
    }
    match mode {
        SumMode::Exhaustive => {
            let n = net.vertex_count();
            if n > EXHAUSTIVE_MAX_N && k > EXHAUSTIVE_MAX_K {
                return Err(LocalError::SizeGuard { n, k });
            }
            let mut terms = Vec::new();
            let mut tuple = Vec::with_capacity(k);
            let mut used = vec![false; n];
            let mut ctx = Exhaust {
                net,
                pattern,
                inside: &inside,
                b: &b,
                terms: &mut terms,
            };
            for v in 0..n {
                if inside[v] {
                    tuple.push(v);
                    used[v] = true;
                    ctx.extend(&mut tuple, &mut used, 0.0);
                    used[v] = false;
                    tuple.pop();
                }
            }
            Ok(TheoremSum {
                value: pairwise_sum(&terms),
                std_error: 0.0,
                hits: terms.len() as u64,
            })
        }
        SumMode::MonteCarlo { samples, seed } => {
            if samples < 2 {
                return Err(LocalError::InvalidArgument("Monte Carlo needs at least 2 samples".into()));
            }
            let sampler = TupleSampler::new(net);
            let blocks = samples.div_ceil(MC_BLOCK);
            let per_block: Vec<Vec<f64>> = (0..blocks)
                .into_par_iter()
                .map(|blk| {
                    let mut rng = RngStream::new(seed, blk as u64);
                    let len = MC_BLOCK.min(samples - blk * MC_BLOCK);
                    let mut seen = Vec::with_capacity(k);
                    (0..len)
                        .map(|_| {
                            let d = sampler.draw(pattern, &mut rng);
                            seen.clear();
                            let ok = d.vertices.iter().all(|&v| {
                                let fresh = inside[v] && !seen.contains(&v);
                                seen.push(v);
                                fresh
                            });
                            if !ok {
                                return 0.0;
                            }
                            let log_c: f64 = d.edges.iter().map(|&e| net.log_conductance(e)).sum();
                            (log_f(net, &b, &d.vertices, t) + log_c - pattern.log_stab() - d.log_probability).exp()
                        })
                        .collect()
                })
                .collect();
            let weights: Vec<f64> = per_block.into_iter().flatten().collect();
            let hits = weights.iter().filter(|&&w| w > 0.0).count() as u64;
            let (value, std_error) = mean_and_standard_error(&weights);
            Ok(TheoremSum { value, std_error, hits })
        }
    }
}

struct Exhaust<'a> {
    net: &'a ElectricNetwork,
    pattern: &'a RootedTreePattern,
    inside: &'a [bool],
    b: &'a [f64],
    terms: &'a mut Vec<f64>,
}

impl Exhaust<'_> {
    fn extend(&mut self, tuple: &mut Vec<usize>, used: &mut [bool], log_c: f64) {
        let j = tuple.len();
        if j == self.pattern.k() {
            let lf = log_f(self.net, self.b, tuple, self.pattern.t());
            self.terms.push((lf + log_c - self.pattern.log_stab()).exp());
            return;
        }
        let from = tuple[self.pattern.parent(j).expect("non-root has a parent")];
        for &(u, e) in self.net.neighbors(from) {
            let u = u as usize;
            if used[u] || !self.inside[u] {
                continue;
            }
            used[u] = true;
            tuple.push(u);
            self.extend(tuple, used, log_c + self.net.log_conductance(e as usize));
            tuple.pop();
            used[u] = false;
        }
    }
}

/// Per-vertex neighbor typicality scores
/// `s(v) = Σ_{u∼v, R(u,v) > 4/γ} c(u,v) R(u,v) + Σ_{u∼v, u∉W} c(u,v)/γ`
/// and membership `s(v) ≤ threshold`. A diagnostic only: no threshold is
/// canonical at finite size.
#[derive(Debug, Clone, PartialEq)]
pub struct TypicalNeighbors {
    pub scores: Vec<f64>,
    pub members: Vec<bool>,
}

pub fn typical_neighbors(
    solver: &ResistanceSolver,
    gamma: f64,
    k_ratio: f64,
    threshold: f64,
) -> Result<TypicalNeighbors, LocalError> {
    let net = solver.network();
    let inside = typical_conductance_set(net, gamma, k_ratio)?;
    let resistances = solver.all_edge_resistances()?;
    let cut = 4.0 / gamma;
    let scores: Vec<f64> = (0..net.vertex_count())
        .map(|v| {
            net.neighbors(v)
                .iter()
                .map(|&(u, e)| {
                    let (u, e) = (u as usize, e as usize);
                    let c = net.conductance(e);
                    let r = resistances[e];
                    let far = if r > cut { c * r } else { 0.0 };
                    let outside = if inside[u] { 0.0 } else { c / gamma };
                    far + outside
                })
                .sum()
        })
        .collect();
    let members = scores.iter().map(|&s| s <= threshold).collect();
    Ok(TypicalNeighbors { scores, members })
}
