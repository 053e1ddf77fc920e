//! Sampling conditioned on forced-in and forced-out edge sets.

use rand::{Rng, RngCore};

use super::enumerate::enumerate_spanning_trees;
use super::{SampleError, Sampler, SamplerKind, SpanningTree, UnionFind};
use crate::netcore::{ElectricNetwork, NetworkError};

/// `(G/A) ∖ B` together with what is needed to map its trees back.
#[derive(Debug, Clone)]
pub struct ConditionedNetwork {
    /// Contracted network; `None` when `A` already spans.
    pub quotient: Option<ElectricNetwork>,
    /// Original edges merged into each quotient edge.
    pub members: Vec<Vec<usize>>,
    pub forced_in: Vec<usize>,
}

/// Contracts `forced_in` and deletes `forced_out`.
pub fn condition_network(
    net: &ElectricNetwork,
    forced_in: &[usize],
    forced_out: &[usize],
) -> Result<ConditionedNetwork, SampleError> {
    let m = net.edge_count();
    let mut role = vec![0u8; m];
    for &e in forced_in {
        if e >= m {
            return Err(SampleError::InvalidConstraint(format!("edge {e} out of range")));
        }
        role[e] = 1;
    }
    for &e in forced_out {
        if e >= m {
            return Err(SampleError::InvalidConstraint(format!("edge {e} out of range")));
        }
        if role[e] == 1 {
            return Err(SampleError::InvalidConstraint(format!(
                "edge {e} is both forced in and forced out"
            )));
        }
        role[e] = 2;
    }
    let n = net.vertex_count();
    let mut uf = UnionFind::new(n);
    let mut forced: Vec<usize> = forced_in.to_vec();
    forced.sort_unstable();
    forced.dedup();
    for &e in &forced {
        let (u, v) = net.endpoints(e);
        if !uf.union(u, v) {
            return Err(SampleError::InvalidConstraint(format!(
                "forced-in edges contain a cycle (edge {e})"
            )));
        }
    }
    let mut class_of = vec![usize::MAX; n];
    let mut classes = 0;
    let mut root_class = vec![usize::MAX; n];
    for v in 0..n {
        let r = uf.find(v);
        if root_class[r] == usize::MAX {
            root_class[r] = classes;
            classes += 1;
        }
        class_of[v] = root_class[r];
    }
    if classes == 1 {
        return Ok(ConditionedNetwork {
            quotient: None,
            members: Vec::new(),
            forced_in: forced,
        });
    }
    let (quotient, members) = net
        .quotient_filtered(&class_of, classes, |e| role[e] == 0)
        .map_err(|err| match err {
            NetworkError::Disconnected { .. } => {
                SampleError::InvalidConstraint("deleting the forced-out edges disconnects the network".into())
            }
            other => other.into(),
        })?;
    Ok(ConditionedNetwork {
        quotient: Some(quotient),
        members,
        forced_in: forced,
    })
}

impl ConditionedNetwork {
    /// Picks an original edge for a quotient edge, proportionally to conductance.
    fn lift<R: RngCore + ?Sized>(&self, net: &ElectricNetwork, q: usize, rng: &mut R) -> usize {
        let members = &self.members[q];
        if members.len() == 1 {
            return members[0];
        }
        let max = members
            .iter()
            .map(|&e| net.log_conductance(e))
            .fold(f64::NEG_INFINITY, f64::max);
        let weights: Vec<f64> = members.iter().map(|&e| (net.log_conductance(e) - max).exp()).collect();
        let mut target = rng.gen::<f64>() * weights.iter().sum::<f64>();
        for (i, w) in weights.iter().enumerate() {
            target -= w;
            if target < 0.0 {
                return members[i];
            }
        }
        *members.last().unwrap()
    }
}

/// A weighted spanning tree conditioned on containing every edge of
/// `forced_in` and none of `forced_out`: a tree of `(G/A) ∖ B`, with each
/// merged edge resolved to one of its parallel originals, joined with `A`.
pub fn conditioned_sample<R: RngCore + ?Sized>(
    net: &ElectricNetwork,
    forced_in: &[usize],
    forced_out: &[usize],
    rng: &mut R,
) -> Result<SpanningTree, SampleError> {
    let cond = condition_network(net, forced_in, forced_out)?;
    let mut edges = cond.forced_in.clone();
    if let Some(q) = &cond.quotient {
        let sampler = Sampler::new(q, SamplerKind::Auto, rng);
        let mut q_edges = Vec::new();
        sampler.sample_edges(rng, &mut q_edges)?;
        for qe in q_edges {
            edges.push(cond.lift(net, qe, rng));
        }
    }
    SpanningTree::new(net, edges)
}

/// The exact conditional law, computed by enumerating trees of `(G/A) ∖ B`
/// and splitting each merged edge by conductance. Probabilities sum to 1.
pub fn conditioned_law(
    net: &ElectricNetwork,
    forced_in: &[usize],
    forced_out: &[usize],
) -> Result<Vec<(SpanningTree, f64)>, SampleError> {
    let cond = condition_network(net, forced_in, forced_out)?;
    let Some(q) = &cond.quotient else {
        return Ok(vec![(SpanningTree::new(net, cond.forced_in.clone())?, 1.0)]);
    };
    let trees = enumerate_spanning_trees(q)?;
    let z: f64 = trees.iter().map(|t| t.1).sum();
    let mut law = Vec::new();
    for (tree, weight) in trees {
        // expand every combination of parallel originals
        let mut partial: Vec<(Vec<usize>, f64)> = vec![(cond.forced_in.clone(), weight / z)];
        for &qe in tree.edges() {
            let members = &cond.members[qe];
            let total = q.conductance(qe);
            let mut next = Vec::with_capacity(partial.len() * members.len());
            for (edges, p) in &partial {
                for &e in members {
                    let mut with = edges.clone();
                    with.push(e);
                    next.push((with, p * net.conductance(e) / total));
                }
            }
            partial = next;
        }
        for (edges, p) in partial {
            law.push((SpanningTree::new(net, edges)?, p));
        }
    }
    Ok(law)
}
