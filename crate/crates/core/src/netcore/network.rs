//! The electric network: a simple connected graph with positive conductances.
//!
//! Conductances are held twice: as natural logarithms (the canonical form,
//! which never underflows) and as plain `f64` values. Networks built from
//! linear conductances always have finite positive linear values; networks
//! built from log-conductances (random environments at large inverse
//! temperature) may have linear values that underflow to zero. Routines that
//! need linear arithmetic rescale by the largest log-conductance first.

use std::sync::Arc;

use super::NetworkError;
use crate::sample::UnionFind;

/// Graph structure shared between networks that differ only in conductances.
#[derive(Debug, Clone, PartialEq)]
pub struct Topology {
    n: usize,
    edges: Vec<(u32, u32)>,
    offsets: Vec<usize>,
    /// `(neighbor, edge index)` sorted by neighbor within each vertex row.
    adjacency: Vec<(u32, u32)>,
}

impl Topology {
    fn new(n: usize, edges: Vec<(u32, u32)>) -> Self {
        let mut degree = vec![0usize; n];
        for &(u, v) in &edges {
            degree[u as usize] += 1;
            degree[v as usize] += 1;
        }
        let mut offsets = vec![0usize; n + 1];
        for v in 0..n {
            offsets[v + 1] = offsets[v] + degree[v];
        }
        let mut fill = offsets.clone();
        let mut adjacency = vec![(0u32, 0u32); 2 * edges.len()];
        for (i, &(u, v)) in edges.iter().enumerate() {
            adjacency[fill[u as usize]] = (v, i as u32);
            fill[u as usize] += 1;
            adjacency[fill[v as usize]] = (u, i as u32);
            fill[v as usize] += 1;
        }
        for v in 0..n {
            adjacency[offsets[v]..offsets[v + 1]].sort_unstable();
        }
        Topology {
            n,
            edges,
            offsets,
            adjacency,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn endpoints(&self, e: usize) -> (usize, usize) {
        let (u, v) = self.edges[e];
        (u as usize, v as usize)
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    /// Neighbors of `v` as `(neighbor, edge index)` pairs, sorted by neighbor.
    pub fn neighbors(&self, v: usize) -> &[(u32, u32)] {
        &self.adjacency[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    /// Edge index joining `u` and `v`, if any. Binary search in the row of `u`.
    pub fn edge_between(&self, u: usize, v: usize) -> Option<usize> {
        let row = self.neighbors(u);
        row.binary_search_by_key(&(v as u32), |&(w, _)| w)
            .ok()
            .map(|i| row[i].1 as usize)
    }

    fn component_count(&self) -> usize {
        let mut uf = UnionFind::new(self.n);
        let mut components = self.n;
        for &(u, v) in &self.edges {
            if uf.union(u as usize, v as usize) {
                components -= 1;
            }
        }
        components
    }
}

/// A finite simple connected graph with strictly positive edge conductances.
#[derive(Debug, Clone)]
pub struct ElectricNetwork {
    topology: Arc<Topology>,
    log_conductance: Vec<f64>,
    conductance: Vec<f64>,
    strength: Vec<f64>,
    log_strength: Vec<f64>,
}

impl ElectricNetwork {
    /// Validates `(u, v, c)` triples and builds the network. Edge indices follow
    /// input order; each pair is stored as `(min, max)`.
    pub fn new(n: usize, weighted_edges: &[(usize, usize, f64)]) -> Result<Self, NetworkError> {
        for (i, &(_, _, c)) in weighted_edges.iter().enumerate() {
            if !(c > 0.0) || !c.is_finite() {
                return Err(NetworkError::NonpositiveConductance { edge: i, value: c });
            }
        }
        let pairs: Vec<(usize, usize)> = weighted_edges.iter().map(|&(u, v, _)| (u, v)).collect();
        let linear: Vec<f64> = weighted_edges.iter().map(|&(_, _, c)| c).collect();
        let log_c = linear.iter().map(|c| c.ln()).collect();
        Self::build(n, &pairs, log_c, Some(linear))
    }

    /// Builds a network whose conductances are `exp(log_conductance[e])`.
    pub fn from_log_conductances(
        n: usize,
        pairs: &[(usize, usize)],
        log_conductance: Vec<f64>,
    ) -> Result<Self, NetworkError> {
        Self::build(n, pairs, log_conductance, None)
    }

    fn build(
        n: usize,
        pairs: &[(usize, usize)],
        log_conductance: Vec<f64>,
        linear: Option<Vec<f64>>,
    ) -> Result<Self, NetworkError> {
        if n == 0 {
            return Err(NetworkError::Empty);
        }
        if pairs.len() != log_conductance.len() {
            return Err(NetworkError::LengthMismatch {
                expected: pairs.len(),
                found: log_conductance.len(),
            });
        }
        let mut edges = Vec::with_capacity(pairs.len());
        for &(u, v) in pairs {
            if u >= n || v >= n {
                return Err(NetworkError::VertexOutOfRange { vertex: u.max(v), n });
            }
            if u == v {
                return Err(NetworkError::SelfLoop { vertex: u });
            }
            edges.push((u.min(v) as u32, u.max(v) as u32));
        }
        for (i, &l) in log_conductance.iter().enumerate() {
            if !l.is_finite() {
                return Err(NetworkError::NonpositiveConductance {
                    edge: i,
                    value: l.exp(),
                });
            }
        }
        let mut sorted = edges.clone();
        sorted.sort_unstable();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(NetworkError::DuplicateEdge {
                u: w[0].0 as usize,
                v: w[0].1 as usize,
            });
        }
        let topology = Topology::new(n, edges);
        let components = topology.component_count();
        if components > 1 {
            return Err(NetworkError::Disconnected { components });
        }
        Ok(Self::with_topology_unchecked(Arc::new(topology), log_conductance, linear))
    }

    /// Same graph, new log-conductances. The topology is shared, not copied.
    pub fn reweighted(&self, log_conductance: Vec<f64>) -> Result<Self, NetworkError> {
        if log_conductance.len() != self.edge_count() {
            return Err(NetworkError::LengthMismatch {
                expected: self.edge_count(),
                found: log_conductance.len(),
            });
        }
        if let Some(i) = log_conductance.iter().position(|l| !l.is_finite()) {
            return Err(NetworkError::NonpositiveConductance {
                edge: i,
                value: log_conductance[i].exp(),
            });
        }
        Ok(Self::with_topology_unchecked(
            Arc::clone(&self.topology),
            log_conductance,
            None,
        ))
    }

    fn with_topology_unchecked(
        topology: Arc<Topology>,
        log_conductance: Vec<f64>,
        linear: Option<Vec<f64>>,
    ) -> Self {
        let conductance: Vec<f64> =
            linear.unwrap_or_else(|| log_conductance.iter().map(|l| l.exp()).collect());
        let n = topology.vertex_count();
        let mut strength = vec![0.0; n];
        let mut log_strength = vec![f64::NEG_INFINITY; n];
        for v in 0..n {
            let row = topology.neighbors(v);
            strength[v] = row.iter().map(|&(_, e)| conductance[e as usize]).sum();
            log_strength[v] = log_sum_exp(row.iter().map(|&(_, e)| log_conductance[e as usize]));
        }
        ElectricNetwork {
            topology,
            log_conductance,
            conductance,
            strength,
            log_strength,
        }
    }

    pub fn topology(&self) -> &Arc<Topology> {
        &self.topology
    }

    pub fn vertex_count(&self) -> usize {
        self.topology.vertex_count()
    }

    pub fn edge_count(&self) -> usize {
        self.topology.edge_count()
    }

    pub fn endpoints(&self, e: usize) -> (usize, usize) {
        self.topology.endpoints(e)
    }

    pub fn neighbors(&self, v: usize) -> &[(u32, u32)] {
        self.topology.neighbors(v)
    }

    pub fn edge_between(&self, u: usize, v: usize) -> Option<usize> {
        self.topology.edge_between(u, v)
    }

    pub fn conductance(&self, e: usize) -> f64 {
        self.conductance[e]
    }

    pub fn conductances(&self) -> &[f64] {
        &self.conductance
    }

    pub fn log_conductance(&self, e: usize) -> f64 {
        self.log_conductance[e]
    }

    pub fn log_conductances(&self) -> &[f64] {
        &self.log_conductance
    }

    /// `C_v`, the sum of conductances incident to `v`.
    pub fn strength(&self, v: usize) -> f64 {
        self.strength[v]
    }

    pub fn strengths(&self) -> &[f64] {
        &self.strength
    }

    pub fn log_strength(&self, v: usize) -> f64 {
        self.log_strength[v]
    }

    pub fn total_conductance(&self) -> f64 {
        self.conductance.iter().sum()
    }

    /// Largest log-conductance; the natural rescaling point for linear work.
    pub fn max_log_conductance(&self) -> f64 {
        self.log_conductance
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Spread between the strongest and weakest edge, in natural-log units.
    pub fn log_dynamic_range(&self) -> f64 {
        let (lo, hi) = self
            .log_conductance
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &l| {
                (lo.min(l), hi.max(l))
            });
        if self.edge_count() == 0 {
            0.0
        } else {
            hi - lo
        }
    }

    /// Whether all linear conductances and strengths are finite normal numbers.
    pub fn is_linear_safe(&self) -> bool {
        self.conductance.iter().all(|c| c.is_normal())
    }

    /// Merges vertices according to `class_of` (values in `0..classes`) and
    /// returns the quotient network. Edges inside a class disappear; parallel
    /// edges between two classes merge into one edge whose conductance is the
    /// sum. The second value lists, for every quotient edge, the original edges
    /// it merged.
    pub fn quotient(
        &self,
        class_of: &[usize],
        classes: usize,
    ) -> Result<(ElectricNetwork, Vec<Vec<usize>>), NetworkError> {
        self.quotient_filtered(class_of, classes, |_| true)
    }

    /// As [`quotient`](Self::quotient), keeping only edges accepted by `keep`.
    pub fn quotient_filtered(
        &self,
        class_of: &[usize],
        classes: usize,
        keep: impl Fn(usize) -> bool,
    ) -> Result<(ElectricNetwork, Vec<Vec<usize>>), NetworkError> {
        if class_of.len() != self.vertex_count() {
            return Err(NetworkError::LengthMismatch {
                expected: self.vertex_count(),
                found: class_of.len(),
            });
        }
        let mut slot: std::collections::BTreeMap<(usize, usize), usize> = Default::default();
        let mut pairs = Vec::new();
        let mut members: Vec<Vec<usize>> = Vec::new();
        for e in 0..self.edge_count() {
            if !keep(e) {
                continue;
            }
            let (u, v) = self.endpoints(e);
            let (a, b) = (class_of[u], class_of[v]);
            if a == b {
                continue;
            }
            let key = (a.min(b), a.max(b));
            let idx = *slot.entry(key).or_insert_with(|| {
                pairs.push(key);
                members.push(Vec::new());
                pairs.len() - 1
            });
            members[idx].push(e);
        }
        let log_c = members
            .iter()
            .map(|m| log_sum_exp(m.iter().map(|&e| self.log_conductance[e])))
            .collect();
        let linear = self.is_linear_safe().then(|| {
            members
                .iter()
                .map(|m| m.iter().map(|&e| self.conductance[e]).sum())
                .collect()
        });
        let net = ElectricNetwork::build(classes, &pairs, log_c, linear)?;
        Ok((net, members))
    }

    /// The network with the listed edges removed.
    pub fn without_edges(&self, removed: &[usize]) -> Result<(ElectricNetwork, Vec<usize>), NetworkError> {
        let mut drop = vec![false; self.edge_count()];
        for &e in removed {
            drop[e] = true;
        }
        let kept: Vec<usize> = (0..self.edge_count()).filter(|&e| !drop[e]).collect();
        let pairs: Vec<(usize, usize)> = kept.iter().map(|&e| self.endpoints(e)).collect();
        let log_c = kept.iter().map(|&e| self.log_conductance[e]).collect();
        let linear = kept.iter().map(|&e| self.conductance[e]).collect();
        let net = ElectricNetwork::build(self.vertex_count(), &pairs, log_c, Some(linear))?;
        Ok((net, kept))
    }
}

/// `ln Σ exp(x_i)`, stable for arbitrarily spread inputs. Empty input gives `-inf`.
pub fn log_sum_exp(values: impl Iterator<Item = f64> + Clone) -> f64 {
    let max = values.clone().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + values.map(|x| (x - max).exp()).sum::<f64>().ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> ElectricNetwork {
        ElectricNetwork::new(3, &[(0, 1, 1.0), (1, 2, 2.0), (0, 2, 3.0)]).unwrap()
    }

    #[test]
    fn triangle_strengths() {
        let net = triangle();
        assert_eq!(net.strengths(), &[4.0, 3.0, 5.0]);
        assert_eq!(net.edge_between(2, 0), Some(2));
        assert_eq!(net.edge_between(1, 1), None);
    }

    #[test]
    fn single_edge() {
        let net = ElectricNetwork::new(2, &[(0, 1, 7.0)]).unwrap();
        assert_eq!(net.strength(0), 7.0);
        assert_eq!(net.strength(1), 7.0);
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(matches!(
            ElectricNetwork::new(4, &[(0, 1, 1.0), (2, 3, 1.0)]),
            Err(NetworkError::Disconnected { components: 2 })
        ));
        assert!(matches!(
            ElectricNetwork::new(2, &[(1, 1, 1.0)]),
            Err(NetworkError::SelfLoop { vertex: 1 })
        ));
        assert!(matches!(
            ElectricNetwork::new(2, &[(0, 1, 1.0), (1, 0, 2.0)]),
            Err(NetworkError::DuplicateEdge { u: 0, v: 1 })
        ));
        assert!(matches!(
            ElectricNetwork::new(2, &[(0, 1, 0.0)]),
            Err(NetworkError::NonpositiveConductance { .. })
        ));
        assert!(matches!(
            ElectricNetwork::new(2, &[(0, 1, f64::INFINITY)]),
            Err(NetworkError::NonpositiveConductance { .. })
        ));
        assert!(matches!(
            ElectricNetwork::new(2, &[(0, 5, 1.0)]),
            Err(NetworkError::VertexOutOfRange { .. })
        ));
    }

    #[test]
    fn quotient_merges_parallel_edges() {
        // contract {1, 2} of K_4
        let net = ElectricNetwork::new(
            4,
            &[(0, 1, 1.0), (0, 2, 1.0), (0, 3, 1.0), (1, 2, 1.0), (1, 3, 1.0), (2, 3, 1.0)],
        )
        .unwrap();
        let (q, members) = net.quotient(&[0, 1, 1, 2], 3).unwrap();
        assert_eq!(q.edge_count(), 3);
        let e = q.edge_between(0, 1).unwrap();
        assert!((q.conductance(e) - 2.0).abs() < 1e-12);
        assert_eq!(members[e], vec![0, 1]);
    }

    #[test]
    fn extreme_log_conductances_keep_log_strength() {
        let net = ElectricNetwork::from_log_conductances(
            3,
            &[(0, 1), (1, 2)],
            vec![-2000.0, -2001.0],
        )
        .unwrap();
        assert_eq!(net.strength(1), 0.0);
        assert!(!net.is_linear_safe());
        let expected = -2000.0 + (1.0 + (-1.0f64).exp()).ln();
        assert!((net.log_strength(1) - expected).abs() < 1e-12);
    }
}
