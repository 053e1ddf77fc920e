use std::fmt::Write as _;

use super::{SampleError, UnionFind};
use crate::netcore::ElectricNetwork;

/// A spanning tree of a network, stored as sorted edge indices together with
/// the parent structure rooted at vertex 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SpanningTree {
    n: usize,
    edges: Vec<usize>,
    parent: Vec<u32>,
    parent_edge: Vec<u32>,
    depth: Vec<u32>,
    offsets: Vec<u32>,
    adjacency: Vec<u32>,
}

const NONE: u32 = u32::MAX;

impl SpanningTree {
    /// Validates that `edges` has `n - 1` distinct edges, spans every vertex and
    /// contains no cycle.
    pub fn new(net: &ElectricNetwork, mut edges: Vec<usize>) -> Result<Self, SampleError> {
        let n = net.vertex_count();
        if edges.len() + 1 != n {
            return Err(SampleError::NotSpanningTree(format!(
                "{} edges for {} vertices",
                edges.len(),
                n
            )));
        }
        edges.sort_unstable();
        let mut uf = UnionFind::new(n);
        for (i, &e) in edges.iter().enumerate() {
            if e >= net.edge_count() || (i > 0 && edges[i - 1] == e) {
                return Err(SampleError::NotSpanningTree(format!("bad edge index {e}")));
            }
            let (u, v) = net.endpoints(e);
            if !uf.union(u, v) {
                return Err(SampleError::NotSpanningTree(format!("edge {e} closes a cycle")));
            }
        }
        Ok(Self::build(net, edges))
    }

    fn build(net: &ElectricNetwork, edges: Vec<usize>) -> Self {
        let n = net.vertex_count();
        let mut degree = vec![0u32; n];
        for &e in &edges {
            let (u, v) = net.endpoints(e);
            degree[u] += 1;
            degree[v] += 1;
        }
        let mut offsets = vec![0u32; n + 1];
        for v in 0..n {
            offsets[v + 1] = offsets[v] + degree[v];
        }
        let mut fill: Vec<u32> = offsets[..n].to_vec();
        let mut adjacency = vec![0u32; 2 * edges.len()];
        let mut adj_edge = vec![0u32; 2 * edges.len()];
        for &e in &edges {
            let (u, v) = net.endpoints(e);
            adjacency[fill[u] as usize] = v as u32;
            adj_edge[fill[u] as usize] = e as u32;
            fill[u] += 1;
            adjacency[fill[v] as usize] = u as u32;
            adj_edge[fill[v] as usize] = e as u32;
            fill[v] += 1;
        }
        let mut parent = vec![NONE; n];
        let mut parent_edge = vec![NONE; n];
        let mut depth = vec![0u32; n];
        let mut stack = vec![0usize];
        let mut seen = vec![false; n];
        seen[0] = true;
        while let Some(x) = stack.pop() {
            for i in offsets[x] as usize..offsets[x + 1] as usize {
                let y = adjacency[i] as usize;
                if !seen[y] {
                    seen[y] = true;
                    parent[y] = x as u32;
                    parent_edge[y] = adj_edge[i];
                    depth[y] = depth[x] + 1;
                    stack.push(y);
                }
            }
        }
        SpanningTree {
            n,
            edges,
            parent,
            parent_edge,
            depth,
            offsets,
            adjacency,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    /// Sorted edge indices.
    pub fn edges(&self) -> &[usize] {
        &self.edges
    }

    pub fn contains(&self, e: usize) -> bool {
        self.edges.binary_search(&e).is_ok()
    }

    /// Parent of `v` when rooted at vertex 0; `None` for the root.
    pub fn parent(&self, v: usize) -> Option<usize> {
        (self.parent[v] != NONE).then(|| self.parent[v] as usize)
    }

    pub fn parent_edge(&self, v: usize) -> Option<usize> {
        (self.parent_edge[v] != NONE).then(|| self.parent_edge[v] as usize)
    }

    pub fn depth(&self, v: usize) -> usize {
        self.depth[v] as usize
    }

    pub fn tree_neighbors(&self, v: usize) -> &[u32] {
        &self.adjacency[self.offsets[v] as usize..self.offsets[v + 1] as usize]
    }

    pub fn tree_degree(&self, v: usize) -> usize {
        (self.offsets[v + 1] - self.offsets[v]) as usize
    }

    /// Edge indices on the unique tree path between `u` and `v`.
    pub fn path_edges(&self, mut u: usize, mut v: usize) -> Vec<usize> {
        let mut left = Vec::new();
        let mut right = Vec::new();
        while self.depth[u] > self.depth[v] {
            left.push(self.parent_edge[u] as usize);
            u = self.parent[u] as usize;
        }
        while self.depth[v] > self.depth[u] {
            right.push(self.parent_edge[v] as usize);
            v = self.parent[v] as usize;
        }
        while u != v {
            left.push(self.parent_edge[u] as usize);
            right.push(self.parent_edge[v] as usize);
            u = self.parent[u] as usize;
            v = self.parent[v] as usize;
        }
        right.reverse();
        left.extend(right);
        left
    }

    /// Bit mask of edge indices, for networks with at most 128 edges.
    pub fn edge_mask(&self) -> Option<u128> {
        edge_mask(&self.edges)
    }

    /// One line of space-separated edge indices.
    pub fn to_line(&self) -> String {
        let mut s = String::new();
        for (i, e) in self.edges.iter().enumerate() {
            if i > 0 {
                s.push(' ');
            }
            let _ = write!(s, "{e}");
        }
        s
    }

    /// Edge indices followed by their `(u,v)` endpoints, for debugging.
    pub fn to_line_with_endpoints(&self, net: &ElectricNetwork) -> String {
        let mut s = self.to_line();
        s.push_str(" |");
        for &e in &self.edges {
            let (u, v) = net.endpoints(e);
            let _ = write!(s, " ({u},{v})");
        }
        s
    }

    /// Parses a line produced by [`to_line`](Self::to_line) (anything after `|`
    /// is ignored).
    pub fn from_line(net: &ElectricNetwork, line: &str) -> Result<Self, SampleError> {
        let indices = line.split('|').next().unwrap_or("");
        let edges = indices
            .split_whitespace()
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|_| SampleError::NotSpanningTree(format!("cannot parse `{t}`")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(net, edges)
    }
}

pub(crate) fn edge_mask(edges: &[usize]) -> Option<u128> {
    let mut mask = 0u128;
    for &e in edges {
        if e >= 128 {
            return None;
        }
        mask |= 1u128 << e;
    }
    Some(mask)
}
