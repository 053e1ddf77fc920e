//! Per-vertex transition tables for the network random walk.

use rand::Rng;

use crate::netcore::ElectricNetwork;

/// Alias tables laid out along the network's adjacency rows. The walk from
/// `v` moves to neighbor `u` with probability `c(v,u)/C_v`; weights are
/// formed as `exp(ℓ − max ℓ)` within each row, so they never underflow as a
/// whole.
#[derive(Debug, Clone)]
pub struct WalkTables {
    offsets: Vec<usize>,
    neighbor: Vec<u32>,
    edge: Vec<u32>,
    threshold: Vec<f64>,
    alias: Vec<u32>,
    uniform: Vec<bool>,
}

impl WalkTables {
    pub fn new(net: &ElectricNetwork) -> Self {
        let n = net.vertex_count();
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        let total = 2 * net.edge_count();
        let mut neighbor = Vec::with_capacity(total);
        let mut edge = Vec::with_capacity(total);
        let mut threshold = vec![1.0; total];
        let mut alias = vec![0u32; total];
        let mut uniform = vec![true; n];
        let mut weights = Vec::new();
        let mut small = Vec::new();
        let mut large = Vec::new();
        for v in 0..n {
            let row = net.neighbors(v);
            let start = neighbor.len();
            for &(u, e) in row {
                neighbor.push(u);
                edge.push(e);
            }
            offsets.push(neighbor.len());
            if row.is_empty() {
                continue;
            }
            let logs = row.iter().map(|&(_, e)| net.log_conductance(e as usize));
            let first = net.log_conductance(row[0].1 as usize);
            if logs.clone().all(|l| l == first) {
                continue;
            }
            uniform[v] = false;
            let max = logs.clone().fold(f64::NEG_INFINITY, f64::max);
            weights.clear();
            weights.extend(logs.map(|l| (l - max).exp()));
            let d = weights.len();
            let sum: f64 = weights.iter().sum();
            // Vose's alias method
            small.clear();
            large.clear();
            for (i, w) in weights.iter_mut().enumerate() {
                *w *= d as f64 / sum;
                if *w < 1.0 {
                    small.push(i);
                } else {
                    large.push(i);
                }
            }
            while let (Some(&s), Some(&l)) = (small.last(), large.last()) {
                small.pop();
                threshold[start + s] = weights[s];
                alias[start + s] = l as u32;
                weights[l] -= 1.0 - weights[s];
                if weights[l] < 1.0 {
                    large.pop();
                    small.push(l);
                }
            }
            for &i in large.iter().chain(small.iter()) {
                threshold[start + i] = 1.0;
                alias[start + i] = i as u32;
            }
        }
        WalkTables {
            offsets,
            neighbor,
            edge,
            threshold,
            alias,
            uniform,
        }
    }

    /// One walk step from `v`: returns `(next vertex, edge used)`.
    #[inline]
    pub fn step<R: Rng + ?Sized>(&self, v: usize, rng: &mut R) -> (usize, usize) {
        let start = self.offsets[v];
        let d = self.offsets[v + 1] - start;
        let mut i = rng.gen_range(0..d);
        if !self.uniform[v] {
            let coin: f64 = rng.gen();
            if coin >= self.threshold[start + i] {
                i = self.alias[start + i] as usize;
            }
        }
        (
            self.neighbor[start + i] as usize,
            self.edge[start + i] as usize,
        )
    }
}
