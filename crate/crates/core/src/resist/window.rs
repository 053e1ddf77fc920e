//! Kirchhoff probabilities for networks whose conductances span hundreds or
//! thousands of natural-log units, where grounded linear solves lose all
//! accuracy.
//!
//! For an edge `e` with log-conductance `ℓ_e`, edges stronger than
//! `ℓ_e + W` are contracted, edges weaker than `ℓ_e − W` are dropped, and the
//! rest is rescaled by `exp(−ℓ_e)`. Then `P(e ∈ T) = 1 / (1 + c_rest)` with
//! `c_rest` the effective conductance between the endpoints of `e` through
//! the other retained edges, found by positive Kron reduction. Each truncation
//! moves the probability by at most `|E| e^{−W}`.

use super::kron::KronReducer;
use crate::netcore::ElectricNetwork;
use crate::sample::UnionFind;

/// Default window half-width in natural-log units (`e^{-40} ≈ 4e-18`).
pub const WINDOW: f64 = 40.0;

/// Edge indices sorted by decreasing log-conductance, ties by index.
pub(crate) fn descending_order(log_c: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..log_c.len()).collect();
    order.sort_by(|&a, &b| log_c[b].total_cmp(&log_c[a]).then(a.cmp(&b)));
    order
}

pub fn windowed_edge_probabilities(net: &ElectricNetwork, window: f64) -> Vec<f64> {
    let log_c = net.log_conductances();
    let m = log_c.len();
    let order = descending_order(log_c);
    let mut strong = UnionFind::new(net.vertex_count());
    let mut reducer = KronReducer::new(net.vertex_count());
    let mut probabilities = vec![0.0; m];
    let mut contracted = 0;
    let mut end = 0;
    for i in 0..m {
        let e = order[i];
        let le = log_c[e];
        while contracted < i && log_c[order[contracted]] > le + window {
            let (a, b) = net.endpoints(order[contracted]);
            strong.union(a, b);
            contracted += 1;
        }
        while end < m && log_c[order[end]] >= le - window {
            end += 1;
        }
        let (u, v) = net.endpoints(e);
        let (ru, rv) = (strong.find(u), strong.find(v));
        if ru == rv {
            probabilities[e] = 0.0;
            continue;
        }
        let rest: Vec<(usize, usize, f64)> = (contracted..end)
            .filter(|&j| j != i)
            .map(|j| {
                let f = order[j];
                let (a, b) = net.endpoints(f);
                (strong.find(a), strong.find(b), (log_c[f] - le).exp())
            })
            .collect();
        let c_rest = reducer.effective_conductance(rest.into_iter(), ru, rv);
        probabilities[e] = 1.0 / (1.0 + c_rest);
    }
    probabilities
}
