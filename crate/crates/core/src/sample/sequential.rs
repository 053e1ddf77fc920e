//! Edge-by-edge exact sampling for strongly heterogeneous conductances.
//!
//! Edges are decided in order of decreasing conductance. Given the decisions
//! so far, the spatial Markov property says the rest of the tree is a
//! weighted spanning tree of the network with the accepted edges contracted
//! and the rejected ones deleted, so Kirchhoff's formula gives the exact
//! conditional inclusion probability `1 / (1 + c_rest)`. Only undecided edges
//! within `W` log-units of the current edge enter `c_rest`; weaker ones are
//! dropped, which moves each probability by at most `|E| e^{−W}`.
//!
//! The walk samplers need time of order the largest conductance ratio they
//! must climb; this one needs none of that, and its cost is governed by how
//! many edges fall inside each window.

use rand::Rng;

use super::{SampleError, UnionFind};
use crate::netcore::ElectricNetwork;
use crate::resist::kron::KronReducer;

pub(crate) fn sequential_edges<R: Rng + ?Sized>(
    net: &ElectricNetwork,
    order: &[usize],
    window: f64,
    reducer: &mut KronReducer,
    rng: &mut R,
    out: &mut Vec<usize>,
) -> Result<(), SampleError> {
    let n = net.vertex_count();
    let log_c = net.log_conductances();
    out.clear();
    let mut uf = UnionFind::new(n);
    let mut end = 0;
    let mut rest: Vec<(usize, usize, f64)> = Vec::new();
    for (i, &e) in order.iter().enumerate() {
        if out.len() + 1 == n {
            break;
        }
        let (u, v) = net.endpoints(e);
        let (ru, rv) = (uf.find(u), uf.find(v));
        if ru == rv {
            continue;
        }
        let le = log_c[e];
        end = end.max(i + 1);
        while end < order.len() && log_c[order[end]] >= le - window {
            end += 1;
        }
        rest.clear();
        for &f in &order[i + 1..end] {
            let (a, b) = net.endpoints(f);
            let (ra, rb) = (uf.find(a), uf.find(b));
            if ra != rb {
                rest.push((ra, rb, (log_c[f] - le).exp()));
            }
        }
        let c_rest = if rest.is_empty() {
            0.0
        } else {
            reducer.effective_conductance(rest.iter().copied(), ru, rv)
        };
        let accept = c_rest == 0.0 || rng.gen::<f64>() * (1.0 + c_rest) < 1.0;
        if accept {
            uf.union(ru, rv);
            out.push(e);
        }
    }
    if out.len() + 1 != n {
        return Err(SampleError::NotSpanningTree(format!(
            "sequential pass ended with {} of {} edges",
            out.len(),
            n - 1
        )));
    }
    Ok(())
}
