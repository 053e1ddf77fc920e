use super::{SampleError, SpanningTree, UnionFind};
use crate::netcore::ElectricNetwork;

/// Largest vertex count accepted by [`enumerate_spanning_trees`].
pub const ENUMERATION_LIMIT: usize = 12;

/// Every spanning tree with its weight `Π c(e)`, by contraction–deletion over
/// edges in index order. Trees come out in lexicographic order of their
/// sorted edge lists.
pub fn enumerate_spanning_trees(net: &ElectricNetwork) -> Result<Vec<(SpanningTree, f64)>, SampleError> {
    let n = net.vertex_count();
    if n > ENUMERATION_LIMIT {
        return Err(SampleError::TooLarge {
            n,
            max: ENUMERATION_LIMIT,
        });
    }
    let mut found = Vec::new();
    let mut chosen = Vec::with_capacity(n);
    recurse(net, 0, &UnionFind::new(n), &mut chosen, 0.0, &mut found);
    found
        .into_iter()
        .map(|(edges, log_w)| Ok((SpanningTree::new(net, edges)?, f64::exp(log_w))))
        .collect()
}

fn recurse(
    net: &ElectricNetwork,
    next: usize,
    uf: &UnionFind,
    chosen: &mut Vec<usize>,
    log_w: f64,
    found: &mut Vec<(Vec<usize>, f64)>,
) {
    let n = net.vertex_count();
    if chosen.len() + 1 == n {
        found.push((chosen.clone(), log_w));
        return;
    }
    if next == net.edge_count() || !completable(net, next, uf) {
        return;
    }
    let (u, v) = net.endpoints(next);
    let mut probe = uf.clone();
    if probe.union(u, v) {
        chosen.push(next);
        recurse(net, next + 1, &probe, chosen, log_w + net.log_conductance(next), found);
        chosen.pop();
    }
    recurse(net, next + 1, uf, chosen, log_w, found);
}

/// Whether edges `next..` can still connect the current components.
fn completable(net: &ElectricNetwork, next: usize, uf: &UnionFind) -> bool {
    let mut probe = uf.clone();
    let n = net.vertex_count();
    let mut components = (0..n).filter(|&v| probe.find(v) == v).count();
    for e in next..net.edge_count() {
        let (u, v) = net.endpoints(e);
        if probe.union(u, v) {
            components -= 1;
        }
    }
    components == 1
}
