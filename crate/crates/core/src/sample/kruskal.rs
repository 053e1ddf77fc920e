use super::{SampleError, SpanningTree, UnionFind};
use crate::netcore::ElectricNetwork;

/// Minimum spanning tree under per-edge `labels`, ties broken by edge index.
pub fn kruskal_min(net: &ElectricNetwork, labels: &[f64]) -> Result<SpanningTree, SampleError> {
    if labels.len() != net.edge_count() {
        return Err(SampleError::InvalidLabels(format!(
            "{} labels for {} edges",
            labels.len(),
            net.edge_count()
        )));
    }
    if let Some(e) = labels.iter().position(|l| !l.is_finite()) {
        return Err(SampleError::InvalidLabels(format!("label of edge {e} is {}", labels[e])));
    }
    let mut order: Vec<usize> = (0..labels.len()).collect();
    order.sort_by(|&a, &b| labels[a].total_cmp(&labels[b]).then(a.cmp(&b)));
    let n = net.vertex_count();
    let mut uf = UnionFind::new(n);
    let mut edges = Vec::with_capacity(n.saturating_sub(1));
    for e in order {
        let (u, v) = net.endpoints(e);
        if uf.union(u, v) {
            edges.push(e);
            if edges.len() + 1 == n {
                break;
            }
        }
    }
    SpanningTree::new(net, edges)
}

/// The spanning tree maximizing `Π c(e)`: Kruskal on decreasing conductance.
pub fn max_st(net: &ElectricNetwork) -> Result<SpanningTree, SampleError> {
    let negated: Vec<f64> = net.log_conductances().iter().map(|l| -l).collect();
    kruskal_min(net, &negated)
}
