use super::{EnvError, Environment};
use crate::netcore::ElectricNetwork;
use crate::sample::{kruskal_min, SpanningTree};

fn path_max(tree: &SpanningTree, labels: &[f64], mut u: usize, mut v: usize) -> f64 {
    let mut best = f64::NEG_INFINITY;
    while u != v {
        let climb_u = tree.depth(u) >= tree.depth(v);
        let x = if climb_u { &mut u } else { &mut v };
        let e = tree.parent_edge(*x).expect("non-root vertex has a parent");
        best = best.max(labels[e]);
        *x = tree.parent(*x).unwrap();
    }
    best
}

/// `m_e`: the largest label on the tree path between the endpoints of `e`.
/// For a minimum spanning tree this is strictly below `labels[e]` unless
/// labels tie.
pub fn mst_path_max(
    net: &ElectricNetwork,
    mst: &SpanningTree,
    labels: &[f64],
    e: usize,
) -> Result<f64, EnvError> {
    if mst.contains(e) {
        return Err(EnvError::EdgeInTree(e));
    }
    let (u, v) = net.endpoints(e);
    Ok(path_max(mst, labels, u, v))
}

/// `m_e` for every edge outside `tree` (`None` for tree edges).
pub fn external_path_maxima(net: &ElectricNetwork, tree: &SpanningTree, labels: &[f64]) -> Vec<Option<f64>> {
    (0..net.edge_count())
        .map(|e| {
            if tree.contains(e) {
                None
            } else {
                let (u, v) = net.endpoints(e);
                Some(path_max(tree, labels, u, v))
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SignificantEdges {
    pub edges: Vec<usize>,
    /// β = 0: every external edge has ratio 1 to its path, so all count.
    pub all_external: bool,
}

/// External edges `e` of the maximum spanning tree with some path edge `f`
/// satisfying `c(e)/c(f) ≥ ε`. In label space this reads
/// `U_e − m_e ≤ −ln(ε)/β`.
pub fn significant_edges(
    net: &ElectricNetwork,
    env: &Environment,
    epsilon: f64,
) -> Result<SignificantEdges, EnvError> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(EnvError::InvalidEpsilon(epsilon));
    }
    let labels = env.labels();
    let mst = kruskal_min(net, labels)?;
    let maxima = external_path_maxima(net, &mst, labels);
    for (e, m) in maxima.iter().enumerate() {
        if let Some(m) = m {
            if *m >= labels[e] {
                return Err(EnvError::NonUniqueMst { edge: e });
            }
        }
    }
    let external = maxima.iter().enumerate().filter_map(|(e, m)| m.map(|m| (e, m)));
    if env.beta() == 0.0 {
        return Ok(SignificantEdges {
            edges: external.map(|(e, _)| e).collect(),
            all_external: true,
        });
    }
    let threshold = -epsilon.ln() / env.beta();
    Ok(SignificantEdges {
        edges: external
            .filter(|&(e, m)| labels[e] - m <= threshold)
            .map(|(e, _)| e)
            .collect(),
        all_external: false,
    })
}

/// `|E(t1) △ E(t2)|`.
pub fn tree_symmetric_difference(t1: &SpanningTree, t2: &SpanningTree) -> Result<usize, EnvError> {
    if t1.vertex_count() != t2.vertex_count() {
        return Err(EnvError::SizeMismatch(t1.vertex_count(), t2.vertex_count()));
    }
    let (a, b) = (t1.edges(), t2.edges());
    let (mut i, mut j, mut common) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                common += 1;
                i += 1;
                j += 1;
            }
        }
    }
    Ok(a.len() + b.len() - 2 * common)
}
