use rand::seq::index::sample;
use rand::Rng;

use super::{ElectricNetwork, NetworkError};
use crate::sample::UnionFind;

/// The complete graph `K_n` with a uniform conductance.
pub fn gen_complete(n: usize, conductance: f64) -> Result<ElectricNetwork, NetworkError> {
    if n < 2 {
        return Err(NetworkError::InvalidParameter(format!(
            "complete graph needs n >= 2, got {n}"
        )));
    }
    let mut edges = Vec::with_capacity(n * (n - 1) / 2);
    for u in 0..n {
        for v in u + 1..n {
            edges.push((u, v, conductance));
        }
    }
    ElectricNetwork::new(n, &edges)
}

/// Path `0 - 1 - ... - (n-1)` with the given conductances, one per edge.
pub fn gen_path(conductances: &[f64]) -> Result<ElectricNetwork, NetworkError> {
    let edges: Vec<_> = conductances
        .iter()
        .enumerate()
        .map(|(i, &c)| (i, i + 1, c))
        .collect();
    ElectricNetwork::new(conductances.len() + 1, &edges)
}

/// Adds `m` vertices to `base`, each joined by unit-conductance edges to `f`
/// distinct old vertices drawn uniformly without replacement.
///
/// This is the family that breaks the almost-regular edge-resistance bound:
/// the new edges all have resistance at least `1/(f+1)`.
pub fn gen_regular_plus_pendants<R: Rng + ?Sized>(
    base: &ElectricNetwork,
    m: usize,
    f: usize,
    rng: &mut R,
) -> Result<ElectricNetwork, NetworkError> {
    let n = base.vertex_count();
    if f == 0 {
        return Err(NetworkError::InvalidParameter(
            "f = 0 would leave the new vertices isolated".into(),
        ));
    }
    if f > n {
        return Err(NetworkError::InvalidParameter(format!(
            "f = {f} exceeds the {n} base vertices"
        )));
    }
    let mut edges: Vec<(usize, usize, f64)> = (0..base.edge_count())
        .map(|e| {
            let (u, v) = base.endpoints(e);
            (u, v, base.conductance(e))
        })
        .collect();
    for i in 0..m {
        let new_vertex = n + i;
        let mut targets = sample(rng, n, f).into_vec();
        targets.sort_unstable();
        edges.extend(targets.into_iter().map(|t| (t, new_vertex, 1.0)));
    }
    ElectricNetwork::new(n + m, &edges)
}

/// `n` triangles glued in a line: vertices `a_0..a_n` are `0..=n` and
/// `b_i` is `n + i`; triangle `i` is `{a_{i-1}, a_i, b_i}`. Unit conductances.
pub fn gen_glued_triangle_chain(n: usize) -> Result<ElectricNetwork, NetworkError> {
    if n == 0 {
        return Err(NetworkError::InvalidParameter(
            "triangle chain needs at least one triangle".into(),
        ));
    }
    let mut edges = Vec::with_capacity(3 * n);
    for i in 1..=n {
        let (a_prev, a, b) = (i - 1, i, n + i);
        edges.push((a_prev, a, 1.0));
        edges.push((a_prev, b, 1.0));
        edges.push((a, b, 1.0));
    }
    ElectricNetwork::new(2 * n + 1, &edges)
}

/// `copies` cliques `K_{d+1}` chained by single bridge edges (last vertex of one
/// clique to the first vertex of the next), plus `leaves` pendant vertices
/// attached round-robin to the clique vertices. Unit conductances.
pub fn gen_expander_chain_with_leaves(
    d: usize,
    copies: usize,
    leaves: usize,
) -> Result<ElectricNetwork, NetworkError> {
    if d < 2 || copies < 1 {
        return Err(NetworkError::InvalidParameter(format!(
            "need d >= 2 and copies >= 1, got d = {d}, copies = {copies}"
        )));
    }
    let block = d + 1;
    let core = block * copies;
    let mut edges = Vec::new();
    for c in 0..copies {
        let start = c * block;
        for u in start..start + block {
            for v in u + 1..start + block {
                edges.push((u, v, 1.0));
            }
        }
        if c + 1 < copies {
            edges.push((start + block - 1, start + block, 1.0));
        }
    }
    for i in 0..leaves {
        edges.push((i % core, core + i, 1.0));
    }
    ElectricNetwork::new(core + leaves, &edges)
}

/// A connected random graph: a uniformly random labelled tree skeleton (random
/// attachment) plus `extra` distinct extra edges, conductances uniform on
/// `[c_lo, c_hi]`.
pub fn gen_random_connected<R: Rng + ?Sized>(
    n: usize,
    extra: usize,
    c_lo: f64,
    c_hi: f64,
    rng: &mut R,
) -> Result<ElectricNetwork, NetworkError> {
    if n < 2 {
        return Err(NetworkError::InvalidParameter("need n >= 2".into()));
    }
    let max_edges = n * (n - 1) / 2;
    let target = (n - 1 + extra).min(max_edges);
    let mut seen = std::collections::HashSet::new();
    let mut pairs = Vec::with_capacity(target);
    for v in 1..n {
        let u = rng.gen_range(0..v);
        seen.insert((u, v));
        pairs.push((u, v));
    }
    while pairs.len() < target {
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        if u == v {
            continue;
        }
        let key = (u.min(v), u.max(v));
        if seen.insert(key) {
            pairs.push(key);
        }
    }
    let edges: Vec<_> = pairs
        .into_iter()
        .map(|(u, v)| (u, v, rng.gen_range(c_lo..=c_hi)))
        .collect();
    ElectricNetwork::new(n, &edges)
}

/// Every connected simple graph on `n` vertices, one representative per
/// isomorphism class, as edge lists `(u, v)` with `u < v`. Brute force over
/// vertex permutations, so `n` is limited to 7.
pub fn connected_graphs_up_to_isomorphism(n: usize) -> Vec<Vec<(usize, usize)>> {
    assert!((1..=7).contains(&n), "graph enumeration supports 1..=7 vertices");
    let slots: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    let mut slot_index = vec![vec![0usize; n]; n];
    for (i, &(u, v)) in slots.iter().enumerate() {
        slot_index[u][v] = i;
        slot_index[v][u] = i;
    }
    let perms = permutations(n);
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << slots.len()) {
        let edges: Vec<(usize, usize)> = (0..slots.len())
            .filter(|&i| mask >> i & 1 == 1)
            .map(|i| slots[i])
            .collect();
        if edges.len() + 1 < n {
            continue;
        }
        let mut uf = UnionFind::new(n);
        let mut parts = n;
        for &(u, v) in &edges {
            if uf.union(u, v) {
                parts -= 1;
            }
        }
        if parts != 1 {
            continue;
        }
        let canonical = perms
            .iter()
            .map(|p| {
                edges
                    .iter()
                    .fold(0u64, |acc, &(u, v)| acc | 1 << slot_index[p[u]][p[v]])
            })
            .min()
            .unwrap_or(0);
        if seen.insert(canonical) {
            out.push(edges);
        }
    }
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn extend(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                extend(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn complete_graph_counts() {
        let k4 = gen_complete(4, 1.0).unwrap();
        assert_eq!(k4.edge_count(), 6);
        assert!(k4.strengths().iter().all(|&c| c == 3.0));
        let k3 = gen_complete(3, 2.0).unwrap();
        assert!(k3.strengths().iter().all(|&c| c == 4.0));
        assert!(gen_complete(1, 1.0).is_err());
    }

    #[test]
    fn pendants() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let k5 = gen_complete(5, 1.0).unwrap();
        let g = gen_regular_plus_pendants(&k5, 2, 1, &mut rng).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (7, 12));
        let g = gen_regular_plus_pendants(&k5, 1, 5, &mut rng).unwrap();
        assert_eq!(g.neighbors(5).len(), 5);
        let k4 = gen_complete(4, 1.0).unwrap();
        assert!(gen_regular_plus_pendants(&k4, 1, 0, &mut rng).is_err());
        assert!(gen_regular_plus_pendants(&k4, 1, 5, &mut rng).is_err());
    }

    #[test]
    fn triangle_chain_shape() {
        let g1 = gen_glued_triangle_chain(1).unwrap();
        assert_eq!((g1.vertex_count(), g1.edge_count()), (3, 3));
        // a_0 = 0, a_1 = 1, b_1 = 2
        for (u, v) in [(0, 1), (0, 2), (1, 2)] {
            assert!(g1.edge_between(u, v).is_some());
        }
        let g2 = gen_glued_triangle_chain(2).unwrap();
        assert_eq!((g2.vertex_count(), g2.edge_count()), (5, 6));
        let g3 = gen_glued_triangle_chain(3).unwrap();
        assert_eq!(g3.neighbors(1).len(), 4);
        assert!(gen_glued_triangle_chain(0).is_err());
    }

    #[test]
    fn expander_chain_shape() {
        let g = gen_expander_chain_with_leaves(3, 2, 0).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (8, 13));
        let g = gen_expander_chain_with_leaves(3, 1, 2).unwrap();
        assert_eq!(g.vertex_count(), 6);
        assert!(gen_expander_chain_with_leaves(1, 2, 0).is_err());
    }

    #[test]
    fn isomorphism_class_counts() {
        // OEIS A001349: 1, 1, 2, 6, 21, 112
        let counts: Vec<usize> = (1..=6)
            .map(|n| connected_graphs_up_to_isomorphism(n).len())
            .collect();
        assert_eq!(counts, vec![1, 1, 2, 6, 21, 112]);
    }
}
