use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wstlab::localstat::{
    b_values, ball, ball_with_cap, census, enumerate_patterns, pgw_reference_probability, Ball, CensusPlan,
    LocalCensus, RootedTreePattern, TreeSource,
};
use wstlab::netcore::{gen_complete, gen_path, gen_random_connected};
use wstlab::sample::{SamplerKind, SpanningTree};

/// All permutations of `0..k` (Heap's algorithm).
fn permutations(k: usize) -> Vec<Vec<usize>> {
    let mut a: Vec<usize> = (0..k).collect();
    let mut c = vec![0; k];
    let mut out = vec![a.clone()];
    let mut i = 0;
    while i < k {
        if c[i] < i {
            if i % 2 == 0 {
                a.swap(0, i);
            } else {
                a.swap(c[i], i);
            }
            out.push(a.clone());
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}

fn random_tree(k: usize, seed: u64) -> (Vec<(usize, usize)>, usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut depth = vec![0; k];
    let mut edges = Vec::new();
    for j in 1..k {
        let p = rng.gen_range(0..j);
        depth[j] = depth[p] + 1;
        edges.push((p, j));
    }
    (edges, depth.into_iter().max().unwrap_or(0))
}

fn brute_stab(k: usize, edges: &[(usize, usize)]) -> u128 {
    let mut adj = vec![vec![false; k]; k];
    for &(u, v) in edges {
        adj[u][v] = true;
        adj[v][u] = true;
    }
    permutations(k)
        .into_iter()
        .filter(|s| s[0] == 0 && edges.iter().all(|&(u, v)| adj[s[u]][s[v]]))
        .count() as u128
}

#[test]
fn heap_permutations_are_complete() {
    let p = permutations(5);
    assert_eq!(p.len(), 120);
    let mut sorted = p.clone();
    sorted.sort();
    sorted.dedup();
    assert_eq!(sorted.len(), 120);
}

#[test]
fn reference_law_normalises() {
    let stars: f64 = (1..40).map(|j| pgw_reference_probability(&RootedTreePattern::star(j)).value).sum();
    assert!((stars - 1.0).abs() < 1e-12);
    assert_eq!(pgw_reference_probability(&RootedTreePattern::point(0)).value, 1.0);
    let point = pgw_reference_probability(&RootedTreePattern::point(1));
    assert!(point.degenerate && point.value == 0.0);

    let mass = |max_k| -> f64 { enumerate_patterns(2, max_k).iter().map(|p| pgw_reference_probability(p).value).sum() };
    let (small, large) = (mass(8), mass(11));
    assert!(small < large && large <= 1.0 + 1e-12, "{small} {large}");
    assert!(large > 0.9);
}

#[test]
fn balls_of_a_path() {
    let net = gen_path(&[1.0; 6]).unwrap();
    let tree = SpanningTree::new(&net, (0..6).collect()).unwrap();
    let Ball::Pattern(p) = ball(&tree, 3, 2) else { panic!("truncated") };
    assert_eq!(p.encoding(), "((())(()))");
    assert_eq!((p.k(), p.t(), p.stab()), (5, 3, 2));
    let Ball::Pattern(end) = ball(&tree, 0, 3) else { panic!("truncated") };
    assert_eq!(end.encoding(), "(((())))");
    assert_eq!(ball_with_cap(&tree, 3, 3, 4), Ball::Truncated);
}

#[test]
fn census_merge_is_a_commutative_monoid() {
    let net = gen_complete(25, 1.0).unwrap();
    let run = |seed| {
        census(TreeSource::Network(&net), SamplerKind::Wilson, 2, CensusPlan::new(40).roots_per_tree(3), seed).unwrap()
    };
    let (a, b, c) = (run(1), run(2), run(3));
    let merged = |x: &LocalCensus, y: &LocalCensus| {
        let mut m = x.clone();
        m.merge(y.clone()).unwrap();
        m
    };
    assert_eq!(merged(&merged(&a, &b), &c), merged(&a, &merged(&b, &c)));
    assert_eq!(merged(&a, &b), merged(&b, &a));
    assert_eq!(merged(&a, &LocalCensus::new(2)), a);
    assert_eq!(merged(&a, &b).samples(), 240);
    assert!(a.clone().merge(LocalCensus::new(1)).is_err());
    // a census is a function of its seed
    assert_eq!(run(1), a);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn canonical_form_ignores_labels(k in 1usize..12, seed: u64, perm_seed: u64) {
        let (edges, radius) = random_tree(k, seed);
        let base = RootedTreePattern::from_edges(k, &edges, 0, radius).unwrap();
        let mut pi: Vec<usize> = (0..k).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(perm_seed);
        for i in (1..k).rev() {
            pi.swap(i, rng.gen_range(0..=i));
        }
        let moved: Vec<_> = edges.iter().map(|&(u, v)| (pi[v], pi[u])).collect();
        let relabelled = RootedTreePattern::from_edges(k, &moved, pi[0], radius).unwrap();
        prop_assert_eq!(base.encoding(), relabelled.encoding());
        prop_assert_eq!(&base, &relabelled);
        prop_assert_eq!(RootedTreePattern::from_encoding(base.encoding(), radius).unwrap(), base);
    }

    #[test]
    fn stabiliser_matches_brute_force(k in 1usize..=8, seed: u64) {
        let (edges, radius) = random_tree(k, seed);
        let p = RootedTreePattern::from_edges(k, &edges, 0, radius).unwrap();
        prop_assert_eq!(p.stab(), brute_stab(k, &edges));
        prop_assert!((p.log_stab() - (p.stab() as f64).ln()).abs() < 1e-12);
    }

    #[test]
    fn b_sums_to_vertex_count(n in 2usize..60, extra in 0usize..100, seed: u64) {
        let net = gen_random_connected(n, extra, 0.01, 100.0, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        let s: f64 = b_values(&net).iter().sum();
        prop_assert!((s - n as f64).abs() < 1e-9 * n as f64);
    }
}
