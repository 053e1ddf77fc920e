use std::collections::{BTreeMap, HashMap};

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use wstlab::netcore::{gen_random_connected, ElectricNetwork};
use wstlab::sample::{
    conditioned_law, conditioned_sample, enumerate_spanning_trees, kruskal_min, max_st, RngStream, Sampler,
    SamplerKind, SpanningTree,
};
use wstlab::stats::tv_distance;

fn network(n: usize, extra: usize, seed: u64) -> ElectricNetwork {
    gen_random_connected(n, extra, 0.1, 10.0, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap()
}

fn exact(law: &[(SpanningTree, f64)]) -> BTreeMap<Vec<usize>, f64> {
    let z: f64 = law.iter().map(|t| t.1).sum();
    law.iter().map(|(t, w)| (t.edges().to_vec(), w / z)).collect()
}

fn empirical(kind: SamplerKind, net: &ElectricNetwork, samples: usize, seed: u64) -> BTreeMap<Vec<usize>, f64> {
    let mut rng = RngStream::new(seed, 0);
    let s = Sampler::new(net, kind, &mut rng);
    let mut counts: HashMap<Vec<usize>, usize> = HashMap::new();
    for _ in 0..samples {
        *counts.entry(s.sample(&mut rng).unwrap().edges().to_vec()).or_default() += 1;
    }
    counts.into_iter().map(|(k, c)| (k, c as f64 / samples as f64)).collect()
}

#[test]
fn every_sampler_matches_enumeration() {
    // 5 vertices, up to 11 trees... but with 3 extra edges there are more
    let net = network(5, 4, 3);
    let law = exact(&enumerate_spanning_trees(&net).unwrap());
    for kind in [SamplerKind::Wilson, SamplerKind::AldousBroder, SamplerKind::Sequential, SamplerKind::Auto] {
        let tv = tv_distance(&empirical(kind, &net, 200_000, 17), &law);
        // TV noise for ~40 outcomes at 2e5 samples is about 0.006
        assert!(tv < 0.015, "{kind:?}: tv {tv}");
    }
}

#[test]
fn sequential_sampler_survives_huge_dynamic_range() {
    let base = network(6, 6, 8);
    let logc: Vec<f64> = (0..base.edge_count()).map(|e| -(e as f64) * 300.0).collect();
    let net = base.reweighted(logc).unwrap();
    // a gap of e^{300} per edge: the maximum spanning tree every time
    let top = max_st(&net).unwrap();
    for kind in [SamplerKind::Sequential, SamplerKind::Auto] {
        let mut rng = RngStream::new(1, 0);
        let s = Sampler::new(&net, kind, &mut rng);
        for _ in 0..50 {
            assert_eq!(s.sample(&mut rng).unwrap().edges(), top.edges());
        }
    }
}

#[test]
fn kruskal_minimises_over_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for seed in 0..20 {
        let net = network(6, 6, seed);
        let labels: Vec<f64> = (0..net.edge_count()).map(|_| rand::Rng::gen(&mut rng)).collect();
        let best = enumerate_spanning_trees(&net)
            .unwrap()
            .into_iter()
            .map(|(t, _)| (t.edges().iter().map(|&e| labels[e]).sum::<f64>(), t.edges().to_vec()))
            .min_by(|a, b| a.0.total_cmp(&b.0))
            .unwrap();
        assert_eq!(kruskal_min(&net, &labels).unwrap().edges(), best.1.as_slice());
    }
}

#[test]
fn conditioned_law_is_the_filtered_law() {
    let net = network(6, 5, 12);
    let all = enumerate_spanning_trees(&net).unwrap();
    let (a, b) = (vec![0usize], vec![net.edge_count() - 1]);
    let kept: Vec<_> = all
        .iter()
        .filter(|(t, _)| a.iter().all(|&e| t.contains(e)) && b.iter().all(|&e| !t.contains(e)))
        .cloned()
        .collect();
    let filtered = exact(&kept);
    let conditioned = exact(&conditioned_law(&net, &a, &b).unwrap());
    assert!(tv_distance(&filtered, &conditioned) < 1e-12);

    let mut rng = RngStream::new(3, 3);
    let mut counts: HashMap<Vec<usize>, usize> = HashMap::new();
    let samples = 100_000;
    for _ in 0..samples {
        *counts.entry(conditioned_sample(&net, &a, &b, &mut rng).unwrap().edges().to_vec()).or_default() += 1;
    }
    let hat: BTreeMap<_, _> = counts.into_iter().map(|(k, c)| (k, c as f64 / samples as f64)).collect();
    assert!(tv_distance(&hat, &filtered) < 0.02);
}

#[test]
fn trees_round_trip_through_text() {
    let net = network(9, 9, 1);
    let tree = Sampler::new(&net, SamplerKind::Wilson, &mut RngStream::new(0, 0))
        .sample(&mut RngStream::new(0, 1))
        .unwrap();
    assert_eq!(SpanningTree::from_line(&net, &tree.to_line()).unwrap(), tree);
    assert!(SpanningTree::new(&net, vec![0]).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn same_stream_same_tree(n in 2usize..30, extra in 0usize..30, seed: u64, stream: u64) {
        let net = network(n, extra, seed);
        for kind in [SamplerKind::Wilson, SamplerKind::AldousBroder, SamplerKind::Sequential] {
            let s = Sampler::new(&net, kind, &mut RngStream::new(seed, 0));
            let a = s.sample(&mut RngStream::new(seed, stream)).unwrap();
            let b = s.sample(&mut RngStream::new(seed, stream)).unwrap();
            prop_assert_eq!(a.edges().len(), n - 1);
            prop_assert_eq!(a, b);
        }
    }
}
