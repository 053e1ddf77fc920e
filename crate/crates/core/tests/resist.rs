use approx::assert_relative_eq;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use wstlab::netcore::{gen_complete, gen_path, gen_random_connected, ElectricNetwork};
use wstlab::resist::{
    edge_marginals, nash_williams_bound, partition_function_log, MarginalMethod, ResistanceSolver, SolverMode,
};
use wstlab::sample::enumerate_spanning_trees;

fn network(n: usize, extra: usize, seed: u64) -> ElectricNetwork {
    gen_random_connected(n, extra, 0.1, 10.0, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap()
}

fn all_pairs(s: &ResistanceSolver) -> Vec<Vec<f64>> {
    let n = s.network().vertex_count();
    (0..n)
        .map(|a| (0..n).map(|b| if a == b { 0.0 } else { s.effective_resistance(a, b).unwrap() }).collect())
        .collect()
}

#[test]
fn series_and_parallel() {
    let p = gen_path(&[1.0, 2.0, 4.0]).unwrap();
    let s = ResistanceSolver::new(&p, SolverMode::Dense).unwrap();
    assert_relative_eq!(s.effective_resistance(0, 3).unwrap(), 1.75, epsilon = 1e-12);
    // K_n: 2/n between any pair
    let k = ResistanceSolver::new(&gen_complete(9, 1.0).unwrap(), SolverMode::Dense).unwrap();
    assert_relative_eq!(k.effective_resistance(2, 7).unwrap(), 2.0 / 9.0, epsilon = 1e-12);
    // K_n has n^{n-2} trees
    assert_relative_eq!(partition_function_log(&gen_complete(9, 1.0).unwrap()).unwrap(), 7.0 * 9f64.ln(), epsilon = 1e-9);
}

#[test]
fn kirchhoff_matches_enumerated_marginals() {
    for seed in 0..10 {
        let net = network(7, 8, seed);
        let trees = enumerate_spanning_trees(&net).unwrap();
        let z: f64 = trees.iter().map(|t| t.1).sum();
        let mut marginal = vec![0.0; net.edge_count()];
        for (t, w) in &trees {
            for &e in t.edges() {
                marginal[e] += w / z;
            }
        }
        let p = ResistanceSolver::new(&net, SolverMode::Dense).unwrap().all_kirchhoff_probabilities().unwrap();
        for e in 0..net.edge_count() {
            assert_relative_eq!(p[e], marginal[e], epsilon = 1e-10);
        }
        assert_relative_eq!(partition_function_log(&net).unwrap(), z.ln(), epsilon = 1e-10);
    }
}

#[test]
fn dense_and_iterative_agree() {
    let net = network(300, 500, 4);
    let d = ResistanceSolver::new(&net, SolverMode::Dense).unwrap().all_edge_resistances().unwrap();
    let i = ResistanceSolver::new(&net, SolverMode::iterative()).unwrap().all_edge_resistances().unwrap();
    for (a, b) in d.iter().zip(&i) {
        assert_relative_eq!(a, b, max_relative = 1e-7);
    }
}

#[test]
fn marginals_at_extreme_dynamic_range() {
    // conductances spanning e^{-600}: the windowed route still sums to n - 1
    let base = gen_complete(40, 1.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let logc: Vec<f64> = (0..base.edge_count()).map(|_| -600.0 * rand::Rng::gen::<f64>(&mut rng)).collect();
    let net = base.reweighted(logc).unwrap();
    let m = edge_marginals(&net, SolverMode::Dense);
    let sum: f64 = m.probabilities.iter().sum();
    assert!((sum - 39.0).abs() < 1e-6, "sum {sum} via {:?}", m.method);
    assert!(m.probabilities.iter().all(|p| (0.0..=1.0).contains(p)));
    let unit = edge_marginals(&base, SolverMode::Dense);
    assert_eq!(unit.method, MarginalMethod::Dense);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn resistance_is_a_metric(n in 3usize..14, extra in 0usize..20, seed: u64) {
        let net = network(n, extra, seed);
        let r = all_pairs(&ResistanceSolver::new(&net, SolverMode::Dense).unwrap());
        let scale = r.iter().flatten().copied().fold(0.0, f64::max);
        for a in 0..n {
            for b in 0..n {
                prop_assert!((r[a][b] - r[b][a]).abs() <= 1e-12 * scale);
                for c in 0..n {
                    prop_assert!(r[a][c] <= r[a][b] + r[b][c] + 1e-10 * scale);
                }
            }
        }
    }

    #[test]
    fn raising_a_conductance_lowers_resistances(n in 3usize..12, extra in 0usize..15, seed: u64, factor in 1.0f64..5.0) {
        let net = network(n, extra, seed);
        let e = (seed % net.edge_count() as u64) as usize;
        let edges: Vec<_> = (0..net.edge_count())
            .map(|f| {
                let (u, v) = net.endpoints(f);
                (u, v, net.conductance(f) * if f == e { factor } else { 1.0 })
            })
            .collect();
        let before = all_pairs(&ResistanceSolver::new(&net, SolverMode::Dense).unwrap());
        let after = all_pairs(&ResistanceSolver::new(&ElectricNetwork::new(n, &edges).unwrap(), SolverMode::Dense).unwrap());
        for a in 0..n {
            for b in 0..n {
                prop_assert!(after[a][b] <= before[a][b] + 1e-12);
            }
        }
    }

    #[test]
    fn foster_and_edge_lower_bound(n in 2usize..30, extra in 0usize..40, seed: u64) {
        let net = network(n, extra, seed);
        let s = ResistanceSolver::new(&net, SolverMode::Dense).unwrap();
        prop_assert!((s.foster_sum().unwrap() - (n - 1) as f64).abs() <= 1e-9 * n as f64);
        let r = s.all_edge_resistances().unwrap();
        for e in 0..net.edge_count() {
            let (u, v) = net.endpoints(e);
            prop_assert!(nash_williams_bound(&net, u, v).unwrap().value() <= r[e] + 1e-12);
        }
    }

    #[test]
    fn commute_time_is_twice_total_conductance_times_resistance(n in 2usize..15, extra in 0usize..15, seed: u64) {
        let net = network(n, extra, seed);
        let s = ResistanceSolver::new(&net, SolverMode::Dense).unwrap();
        let (a, b) = (0, n - 1);
        let expect = 2.0 * net.total_conductance() * s.effective_resistance(a, b).unwrap();
        prop_assert!((s.commute_time(a, b).unwrap() - expect).abs() <= 1e-9 * expect);
    }
}
