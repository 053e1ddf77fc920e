//! Acceptance run: one line per criterion, non-zero exit if any fails.
//!
//! Plain `main` (no libtest harness) so the lines show in `cargo test` output.

use std::process::ExitCode;
use std::time::Instant;

use wstlab::env::Environment;
use wstlab::expcli::{
    association_checks, census_compare, default_typical_window, identity_checks, length_identity_checks,
    length_sweep, markov_exact_checks, markov_rejection_checks, max_st_checks, oracle_checks, overlap_exact,
    overlap_sweep, total_length, Check, ExperimentConfig, ZETA3,
};
use wstlab::localstat::{
    census, enumerate_patterns, theorem_sum, CensusPlan, LocalCensus, RootedTreePattern, SumMode, TreeSource,
};
use wstlab::netcore::{connected_graphs_up_to_isomorphism, gen_complete, gen_random_connected, ElectricNetwork};
use wstlab::resist::{partition_function_log, ResistanceSolver, SolverMode};
use wstlab::sample::{enumerate_spanning_trees, kruskal_min, RngStream, SamplerKind, UnionFind};

const SEED: u64 = 1;

type Outcome = Result<(bool, String), String>;

fn worst<'a>(checks: impl IntoIterator<Item = &'a Check>) -> (bool, usize, Option<&'a Check>) {
    let mut all = true;
    let mut count = 0;
    let mut top: Option<&Check> = None;
    for c in checks {
        count += 1;
        all &= c.pass;
        if top.is_none_or(|t| c.measured / c.bound.max(1e-300) > t.measured / t.bound.max(1e-300)) {
            top = Some(c);
        }
    }
    (all, count, top)
}

fn summarize(label: &str, checks: &[Check], name: &str) -> (bool, String) {
    let picked: Vec<&Check> = checks.iter().filter(|c| c.name == name).collect();
    let (pass, count, top) = worst(picked.iter().copied());
    let failed = picked.iter().filter(|c| !c.pass).count();
    let detail = match top {
        Some(c) => format!("worst {:.3e} (bound {:.1e}) at {}", c.measured, c.bound, c.subject),
        None => "no checks".into(),
    };
    (pass && count > 0, format!("{label}: {count} checks, {failed} over bound; {detail}"))
}

fn c1_c2(oracle: &[Check]) -> (Outcome, Outcome) {
    let (w, wd) = summarize("wilson tv", oracle, "tv_wilson");
    let (a, ad) = summarize("aldous-broder tv", oracle, "tv_aldous_broder");
    let c1 = Ok((w && a, format!("{wd} | {ad}")));
    let (k, kd) = summarize("per-edge |p-cR|/sigma", oracle, "kirchhoff_sigmas");
    let (m, md) = summarize("matrix-tree rel err", oracle, "matrix_tree");
    // an exact sampler still exceeds 3 sigma with probability ~0.0027 per non-bridge edge
    let tests = 5 * non_bridge_edges(5);
    let c2 = Ok((
        k && m,
        format!("{kd} | {md} | {tests} non-bridge edge tests, {:.1} exceedances expected from an exact sampler", tests as f64 * 0.0027),
    ));
    (c1, c2)
}

fn non_bridge_edges(max_n: usize) -> usize {
    let mut count = 0;
    for n in 2..=max_n {
        for edges in connected_graphs_up_to_isomorphism(n) {
            for skip in 0..edges.len() {
                let mut uf = UnionFind::new(n);
                let merged = edges.iter().enumerate().filter(|&(i, &(u, v))| i != skip && uf.union(u, v)).count();
                if merged == n - 1 {
                    count += 1;
                }
            }
        }
    }
    count
}

fn c3() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut at = 0;
    for (i, n) in [10usize, 100, 500, 1000, 2000].into_iter().enumerate() {
        let mut rng = RngStream::new(SEED, 300 + i as u64);
        let net = gen_random_connected(n, 2 * n, 0.1, 10.0, &mut rng).map_err(|e| e.to_string())?;
        let solver = ResistanceSolver::new(&net, SolverMode::Dense).map_err(|e| e.to_string())?;
        let sum = solver.foster_sum().map_err(|e| e.to_string())?;
        let rel = (sum - (n - 1) as f64).abs() / (n - 1) as f64;
        if rel >= worst {
            worst = rel;
            at = n;
        }
    }
    Ok((worst <= 1e-8, format!("max |sum cR - (n-1)|/(n-1) = {worst:.2e} (n={at}), bound 1e-8")))
}

fn c4() -> Outcome {
    let tri = ElectricNetwork::new(3, &[(0, 1, 1.0), (1, 2, 2.0), (0, 2, 3.0)]).map_err(|e| e.to_string())?;
    let s = ResistanceSolver::new(&tri, SolverMode::Dense).map_err(|e| e.to_string())?;
    let z: f64 = enumerate_spanning_trees(&tri).map_err(|e| e.to_string())?.iter().map(|t| t.1).sum();
    let r = s.all_edge_resistances().map_err(|e| e.to_string())?;
    let p = s.all_kirchhoff_probabilities().map_err(|e| e.to_string())?;
    let pairs = [
        (partition_function_log(&tri).map_err(|e| e.to_string())?.exp(), 11.0),
        (z, 11.0),
        (r[0], 5.0 / 11.0),
        (r[1], 4.0 / 11.0),
        (r[2], 3.0 / 11.0),
        (p[0], 5.0 / 11.0),
        (p[1], 8.0 / 11.0),
        (p[2], 9.0 / 11.0),
        (overlap_exact(&s).map_err(|e| e.to_string())?, 170.0 / 121.0),
        (s.commute_time(0, 1).map_err(|e| e.to_string())?, 60.0 / 11.0),
    ];
    let err = pairs.iter().map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    Ok((err <= 1e-12, format!("10 exact values, max abs error {err:.1e}, bound 1e-12")))
}

fn c5() -> Outcome {
    let base = gen_complete(300, 1.0).map_err(|e| e.to_string())?;
    let mut total = 0.0;
    for i in 0..200 {
        let env = Environment::draw(&base, 0.0, &mut RngStream::new(SEED, 500 + i)).map_err(|e| e.to_string())?;
        total += total_length(&kruskal_min(&base, env.labels()).map_err(|e| e.to_string())?, env.labels());
    }
    let mean = total / 200.0;
    let gap = (mean - ZETA3).abs();
    Ok((gap <= 0.05, format!("mean L(MST(K_300)) = {mean:.5} over 200 draws, |gap to zeta(3)| = {gap:.4}, bound 0.05")))
}

fn c6() -> Outcome {
    let mut c = ExperimentConfig::default();
    c.graph = "complete:1000".parse().map_err(|e: wstlab::expcli::ExpError| e.to_string())?;
    c.betas = vec![5.0];
    c.replicas = 200;
    c.samples = Some(1);
    c.seed = SEED;
    let row = &length_sweep(&c).map_err(|e| e.to_string())?[0];
    if let Some(f) = &row.failure {
        return Err(f.clone());
    }
    let formula = row.aux("small_beta_formula").unwrap_or(f64::NAN);
    let rel = (row.estimate - formula).abs() / formula;
    Ok((
        rel <= 0.05,
        format!(
            "mean L = {:.2} (se {:.2}), formula {formula:.2}, relative gap {rel:.4}, bound 0.05",
            row.estimate, row.std_error
        ),
    ))
}

fn star_gaps(census: &LocalCensus) -> Vec<f64> {
    (1..=3usize)
        .map(|j| {
            let reference = (-1.0f64).exp() / (1..j).product::<usize>() as f64;
            (census.probability(&RootedTreePattern::star(j)) - reference).abs()
        })
        .collect()
}

fn c7(ust: &LocalCensus) -> Outcome {
    let n = 2000;
    let base = gen_complete(n, 1.0).map_err(|e| e.to_string())?;
    let beta = (n as f64).sqrt();
    let plan = CensusPlan::new(250).trees_per_replica(400);
    let wst = census(TreeSource::Environment { base: &base, beta }, SamplerKind::Auto, 1, plan, SEED)
        .map_err(|e| e.to_string())?;
    let g0 = star_gaps(ust);
    let g1 = star_gaps(&wst);
    let worst = g0.iter().chain(&g1).copied().fold(0.0, f64::max);
    Ok((
        worst <= 0.01,
        format!(
            "K_2000, {} and {} observations; |p - e^-1/(j-1)!| for j=1..3: beta=0 {:.4?}, beta=sqrt(n) {:.4?}; bound 0.01",
            ust.samples(),
            wst.samples(),
            g0,
            g1
        ),
    ))
}

fn c8() -> Outcome {
    let mut c = ExperimentConfig::default();
    c.graph = "complete:200".parse().map_err(|e: wstlab::expcli::ExpError| e.to_string())?;
    c.betas = vec![2e6];
    c.seed = SEED;
    c.replicas = 50;
    let row = &overlap_sweep(&c).map_err(|e| e.to_string())?[0];
    if let Some(f) = &row.failure {
        return Err(f.clone());
    }
    let need = 0.95 * 199.0;
    c.replicas = 5000;
    c.samples = Some(10);
    let cmp = &census_compare(&c).map_err(|e| e.to_string())?[0];
    Ok((
        row.estimate >= need && cmp.tv_mst <= 0.03,
        format!(
            "mean overlap {:.3} over 50 environments (need >= {need:.2}); TV(WST, MST) at r=1 = {:.4} over {} observations, bound 0.03",
            row.estimate,
            cmp.tv_mst,
            cmp.wst.samples()
        ),
    ))
}

fn c9() -> Outcome {
    let e = |e: wstlab::expcli::ExpError| e.to_string();
    let parts: Vec<(&str, Vec<Check>)> = vec![
        ("association", association_checks(4, 3, SEED).map_err(e)?),
        ("markov exact", markov_exact_checks(5, SEED).map_err(e)?),
        ("markov rejection", markov_rejection_checks(100_000, SEED).map_err(e)?),
        (
            "edge resistance lower bound",
            identity_checks(100, SEED)
                .map_err(e)?
                .into_iter()
                .filter(|c| c.name == "nash_williams")
                .collect(),
        ),
        ("length identity", length_identity_checks(10_000, SEED).map_err(e)?),
        ("max_st = kruskal_min", max_st_checks(1_000, SEED).map_err(e)?),
    ];
    let mut pass = true;
    let mut text = Vec::new();
    for (name, checks) in &parts {
        let failed = checks.iter().filter(|c| !c.pass).count();
        pass &= failed == 0 && !checks.is_empty();
        text.push(format!("{name} {}/{}", checks.len() - failed, checks.len()));
    }
    Ok((pass, text.join(", ")))
}

fn c10(ust: &LocalCensus) -> Outcome {
    let e = |e: wstlab::localstat::LocalError| e.to_string();
    // exhaustive against Monte Carlo on one environment of K_20
    let base = gen_complete(20, 1.0).map_err(|e| e.to_string())?;
    let env = Environment::draw(&base, 2.0, &mut RngStream::new(SEED, 1000)).map_err(|e| e.to_string())?;
    let net = env.network(&base).map_err(|e| e.to_string())?;
    let (gamma, k) = default_typical_window(&net);
    let mut worst_z: f64 = 0.0;
    let mut compared = 0;
    let mut consistent = true;
    for radius in 1..=2 {
        for (i, p) in enumerate_patterns(radius, 3).iter().enumerate() {
            let exact = theorem_sum(&net, p, gamma, k, SumMode::Exhaustive).map_err(e)?;
            let mc = theorem_sum(
                &net,
                p,
                gamma,
                k,
                SumMode::MonteCarlo { samples: 200_000, seed: SEED + 10 * radius as u64 + i as u64 },
            )
            .map_err(e)?;
            let gap = (exact.value - mc.value).abs();
            let ok = gap <= 3.0 * mc.std_error + 1e-12 * exact.value.abs();
            consistent &= ok;
            compared += 1;
            if mc.std_error > 0.0 {
                worst_z = worst_z.max(gap / mc.std_error);
            }
        }
    }

    // census of UST(K_2000) against the sum on the same network
    let k2000 = gen_complete(2000, 1.0).map_err(|e| e.to_string())?;
    let (gamma, k) = default_typical_window(&k2000);
    let mut max_gap: f64 = 0.0;
    for (i, (p, _)) in ust.counts().enumerate() {
        let s = theorem_sum(
            &k2000,
            p,
            gamma,
            k,
            SumMode::MonteCarlo { samples: 100_000, seed: SEED + 100 + i as u64 },
        )
        .map_err(e)?;
        max_gap = max_gap.max((ust.probability(p) - s.value).abs());
    }

    // finite-n trend of the leaf probability under UST(K_n), equal observation budgets
    let mut gaps = Vec::new();
    for n in [500usize, 1000, 2000] {
        let net = gen_complete(n, 1.0).map_err(|e| e.to_string())?;
        let plan = CensusPlan::new(25).trees_per_replica(50_000_000 / (25 * n)).roots_per_tree(n);
        let c = census(TreeSource::Network(&net), SamplerKind::Wilson, 1, plan, SEED + n as u64).map_err(e)?;
        gaps.push((c.probability(&RootedTreePattern::star(1)) - (-1.0f64).exp()).abs());
    }
    let shrinking = gaps.windows(2).all(|w| w[1] < w[0]);

    Ok((
        consistent && max_gap <= 0.02 && shrinking,
        format!(
            "K_20: {compared} patterns, max |exact - mc|/se {worst_z:.2} (bound 3); K_2000 census vs sum max gap {max_gap:.4} (bound 0.02); leaf gap for n=500,1000,2000: {:.2e} {:.2e} {:.2e} (must shrink)",
            gaps[0], gaps[1], gaps[2]
        ),
    ))
}

fn report(index: usize, title: &str, started: Instant, outcome: Outcome) -> bool {
    let secs = started.elapsed().as_secs_f64();
    match outcome {
        Ok((pass, detail)) => {
            println!("criterion {index:>2} [{}] {title}: {detail} ({secs:.0}s)", if pass { "PASS" } else { "FAIL" });
            pass
        }
        Err(msg) => {
            println!("criterion {index:>2} [FAIL] {title}: error: {msg} ({secs:.0}s)");
            false
        }
    }
}

fn main() -> ExitCode {
    // `cargo test -- --list` and filters pass arguments; run everything regardless,
    // but answer a listing request without running.
    if std::env::args().any(|a| a == "--list") {
        println!("acceptance: test");
        return ExitCode::SUCCESS;
    }
    let mut all = true;

    let t = Instant::now();
    let oracle = oracle_checks(5, 5, 1_000_000, SEED).map_err(|e| e.to_string());
    let (o1, o2) = match &oracle {
        Ok(checks) => c1_c2(checks),
        Err(e) => (Err(e.clone()), Err(e.clone())),
    };
    all &= report(1, "sampler laws match enumeration", t, o1);
    all &= report(2, "Kirchhoff marginals and matrix-tree", t, o2);

    let t = Instant::now();
    all &= report(3, "Foster identity in dense mode", t, c3());
    let t = Instant::now();
    all &= report(4, "triangle fixture", t, c4());
    let t = Instant::now();
    all &= report(5, "MST length of K_300", t, c5());
    let t = Instant::now();
    all &= report(6, "small-beta length formula", t, c6());

    let t = Instant::now();
    let ust = gen_complete(2000, 1.0).map_err(|e| e.to_string()).and_then(|net| {
        census(TreeSource::Network(&net), SamplerKind::Wilson, 1, CensusPlan::new(100_000), SEED)
            .map_err(|e| e.to_string())
    });
    let ust_result = |f: &dyn Fn(&LocalCensus) -> Outcome| match &ust {
        Ok(c) => f(c),
        Err(e) => Err(e.clone()),
    };
    all &= report(7, "r=1 law of UST and WST^sqrt(n)", t, ust_result(&c7));
    let t = Instant::now();
    all &= report(8, "agreement with the MST at huge beta", t, c8());
    let t = Instant::now();
    all &= report(9, "property suites", t, c9());
    let t = Instant::now();
    all &= report(10, "tuple-sum consistency and finite-n trend", t, ust_result(&c10));

    if all {
        println!("acceptance: all criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: some criteria fail");
        ExitCode::FAILURE
    }
}
