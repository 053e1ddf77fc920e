//! Self-checks of the numerical identities, the samplers against exact
//! enumeration, the spatial Markov property, negative association and the
//! balance conditions. Each check reports a measured value, the bound it was
//! held to and whether it passed.

use std::collections::{BTreeMap, HashMap};
use std::io::Write;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::config::OutputFormat;
use super::output::csv_escape;
use super::sweeps::{component_count_integral, total_length};
use super::ExpError;
use crate::env::Environment;
use crate::netcore::{
    balance_report, connected_graphs_up_to_isomorphism, gen_complete, gen_glued_triangle_chain,
    gen_random_connected, gen_regular_plus_pendants, ElectricNetwork,
};
use crate::resist::{nash_williams_bound, partition_function_log, ResistanceSolver, SolverMode};
use crate::sample::{
    condition_network, conditioned_law, conditioned_sample, edge_mask, enumerate_spanning_trees, kruskal_min,
    max_st, RngStream, Sampler, SamplerKind, SpanningTree,
};
use crate::stats::{binomial_sigma, tv_distance};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Identities,
    Oracle,
    Markov,
    Association,
    Balance,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Identities => "identities",
            Suite::Oracle => "oracle",
            Suite::Markov => "markov",
            Suite::Association => "association",
            Suite::Balance => "balance",
        }
    }
}

impl FromStr for Suite {
    type Err = ExpError;

    fn from_str(s: &str) -> Result<Self, ExpError> {
        Ok(match s {
            "identities" => Suite::Identities,
            "oracle" => Suite::Oracle,
            "markov" => Suite::Markov,
            "association" => Suite::Association,
            "balance" => Suite::Balance,
            other => {
                return Err(ExpError::Config(format!(
                    "unknown suite `{other}` (identities, oracle, markov, association, balance)"
                )))
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub subject: String,
    pub measured: f64,
    pub bound: f64,
    pub pass: bool,
}

impl Check {
    /// Passes when `measured ≤ bound`.
    fn at_most(name: &str, subject: impl Into<String>, measured: f64, bound: f64) -> Self {
        Check {
            name: name.into(),
            subject: subject.into(),
            measured,
            bound,
            pass: measured <= bound,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub suite: &'static str,
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    /// Checks with the given name.
    pub fn named<'a>(&'a self, name: &'a str) -> impl Iterator<Item = &'a Check> {
        self.checks.iter().filter(move |c| c.name == name)
    }

    pub fn write<W: Write>(&self, mut out: W, header: &[String], format: OutputFormat) -> Result<(), ExpError> {
        match format {
            OutputFormat::Csv => {
                for l in header {
                    writeln!(out, "{l}")?;
                }
                writeln!(out, "suite,check,subject,measured,bound,pass")?;
                for c in &self.checks {
                    writeln!(
                        out,
                        "{},{},{},{},{},{}",
                        self.suite,
                        c.name,
                        csv_escape(&c.subject),
                        c.measured,
                        c.bound,
                        c.pass
                    )?;
                }
            }
            OutputFormat::Json => {
                let doc = serde_json::json!({"header": header, "suite": self.suite, "checks": self.checks});
                serde_json::to_writer_pretty(&mut out, &doc)?;
                writeln!(out)?;
            }
        }
        Ok(())
    }
}

/// Runs a suite at its default size. `samples` overrides the Monte Carlo
/// sample count of the statistical suites.
pub fn verify(suite: Suite, seed: u64, samples: Option<usize>) -> Result<VerifyReport, ExpError> {
    let checks = match suite {
        Suite::Identities => {
            let mut c = identity_checks(50, seed)?;
            c.extend(length_identity_checks(10_000, seed)?);
            c.extend(max_st_checks(1_000, seed)?);
            c
        }
        Suite::Oracle => oracle_checks(5, 5, samples.unwrap_or(1_000_000), seed)?,
        Suite::Markov => {
            let mut c = markov_exact_checks(5, seed)?;
            c.extend(markov_rejection_checks(samples.unwrap_or(100_000), seed)?);
            c
        }
        Suite::Association => association_checks(4, 3, seed)?,
        Suite::Balance => balance_checks(seed)?,
    };
    Ok(VerifyReport {
        suite: suite.name(),
        checks,
    })
}

fn random_network(rng: &mut RngStream, n_lo: usize, n_hi: usize) -> Result<ElectricNetwork, ExpError> {
    let n = rng.gen_range(n_lo..=n_hi);
    let extra = rng.gen_range(0..=2 * n);
    Ok(gen_random_connected(n, extra, 0.1, 10.0, rng)?)
}

fn all_pair_resistances(solver: &ResistanceSolver) -> Result<Vec<Vec<f64>>, ExpError> {
    let n = solver.network().vertex_count();
    let mut r = vec![vec![0.0; n]; n];
    for a in 0..n {
        for b in a + 1..n {
            let x = solver.effective_resistance(a, b)?;
            r[a][b] = x;
            r[b][a] = x;
        }
    }
    Ok(r)
}

/// Foster's identity, the triangle inequality for `R_eff`, Rayleigh
/// monotonicity and the Nash-Williams edge bound on random networks.
pub fn identity_checks(networks: usize, seed: u64) -> Result<Vec<Check>, ExpError> {
    let per: Vec<Vec<Check>> = (0..networks)
        .into_par_iter()
        .map(|i| {
            let mut rng = RngStream::new(seed, i as u64);
            let net = random_network(&mut rng, 4, 40)?;
            let n = net.vertex_count();
            let subject = format!("network {i} (n={n}, m={})", net.edge_count());
            let solver = ResistanceSolver::new(&net, SolverMode::Dense)?;
            let mut out = Vec::new();

            let foster = solver.foster_sum()?;
            out.push(Check::at_most("foster", &subject, (foster - (n - 1) as f64).abs() / (n - 1) as f64, 1e-8));

            let r = all_pair_resistances(&solver)?;
            let scale = r.iter().flatten().copied().fold(0.0, f64::max);
            let mut worst: f64 = f64::NEG_INFINITY;
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        worst = worst.max(r[a][c] - r[a][b] - r[b][c]);
                    }
                }
            }
            out.push(Check::at_most("metric", &subject, worst, 1e-10 * scale));

            let e = rng.gen_range(0..net.edge_count());
            let factor = 1.0 + 3.0 * rng.gen::<f64>();
            let edges: Vec<(usize, usize, f64)> = (0..net.edge_count())
                .map(|f| {
                    let (u, v) = net.endpoints(f);
                    let c = net.conductance(f);
                    (u, v, if f == e { c * factor } else { c })
                })
                .collect();
            let stiffer = ElectricNetwork::new(n, &edges)?;
            let r2 = all_pair_resistances(&ResistanceSolver::new(&stiffer, SolverMode::Dense)?)?;
            let mut rise: f64 = f64::NEG_INFINITY;
            for a in 0..n {
                for b in a + 1..n {
                    rise = rise.max(r2[a][b] - r[a][b]);
                }
            }
            out.push(Check::at_most("rayleigh", &subject, rise, 1e-10 * scale));

            let resistances = solver.all_edge_resistances()?;
            let mut gap: f64 = f64::NEG_INFINITY;
            for f in 0..net.edge_count() {
                let (u, v) = net.endpoints(f);
                gap = gap.max(nash_williams_bound(&net, u, v)?.value() - resistances[f]);
            }
            out.push(Check::at_most("nash_williams", &subject, gap, 1e-10));
            Ok(out)
        })
        .collect::<Result<_, ExpError>>()?;
    Ok(per.into_iter().flatten().collect())
}

/// `|L(T) − ∫(k(t) − 1)dt|` over random trees and labels, as one check.
pub fn length_identity_checks(pairs: usize, seed: u64) -> Result<Vec<Check>, ExpError> {
    let worst = (0..pairs)
        .into_par_iter()
        .map(|i| {
            let mut rng = RngStream::new(seed ^ 0x5eed_0001, i as u64);
            let n = rng.gen_range(2..=60);
            let net = gen_random_connected(n, 0, 1.0, 1.0, &mut rng)?;
            let tree = SpanningTree::new(&net, (0..net.edge_count()).collect())?;
            let labels: Vec<f64> = (0..net.edge_count()).map(|_| rng.gen()).collect();
            Ok((total_length(&tree, &labels) - component_count_integral(&tree, &labels)).abs())
        })
        .collect::<Result<Vec<f64>, ExpError>>()?
        .into_iter()
        .fold(0.0, f64::max);
    Ok(vec![Check::at_most("length_integral", format!("{pairs} random trees"), worst, 1e-12)])
}

/// The maximum spanning tree of `exp(−β U)` is the minimum spanning tree of `U`.
pub fn max_st_checks(environments: usize, seed: u64) -> Result<Vec<Check>, ExpError> {
    let mismatches: usize = (0..environments)
        .into_par_iter()
        .map(|i| {
            let mut rng = RngStream::new(seed ^ 0x5eed_0002, i as u64);
            let base = random_network(&mut rng, 3, 30)?;
            let beta = 50.0 * rng.gen::<f64>();
            let env = Environment::draw(&base, beta.max(1e-3), &mut rng)?;
            let a = max_st(&env.network(&base)?)?;
            let b = kruskal_min(&base, env.labels())?;
            Ok(usize::from(a != b))
        })
        .collect::<Result<Vec<usize>, ExpError>>()?
        .into_iter()
        .sum();
    Ok(vec![Check::at_most(
        "max_st_equals_mst",
        format!("{environments} random environments"),
        mismatches as f64,
        0.0,
    )])
}

fn random_conductances(edges: &[(usize, usize)], rng: &mut RngStream) -> Vec<(usize, usize, f64)> {
    edges.iter().map(|&(u, v)| (u, v, rng.gen_range(0.1..=10.0))).collect()
}

fn exact_law(net: &ElectricNetwork) -> Result<BTreeMap<u128, f64>, ExpError> {
    let trees = enumerate_spanning_trees(net)?;
    let z: f64 = trees.iter().map(|t| t.1).sum();
    Ok(trees
        .into_iter()
        .map(|(t, w)| (t.edge_mask().expect("small network"), w / z))
        .collect())
}

fn empirical(counts: HashMap<u128, u64>, total: u64) -> BTreeMap<u128, f64> {
    counts
        .into_iter()
        .map(|(k, c)| (k, c as f64 / total as f64))
        .collect()
}

/// Sampler laws against enumeration on every connected graph with at most
/// `max_n` vertices and `assignments` random conductance draws each: TV for
/// Wilson and Aldous–Broder, the largest per-edge `|P̂ − cR|/σ` and the
/// matrix-tree partition function.
pub fn oracle_checks(max_n: usize, assignments: usize, samples: usize, seed: u64) -> Result<Vec<Check>, ExpError> {
    let mut cases = Vec::new();
    for n in 2..=max_n {
        for (g, edges) in connected_graphs_up_to_isomorphism(n).into_iter().enumerate() {
            for a in 0..assignments {
                cases.push((n, g, a, edges.clone()));
            }
        }
    }
    let per: Vec<Vec<Check>> = cases
        .into_par_iter()
        .enumerate()
        .map(|(idx, (n, g, a, edges))| {
            let mut rng = RngStream::new(seed, 4 * idx as u64);
            let net = ElectricNetwork::new(n, &random_conductances(&edges, &mut rng))?;
            let subject = format!("n={n} graph={g} assignment={a}");
            let law = exact_law(&net)?;
            let mut out = Vec::new();

            let z: f64 = enumerate_spanning_trees(&net)?.iter().map(|t| t.1).sum();
            let z_det = partition_function_log(&net)?.exp();
            out.push(Check::at_most("matrix_tree", &subject, (z_det - z).abs() / z, 1e-9));

            for (k, kind) in [SamplerKind::Wilson, SamplerKind::AldousBroder].into_iter().enumerate() {
                let mut srng = RngStream::new(seed, 4 * idx as u64 + 1 + k as u64);
                let sampler = Sampler::new(&net, kind, &mut srng);
                let mut counts: HashMap<u128, u64> = HashMap::new();
                let mut edge_hits = vec![0u64; net.edge_count()];
                let mut buf = Vec::with_capacity(n);
                for _ in 0..samples {
                    buf.clear();
                    sampler.sample_edges(&mut srng, &mut buf)?;
                    for &e in &buf {
                        edge_hits[e] += 1;
                    }
                    *counts.entry(edge_mask(&buf).expect("small network")).or_insert(0) += 1;
                }
                let name = if k == 0 { "tv_wilson" } else { "tv_aldous_broder" };
                let tv = tv_distance(&empirical(counts, samples as u64), &law);
                out.push(Check::at_most(name, &subject, tv, 0.01));
                if kind == SamplerKind::Wilson {
                    let solver = ResistanceSolver::new(&net, SolverMode::Dense)?;
                    let p = solver.all_kirchhoff_probabilities()?;
                    let mut worst: f64 = 0.0;
                    for e in 0..net.edge_count() {
                        let hat = edge_hits[e] as f64 / samples as f64;
                        let sigma = binomial_sigma(p[e], samples as u64);
                        let z = if sigma > 0.0 {
                            (hat - p[e]).abs() / sigma
                        } else if (hat - p[e]).abs() < 1e-12 {
                            0.0
                        } else {
                            f64::INFINITY
                        };
                        worst = worst.max(z);
                    }
                    out.push(Check::at_most("kirchhoff_sigmas", &subject, worst, 3.0));
                }
            }
            Ok(out)
        })
        .collect::<Result<_, ExpError>>()?;
    Ok(per.into_iter().flatten().collect())
}

fn subsets_up_to_two(items: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for (i, &a) in items.iter().enumerate() {
        out.push(vec![a]);
        for &b in &items[i + 1..] {
            out.push(vec![a, b]);
        }
    }
    out
}

/// Conditional laws given `A ⊂ T` and `B ∩ T = ∅` (|A|, |B| ≤ 2) computed on
/// the contracted-and-deleted network, against filtering the full enumeration.
pub fn markov_exact_checks(max_n: usize, seed: u64) -> Result<Vec<Check>, ExpError> {
    let mut cases = Vec::new();
    for n in 2..=max_n {
        for (g, edges) in connected_graphs_up_to_isomorphism(n).into_iter().enumerate() {
            cases.push((n, g, edges));
        }
    }
    let per: Vec<Check> = cases
        .into_par_iter()
        .enumerate()
        .map(|(idx, (n, g, edges))| {
            let mut rng = RngStream::new(seed ^ 0x3a3a, idx as u64);
            let net = ElectricNetwork::new(n, &random_conductances(&edges, &mut rng))?;
            let law = exact_law(&net)?;
            let all: Vec<usize> = (0..net.edge_count()).collect();
            let mut worst: f64 = 0.0;
            let mut constraints = 0usize;
            for a in subsets_up_to_two(&all) {
                let rest: Vec<usize> = all.iter().copied().filter(|e| !a.contains(e)).collect();
                for b in subsets_up_to_two(&rest) {
                    let (am, bm) = (mask_of(&a), mask_of(&b));
                    let mass: f64 = law.iter().filter(|(&t, _)| t & am == am && t & bm == 0).map(|(_, p)| p).sum();
                    if mass == 0.0 {
                        // infeasible constraints must be rejected
                        if condition_network(&net, &a, &b).is_ok() {
                            worst = f64::INFINITY;
                        }
                        continue;
                    }
                    constraints += 1;
                    let filtered: BTreeMap<u128, f64> = law
                        .iter()
                        .filter(|(&t, _)| t & am == am && t & bm == 0)
                        .map(|(&t, &p)| (t, p / mass))
                        .collect();
                    let cond: BTreeMap<u128, f64> = conditioned_law(&net, &a, &b)?
                        .into_iter()
                        .map(|(t, p)| (t.edge_mask().expect("small network"), p))
                        .collect();
                    worst = worst.max(tv_distance(&cond, &filtered));
                }
            }
            Ok(Check::at_most(
                "markov_exact",
                format!("n={n} graph={g} constraints={constraints}"),
                worst,
                1e-12,
            ))
        })
        .collect::<Result<_, ExpError>>()?;
    Ok(per)
}

fn mask_of(edges: &[usize]) -> u128 {
    edge_mask(edges).expect("small network")
}

/// On an 8-vertex network: the conditioned sampler against rejection
/// sampling from the unconditioned law, `samples` accepted trees each.
pub fn markov_rejection_checks(samples: usize, seed: u64) -> Result<Vec<Check>, ExpError> {
    let mut rng = RngStream::new(seed ^ 0x3b3b, 0);
    let net = gen_random_connected(8, 3, 0.1, 10.0, &mut rng)?;
    let mst = max_st(&net)?;
    let a = vec![mst.edges()[0]];
    // a non-bridge edge outside the constraint set
    let b: Vec<usize> = (0..net.edge_count())
        .filter(|&e| e != a[0] && !mst.contains(e))
        .take(1)
        .collect();
    let law: BTreeMap<u128, f64> = conditioned_law(&net, &a, &b)?
        .into_iter()
        .map(|(t, p)| (t.edge_mask().expect("small network"), p))
        .collect();
    let (am, bm) = (mask_of(&a), mask_of(&b));

    let mut cond_counts = HashMap::new();
    let mut crng = RngStream::new(seed ^ 0x3b3b, 1);
    for _ in 0..samples {
        let t = conditioned_sample(&net, &a, &b, &mut crng)?;
        *cond_counts.entry(t.edge_mask().expect("small network")).or_insert(0u64) += 1;
    }
    let mut rej_counts = HashMap::new();
    let mut rrng = RngStream::new(seed ^ 0x3b3b, 2);
    let sampler = Sampler::new(&net, SamplerKind::Wilson, &mut rrng);
    let mut buf = Vec::new();
    let mut accepted = 0;
    while accepted < samples {
        buf.clear();
        sampler.sample_edges(&mut rrng, &mut buf)?;
        let m = mask_of(&buf);
        if m & am == am && m & bm == 0 {
            *rej_counts.entry(m).or_insert(0u64) += 1;
            accepted += 1;
        }
    }
    let cond = empirical(cond_counts, samples as u64);
    let rej = empirical(rej_counts, samples as u64);
    let subject = format!("n=8 m={} A={a:?} B={b:?} samples={samples}", net.edge_count());
    Ok(vec![
        Check::at_most("markov_rejection_tv", &subject, tv_distance(&cond, &rej), 0.02),
        Check::at_most("markov_conditioned_vs_exact", &subject, tv_distance(&cond, &law), 0.02),
        Check::at_most("markov_rejection_vs_exact", &subject, tv_distance(&rej, &law), 0.02),
    ])
}

/// Negative association on every connected graph with at most `max_n`
/// vertices (unit conductances plus `assignments` random draws): for disjoint
/// edge sets `S1`, `S2` of size ≤ 2 and the increasing events "all of S" and
/// "any of S", `P(E1 ∩ E2) ≤ P(E1) P(E2)`.
pub fn association_checks(max_n: usize, assignments: usize, seed: u64) -> Result<Vec<Check>, ExpError> {
    let mut out = Vec::new();
    for n in 2..=max_n {
        for (g, edges) in connected_graphs_up_to_isomorphism(n).into_iter().enumerate() {
            for a in 0..=assignments {
                let weighted: Vec<(usize, usize, f64)> = if a == 0 {
                    edges.iter().map(|&(u, v)| (u, v, 1.0)).collect()
                } else {
                    let mut rng = RngStream::new(seed ^ 0xa550, (1000 * n + 10 * g + a) as u64);
                    random_conductances(&edges, &mut rng)
                };
                let net = ElectricNetwork::new(n, &weighted)?;
                let law = exact_law(&net)?;
                let all: Vec<usize> = (0..net.edge_count()).collect();
                let sets: Vec<Vec<usize>> = subsets_up_to_two(&all).into_iter().filter(|s| !s.is_empty()).collect();
                let prob = |event: &dyn Fn(u128) -> bool| -> f64 {
                    law.iter().filter(|(&t, _)| event(t)).map(|(_, p)| p).sum()
                };
                let mut worst: f64 = f64::NEG_INFINITY;
                let mut violations = 0;
                for s1 in &sets {
                    for s2 in &sets {
                        if s1.iter().any(|e| s2.contains(e)) {
                            continue;
                        }
                        let (m1, m2) = (mask_of(s1), mask_of(s2));
                        let kinds: [(&dyn Fn(u128, u128) -> bool, &str); 2] =
                            [(&|t, m| t & m == m, "all"), (&|t, m| t & m != 0, "any")];
                        for (f1, _) in &kinds {
                            for (f2, _) in &kinds {
                                let joint = prob(&|t| f1(t, m1) && f2(t, m2));
                                let excess = joint - prob(&|t| f1(t, m1)) * prob(&|t| f2(t, m2));
                                worst = worst.max(excess);
                                if excess > 1e-12 {
                                    violations += 1;
                                }
                            }
                        }
                    }
                }
                let mut c = Check::at_most(
                    "negative_association",
                    format!("n={n} graph={g} assignment={a}"),
                    worst.max(0.0),
                    1e-12,
                );
                c.pass = violations == 0;
                out.push(c);
            }
        }
    }
    Ok(out)
}

fn expect_flags(name: &str, subject: &str, observed: [bool; 3], expected: [bool; 3]) -> Check {
    let mismatches = observed.iter().zip(&expected).filter(|(a, b)| a != b).count();
    Check {
        name: name.into(),
        subject: format!("{subject} observed={observed:?} expected={expected:?}"),
        measured: mismatches as f64,
        bound: 0.0,
        pass: mismatches == 0,
    }
}

/// The balance conditions on the generator families, against their known
/// outcomes, and monotonicity in δ on random networks.
pub fn balance_checks(seed: u64) -> Result<Vec<Check>, ExpError> {
    let mut out = Vec::new();
    let k100 = gen_complete(100, 1.0)?;
    out.push(expect_flags(
        "balance",
        "K_100 gamma=99 K=2 delta=0.1",
        balance_report(&k100, 99.0, 2.0, 0.1)?.passes,
        [true, true, true],
    ));
    out.push(expect_flags(
        "balance",
        "K_100 gamma=99 K=2 delta=0.005",
        balance_report(&k100, 99.0, 2.0, 0.005)?.passes,
        [true, true, false],
    ));
    let chain = gen_glued_triangle_chain(50)?;
    out.push(expect_flags(
        "balance",
        "triangle-chain:50 gamma=2 K=2 delta=0.1",
        balance_report(&chain, 2.0, 2.0, 0.1)?.passes,
        [true, true, false],
    ));
    let mut rng = RngStream::new(seed ^ 0xba1, 0);
    let pendants = gen_regular_plus_pendants(&gen_complete(50, 1.0)?, 5, 1, &mut rng)?;
    out.push(expect_flags(
        "balance",
        "K_50 plus 5 pendants gamma=49 K=2 delta=0.2",
        balance_report(&pendants, 49.0, 2.0, 0.2)?.passes,
        [true, true, true],
    ));
    let mut broken = 0;
    for i in 0..50 {
        let mut rng = RngStream::new(seed ^ 0xba1, 1 + i);
        let net = random_network(&mut rng, 5, 40)?;
        let gamma = net.strengths().iter().sum::<f64>() / net.vertex_count() as f64;
        let mut prev = [false; 3];
        for step in 1..100 {
            let delta = step as f64 / 100.0;
            let now = balance_report(&net, gamma, 2.0, delta)?.passes;
            if prev.iter().zip(&now).any(|(&p, &q)| p && !q) {
                broken += 1;
            }
            prev = now;
        }
    }
    out.push(Check::at_most("balance_monotone_in_delta", "50 random networks", broken as f64, 0.0));
    Ok(out)
}
