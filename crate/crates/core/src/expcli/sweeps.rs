use std::time::Instant;

use rayon::prelude::*;

use super::config::ExperimentConfig;
use super::output::SweepRow;
use super::ExpError;
use crate::env::{mu, Environment};
use crate::netcore::ElectricNetwork;
use crate::resist::{edge_marginals, ResistanceSolver};
use crate::sample::{kruskal_min, mix64, RngStream, Sampler, SpanningTree};
use crate::stats::mean_and_standard_error;

/// Apéry's constant, the limit of the expected MST length of `K_n`.
pub const ZETA3: f64 = 1.202_056_903_159_594_3;

/// Seed for the streams of one β point: a function of the master seed and β only,
/// so any row can be recomputed on its own.
pub fn row_seed(seed: u64, beta: f64) -> u64 {
    mix64(seed ^ mix64(beta.to_bits()))
}

/// `Σ_e (c(e) R_eff(e))²`, the expected overlap of two independent trees.
pub fn overlap_exact(solver: &ResistanceSolver) -> Result<f64, ExpError> {
    Ok(solver.all_kirchhoff_probabilities()?.iter().map(|p| p * p).sum())
}

/// `L(T) = Σ_{e∈T} U_e`.
pub fn total_length(tree: &SpanningTree, labels: &[f64]) -> f64 {
    tree.edges().iter().map(|&e| labels[e]).sum()
}

/// `∫_0^1 (k(t) − 1) dt`, where `k(t)` counts the components of the tree
/// edges with label at most `t`. Integrated piece by piece over the sorted labels.
pub fn component_count_integral(tree: &SpanningTree, labels: &[f64]) -> f64 {
    let mut sorted: Vec<f64> = tree.edges().iter().map(|&e| labels[e]).collect();
    sorted.sort_by(f64::total_cmp);
    let m = sorted.len();
    let mut prev = 0.0;
    let mut total = 0.0;
    for (i, &l) in sorted.iter().enumerate() {
        // on (prev, l) exactly m − i tree edges are still missing
        total += (l - prev) * (m - i) as f64;
        prev = l;
    }
    total
}

/// `(n/β)(1 − βe^{−β} − e^{−β})/(1 − e^{−β})`, with its `β → 0` limit `n/2`.
pub fn small_beta_length(n: usize, beta: f64) -> f64 {
    let n = n as f64;
    if beta < 1e-3 {
        let b = beta;
        return n * (0.5 - b / 3.0 + b * b / 8.0) / (1.0 - b / 2.0 + b * b / 6.0);
    }
    let e = (-beta).exp();
    let one_minus = -(-beta).exp_m1();
    n / beta * (one_minus - beta * e) / one_minus
}

fn finish(
    beta: f64,
    replicas: usize,
    seed: u64,
    started: Instant,
    timing: bool,
    result: Result<(f64, f64, Vec<(&'static str, f64)>), ExpError>,
) -> SweepRow {
    match result {
        Ok((estimate, std_error, aux)) => SweepRow {
            beta,
            estimate,
            std_error,
            replicas,
            row_seed: seed,
            failure: None,
            wall_time: timing.then(|| started.elapsed().as_secs_f64()),
            aux,
        },
        Err(e) => SweepRow::failed(beta, replicas, seed, e.to_string()),
    }
}

fn overlap_row(base: &ElectricNetwork, config: &ExperimentConfig, beta: f64) -> SweepRow {
    let started = Instant::now();
    let seed = row_seed(config.seed, beta);
    let n = base.vertex_count();
    let mode = config.solver_for(n);
    // at β = 0 every environment is the unit network
    let replicas = if beta == 0.0 { 1 } else { config.replicas };
    let run = || -> Result<(f64, f64, Vec<(&'static str, f64)>), ExpError> {
        let per: Vec<(f64, f64)> = (0..replicas)
            .into_par_iter()
            .map(|i| {
                let env = Environment::draw(base, beta, &mut RngStream::new(seed, i as u64))?;
                let m = edge_marginals(&env.network(base)?, mode);
                Ok((m.overlap(), m.clamped as f64))
            })
            .collect::<Result<_, ExpError>>()?;
        let values: Vec<f64> = per.iter().map(|p| p.0).collect();
        let clamped: f64 = per.iter().map(|p| p.1).sum();
        let (mean, se) = mean_and_standard_error(&values);
        let se = if replicas == 1 { 0.0 } else { se };
        Ok((
            mean,
            se,
            vec![
                ("overlap_per_n", mean / n as f64),
                ("overlap_per_tree_edge", mean / (n - 1) as f64),
                ("clamped_probabilities", clamped),
            ],
        ))
    };
    finish(beta, replicas, seed, started, config.timing, run())
}

/// Environment-averaged `Σ_e (c R_eff)²` per β. Failing points are flagged
/// and the sweep goes on.
pub fn overlap_sweep(config: &ExperimentConfig) -> Result<Vec<SweepRow>, ExpError> {
    config.validate()?;
    let base = config.graph.build(config.seed)?;
    Ok(config.betas.iter().map(|&b| overlap_row(&base, config, b)).collect())
}

fn length_row(base: &ElectricNetwork, config: &ExperimentConfig, beta: f64) -> SweepRow {
    let started = Instant::now();
    let seed = row_seed(config.seed, beta);
    let n = base.vertex_count();
    let trees = config.trees();
    let run = || -> Result<(f64, f64, Vec<(&'static str, f64)>), ExpError> {
        let per: Vec<(f64, f64)> = (0..config.replicas)
            .into_par_iter()
            .map(|i| {
                let mut env_rng = RngStream::new(seed, 2 * i as u64);
                let mut tree_rng = RngStream::new(seed, 2 * i as u64 + 1);
                let env = Environment::draw(base, beta, &mut env_rng)?;
                let mst = total_length(&kruskal_min(base, env.labels())?, env.labels());
                let sampler = Sampler::new(&env.network(base)?, config.sampler, &mut env_rng);
                let mut sum = 0.0;
                for _ in 0..trees {
                    sum += total_length(&sampler.sample(&mut tree_rng)?, env.labels());
                }
                Ok((sum / trees as f64, mst))
            })
            .collect::<Result<_, ExpError>>()?;
        let wst: Vec<f64> = per.iter().map(|p| p.0).collect();
        let mst: Vec<f64> = per.iter().map(|p| p.1).collect();
        let (mean, se) = mean_and_standard_error(&wst);
        let (mst_mean, mst_se) = mean_and_standard_error(&mst);
        let nf = n as f64;
        let mut aux = vec![
            ("mst_length", mst_mean),
            ("mst_std_error", mst_se),
            ("mu", mu(beta)),
            ("bound_shape", nf * nf.ln() / (beta + nf.ln())),
        ];
        match config.graph.complete_size() {
            Some(_) => {
                aux.push(("zeta3", ZETA3));
                aux.push(("small_beta_formula", small_beta_length(n, beta)));
                aux.push(("reference_curves", 1.0));
            }
            None => {
                aux.push(("zeta3", f64::NAN));
                aux.push(("small_beta_formula", f64::NAN));
                aux.push(("reference_curves", 0.0));
            }
        }
        Ok((mean, se, aux))
    };
    finish(beta, config.replicas, seed, started, config.timing, run())
}

/// Mean `L(WST^β)` per β over environments and `samples` trees per
/// environment, with the MST length of the same labels and, on unit complete
/// graphs, the reference curves.
pub fn length_sweep(config: &ExperimentConfig) -> Result<Vec<SweepRow>, ExpError> {
    config.validate()?;
    let base = config.graph.build(config.seed)?;
    Ok(config.betas.iter().map(|&b| length_row(&base, config, b)).collect())
}
