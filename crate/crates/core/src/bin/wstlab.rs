use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use wstlab::env::Environment;
use wstlab::expcli::{
    census_compare, header_lines, length_sweep, overlap_sweep, verify, write_comparisons, write_sweep, ExpError,
    ExperimentConfig, Suite,
};
use wstlab::netcore::{write_network, ElectricNetwork};
use wstlab::resist::ResistanceSolver;
use wstlab::sample::{RngStream, Sampler};

#[derive(Parser)]
#[command(name = "wstlab", version, about = "Weighted spanning tree experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Subcommand)]
enum Command {
    /// Write the network file of a graph spec
    Gen,
    /// Sample one tree (of the environment at the first beta, if one is given)
    Sample,
    /// Per-edge conductance, effective resistance and Kirchhoff probability
    Edges,
    /// Environment-averaged expected overlap of two trees, per beta
    OverlapSweep,
    /// Expected total label length of the tree, per beta
    LengthSweep,
    /// r-ball censuses of WST and MST against the limit law, per beta
    Census,
    /// Run a verification suite: identities, oracle, markov, association, balance
    Verify { suite: String },
}

#[derive(Args)]
struct Opts {
    /// key=value file; flags override its settings
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// complete:N[:c], path:N, triangle-chain:N, expander:D:C:L, pendants:N:M:F, random:N:E, file:PATH
    #[arg(long, global = true)]
    graph: Option<String>,
    /// Comma list or a:b:steps[:log]
    #[arg(long, global = true)]
    beta: Option<String>,
    #[arg(long, global = true)]
    replicas: Option<String>,
    #[arg(long, global = true)]
    samples: Option<String>,
    #[arg(long, global = true)]
    radius: Option<String>,
    #[arg(long, global = true)]
    seed: Option<String>,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// dense or iterative (default: by size)
    #[arg(long, global = true)]
    solver: Option<String>,
    /// wilson, aldous-broder, sequential or auto
    #[arg(long, global = true)]
    sampler: Option<String>,
    /// csv or json
    #[arg(long, global = true)]
    format: Option<String>,
    #[arg(long, global = true)]
    roots_per_tree: Option<String>,
    #[arg(long, global = true)]
    theorem_samples: Option<String>,
    /// Add a wall-time column (breaks byte-identical reruns)
    #[arg(long, global = true)]
    timing: bool,
}

impl Opts {
    /// Defaults, then the config file, then flags. Also reports whether a β was set.
    fn resolve(&self) -> Result<(ExperimentConfig, bool), ExpError> {
        let mut config = ExperimentConfig::default();
        let mut beta_given = self.beta.is_some();
        if let Some(path) = &self.config {
            let text = std::fs::read_to_string(path)?;
            config.apply_file_contents(&text)?;
            beta_given |= text
                .lines()
                .any(|l| l.split('=').next().is_some_and(|k| k.trim() == "beta"));
        }
        let flags = [
            ("graph", &self.graph),
            ("beta", &self.beta),
            ("replicas", &self.replicas),
            ("samples", &self.samples),
            ("radius", &self.radius),
            ("seed", &self.seed),
            ("solver", &self.solver),
            ("sampler", &self.sampler),
            ("format", &self.format),
            ("roots_per_tree", &self.roots_per_tree),
            ("theorem_samples", &self.theorem_samples),
        ];
        for (key, value) in flags {
            if let Some(v) = value {
                config.set(key, v)?;
            }
        }
        if let Some(out) = &self.out {
            config.out = Some(out.clone());
        }
        config.timing |= self.timing;
        config.validate()?;
        Ok((config, beta_given))
    }
}

fn output(config: &ExperimentConfig) -> Result<Box<dyn Write>, ExpError> {
    Ok(match &config.out {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// The base network, or its environment at the first β when one was given.
fn working_network(config: &ExperimentConfig, beta_given: bool) -> Result<(ElectricNetwork, Option<Environment>), ExpError> {
    let base = config.graph.build(config.seed)?;
    if !beta_given {
        return Ok((base, None));
    }
    let env = Environment::draw(&base, config.betas[0], &mut RngStream::new(config.seed, 0))?;
    Ok((env.network(&base)?, Some(env)))
}

fn run(cli: Cli) -> Result<bool, ExpError> {
    let (config, beta_given) = cli.opts.resolve()?;
    let mut out = output(&config)?;
    let mut all_pass = true;
    match cli.command {
        Command::Gen => {
            let net = config.graph.build(config.seed)?;
            write_network(&net, &mut out)?;
        }
        Command::Sample => {
            let (net, env) = working_network(&config, beta_given)?;
            let mut rng = RngStream::new(config.seed, 1);
            let sampler = Sampler::new(&net, config.sampler, &mut RngStream::new(config.seed, 2));
            let tree = sampler.sample(&mut rng)?;
            for l in header_lines("sample", &config) {
                writeln!(out, "{l}")?;
            }
            writeln!(out, "# sampler={:?} beta={}", sampler.kind(), env.map_or("none".into(), |e| e.beta().to_string()))?;
            for &e in tree.edges() {
                let (u, v) = net.endpoints(e);
                writeln!(out, "{u} {v}")?;
            }
        }
        Command::Edges => {
            let (net, _) = working_network(&config, beta_given)?;
            let solver = ResistanceSolver::new(&net, config.solver_for(net.vertex_count()))?;
            let r = solver.all_edge_resistances()?;
            let p = solver.all_kirchhoff_probabilities()?;
            for l in header_lines("edges", &config) {
                writeln!(out, "{l}")?;
            }
            writeln!(out, "# foster_sum={} n_minus_1={}", solver.foster_sum()?, net.vertex_count() - 1)?;
            writeln!(out, "u,v,c,reff,kirchhoff_p")?;
            for e in 0..net.edge_count() {
                let (u, v) = net.endpoints(e);
                writeln!(out, "{u},{v},{},{},{}", net.conductance(e), r[e], p[e])?;
            }
        }
        Command::OverlapSweep => {
            let rows = overlap_sweep(&config)?;
            all_pass = rows.iter().all(|r| r.failure.is_none());
            write_sweep(&mut out, "overlap-sweep", &config, &rows, config.format)?;
        }
        Command::LengthSweep => {
            let rows = length_sweep(&config)?;
            all_pass = rows.iter().all(|r| r.failure.is_none());
            write_sweep(&mut out, "length-sweep", &config, &rows, config.format)?;
        }
        Command::Census => {
            let rows = census_compare(&config)?;
            for r in &rows {
                eprintln!(
                    "beta={} observations={} tv_reference={:.4} tv_mst={:.4}",
                    r.beta,
                    r.wst.samples(),
                    r.tv_reference,
                    r.tv_mst
                );
            }
            write_comparisons(&mut out, &config, &rows, config.format)?;
        }
        Command::Verify { suite } => {
            let suite: Suite = suite.parse()?;
            let report = verify(suite, config.seed, config.samples)?;
            all_pass = report.all_pass();
            let header = header_lines(&format!("verify {}", suite.name()), &config);
            report.write(&mut out, &header, config.format)?;
            let failed = report.failures().count();
            eprintln!("{}: {} checks, {failed} failed", suite.name(), report.checks.len());
        }
    }
    out.flush()?;
    Ok(all_pass)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
