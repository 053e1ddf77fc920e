use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use sha2::{Digest, Sha256};

use super::ExpError;
use crate::netcore::{
    gen_complete, gen_expander_chain_with_leaves, gen_glued_triangle_chain, gen_path, gen_random_connected,
    gen_regular_plus_pendants, read_network, ElectricNetwork,
};
use crate::resist::SolverMode;
use crate::sample::{RngStream, SamplerKind};

/// Stream reserved for randomized graph generators.
const GRAPH_STREAM: u64 = u64::MAX - 1;

/// A network description: a generator with parameters, or a file.
#[derive(Debug, Clone, PartialEq)]
pub enum GraphSpec {
    /// `complete:N[:c]`
    Complete { n: usize, c: f64 },
    /// `path:N`, unit conductances
    Path { n: usize },
    /// `triangle-chain:N`
    TriangleChain { n: usize },
    /// `expander:D:COPIES:LEAVES`
    Expander { d: usize, copies: usize, leaves: usize },
    /// `pendants:N:M:F`: `K_N` plus `M` vertices with `F` random edges each
    Pendants { n: usize, m: usize, f: usize },
    /// `random:N:EXTRA`: random tree plus extra edges, conductances in `[0.1, 10]`
    Random { n: usize, extra: usize },
    /// `file:PATH` (or a bare path to an existing file)
    File(PathBuf),
}

fn int(s: &str, what: &str) -> Result<usize, ExpError> {
    s.parse()
        .map_err(|_| ExpError::Config(format!("bad {what} `{s}` in graph spec")))
}

impl FromStr for GraphSpec {
    type Err = ExpError;

    fn from_str(s: &str) -> Result<Self, ExpError> {
        let parts: Vec<&str> = s.split(':').collect();
        let arity = |k: usize| {
            if parts.len() == k + 1 {
                Ok(())
            } else {
                Err(ExpError::Config(format!("`{}` takes {k} parameters: `{s}`", parts[0])))
            }
        };
        Ok(match parts[0] {
            "complete" => {
                if parts.len() != 2 && parts.len() != 3 {
                    return Err(ExpError::Config(format!("expected complete:N[:c], got `{s}`")));
                }
                let c = match parts.get(2) {
                    Some(c) => c.parse().map_err(|_| ExpError::Config(format!("bad conductance in `{s}`")))?,
                    None => 1.0,
                };
                GraphSpec::Complete { n: int(parts[1], "n")?, c }
            }
            "path" => {
                arity(1)?;
                GraphSpec::Path { n: int(parts[1], "n")? }
            }
            "triangle-chain" => {
                arity(1)?;
                GraphSpec::TriangleChain { n: int(parts[1], "n")? }
            }
            "expander" => {
                arity(3)?;
                GraphSpec::Expander {
                    d: int(parts[1], "d")?,
                    copies: int(parts[2], "copies")?,
                    leaves: int(parts[3], "leaves")?,
                }
            }
            "pendants" => {
                arity(3)?;
                GraphSpec::Pendants {
                    n: int(parts[1], "n")?,
                    m: int(parts[2], "m")?,
                    f: int(parts[3], "f")?,
                }
            }
            "random" => {
                arity(2)?;
                GraphSpec::Random {
                    n: int(parts[1], "n")?,
                    extra: int(parts[2], "extra")?,
                }
            }
            "file" => GraphSpec::File(PathBuf::from(&s[5..])),
            _ if Path::new(s).is_file() => GraphSpec::File(PathBuf::from(s)),
            other => return Err(ExpError::Config(format!("unknown graph generator `{other}`"))),
        })
    }
}

impl fmt::Display for GraphSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphSpec::Complete { n, c } if *c == 1.0 => write!(f, "complete:{n}"),
            GraphSpec::Complete { n, c } => write!(f, "complete:{n}:{c}"),
            GraphSpec::Path { n } => write!(f, "path:{n}"),
            GraphSpec::TriangleChain { n } => write!(f, "triangle-chain:{n}"),
            GraphSpec::Expander { d, copies, leaves } => write!(f, "expander:{d}:{copies}:{leaves}"),
            GraphSpec::Pendants { n, m, f: k } => write!(f, "pendants:{n}:{m}:{k}"),
            GraphSpec::Random { n, extra } => write!(f, "random:{n}:{extra}"),
            GraphSpec::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

impl GraphSpec {
    /// Builds the network; randomized generators draw from `seed`.
    pub fn build(&self, seed: u64) -> Result<ElectricNetwork, ExpError> {
        let mut rng = RngStream::new(seed, GRAPH_STREAM);
        Ok(match *self {
            GraphSpec::Complete { n, c } => gen_complete(n, c)?,
            GraphSpec::Path { n } => {
                if n < 2 {
                    return Err(ExpError::Config("path needs at least 2 vertices".into()));
                }
                gen_path(&vec![1.0; n - 1])?
            }
            GraphSpec::TriangleChain { n } => gen_glued_triangle_chain(n)?,
            GraphSpec::Expander { d, copies, leaves } => gen_expander_chain_with_leaves(d, copies, leaves)?,
            GraphSpec::Pendants { n, m, f } => gen_regular_plus_pendants(&gen_complete(n, 1.0)?, m, f, &mut rng)?,
            GraphSpec::Random { n, extra } => gen_random_connected(n, extra, 0.1, 10.0, &mut rng)?,
            GraphSpec::File(ref p) => read_network(std::io::BufReader::new(std::fs::File::open(p)?))?,
        })
    }

    /// The complete graph is the setting of the length reference curves.
    pub fn complete_size(&self) -> Option<usize> {
        match *self {
            GraphSpec::Complete { n, c } if c == 1.0 => Some(n),
            _ => None,
        }
    }
}

/// Parses `b1,b2,...` or `a:b:steps[:log|:lin]` into a sorted, deduplicated grid.
pub fn parse_beta_grid(s: &str) -> Result<Vec<f64>, ExpError> {
    let bad = |m: &str| ExpError::Config(format!("beta grid `{s}`: {m}"));
    let mut grid: Vec<f64> = if s.contains(':') {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() < 3 || parts.len() > 4 {
            return Err(bad("expected a:b:steps[:log]"));
        }
        let a: f64 = parts[0].parse().map_err(|_| bad("bad start"))?;
        let b: f64 = parts[1].parse().map_err(|_| bad("bad end"))?;
        let steps: usize = parts[2].parse().map_err(|_| bad("bad step count"))?;
        let log = match parts.get(3) {
            None | Some(&"lin") => false,
            Some(&"log") => true,
            Some(_) => return Err(bad("spacing must be `log` or `lin`")),
        };
        if steps == 0 {
            return Err(bad("need at least one step"));
        }
        if log && !(a > 0.0 && b > 0.0) {
            return Err(bad("log spacing needs positive endpoints"));
        }
        (0..steps)
            .map(|i| {
                let x = if steps == 1 { 0.0 } else { i as f64 / (steps - 1) as f64 };
                if log {
                    (a.ln() + x * (b.ln() - a.ln())).exp()
                } else {
                    a + x * (b - a)
                }
            })
            .collect()
    } else {
        s.split(',')
            .map(|x| x.trim().parse::<f64>().map_err(|_| bad(&format!("bad value `{x}`"))))
            .collect::<Result<_, _>>()?
    };
    if grid.is_empty() {
        return Err(bad("empty"));
    }
    if grid.iter().any(|b| !(b.is_finite() && *b >= 0.0)) {
        return Err(bad("values must be finite and nonnegative"));
    }
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    Ok(grid)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = ExpError;

    fn from_str(s: &str) -> Result<Self, ExpError> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(ExpError::Config(format!("unknown format `{other}`"))),
        }
    }
}

/// Everything an experiment reads. Built from defaults, then a key=value
/// file, then command-line flags.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub graph: GraphSpec,
    pub betas: Vec<f64>,
    /// Environments (or trees, for fixed networks) per β.
    pub replicas: usize,
    /// Trees per environment; for `verify oracle`, samples per sampler.
    pub samples: Option<usize>,
    pub radius: usize,
    /// Roots observed per tree in censuses.
    pub roots_per_tree: usize,
    pub seed: u64,
    pub out: Option<PathBuf>,
    /// `None` picks dense or iterative by size.
    pub solver: Option<SolverMode>,
    pub sampler: SamplerKind,
    pub format: OutputFormat,
    /// Monte Carlo samples for the compatible-tuple sum column (0 skips it).
    pub theorem_samples: usize,
    /// Adds a wall-time column; outputs are then no longer byte-reproducible.
    pub timing: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            graph: GraphSpec::Complete { n: 50, c: 1.0 },
            betas: vec![1.0],
            replicas: 200,
            samples: None,
            radius: 1,
            roots_per_tree: 1,
            seed: 1,
            out: None,
            solver: None,
            sampler: SamplerKind::Auto,
            format: OutputFormat::Csv,
            theorem_samples: 0,
            timing: false,
        }
    }
}

fn sampler_name(kind: SamplerKind) -> &'static str {
    match kind {
        SamplerKind::Wilson => "wilson",
        SamplerKind::AldousBroder => "aldous-broder",
        SamplerKind::Sequential => "sequential",
        SamplerKind::Auto => "auto",
    }
}

impl ExperimentConfig {
    /// Applies one `key=value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ExpError> {
        let value = value.trim();
        let num = |what: &str| -> Result<usize, ExpError> {
            value
                .parse()
                .map_err(|_| ExpError::Config(format!("bad {what} `{value}`")))
        };
        match key.trim() {
            "graph" => self.graph = value.parse()?,
            "beta" => self.betas = parse_beta_grid(value)?,
            "replicas" => self.replicas = num("replicas")?,
            "samples" => self.samples = Some(num("samples")?),
            "radius" => self.radius = num("radius")?,
            "roots_per_tree" => self.roots_per_tree = num("roots_per_tree")?,
            "seed" => self.seed = num("seed")? as u64,
            "out" => self.out = Some(PathBuf::from(value)),
            "solver" => {
                self.solver = match value {
                    "auto" => None,
                    v => Some(v.parse().map_err(ExpError::Config)?),
                }
            }
            "sampler" => self.sampler = value.parse().map_err(ExpError::Config)?,
            "format" => self.format = value.parse()?,
            "theorem_samples" => self.theorem_samples = num("theorem_samples")?,
            "timing" => {
                self.timing = value
                    .parse()
                    .map_err(|_| ExpError::Config(format!("timing must be true or false, got `{value}`")))?
            }
            other => return Err(ExpError::Config(format!("unknown key `{other}`"))),
        }
        Ok(())
    }

    /// Applies a key=value file: one setting per line, `#` starts a comment.
    pub fn apply_file_contents(&mut self, text: &str) -> Result<(), ExpError> {
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| ExpError::Config(format!("line {}: expected key=value", i + 1)))?;
            self.set(k, v)
                .map_err(|e| ExpError::Config(format!("line {}: {e}", i + 1)))?;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), ExpError> {
        if self.replicas == 0 {
            return Err(ExpError::Config("replicas must be at least 1".into()));
        }
        if self.betas.is_empty() {
            return Err(ExpError::Config("beta grid is empty".into()));
        }
        if self.samples == Some(0) || self.roots_per_tree == 0 {
            return Err(ExpError::Config("samples and roots_per_tree must be positive".into()));
        }
        Ok(())
    }

    /// Trees per environment, defaulting to one.
    pub fn trees(&self) -> usize {
        self.samples.unwrap_or(1)
    }

    pub fn solver_for(&self, n: usize) -> SolverMode {
        self.solver.unwrap_or_else(|| SolverMode::auto(n))
    }

    /// Every setting that affects results, one `key=value` per line in a fixed
    /// order. The output path and format are left out.
    pub fn canonical(&self) -> String {
        let betas: Vec<String> = self.betas.iter().map(|b| format!("{b:e}")).collect();
        let solver = match self.solver {
            None => "auto".to_string(),
            Some(SolverMode::Dense) => "dense".to_string(),
            Some(SolverMode::Iterative { tolerance }) => format!("iterative({tolerance:e})"),
        };
        format!(
            "graph={}\nbeta={}\nreplicas={}\nsamples={}\nradius={}\nroots_per_tree={}\nseed={}\nsolver={}\nsampler={}\ntheorem_samples={}\n",
            self.graph,
            betas.join(","),
            self.replicas,
            self.samples.map(|s| s.to_string()).unwrap_or_else(|| "default".into()),
            self.radius,
            self.roots_per_tree,
            self.seed,
            solver,
            sampler_name(self.sampler),
            self.theorem_samples,
        )
    }

    /// SHA-256 of [`canonical`](Self::canonical), hex encoded.
    pub fn hash(&self) -> String {
        let digest = Sha256::digest(self.canonical().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}
