use std::collections::BTreeMap;
use std::io::Write;

use serde_json::{json, Value};

use super::config::{ExperimentConfig, OutputFormat};
use super::output::header_lines;
use super::sweeps::row_seed;
use super::ExpError;
use crate::env::Environment;
use crate::localstat::{
    paired_census, pgw_reference_probability, theorem_sum, CensusPlan, LocalCensus, SumMode, EXHAUSTIVE_MAX_N,
};
use crate::netcore::ElectricNetwork;
use crate::sample::RngStream;

/// Typical-conductance window `[γ, Kγ]` with `γ` half the median strength and
/// `K = 5`: wide enough for the strength fluctuations of an environment.
pub fn default_typical_window(net: &ElectricNetwork) -> (f64, f64) {
    let mut s: Vec<f64> = (0..net.vertex_count()).map(|v| net.log_strength(v)).collect();
    s.sort_by(f64::total_cmp);
    let median = s[s.len() / 2].exp();
    (median / 2.0, 5.0)
}

/// WST and MST censuses at one β.
#[derive(Debug, Clone, PartialEq)]
pub struct CensusComparison {
    pub beta: f64,
    pub row_seed: u64,
    pub wst: LocalCensus,
    pub mst: LocalCensus,
    /// TV between the WST census and the PGW* ball law.
    pub tv_reference: f64,
    /// TV between the WST and MST censuses.
    pub tv_mst: f64,
    /// Compatible-tuple sums for the observed WST patterns, if requested.
    pub theorem_sums: BTreeMap<String, f64>,
}

fn theorem_column(
    base: &ElectricNetwork,
    beta: f64,
    wst: &LocalCensus,
    config: &ExperimentConfig,
    seed: u64,
) -> Result<BTreeMap<String, f64>, ExpError> {
    let mut out = BTreeMap::new();
    if config.theorem_samples == 0 {
        return Ok(out);
    }
    let net = if beta == 0.0 {
        base.clone()
    } else {
        let env = Environment::draw(base, beta, &mut RngStream::new(seed, u64::MAX - 2))?;
        env.network(base)?
    };
    let (gamma, k) = default_typical_window(&net);
    for (i, (p, _)) in wst.counts().enumerate() {
        let mode = if net.vertex_count() <= EXHAUSTIVE_MAX_N {
            SumMode::Exhaustive
        } else {
            SumMode::MonteCarlo {
                samples: config.theorem_samples,
                seed: seed ^ (i as u64 + 1),
            }
        };
        out.insert(p.encoding().to_string(), theorem_sum(&net, p, gamma, k, mode)?.value);
    }
    Ok(out)
}

/// Per β: the `WST^β` census against the PGW* law and against the MST census
/// of the same environments and roots.
pub fn census_compare(config: &ExperimentConfig) -> Result<Vec<CensusComparison>, ExpError> {
    config.validate()?;
    if config.radius > 3 {
        return Err(ExpError::Config(format!("radius must be at most 3, got {}", config.radius)));
    }
    let base = config.graph.build(config.seed)?;
    let plan = CensusPlan::new(config.replicas)
        .trees_per_replica(config.trees())
        .roots_per_tree(config.roots_per_tree);
    config
        .betas
        .iter()
        .map(|&beta| {
            let seed = row_seed(config.seed, beta);
            let pair = paired_census(&base, beta, config.sampler, config.radius, plan, seed)?;
            let theorem_sums = theorem_column(&base, beta, &pair.wst, config, seed)?;
            Ok(CensusComparison {
                beta,
                row_seed: seed,
                tv_reference: pair.wst.tv_to_reference(),
                tv_mst: pair.wst.tv(&pair.mst),
                wst: pair.wst,
                mst: pair.mst,
                theorem_sums,
            })
        })
        .collect()
}

fn census_json(c: &LocalCensus) -> Value {
    let rows: Vec<Value> = c
        .counts()
        .map(|(p, n)| {
            json!({
                "pattern_encoding": p.encoding(),
                "k": p.k(),
                "t": p.t(),
                "stab": p.stab().to_string(),
                "count": n,
                "empirical_p": c.probability(p),
                "reference_p": pgw_reference_probability(p).value,
            })
        })
        .collect();
    json!({"samples": c.samples(), "truncated": c.truncation_count(), "patterns": rows})
}

/// Writes each β as a `# beta=…` summary line followed by the WST census
/// table and the MST census table.
pub fn write_comparisons<W: Write>(
    mut out: W,
    config: &ExperimentConfig,
    comparisons: &[CensusComparison],
    format: OutputFormat,
) -> Result<(), ExpError> {
    match format {
        OutputFormat::Csv => {
            for l in header_lines("census", config) {
                writeln!(out, "{l}")?;
            }
            for c in comparisons {
                writeln!(
                    out,
                    "# beta={} row_seed={} observations={} truncated={} tv_reference={} tv_mst={}",
                    c.beta,
                    c.row_seed,
                    c.wst.samples(),
                    c.wst.truncation_count(),
                    c.tv_reference,
                    c.tv_mst
                )?;
                writeln!(out, "# tree=wst")?;
                c.wst.write_csv(&mut out, Some(&c.theorem_sums))?;
                writeln!(out, "# tree=mst")?;
                c.mst.write_csv(&mut out, None)?;
            }
        }
        OutputFormat::Json => {
            let rows: Vec<Value> = comparisons
                .iter()
                .map(|c| {
                    json!({
                        "beta": c.beta,
                        "row_seed": c.row_seed,
                        "tv_reference": c.tv_reference,
                        "tv_mst": c.tv_mst,
                        "theorem_sums": c.theorem_sums,
                        "wst": census_json(&c.wst),
                        "mst": census_json(&c.mst),
                    })
                })
                .collect();
            let doc = json!({"header": header_lines("census", config), "rows": rows});
            serde_json::to_writer_pretty(&mut out, &doc)?;
            writeln!(out)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radius_zero_has_no_distance() {
        let mut c = ExperimentConfig::default();
        c.graph = "complete:10".parse().unwrap();
        c.radius = 0;
        c.replicas = 20;
        c.betas = vec![0.0, 4.0];
        let rows = census_compare(&c).unwrap();
        assert!(rows.iter().all(|r| r.tv_reference == 0.0 && r.tv_mst == 0.0));
        c.radius = 4;
        assert!(census_compare(&c).is_err());
    }

    #[test]
    fn theorem_column_on_small_graph() {
        let mut c = ExperimentConfig::default();
        c.graph = "complete:8".parse().unwrap();
        c.replicas = 30;
        c.betas = vec![0.0];
        c.theorem_samples = 100;
        let rows = census_compare(&c).unwrap();
        assert_eq!(rows[0].theorem_sums.len(), rows[0].wst.counts().count());
        let mut buf = Vec::new();
        write_comparisons(&mut buf, &c, &rows, OutputFormat::Csv).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.contains("# tree=mst\npattern_encoding,k,t,stab,count,empirical_p,reference_p,theorem_sum_p"));
        let mut buf = Vec::new();
        write_comparisons(&mut buf, &c, &rows, OutputFormat::Json).unwrap();
        assert!(serde_json::from_slice::<Value>(&buf).is_ok());
    }
}
