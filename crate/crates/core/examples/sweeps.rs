//! Overlap and length sweeps over beta, written as CSV with the provenance
//! header. Same config and seed give byte-identical output.

use wstlab::expcli::{length_sweep, overlap_sweep, parse_beta_grid, write_sweep, ExperimentConfig, OutputFormat};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut config = ExperimentConfig::default();
    config.apply_file_contents("graph = complete:60\nreplicas = 20\nseed = 4\n")?;
    config.betas = parse_beta_grid("0.1:1000:5:log")?;

    let mut out = std::io::stdout().lock();
    write_sweep(&mut out, "overlap-sweep", &config, &overlap_sweep(&config)?, OutputFormat::Csv)?;
    config.set("beta", "0,1,5,25")?;
    write_sweep(&mut out, "length-sweep", &config, &length_sweep(&config)?, OutputFormat::Csv)?;
    Ok(())
}
