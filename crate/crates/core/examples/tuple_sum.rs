//! The compatible-tuple sum for r-ball probabilities, exhaustive on a small
//! graph and by importance sampling on a larger one.

use wstlab::env::Environment;
use wstlab::expcli::default_typical_window;
use wstlab::localstat::{b_values, enumerate_patterns, pgw_reference_probability, theorem_sum, SumMode};
use wstlab::netcore::gen_complete;
use wstlab::sample::RngStream;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let base = gen_complete(16, 1.0)?;
    let env = Environment::draw(&base, 1.5, &mut RngStream::new(2, 0))?;
    let net = env.network(&base)?;
    let b = b_values(&net);
    println!("sum of b over vertices: {:.6} (n = 16)", b.iter().sum::<f64>());

    let (gamma, k) = default_typical_window(&net);
    println!("window [{gamma:.3}, {:.3}]", k * gamma);
    for p in enumerate_patterns(1, 4) {
        let exact = theorem_sum(&net, &p, gamma, k, SumMode::Exhaustive)?;
        let mc = theorem_sum(&net, &p, gamma, k, SumMode::MonteCarlo { samples: 50_000, seed: 1 })?;
        println!(
            "{:<10} exhaustive {:.5} ({} tuples)  monte carlo {:.5} +- {:.5}  reference {:.5}",
            p.encoding(),
            exact.value,
            exact.hits,
            mc.value,
            mc.std_error,
            pgw_reference_probability(&p).value
        );
    }
    Ok(())
}
