//! The exact samplers against the enumerated law on a small network, plus
//! sampling conditioned on forced and forbidden edges.

use std::collections::HashMap;

use wstlab::netcore::ElectricNetwork;
use wstlab::sample::{
    conditioned_law, conditioned_sample, enumerate_spanning_trees, RngStream, Sampler, SamplerKind,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // a 4-cycle with one chord
    let net = ElectricNetwork::new(
        4,
        &[(0, 1, 1.0), (1, 2, 3.0), (2, 3, 0.5), (3, 0, 2.0), (0, 2, 1.5)],
    )?;
    let law = enumerate_spanning_trees(&net)?;
    let z: f64 = law.iter().map(|t| t.1).sum();
    let samples = 200_000;

    for kind in [SamplerKind::Wilson, SamplerKind::AldousBroder, SamplerKind::Sequential] {
        let mut rng = RngStream::new(11, 0);
        let sampler = Sampler::new(&net, kind, &mut rng);
        let mut counts: HashMap<Vec<usize>, usize> = HashMap::new();
        for _ in 0..samples {
            *counts.entry(sampler.sample(&mut rng)?.edges().to_vec()).or_default() += 1;
        }
        let tv: f64 = law
            .iter()
            .map(|(t, w)| {
                let hat = *counts.get(t.edges()).unwrap_or(&0) as f64 / samples as f64;
                (hat - w / z).abs()
            })
            .sum::<f64>()
            / 2.0;
        println!("{kind:?}: {} trees, TV to exact law {tv:.4}", law.len());
    }

    // condition on edge 4 in the tree and edge 1 out of it
    let exact = conditioned_law(&net, &[4], &[1])?;
    let mut rng = RngStream::new(11, 1);
    let mut hits: HashMap<Vec<usize>, usize> = HashMap::new();
    for _ in 0..samples {
        *hits.entry(conditioned_sample(&net, &[4], &[1], &mut rng)?.edges().to_vec()).or_default() += 1;
    }
    println!("conditioned on 4 in, 1 out:");
    for (t, p) in exact {
        let hat = *hits.get(t.edges()).unwrap_or(&0) as f64 / samples as f64;
        println!("  {:?}: exact {p:.4}, sampled {hat:.4}", t.edges());
    }
    Ok(())
}
