//! The random environment `c = exp(-beta U)`: as beta grows the weighted tree
//! moves from the uniform tree to the minimum spanning tree of the labels.

use wstlab::env::{significant_edges, tree_symmetric_difference, Environment};
use wstlab::netcore::gen_complete;
use wstlab::sample::{kruskal_min, max_st, RngStream, Sampler, SamplerKind};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let base = gen_complete(60, 1.0)?;
    let labels = Environment::draw(&base, 0.0, &mut RngStream::new(5, 0))?;
    let mst = kruskal_min(&base, labels.labels())?;

    println!("beta      |WST - MST|  significant(eps=0.01)");
    for beta in [0.0, 10.0, 100.0, 1e3, 1e4, 1e5] {
        // same labels, different beta
        let env = labels.with_beta(beta)?;
        let net = env.network(&base)?;
        if beta > 0.0 {
            assert_eq!(max_st(&net)?.edges(), mst.edges());
        }
        let mut rng = RngStream::new(5, 1);
        let sampler = Sampler::new(&net, SamplerKind::Auto, &mut rng);
        let mut diff = 0;
        for _ in 0..20 {
            diff += tree_symmetric_difference(&sampler.sample(&mut rng)?, &mst)?;
        }
        let sig = significant_edges(&base, &env, 0.01)?;
        println!("{beta:<9} {:<12.1} {}", diff as f64 / 20.0, sig.edges.len());
    }
    Ok(())
}
