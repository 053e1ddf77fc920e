//! r-ball census of the uniform spanning tree of K_n around uniform roots,
//! compared with the ball law of the size-biased Poisson(1) tree.

use wstlab::localstat::{census, pgw_reference_probability, CensusPlan, TreeSource};
use wstlab::netcore::gen_complete;
use wstlab::sample::SamplerKind;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let net = gen_complete(400, 1.0)?;
    for radius in [1, 2] {
        let plan = CensusPlan::new(200).trees_per_replica(10).roots_per_tree(5);
        let c = census(TreeSource::Network(&net), SamplerKind::Wilson, radius, plan, 9)?;
        println!("radius {radius}: {} observations, TV to reference {:.4}", c.samples(), c.tv_to_reference());
        let mut rows: Vec<_> = c.counts().collect();
        rows.sort_by_key(|(_, n)| std::cmp::Reverse(*n));
        for (p, _) in rows.into_iter().take(6) {
            println!(
                "  {:<14} k={:<2} t={} |Stab|={:<3} empirical {:.4}  reference {:.4}",
                p.encoding(),
                p.k(),
                p.t(),
                p.stab(),
                c.probability(p),
                pgw_reference_probability(p).value
            );
        }
    }

    let mut out = Vec::new();
    census(TreeSource::Environment { base: &net, beta: 20.0 }, SamplerKind::Auto, 1, CensusPlan::new(500), 9)?
        .write_csv(&mut out, None)?;
    print!("beta=20 census as CSV:\n{}", String::from_utf8(out)?);
    Ok(())
}
