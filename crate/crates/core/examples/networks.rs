//! Build networks, round-trip them through the text format and check the
//! almost-balanced conditions.

use std::io::Cursor;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use wstlab::netcore::{
    balance_report, gen_complete, gen_glued_triangle_chain, gen_random_connected, read_network, write_network,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let net = gen_random_connected(8, 6, 0.5, 2.0, &mut rng)?;
    println!("random network: n={} m={}", net.vertex_count(), net.edge_count());
    for v in 0..net.vertex_count() {
        println!("  strength({v}) = {:.3}", net.strength(v));
    }

    let mut buf = Vec::new();
    write_network(&net, &mut buf)?;
    let back = read_network(Cursor::new(&buf))?;
    assert_eq!(back.conductances(), net.conductances());
    println!("text format:\n{}", String::from_utf8(buf)?);

    // K_n passes everything; the glued triangle chain has heavy vertices
    for (name, net, gamma) in [
        ("K_30", gen_complete(30, 1.0)?, 29.0),
        ("triangle chain", gen_glued_triangle_chain(30)?, 2.0),
    ] {
        let r = balance_report(&net, gamma, 2.0, 0.1)?;
        println!(
            "{name}: typical fraction {:.3}, passes {:?}, balanced: {}",
            r.frac_typical,
            r.passes,
            r.all_pass()
        );
    }
    Ok(())
}
