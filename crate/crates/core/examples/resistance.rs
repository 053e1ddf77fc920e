//! Effective resistances, Kirchhoff probabilities and the identities that tie
//! them together, on a small triangle and on a larger random network.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use wstlab::netcore::{gen_random_connected, ElectricNetwork};
use wstlab::resist::{edge_marginals, partition_function_log, ResistanceSolver, SolverMode};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let tri = ElectricNetwork::new(3, &[(0, 1, 1.0), (1, 2, 2.0), (0, 2, 3.0)])?;
    let s = ResistanceSolver::new(&tri, SolverMode::Dense)?;
    println!("triangle: Z = {:.6}", partition_function_log(&tri)?.exp());
    for e in 0..tri.edge_count() {
        let (u, v) = tri.endpoints(e);
        println!(
            "  edge {u}-{v}: c = {}, R_eff = {:.6}, P(e in T) = {:.6}",
            tri.conductance(e),
            s.effective_resistance(u, v)?,
            s.kirchhoff_edge_probability(e)?.value
        );
    }
    println!("  commute time 0<->1 = {:.6}", s.commute_time(0, 1)?);
    println!("  R_eff(0 <-> {{1,2}}) = {:.6}", s.effective_resistance_to_set(0, &[1, 2])?);

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let net = gen_random_connected(600, 1200, 0.1, 10.0, &mut rng)?;
    for mode in [SolverMode::Dense, SolverMode::iterative()] {
        let solver = ResistanceSolver::new(&net, mode)?;
        println!("n=600 {:?}: Foster sum = {:.10} (n-1 = 599)", mode, solver.foster_sum()?);
    }
    let m = edge_marginals(&net, SolverMode::auto(600));
    println!("expected overlap of two independent trees: {:.4} ({:?})", m.overlap(), m.method);
    Ok(())
}
