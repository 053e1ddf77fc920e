//! Random-walk samplers: Wilson's loop-erased walks and Aldous–Broder.

use rand::Rng;

use super::walk::WalkTables;
use super::SampleError;

/// Total walk steps allowed per sample before giving up.
pub const STEP_LIMIT: u64 = 10_000_000_000;

/// Reusable per-thread buffers for the walk samplers.
#[derive(Debug, Default)]
pub(crate) struct WalkScratch {
    in_tree: Vec<bool>,
    next: Vec<u32>,
    next_edge: Vec<u32>,
}

impl WalkScratch {
    fn reset(&mut self, n: usize) {
        self.in_tree.clear();
        self.in_tree.resize(n, false);
        self.next.resize(n, 0);
        self.next_edge.resize(n, 0);
    }
}

/// Wilson's algorithm rooted at vertex 0. Vertices are started in index
/// order; loops are erased implicitly by overwriting the `next` pointer.
pub(crate) fn wilson_edges<R: Rng + ?Sized>(
    tables: &WalkTables,
    n: usize,
    rng: &mut R,
    step_limit: u64,
    scratch: &mut WalkScratch,
    out: &mut Vec<usize>,
) -> Result<u64, SampleError> {
    out.clear();
    scratch.reset(n);
    let WalkScratch {
        in_tree,
        next,
        next_edge,
    } = scratch;
    in_tree[0] = true;
    let mut steps = 0u64;
    for start in 1..n {
        let mut u = start;
        while !in_tree[u] {
            let (w, e) = tables.step(u, rng);
            next[u] = w as u32;
            next_edge[u] = e as u32;
            u = w;
            steps += 1;
            if steps > step_limit {
                return Err(SampleError::StepLimit { steps });
            }
        }
        let mut u = start;
        while !in_tree[u] {
            in_tree[u] = true;
            out.push(next_edge[u] as usize);
            u = next[u] as usize;
        }
    }
    Ok(steps)
}

/// Aldous–Broder: the first-entrance edges of a walk from vertex 0 that
/// runs until every vertex has been visited.
pub(crate) fn aldous_broder_edges<R: Rng + ?Sized>(
    tables: &WalkTables,
    n: usize,
    rng: &mut R,
    step_limit: u64,
    scratch: &mut WalkScratch,
    out: &mut Vec<usize>,
) -> Result<u64, SampleError> {
    out.clear();
    scratch.reset(n);
    let visited = &mut scratch.in_tree;
    visited[0] = true;
    let mut remaining = n - 1;
    let mut u = 0;
    let mut steps = 0u64;
    while remaining > 0 {
        let (w, e) = tables.step(u, rng);
        steps += 1;
        if steps > step_limit {
            return Err(SampleError::StepLimit { steps });
        }
        if !visited[w] {
            visited[w] = true;
            out.push(e);
            remaining -= 1;
        }
        u = w;
    }
    Ok(steps)
}
