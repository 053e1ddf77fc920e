use super::pattern::RootedTreePattern;
use crate::sample::SpanningTree;

/// Default cap on ball size; larger balls are counted as truncated.
pub const BALL_CAP: usize = 10_000;

/// Outcome of extracting one ball.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Ball {
    Pattern(RootedTreePattern),
    /// The ball has more than the cap's vertices.
    Truncated,
}

/// The radius-`r` ball around `v` in the tree metric, rooted at `v`,
/// with the default cap.
pub fn ball(tree: &SpanningTree, v: usize, r: usize) -> Ball {
    ball_with_cap(tree, v, r, BALL_CAP)
}

pub fn ball_with_cap(tree: &SpanningTree, v: usize, r: usize, cap: usize) -> Ball {
    assert!(v < tree.vertex_count(), "vertex {v} out of range");
    // (tree vertex, local id of parent or usize::MAX, tree parent)
    let mut frontier = vec![(v, usize::MAX)];
    let mut children: Vec<Vec<usize>> = vec![Vec::new()];
    let mut local_of_frontier = vec![0usize];
    for _ in 0..r {
        let mut next = Vec::new();
        let mut next_local = Vec::new();
        for (&(x, from), &lx) in frontier.iter().zip(&local_of_frontier) {
            for &y in tree.tree_neighbors(x) {
                let y = y as usize;
                if y == from {
                    continue;
                }
                if children.len() >= cap {
                    return Ball::Truncated;
                }
                let ly = children.len();
                children.push(Vec::new());
                children[lx].push(ly);
                next.push((y, x));
                next_local.push(ly);
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
        local_of_frontier = next_local;
    }
    Ball::Pattern(RootedTreePattern::from_children(&children, 0, r).expect("tree balls are trees"))
}
