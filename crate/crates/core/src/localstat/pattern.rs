//! Rooted trees up to root-preserving isomorphism.

use std::collections::VecDeque;

use super::LocalError;

const NONE: u32 = u32::MAX;

/// A finite rooted tree in canonical form, viewed as the `radius`-ball
/// around its root.
///
/// The encoding is the AHU parenthesis string with children ordered by their
/// own encodings, so two trees are root-isomorphic exactly when their
/// encodings agree. Vertices are numbered in breadth-first order from the
/// root, visiting children in encoding order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RootedTreePattern {
    encoding: String,
    parent: Vec<u32>,
    depth: Vec<u32>,
    radius: usize,
    t: usize,
    /// `|Stab|` as an exact integer when it fits, saturating otherwise.
    stab: u128,
    log_stab_bits: u64,
}

fn factorial_log(m: usize) -> f64 {
    (2..=m).map(|i| (i as f64).ln()).sum()
}

impl RootedTreePattern {
    /// Canonical form of the tree on `0..k` with the given edges, rooted at
    /// `root`. The tree must have depth at most `radius`.
    pub fn from_edges(
        k: usize,
        edges: &[(usize, usize)],
        root: usize,
        radius: usize,
    ) -> Result<Self, LocalError> {
        if k == 0 || root >= k {
            return Err(LocalError::NotATree(format!("root {root} with {k} vertices")));
        }
        if edges.len() + 1 != k {
            return Err(LocalError::NotATree(format!("{} edges for {k} vertices", edges.len())));
        }
        let mut adj = vec![Vec::new(); k];
        for &(a, b) in edges {
            if a >= k || b >= k || a == b {
                return Err(LocalError::NotATree(format!("bad edge ({a}, {b})")));
            }
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut children = vec![Vec::new(); k];
        let mut seen = vec![false; k];
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        let mut reached = 1;
        while let Some(x) = queue.pop_front() {
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    reached += 1;
                    children[x].push(y);
                    queue.push_back(y);
                }
            }
        }
        if reached != k {
            return Err(LocalError::NotATree("edges do not connect all vertices".into()));
        }
        Self::from_children(&children, root, radius)
    }

    /// Canonical form from child lists (any order) of a tree rooted at `root`.
    pub(crate) fn from_children(
        children: &[Vec<usize>],
        root: usize,
        radius: usize,
    ) -> Result<Self, LocalError> {
        let k = children.len();
        // BFS order and depths
        let mut order = Vec::with_capacity(k);
        let mut depth = vec![0usize; k];
        order.push(root);
        let mut head = 0;
        while head < order.len() {
            let x = order[head];
            head += 1;
            for &y in &children[x] {
                depth[y] = depth[x] + 1;
                order.push(y);
            }
        }
        let max_depth = order.iter().map(|&v| depth[v]).max().unwrap_or(0);
        if max_depth > radius {
            return Err(LocalError::RadiusExceeded {
                depth: max_depth,
                radius,
            });
        }
        // bottom-up encodings and stabilizer sizes
        let mut code: Vec<String> = vec![String::new(); k];
        let mut sorted_children: Vec<Vec<usize>> = vec![Vec::new(); k];
        let mut stab = vec![1u128; k];
        let mut log_stab = vec![0.0f64; k];
        for &v in order.iter().rev() {
            let mut kids = children[v].clone();
            kids.sort_by(|&a, &b| code[a].cmp(&code[b]));
            let mut s = String::with_capacity(2 + kids.iter().map(|&c| code[c].len()).sum::<usize>());
            s.push('(');
            let mut st: u128 = 1;
            let mut ls = 0.0;
            let mut run = 0usize;
            for (i, &c) in kids.iter().enumerate() {
                s.push_str(&code[c]);
                st = st.saturating_mul(stab[c]);
                ls += log_stab[c];
                run += 1;
                let last_of_run = i + 1 == kids.len() || code[kids[i + 1]] != code[c];
                if last_of_run {
                    for m in 2..=run as u128 {
                        st = st.saturating_mul(m);
                    }
                    ls += factorial_log(run);
                    run = 0;
                }
            }
            s.push(')');
            code[v] = s;
            stab[v] = st;
            log_stab[v] = ls;
            sorted_children[v] = kids;
        }
        // canonical BFS numbering
        let mut parent = Vec::with_capacity(k);
        let mut cdepth = Vec::with_capacity(k);
        let mut queue = VecDeque::from([(root, NONE)]);
        while let Some((x, p)) = queue.pop_front() {
            let id = parent.len() as u32;
            parent.push(p);
            cdepth.push(depth[x] as u32);
            for &y in &sorted_children[x] {
                queue.push_back((y, id));
            }
        }
        let t = if radius == 0 {
            0
        } else {
            cdepth.iter().filter(|&&d| (d as usize) < radius).count()
        };
        Ok(RootedTreePattern {
            encoding: std::mem::take(&mut code[root]),
            parent,
            depth: cdepth,
            radius,
            t,
            stab: stab[root],
            log_stab_bits: log_stab[root].to_bits(),
        })
    }

    /// Parses a parenthesis encoding such as `(()(()))`.
    pub fn from_encoding(encoding: &str, radius: usize) -> Result<Self, LocalError> {
        let mut children: Vec<Vec<usize>> = Vec::new();
        let mut stack: Vec<usize> = Vec::new();
        let mut closed_root = false;
        for ch in encoding.chars() {
            if closed_root {
                return Err(LocalError::NotATree(format!("trailing input in `{encoding}`")));
            }
            match ch {
                '(' => {
                    let id = children.len();
                    children.push(Vec::new());
                    if let Some(&p) = stack.last() {
                        children[p].push(id);
                    }
                    stack.push(id);
                }
                ')' => {
                    stack
                        .pop()
                        .ok_or_else(|| LocalError::NotATree(format!("unbalanced `{encoding}`")))?;
                    closed_root = stack.is_empty();
                }
                other => {
                    return Err(LocalError::NotATree(format!("unexpected `{other}` in encoding")));
                }
            }
        }
        if !closed_root {
            return Err(LocalError::NotATree(format!("unbalanced `{encoding}`")));
        }
        Self::from_children(&children, 0, radius)
    }

    /// The single-vertex pattern.
    pub fn point(radius: usize) -> Self {
        Self::from_children(&[Vec::new()], 0, radius).expect("a point is a tree")
    }

    /// Root with `j` leaf children, as a radius-1 ball.
    pub fn star(j: usize) -> Self {
        let mut children = vec![Vec::new(); j + 1];
        children[0] = (1..=j).collect();
        Self::from_children(&children, 0, 1).expect("a star is a tree")
    }

    pub fn encoding(&self) -> &str {
        &self.encoding
    }

    /// Number of vertices `k`.
    pub fn k(&self) -> usize {
        self.parent.len()
    }

    /// Number of vertices within distance `radius − 1` of the root (0 at radius 0).
    pub fn t(&self) -> usize {
        self.t
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    /// Number of root-preserving automorphisms (saturates at `u128::MAX`).
    pub fn stab(&self) -> u128 {
        self.stab
    }

    pub fn log_stab(&self) -> f64 {
        f64::from_bits(self.log_stab_bits)
    }

    /// BFS parent of vertex `j ≥ 1` (vertex 0 is the root).
    pub fn parent(&self, j: usize) -> Option<usize> {
        (self.parent[j] != NONE).then(|| self.parent[j] as usize)
    }

    pub fn depth(&self, j: usize) -> usize {
        self.depth[j] as usize
    }

    pub fn root_degree(&self) -> usize {
        self.parent.iter().filter(|&&p| p == 0).count()
    }
}

/// `P(B_{PGW*}(o, r) ≅ T) = e^{−t}(k − t)/|Stab_T|`, where PGW* is the Poisson(1)
/// Galton–Watson tree conditioned to survive. Patterns with `k = t` (no vertex
/// at distance `r`) cannot occur and get 0, with `degenerate` set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceProbability {
    pub value: f64,
    pub degenerate: bool,
}

pub fn pgw_reference_probability(pattern: &RootedTreePattern) -> ReferenceProbability {
    let (k, t) = (pattern.k(), pattern.t());
    if pattern.radius() > 0 && k == t {
        return ReferenceProbability {
            value: 0.0,
            degenerate: true,
        };
    }
    let value = if pattern.stab() < (1u128 << 53) {
        (-(t as f64)).exp() * (k - t) as f64 / pattern.stab() as f64
    } else {
        (-(t as f64) + ((k - t) as f64).ln() - pattern.log_stab()).exp()
    };
    ReferenceProbability {
        value,
        degenerate: false,
    }
}

/// All patterns of the given radius with at most `max_k` vertices, sorted by encoding.
pub fn enumerate_patterns(radius: usize, max_k: usize) -> Vec<RootedTreePattern> {
    let mut codes: Vec<(String, usize)> = trees_of_height(radius, max_k);
    codes.sort();
    codes
        .into_iter()
        .map(|(c, _)| RootedTreePattern::from_encoding(&c, radius).expect("generated encodings parse"))
        .collect()
}

/// Canonical encodings (with sizes) of rooted trees of height ≤ `h` and size ≤ `max`.
fn trees_of_height(h: usize, max: usize) -> Vec<(String, usize)> {
    if max == 0 {
        return Vec::new();
    }
    if h == 0 {
        return vec![("()".to_string(), 1)];
    }
    let mut subtrees = trees_of_height(h - 1, max - 1);
    subtrees.sort();
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    multisets(&subtrees, 0, max - 1, &mut chosen, &mut out);
    out
}

fn multisets(
    items: &[(String, usize)],
    from: usize,
    budget: usize,
    chosen: &mut Vec<usize>,
    out: &mut Vec<(String, usize)>,
) {
    let mut code = String::from("(");
    let mut size = 1;
    for &i in chosen.iter() {
        code.push_str(&items[i].0);
        size += items[i].1;
    }
    code.push(')');
    out.push((code, size));
    for i in from..items.len() {
        if items[i].1 <= budget {
            chosen.push(i);
            multisets(items, i, budget - items[i].1, chosen, out);
            chosen.pop();
        }
    }
}
