use std::collections::BTreeMap;
use std::io::Write;

use rand::Rng;
use rayon::prelude::*;

use super::ball::{ball_with_cap, Ball, BALL_CAP};
use super::pattern::{pgw_reference_probability, RootedTreePattern};
use super::LocalError;
use crate::env::Environment;
use crate::netcore::ElectricNetwork;
use crate::sample::{kruskal_min, RngStream, Sampler, SamplerKind, SpanningTree};

/// Counts of canonical `r`-balls around sampled roots.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalCensus {
    radius: usize,
    samples: u64,
    truncated: u64,
    counts: BTreeMap<RootedTreePattern, u64>,
}

impl LocalCensus {
    pub fn new(radius: usize) -> Self {
        LocalCensus {
            radius,
            samples: 0,
            truncated: 0,
            counts: BTreeMap::new(),
        }
    }

    pub fn record(&mut self, ball: Ball) {
        self.samples += 1;
        match ball {
            Ball::Pattern(p) => *self.counts.entry(p).or_insert(0) += 1,
            Ball::Truncated => self.truncated += 1,
        }
    }

    /// Adds the counts of `other`, which must have the same radius.
    pub fn merge(&mut self, other: LocalCensus) -> Result<(), LocalError> {
        if other.radius != self.radius {
            return Err(LocalError::InvalidArgument(format!(
                "cannot merge censuses of radius {} and {}",
                self.radius, other.radius
            )));
        }
        self.samples += other.samples;
        self.truncated += other.truncated;
        for (p, c) in other.counts {
            *self.counts.entry(p).or_insert(0) += c;
        }
        Ok(())
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn samples(&self) -> u64 {
        self.samples
    }

    pub fn truncation_count(&self) -> u64 {
        self.truncated
    }

    /// Observed patterns with their counts, in encoding order.
    pub fn counts(&self) -> impl Iterator<Item = (&RootedTreePattern, u64)> {
        self.counts.iter().map(|(p, &c)| (p, c))
    }

    pub fn count(&self, pattern: &RootedTreePattern) -> u64 {
        self.counts.get(pattern).copied().unwrap_or(0)
    }

    pub fn probability(&self, pattern: &RootedTreePattern) -> f64 {
        if self.samples == 0 {
            return 0.0;
        }
        self.count(pattern) as f64 / self.samples as f64
    }

    /// Empirical law keyed by encoding; truncated balls appear under `"truncated"`.
    pub fn probabilities(&self) -> BTreeMap<String, f64> {
        let n = self.samples.max(1) as f64;
        let mut out: BTreeMap<String, f64> = self
            .counts
            .iter()
            .map(|(p, &c)| (p.encoding().to_string(), c as f64 / n))
            .collect();
        if self.truncated > 0 {
            out.insert("truncated".into(), self.truncated as f64 / n);
        }
        out
    }

    /// Total variation between the empirical law and the PGW* ball law.
    /// Unobserved patterns contribute their whole reference mass.
    pub fn tv_to_reference(&self) -> f64 {
        let n = self.samples.max(1) as f64;
        let mut diff = self.truncated as f64 / n;
        let mut covered = 0.0;
        for (p, &c) in &self.counts {
            let q = pgw_reference_probability(p).value;
            covered += q;
            diff += (c as f64 / n - q).abs();
        }
        (diff + (1.0 - covered).max(0.0)) / 2.0
    }

    /// Total variation between two empirical laws.
    pub fn tv(&self, other: &LocalCensus) -> f64 {
        crate::stats::tv_distance(&self.probabilities(), &other.probabilities())
    }

    /// Writes the census table. `theorem_sums` fills the last column by encoding;
    /// cells without a value are left empty.
    pub fn write_csv<W: Write>(
        &self,
        mut out: W,
        theorem_sums: Option<&BTreeMap<String, f64>>,
    ) -> std::io::Result<()> {
        writeln!(out, "pattern_encoding,k,t,stab,count,empirical_p,reference_p,theorem_sum_p")?;
        for (p, &c) in &self.counts {
            let theorem = theorem_sums
                .and_then(|m| m.get(p.encoding()))
                .map(|x| x.to_string())
                .unwrap_or_default();
            writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                p.encoding(),
                p.k(),
                p.t(),
                p.stab(),
                c,
                self.probability(p),
                pgw_reference_probability(p).value,
                theorem
            )?;
        }
        Ok(())
    }
}

/// How many trees and roots a census draws.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CensusPlan {
    pub replicas: usize,
    /// Trees per replica. For environments, each replica draws one environment.
    pub trees_per_replica: usize,
    /// Roots per tree. More than one makes observations correlated.
    pub roots_per_tree: usize,
    pub ball_cap: usize,
}

impl CensusPlan {
    pub fn new(replicas: usize) -> Self {
        CensusPlan {
            replicas,
            trees_per_replica: 1,
            roots_per_tree: 1,
            ball_cap: BALL_CAP,
        }
    }

    pub fn trees_per_replica(mut self, trees: usize) -> Self {
        self.trees_per_replica = trees;
        self
    }

    pub fn roots_per_tree(mut self, roots: usize) -> Self {
        self.roots_per_tree = roots;
        self
    }

    pub fn observations(&self) -> u64 {
        (self.replicas * self.trees_per_replica * self.roots_per_tree) as u64
    }

    fn check(&self) -> Result<(), LocalError> {
        if self.replicas == 0 || self.trees_per_replica == 0 || self.roots_per_tree == 0 {
            return Err(LocalError::InvalidArgument(
                "replicas, trees and roots per tree must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Where census trees come from.
#[derive(Debug, Clone, Copy)]
pub enum TreeSource<'a> {
    /// A fixed network.
    Network(&'a ElectricNetwork),
    /// A fresh environment `exp(−β U)` on `base` per replica.
    Environment { base: &'a ElectricNetwork, beta: f64 },
}

// Replica `i` reads streams 3i (environment, then pilot), 3i+1 (trees), 3i+2 (roots).
fn streams(seed: u64, i: usize) -> (RngStream, RngStream, RngStream) {
    let s = 3 * i as u64;
    (
        RngStream::new(seed, s),
        RngStream::new(seed, s + 1),
        RngStream::new(seed, s + 2),
    )
}

fn observe(
    census: &mut LocalCensus,
    tree: &SpanningTree,
    roots: &[usize],
    radius: usize,
    cap: usize,
) {
    for &v in roots {
        census.record(ball_with_cap(tree, v, radius, cap));
    }
}

/// Census of `r`-balls of sampled trees around uniform roots. Replicas run in
/// parallel on their own streams, so the result depends only on `seed`.
pub fn census(
    source: TreeSource<'_>,
    sampler: SamplerKind,
    radius: usize,
    plan: CensusPlan,
    seed: u64,
) -> Result<LocalCensus, LocalError> {
    plan.check()?;
    let fixed = match source {
        TreeSource::Network(net) => Some(Sampler::new(net, sampler, &mut RngStream::new(seed, u64::MAX))),
        TreeSource::Environment { .. } => None,
    };
    (0..plan.replicas)
        .into_par_iter()
        .map(|i| {
            let (mut env_rng, mut tree_rng, mut root_rng) = streams(seed, i);
            let owned;
            let s = match (&fixed, source) {
                (Some(s), _) => s,
                (None, TreeSource::Environment { base, beta }) => {
                    let env = Environment::draw(base, beta, &mut env_rng)?;
                    owned = Sampler::new(&env.network(base)?, sampler, &mut env_rng);
                    &owned
                }
                (None, TreeSource::Network(_)) => unreachable!(),
            };
            let n = s.network().vertex_count();
            let mut local = LocalCensus::new(radius);
            let mut roots = Vec::with_capacity(plan.roots_per_tree);
            for _ in 0..plan.trees_per_replica {
                let tree = s.sample(&mut tree_rng)?;
                roots.clear();
                roots.extend((0..plan.roots_per_tree).map(|_| root_rng.gen_range(0..n)));
                observe(&mut local, &tree, &roots, radius, plan.ball_cap);
            }
            Ok(local)
        })
        .try_reduce(
            || LocalCensus::new(radius),
            |mut a, b| {
                a.merge(b)?;
                Ok(a)
            },
        )
}

/// Censuses of `WST^β` and of the minimum spanning tree of the same labels,
/// observed from the same roots.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairedCensus {
    pub wst: LocalCensus,
    pub mst: LocalCensus,
}

/// Each replica draws one environment, its MST, `trees_per_replica` WST
/// samples and the same roots for both trees of each pair.
pub fn paired_census(
    base: &ElectricNetwork,
    beta: f64,
    sampler: SamplerKind,
    radius: usize,
    plan: CensusPlan,
    seed: u64,
) -> Result<PairedCensus, LocalError> {
    plan.check()?;
    let n = base.vertex_count();
    (0..plan.replicas)
        .into_par_iter()
        .map(|i| {
            let (mut env_rng, mut tree_rng, mut root_rng) = streams(seed, i);
            let env = Environment::draw(base, beta, &mut env_rng)?;
            let mst = kruskal_min(base, env.labels())?;
            let s = Sampler::new(&env.network(base)?, sampler, &mut env_rng);
            let mut pair = PairedCensus {
                wst: LocalCensus::new(radius),
                mst: LocalCensus::new(radius),
            };
            let mut roots = Vec::with_capacity(plan.roots_per_tree);
            for _ in 0..plan.trees_per_replica {
                let tree = s.sample(&mut tree_rng)?;
                roots.clear();
                roots.extend((0..plan.roots_per_tree).map(|_| root_rng.gen_range(0..n)));
                observe(&mut pair.wst, &tree, &roots, radius, plan.ball_cap);
                observe(&mut pair.mst, &mst, &roots, radius, plan.ball_cap);
            }
            Ok(pair)
        })
        .try_reduce(
            || PairedCensus {
                wst: LocalCensus::new(radius),
                mst: LocalCensus::new(radius),
            },
            |mut a, b| {
                a.wst.merge(b.wst)?;
                a.mst.merge(b.mst)?;
                Ok(a)
            },
        )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netcore::{gen_complete, gen_path};

    #[test]
    fn radius_zero_is_a_point() {
        let net = gen_complete(6, 1.0).unwrap();
        let c = census(TreeSource::Network(&net), SamplerKind::Wilson, 0, CensusPlan::new(50), 3).unwrap();
        assert_eq!(c.samples(), 50);
        assert_eq!(c.count(&RootedTreePattern::point(0)), 50);
        assert_eq!(c.tv_to_reference(), 0.0);
    }

    #[test]
    fn path_network_matches_direct_count() {
        // the only spanning tree of a path is itself: ends see a 1-star, the
        // other vertices a 2-star
        let net = gen_path(&[1.0; 5]).unwrap();
        let plan = CensusPlan::new(40).trees_per_replica(5).roots_per_tree(3);
        let c = census(TreeSource::Network(&net), SamplerKind::Auto, 1, plan, 9).unwrap();
        assert_eq!(c.samples(), 600);
        let ends = c.count(&RootedTreePattern::star(1)) as f64 / 600.0;
        assert_eq!(c.count(&RootedTreePattern::star(1)) + c.count(&RootedTreePattern::star(2)), 600);
        assert!((ends - 2.0 / 6.0).abs() < 0.08, "{ends}");
    }

    #[test]
    fn deterministic_and_mergeable() {
        let net = gen_complete(12, 1.0).unwrap();
        let src = TreeSource::Environment { base: &net, beta: 3.0 };
        let plan = CensusPlan::new(30).trees_per_replica(2);
        let a = census(src, SamplerKind::Auto, 2, plan, 5).unwrap();
        let b = census(src, SamplerKind::Auto, 2, plan, 5).unwrap();
        assert_eq!(a, b);
        let total: u64 = a.counts().map(|(_, c)| c).sum();
        assert_eq!(total + a.truncation_count(), a.samples());
        let mut m = a.clone();
        assert!(m.merge(LocalCensus::new(1)).is_err());
        m.merge(b).unwrap();
        assert_eq!(m.samples(), 120);
        assert!(m.tv(&a) < 1e-15);
    }

    #[test]
    fn paired_census_at_huge_beta_agrees() {
        let net = gen_complete(15, 1.0).unwrap();
        let p = paired_census(&net, 1e7, SamplerKind::Auto, 1, CensusPlan::new(20), 1).unwrap();
        assert_eq!(p.wst, p.mst);
    }

    #[test]
    fn csv_has_expected_columns() {
        let mut c = LocalCensus::new(1);
        c.record(Ball::Pattern(RootedTreePattern::star(2)));
        c.record(Ball::Truncated);
        let mut buf = Vec::new();
        c.write_csv(&mut buf, Some(&[("(()())".to_string(), 0.25)].into())).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "pattern_encoding,k,t,stab,count,empirical_p,reference_p,theorem_sum_p");
        assert!(lines[1].starts_with("(()()),3,1,2,1,0.5,0.3678794411714"), "{}", lines[1]);
        assert!(lines[1].ends_with(",0.25"));
    }
}
