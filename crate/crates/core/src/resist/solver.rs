use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::OnceLock;

use super::dense::DenseCholesky;
use super::iterative::GroundedLaplacian;
use super::SolverError;
use crate::netcore::ElectricNetwork;

/// Vertex whose row and column are removed from the Laplacian.
pub const GROUND: usize = 0;

/// Largest size factored densely by [`SolverMode::auto`].
pub const DENSE_LIMIT: usize = 4000;

pub const DEFAULT_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SolverMode {
    Dense,
    Iterative { tolerance: f64 },
}

impl SolverMode {
    /// Dense up to [`DENSE_LIMIT`] vertices, conjugate gradients beyond.
    pub fn auto(n: usize) -> Self {
        if n <= DENSE_LIMIT {
            SolverMode::Dense
        } else {
            SolverMode::iterative()
        }
    }

    pub fn iterative() -> Self {
        SolverMode::Iterative {
            tolerance: DEFAULT_TOLERANCE,
        }
    }
}

impl std::str::FromStr for SolverMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "dense" => Ok(SolverMode::Dense),
            "iterative" => Ok(SolverMode::iterative()),
            other => Err(format!("unknown solver `{other}` (expected dense or iterative)")),
        }
    }
}

#[derive(Debug)]
enum Backend {
    Dense {
        factor: DenseCholesky,
        inverse_columns: OnceLock<Vec<f64>>,
    },
    Iterative {
        op: GroundedLaplacian,
        tolerance: f64,
    },
}

/// A Kirchhoff edge probability, clamped into `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KirchhoffProbability {
    pub value: f64,
    /// The unclamped value, before rounding noise was removed.
    pub raw: f64,
    pub clamped: bool,
}

/// Effective resistances on one network, backed by a factorization (or an
/// iterative solver) of the Laplacian grounded at vertex 0.
///
/// Conductances are rescaled by `exp(-max log c)` before any linear algebra;
/// reported resistances are converted back to the original units.
#[derive(Debug)]
pub struct ResistanceSolver {
    net: ElectricNetwork,
    mode: SolverMode,
    log_scale: f64,
    scaled: Vec<f64>,
    backend: Backend,
    clamped: AtomicUsize,
}

fn reduced(v: usize) -> Option<usize> {
    match v.cmp(&GROUND) {
        std::cmp::Ordering::Less => Some(v),
        std::cmp::Ordering::Equal => None,
        std::cmp::Ordering::Greater => Some(v - 1),
    }
}

pub(crate) fn scaled_conductances(net: &ElectricNetwork) -> Result<(f64, Vec<f64>), SolverError> {
    let log_scale = net.max_log_conductance();
    let scaled: Vec<f64> = net
        .log_conductances()
        .iter()
        .map(|&l| (l - log_scale).exp())
        .collect();
    if scaled.iter().any(|c| !c.is_normal()) {
        return Err(SolverError::DynamicRange {
            range: net.log_dynamic_range(),
        });
    }
    Ok((log_scale, scaled))
}

/// Grounded Laplacian as a dense row-major matrix (lower triangle filled).
pub(crate) fn dense_grounded_laplacian(net: &ElectricNetwork, scaled: &[f64]) -> Vec<f64> {
    let m = net.vertex_count() - 1;
    let mut a = vec![0.0; m * m];
    for e in 0..net.edge_count() {
        let (u, v) = net.endpoints(e);
        let c = scaled[e];
        let (ru, rv) = (reduced(u), reduced(v));
        if let Some(i) = ru {
            a[i * m + i] += c;
        }
        if let Some(j) = rv {
            a[j * m + j] += c;
        }
        if let (Some(i), Some(j)) = (ru, rv) {
            let (hi, lo) = (i.max(j), i.min(j));
            a[hi * m + lo] -= c;
        }
    }
    a
}

impl ResistanceSolver {
    pub fn new(net: &ElectricNetwork, mode: SolverMode) -> Result<Self, SolverError> {
        let (log_scale, scaled) = scaled_conductances(net)?;
        let n = net.vertex_count();
        let backend = match mode {
            SolverMode::Dense => {
                let a = dense_grounded_laplacian(net, &scaled);
                Backend::Dense {
                    factor: DenseCholesky::factor(n - 1, a)?,
                    inverse_columns: OnceLock::new(),
                }
            }
            SolverMode::Iterative { tolerance } => {
                if !(tolerance > 0.0) {
                    return Err(SolverError::InvalidArgument(format!(
                        "tolerance must be positive, got {tolerance}"
                    )));
                }
                Backend::Iterative {
                    op: GroundedLaplacian::new(net.topology().clone(), GROUND, scaled.clone()),
                    tolerance,
                }
            }
        };
        Ok(ResistanceSolver {
            net: net.clone(),
            mode,
            log_scale,
            scaled,
            backend,
            clamped: AtomicUsize::new(0),
        })
    }

    pub fn network(&self) -> &ElectricNetwork {
        &self.net
    }

    pub fn mode(&self) -> SolverMode {
        self.mode
    }

    fn check_vertex(&self, v: usize) -> Result<(), SolverError> {
        let n = self.net.vertex_count();
        if v >= n {
            return Err(SolverError::VertexOutOfRange { vertex: v, n });
        }
        Ok(())
    }

    /// Potentials in rescaled units, ground pinned to zero.
    fn solve_scaled(&self, demand: &[f64]) -> Result<Vec<f64>, SolverError> {
        let n = self.net.vertex_count();
        match &self.backend {
            Backend::Dense { factor, .. } => {
                let mut x: Vec<f64> = (0..n).filter(|&v| v != GROUND).map(|v| demand[v]).collect();
                factor.solve_in_place(&mut x);
                let mut phi = vec![0.0; n];
                for v in 0..n {
                    if let Some(i) = reduced(v) {
                        phi[v] = x[i];
                    }
                }
                Ok(phi)
            }
            Backend::Iterative { op, tolerance } => op.solve(demand, *tolerance),
        }
    }

    /// Node potentials for the given net current injections (which must sum
    /// to zero), with the ground vertex at potential 0.
    pub fn potentials(&self, demand: &[f64]) -> Result<Vec<f64>, SolverError> {
        let n = self.net.vertex_count();
        if demand.len() != n {
            return Err(SolverError::InvalidArgument(format!(
                "demand has {} entries for {} vertices",
                demand.len(),
                n
            )));
        }
        let total: f64 = demand.iter().sum();
        let scale: f64 = demand.iter().map(|d| d.abs()).sum();
        if total.abs() > 1e-12 * scale.max(f64::MIN_POSITIVE) {
            return Err(SolverError::UnbalancedDemand { total });
        }
        let mut phi = self.solve_scaled(demand)?;
        let unscale = (-self.log_scale).exp();
        phi.iter_mut().for_each(|p| *p *= unscale);
        Ok(phi)
    }

    /// `‖L φ − b‖` in original units, for checking a returned potential.
    pub fn residual_norm(&self, demand: &[f64], phi: &[f64]) -> f64 {
        let n = self.net.vertex_count();
        let mut lphi = vec![0.0; n];
        for e in 0..self.net.edge_count() {
            let (u, v) = self.net.endpoints(e);
            let flow = self.net.conductance(e) * (phi[u] - phi[v]);
            lphi[u] += flow;
            lphi[v] -= flow;
        }
        (0..n)
            .map(|v| (lphi[v] - demand[v]).powi(2))
            .sum::<f64>()
            .sqrt()
    }

    fn inverse_columns(&self) -> Option<&[f64]> {
        match &self.backend {
            Backend::Dense {
                factor,
                inverse_columns,
            } => Some(inverse_columns.get_or_init(|| factor.inverse_factor_columns())),
            Backend::Iterative { .. } => None,
        }
    }

    /// Effective resistance in rescaled units.
    fn resistance_scaled(&self, u: usize, v: usize) -> Result<f64, SolverError> {
        if u == v {
            return Ok(0.0);
        }
        if let Backend::Dense { factor, .. } = &self.backend {
            let m = factor.dim();
            if let Some(w) = self.inverse_columns() {
                let col = |i: usize| &w[i * m..i * m + m];
                return Ok(match (reduced(u), reduced(v)) {
                    (Some(a), None) | (None, Some(a)) => col(a)[a..].iter().map(|x| x * x).sum(),
                    (Some(a), Some(b)) => {
                        let (a, b) = (a.min(b), a.max(b));
                        let (xa, xb) = (col(a), col(b));
                        let head: f64 = xa[a..b].iter().map(|x| x * x).sum();
                        let tail: f64 = xa[b..]
                            .iter()
                            .zip(&xb[b..])
                            .map(|(x, y)| (x - y) * (x - y))
                            .sum();
                        head + tail
                    }
                    (None, None) => unreachable!(),
                });
            }
        }
        let mut demand = vec![0.0; self.net.vertex_count()];
        demand[u] = 1.0;
        demand[v] = -1.0;
        let phi = self.solve_scaled(&demand)?;
        Ok(phi[u] - phi[v])
    }

    /// `R_eff(u ↔ v)`: the potential drop for a unit current from `u` to `v`.
    pub fn effective_resistance(&self, u: usize, v: usize) -> Result<f64, SolverError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        Ok(self.resistance_scaled(u, v)? * (-self.log_scale).exp())
    }

    /// `R_eff(u ↔ S)`: resistance between `u` and the set `S` shorted to a
    /// single node, computed on the contracted network.
    pub fn effective_resistance_to_set(&self, u: usize, set: &[usize]) -> Result<f64, SolverError> {
        self.check_vertex(u)?;
        if set.is_empty() {
            return Err(SolverError::InvalidArgument("target set is empty".into()));
        }
        let n = self.net.vertex_count();
        let mut in_set = vec![false; n];
        for &s in set {
            self.check_vertex(s)?;
            in_set[s] = true;
        }
        if in_set[u] {
            return Err(SolverError::InvalidArgument(format!(
                "vertex {u} belongs to the target set"
            )));
        }
        // class 0 is the shorted set; others keep their relative order
        let mut class_of = vec![0usize; n];
        let mut next = 1;
        for v in 0..n {
            if !in_set[v] {
                class_of[v] = next;
                next += 1;
            }
        }
        let (quotient, _) = self.net.quotient(&class_of, next)?;
        let solver = ResistanceSolver::new(&quotient, self.mode)?;
        solver.effective_resistance(class_of[u], 0)
    }

    fn check_edge(&self, e: usize) -> Result<(), SolverError> {
        if e >= self.net.edge_count() {
            return Err(SolverError::NotAnEdge(format!("edge index {e}")));
        }
        Ok(())
    }

    /// `c(e) R_eff(e)`, the probability that `e` lies in a weighted spanning tree.
    /// Rounding noise outside `[0, 1]` is clamped and counted.
    pub fn kirchhoff_edge_probability(&self, e: usize) -> Result<KirchhoffProbability, SolverError> {
        self.check_edge(e)?;
        let (u, v) = self.net.endpoints(e);
        let raw = self.scaled[e] * self.resistance_scaled(u, v)?;
        Ok(self.clamp(raw))
    }

    fn clamp(&self, raw: f64) -> KirchhoffProbability {
        let value = raw.clamp(0.0, 1.0);
        let clamped = value != raw;
        if clamped {
            self.clamped.fetch_add(1, Ordering::Relaxed);
        }
        KirchhoffProbability {
            value,
            raw,
            clamped,
        }
    }

    /// Unclamped `c(e) R_eff(e)` for every edge.
    pub fn raw_edge_products(&self) -> Result<Vec<f64>, SolverError> {
        (0..self.net.edge_count())
            .map(|e| {
                let (u, v) = self.net.endpoints(e);
                Ok(self.scaled[e] * self.resistance_scaled(u, v)?)
            })
            .collect()
    }

    /// Clamped Kirchhoff probabilities of all edges.
    pub fn all_kirchhoff_probabilities(&self) -> Result<Vec<f64>, SolverError> {
        Ok(self
            .raw_edge_products()?
            .into_iter()
            .map(|raw| self.clamp(raw).value)
            .collect())
    }

    /// `R_eff` across every edge, in edge-index order.
    pub fn all_edge_resistances(&self) -> Result<Vec<f64>, SolverError> {
        let unscale = (-self.log_scale).exp();
        (0..self.net.edge_count())
            .map(|e| {
                let (u, v) = self.net.endpoints(e);
                Ok(self.resistance_scaled(u, v)? * unscale)
            })
            .collect()
    }

    /// `Σ_e c(e) R_eff(e)`, which equals `n − 1` for a connected network.
    pub fn foster_sum(&self) -> Result<f64, SolverError> {
        Ok(self.raw_edge_products()?.iter().sum())
    }

    /// Expected round-trip time `E_a[τ_x] + E_x[τ_a] = 2 (Σ_e c(e)) R_eff(a ↔ x)`.
    pub fn commute_time(&self, a: usize, x: usize) -> Result<f64, SolverError> {
        self.check_vertex(a)?;
        self.check_vertex(x)?;
        if a == x {
            return Err(SolverError::InvalidArgument("commute time needs a ≠ x".into()));
        }
        let total: f64 = self.scaled.iter().sum();
        Ok(2.0 * total * self.resistance_scaled(a, x)?)
    }

    /// Number of probabilities clamped into `[0, 1]` so far.
    pub fn clamp_count(&self) -> usize {
        self.clamped.load(Ordering::Relaxed)
    }
}

/// `ln Z` where `Z = Σ_T Π_{e∈T} c(e)`, by the matrix-tree theorem.
pub fn partition_function_log(net: &ElectricNetwork) -> Result<f64, SolverError> {
    let n = net.vertex_count();
    if n == 1 {
        return Ok(0.0);
    }
    let (log_scale, scaled) = scaled_conductances(net)?;
    let a = dense_grounded_laplacian(net, &scaled);
    let factor = DenseCholesky::factor(n - 1, a)?;
    Ok(factor.log_det() + (n - 1) as f64 * log_scale)
}

/// Lower bounds on `R_eff(u ↔ v)` for an edge `(u, v)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NashWilliamsBound {
    /// `1/(2C_u) + 1/(2C_v)`.
    pub half_strength: f64,
    /// `1/(C_u + c) + 1/(C_v + c)`, from splitting the edge with a midpoint
    /// and applying the two star cutsets around `u` and `v`.
    pub split_edge: f64,
}

impl NashWilliamsBound {
    pub fn value(&self) -> f64 {
        self.half_strength.max(self.split_edge)
    }
}

pub fn nash_williams_bound(
    net: &ElectricNetwork,
    u: usize,
    v: usize,
) -> Result<NashWilliamsBound, SolverError> {
    let e = net
        .edge_between(u, v)
        .ok_or_else(|| SolverError::NotAnEdge(format!("({u}, {v})")))?;
    let (cu, cv) = (net.strength(u), net.strength(v));
    // split edge: conductance 2c on each half; cutsets {u-side} and {v-side}
    // have conductances C_u + c and C_v + c
    let c = net.conductance(e);
    Ok(NashWilliamsBound {
        half_strength: 0.5 / cu + 0.5 / cv,
        split_edge: 1.0 / (cu + c) + 1.0 / (cv + c),
    })
}
