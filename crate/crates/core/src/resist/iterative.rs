//! Jacobi-preconditioned conjugate gradients on the grounded Laplacian.

use std::sync::Arc;

use super::SolverError;
use crate::netcore::Topology;

#[derive(Debug, Clone)]
pub(crate) struct GroundedLaplacian {
    topology: Arc<Topology>,
    ground: usize,
    conductance: Vec<f64>,
    diag: Vec<f64>,
}

impl GroundedLaplacian {
    pub fn new(topology: Arc<Topology>, ground: usize, conductance: Vec<f64>) -> Self {
        let n = topology.vertex_count();
        let mut diag = vec![0.0; n];
        for (e, &(u, v)) in topology.edges().iter().enumerate() {
            diag[u as usize] += conductance[e];
            diag[v as usize] += conductance[e];
        }
        GroundedLaplacian {
            topology,
            ground,
            conductance,
            diag,
        }
    }

    /// `y = L x` with the ground coordinate pinned to zero.
    pub fn apply(&self, x: &[f64], y: &mut [f64]) {
        for v in 0..self.diag.len() {
            if v == self.ground {
                y[v] = 0.0;
                continue;
            }
            let mut s = self.diag[v] * x[v];
            for &(u, e) in self.topology.neighbors(v) {
                s -= self.conductance[e as usize] * x[u as usize];
            }
            y[v] = s;
        }
    }

    /// Solves `L x = b` on the non-ground coordinates to relative residual
    /// `tolerance`. `b[ground]` is ignored and `x[ground] = 0`.
    pub fn solve(&self, b: &[f64], tolerance: f64) -> Result<Vec<f64>, SolverError> {
        let n = self.diag.len();
        let mut rhs = b.to_vec();
        rhs[self.ground] = 0.0;
        let b_norm = norm(&rhs);
        let mut x = vec![0.0; n];
        if b_norm == 0.0 {
            return Ok(x);
        }
        let mut r = rhs;
        let mut z: Vec<f64> = (0..n)
            .map(|i| if i == self.ground { 0.0 } else { r[i] / self.diag[i] })
            .collect();
        let mut p = z.clone();
        let mut q = vec![0.0; n];
        let mut rz = dot(&r, &z);
        let max_iter = 10 * n + 1000;
        for _ in 0..max_iter {
            self.apply(&p, &mut q);
            let alpha = rz / dot(&p, &q);
            for i in 0..n {
                x[i] += alpha * p[i];
                r[i] -= alpha * q[i];
            }
            if norm(&r) <= tolerance * b_norm {
                // confirm with a true residual to guard against drift
                self.apply(&x, &mut q);
                let mut true_r = 0.0;
                for i in 0..n {
                    if i != self.ground {
                        true_r += (b[i] - q[i]).powi(2);
                    }
                }
                if true_r.sqrt() <= tolerance * b_norm {
                    return Ok(x);
                }
                for i in 0..n {
                    r[i] = if i == self.ground { 0.0 } else { b[i] - q[i] };
                }
            }
            for i in 0..n {
                z[i] = if i == self.ground { 0.0 } else { r[i] / self.diag[i] };
            }
            let rz_next = dot(&r, &z);
            let beta = rz_next / rz;
            rz = rz_next;
            for i in 0..n {
                p[i] = z[i] + beta * p[i];
            }
        }
        Err(SolverError::NotConverged {
            iterations: max_iter,
            residual: norm(&r) / b_norm,
        })
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}
