//! Dense Cholesky factorization for symmetric positive definite matrices.
//!
//! Row-oriented (Cholesky–Crout) so every inner loop is a contiguous dot
//! product. The matrices here are reduced Laplacians of at most a few
//! thousand vertices.

use super::SolverError;

#[derive(Debug, Clone)]
pub struct DenseCholesky {
    m: usize,
    /// Lower triangle, row-major `m × m`; the strict upper part is unused.
    l: Vec<f64>,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    // four accumulators keep the loop vectorizable
    let mut acc = [0.0f64; 4];
    let chunks = a.len() / 4;
    for i in 0..chunks {
        for k in 0..4 {
            acc[k] += a[4 * i + k] * b[4 * i + k];
        }
    }
    let mut s = (acc[0] + acc[1]) + (acc[2] + acc[3]);
    for i in 4 * chunks..a.len() {
        s += a[i] * b[i];
    }
    s
}

impl DenseCholesky {
    /// Factors the row-major symmetric matrix `a` (only the lower triangle is read).
    pub fn factor(m: usize, mut a: Vec<f64>) -> Result<Self, SolverError> {
        assert_eq!(a.len(), m * m);
        for i in 0..m {
            for j in 0..=i {
                let (head, tail) = a.split_at_mut(i * m);
                let row_i = &tail[..m];
                let s = if j == i {
                    row_i[i] - dot(&row_i[..i], &row_i[..i])
                } else {
                    let row_j = &head[j * m..j * m + m];
                    (row_i[j] - dot(&row_i[..j], &row_j[..j])) / row_j[j]
                };
                if j == i {
                    if !(s > 0.0) || !s.is_finite() {
                        return Err(SolverError::NotPositiveDefinite { pivot: i });
                    }
                    tail[i] = s.sqrt();
                } else {
                    tail[j] = s;
                }
            }
        }
        Ok(DenseCholesky { m, l: a })
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    fn row(&self, i: usize) -> &[f64] {
        &self.l[i * self.m..i * self.m + self.m]
    }

    /// Solves `L Lᵀ x = b` in place.
    pub fn solve_in_place(&self, x: &mut [f64]) {
        let m = self.m;
        for i in 0..m {
            let row = self.row(i);
            x[i] = (x[i] - dot(&row[..i], &x[..i])) / row[i];
        }
        for i in (0..m).rev() {
            let xi = x[i] / self.row(i)[i];
            x[i] = xi;
            for k in 0..i {
                x[k] -= self.l[i * m + k] * xi;
            }
        }
    }

    /// `ln det A = 2 Σ ln L_ii`.
    pub fn log_det(&self) -> f64 {
        (0..self.m).map(|i| 2.0 * self.row(i)[i].ln()).sum()
    }

    /// Columns of `L⁻¹`, returned row-major so that row `u` holds column `u`.
    /// Column `u` vanishes above the diagonal, so only entries `k ≥ u` are filled.
    pub fn inverse_factor_columns(&self) -> Vec<f64> {
        let m = self.m;
        let mut w = vec![0.0; m * m];
        for u in 0..m {
            let col = &mut w[u * m..u * m + m];
            col[u] = 1.0 / self.row(u)[u];
            for i in u + 1..m {
                let row = &self.l[i * m..i * m + m];
                col[i] = -dot(&row[u..i], &col[u..i]) / row[i];
            }
        }
        w
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_small_system() {
        // [[4,-1],[-1,3]]: det 11
        let c = DenseCholesky::factor(2, vec![4.0, 0.0, -1.0, 3.0]).unwrap();
        assert!((c.log_det() - 11f64.ln()).abs() < 1e-14);
        let mut x = vec![1.0, 0.0];
        c.solve_in_place(&mut x);
        assert!((x[0] - 3.0 / 11.0).abs() < 1e-15);
        assert!((x[1] - 1.0 / 11.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_indefinite() {
        assert!(DenseCholesky::factor(2, vec![1.0, 0.0, 2.0, 1.0]).is_err());
    }

    #[test]
    fn inverse_columns_match_solves() {
        let a = vec![5.0, 0.0, 0.0, -1.0, 4.0, 0.0, -2.0, -1.0, 6.0];
        let c = DenseCholesky::factor(3, a).unwrap();
        let w = c.inverse_factor_columns();
        // A⁻¹ = W Wᵀ with W = L⁻¹; check A⁻¹ e_0 against a direct solve
        let mut x = vec![1.0, 0.0, 0.0];
        c.solve_in_place(&mut x);
        for i in 0..3 {
            // (A⁻¹)_{i0} = Σ_k W_{ki} W_{k0} = Σ_k col_i[k] col_0[k]
            let v: f64 = (0..3).map(|k| w[i * 3 + k] * w[k]).sum();
            assert!((v - x[i]).abs() < 1e-14);
        }
    }
}
