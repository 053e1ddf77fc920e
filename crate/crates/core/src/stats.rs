//! Small statistics helpers shared by the experiments and checks.

use std::collections::BTreeMap;

/// Pairwise (cascade) summation: the result depends only on the order of
/// `values`, never on how work was split across threads.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    if values.len() <= 16 {
        return values.iter().sum();
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

/// Sample mean and standard error of the mean (0 for fewer than two values).
pub fn mean_and_standard_error(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = pairwise_sum(values) / n as f64;
    if n < 2 {
        return (mean, 0.0);
    }
    let squares: Vec<f64> = values.iter().map(|x| (x - mean) * (x - mean)).collect();
    let var = pairwise_sum(&squares) / (n - 1) as f64;
    (mean, (var / n as f64).sqrt())
}

/// Kolmogorov–Smirnov distance between the empirical law of `values` and
/// Uniform[0, 1], with the asymptotic p-value.
pub fn ks_uniform(values: &[f64]) -> (f64, f64) {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in v.iter().enumerate() {
        let x = x.clamp(0.0, 1.0);
        d = d.max((i + 1) as f64 / n - x).max(x - i as f64 / n);
    }
    (d, kolmogorov_p_value(d, v.len()))
}

/// `P(D_n > d)` from the Kolmogorov distribution with Stephens' correction.
pub fn kolmogorov_p_value(d: f64, n: usize) -> f64 {
    let sn = (n as f64).sqrt();
    let lambda = (sn + 0.12 + 0.11 / sn) * d;
    if lambda < 0.2 {
        return 1.0;
    }
    let mut sum = 0.0;
    for k in 1..=100 {
        let k = k as f64;
        let term = 2.0 * (-1f64).powi(k as i32 - 1) * (-2.0 * k * k * lambda * lambda).exp();
        sum += term;
        if term.abs() < 1e-16 {
            break;
        }
    }
    sum.clamp(0.0, 1.0)
}

/// Total variation distance between two discrete laws given as maps.
pub fn tv_distance<K: Ord>(p: &BTreeMap<K, f64>, q: &BTreeMap<K, f64>) -> f64 {
    let mut total = 0.0;
    for (k, a) in p {
        total += (a - q.get(k).copied().unwrap_or(0.0)).abs();
    }
    for (k, b) in q {
        if !p.contains_key(k) {
            total += b.abs();
        }
    }
    total / 2.0
}

/// Standard deviation of a frequency estimate `p̂` from `trials` draws.
pub fn binomial_sigma(p: f64, trials: u64) -> f64 {
    (p * (1.0 - p) / trials as f64).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sums_and_errors() {
        let v: Vec<f64> = (1..=100).map(|i| i as f64).collect();
        assert_eq!(pairwise_sum(&v), 5050.0);
        let (m, se) = mean_and_standard_error(&v);
        assert_eq!(m, 50.5);
        assert!((se - (841.666_666_666_666_6f64 / 100.0).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn ks_detects_shift() {
        let grid: Vec<f64> = (0..1000).map(|i| (i as f64 + 0.5) / 1000.0).collect();
        let (d, p) = ks_uniform(&grid);
        assert!(d < 0.001 && p > 0.99);
        let shifted: Vec<f64> = grid.iter().map(|x| x * 0.8).collect();
        assert!(ks_uniform(&shifted).1 < 1e-10);
    }

    #[test]
    fn tv_of_disjoint_laws_is_one() {
        let p: BTreeMap<u8, f64> = [(0, 1.0)].into();
        let q: BTreeMap<u8, f64> = [(1, 1.0)].into();
        assert_eq!(tv_distance(&p, &q), 1.0);
        assert_eq!(tv_distance(&p, &p), 0.0);
    }
}
