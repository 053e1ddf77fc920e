use serde::Serialize;

use super::{ElectricNetwork, NetworkError};

/// The three almost-balanced conditions evaluated at concrete `(γ, K, δ)`.
#[derive(Debug, Clone, Serialize)]
pub struct BalanceReport {
    pub gamma: f64,
    pub k: f64,
    pub delta: f64,
    /// Fraction of vertices with `C_v ∈ [γ, Kγ]`.
    pub frac_typical: f64,
    /// `Σ_{v atypical} C_v / (γ n)`.
    pub atypical_strength_ratio: f64,
    /// `max_e c(e) / γ`.
    pub max_edge_ratio: f64,
    /// Total strength `Σ_v C_v` divided by `γ n`, for the aggregate form of the
    /// high-degree condition.
    pub total_strength_ratio: f64,
    /// `[frac_typical ≥ 1-δ, atypical_strength_ratio ≤ δ, max_edge_ratio ≤ δ]`.
    pub passes: [bool; 3],
    /// Typical-conductance membership per vertex.
    pub typical: Vec<bool>,
}

impl BalanceReport {
    pub fn all_pass(&self) -> bool {
        self.passes.iter().all(|&p| p)
    }
}

pub fn balance_report(
    net: &ElectricNetwork,
    gamma: f64,
    k: f64,
    delta: f64,
) -> Result<BalanceReport, NetworkError> {
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(NetworkError::InvalidParameter(format!("gamma must be positive, got {gamma}")));
    }
    if !(k > 1.0) {
        return Err(NetworkError::InvalidParameter(format!("K must exceed 1, got {k}")));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(NetworkError::InvalidParameter(format!("delta must lie in (0,1), got {delta}")));
    }
    let n = net.vertex_count();
    let typical: Vec<bool> = net
        .strengths()
        .iter()
        .map(|&c| c >= gamma && c <= k * gamma)
        .collect();
    let typical_count = typical.iter().filter(|&&t| t).count();
    let atypical_strength: f64 = net
        .strengths()
        .iter()
        .zip(&typical)
        .filter(|(_, &t)| !t)
        .map(|(&c, _)| c)
        .sum();
    let max_c = net.conductances().iter().copied().fold(0.0, f64::max);
    let frac_typical = typical_count as f64 / n as f64;
    let atypical_strength_ratio = atypical_strength / (gamma * n as f64);
    let max_edge_ratio = max_c / gamma;
    let total_strength_ratio = net.strengths().iter().sum::<f64>() / (gamma * n as f64);
    Ok(BalanceReport {
        gamma,
        k,
        delta,
        frac_typical,
        atypical_strength_ratio,
        max_edge_ratio,
        total_strength_ratio,
        passes: [
            frac_typical >= 1.0 - delta,
            atypical_strength_ratio <= delta,
            max_edge_ratio <= delta,
        ],
        typical,
    })
}
