use std::io::{BufRead, Write};

use rand::Rng;

use super::EnvError;
use crate::netcore::ElectricNetwork;

/// Per-edge labels `U_e ∈ [0, 1]` and an inverse temperature β, inducing
/// log-conductances `−β U_e`.
#[derive(Debug, Clone, PartialEq)]
pub struct Environment {
    labels: Vec<f64>,
    beta: f64,
    log_conductance: Vec<f64>,
}

fn check_beta(beta: f64) -> Result<(), EnvError> {
    if !(beta >= 0.0) || !beta.is_finite() {
        return Err(EnvError::InvalidBeta(beta));
    }
    Ok(())
}

impl Environment {
    pub fn new(labels: Vec<f64>, beta: f64) -> Result<Self, EnvError> {
        check_beta(beta)?;
        if let Some(edge) = labels.iter().position(|u| !(0.0..=1.0).contains(u)) {
            return Err(EnvError::LabelOutOfRange {
                edge,
                value: labels[edge],
            });
        }
        let log_conductance = labels.iter().map(|u| -beta * u).collect();
        Ok(Environment {
            labels,
            beta,
            log_conductance,
        })
    }

    /// Draws one i.i.d. uniform label per edge of `net`.
    pub fn draw<R: Rng + ?Sized>(net: &ElectricNetwork, beta: f64, rng: &mut R) -> Result<Self, EnvError> {
        check_beta(beta)?;
        let labels = (0..net.edge_count()).map(|_| rng.gen::<f64>()).collect();
        Self::new(labels, beta)
    }

    /// The same labels at another β.
    pub fn with_beta(&self, beta: f64) -> Result<Self, EnvError> {
        Self::new(self.labels.clone(), beta)
    }

    pub fn labels(&self) -> &[f64] {
        &self.labels
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn log_conductances(&self) -> &[f64] {
        &self.log_conductance
    }

    /// `base` with its conductances replaced by `exp(−β U_e)`.
    pub fn network(&self, base: &ElectricNetwork) -> Result<ElectricNetwork, EnvError> {
        Ok(base.reweighted(self.log_conductance.clone())?)
    }
}

/// `μ(β) = E[e^{−βU}] = (1 − e^{−β})/β`, with `μ(0) = 1`.
pub fn mu(beta: f64) -> f64 {
    if beta.abs() < 1e-3 {
        // 1 − β/2 + β²/6 − β³/24 + β⁴/120
        let b = beta;
        1.0 - b / 2.0 * (1.0 - b / 3.0 * (1.0 - b / 4.0 * (1.0 - b / 5.0)))
    } else {
        -(-beta).exp_m1() / beta
    }
}

/// CSV dump: a `# beta=…` line, the header `edge_index,u,v,label`, one row per edge.
pub fn write_environment<W: Write>(
    env: &Environment,
    net: &ElectricNetwork,
    mut out: W,
) -> Result<(), EnvError> {
    writeln!(out, "# beta={}", env.beta)?;
    writeln!(out, "edge_index,u,v,label")?;
    for (e, u) in env.labels.iter().enumerate() {
        let (a, b) = net.endpoints(e);
        writeln!(out, "{e},{a},{b},{u}")?;
    }
    Ok(())
}

pub fn read_environment<R: BufRead>(input: R) -> Result<Environment, EnvError> {
    let mut beta = None;
    let mut labels = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        let line_no = i + 1;
        let t = line.trim();
        if t.is_empty() || t == "edge_index,u,v,label" {
            continue;
        }
        if let Some(rest) = t.strip_prefix('#') {
            if let Some(value) = rest.trim().strip_prefix("beta=") {
                beta = Some(value.trim().parse::<f64>().map_err(|_| EnvError::Parse {
                    line: line_no,
                    message: format!("cannot parse beta from `{value}`"),
                })?);
            }
            continue;
        }
        let fields: Vec<&str> = t.split(',').collect();
        let parse_err = |message: String| EnvError::Parse {
            line: line_no,
            message,
        };
        if fields.len() != 4 {
            return Err(parse_err(format!("expected 4 fields, found {}", fields.len())));
        }
        let index: usize = fields[0]
            .parse()
            .map_err(|_| parse_err(format!("bad edge index `{}`", fields[0])))?;
        if index != labels.len() {
            return Err(parse_err(format!("expected edge {}, found {index}", labels.len())));
        }
        let label: f64 = fields[3]
            .parse()
            .map_err(|_| parse_err(format!("bad label `{}`", fields[3])))?;
        labels.push(label);
    }
    let beta = beta.ok_or(EnvError::Parse {
        line: 1,
        message: "missing `# beta=` header".into(),
    })?;
    Environment::new(labels, beta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netcore::gen_complete;
    use crate::sample::RngStream;

    #[test]
    fn mu_values() {
        assert_eq!(mu(0.0), 1.0);
        assert!((mu(1.0) - 0.632_120_558_828_557_7).abs() < 1e-15);
        for b in [1e-9, 1e-6, 5e-4, 2e-3, 0.1] {
            let direct = (1.0 - (-b as f64).exp()) / b;
            let reference = -(-b as f64).exp_m1() / b;
            assert!((mu(b) - reference).abs() <= 1e-14 * reference, "{b}: {direct}");
        }
        assert!((1e6 * mu(1e6) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn draw_is_reproducible_and_zero_beta_is_unit() {
        let net = gen_complete(5, 1.0).unwrap();
        let a = Environment::draw(&net, 0.0, &mut RngStream::new(4, 2)).unwrap();
        let b = Environment::draw(&net, 0.0, &mut RngStream::new(4, 2)).unwrap();
        assert_eq!(a, b);
        assert!(a.network(&net).unwrap().conductances().iter().all(|&c| c == 1.0));
        assert!(Environment::draw(&net, -1.0, &mut RngStream::new(4, 2)).is_err());
        assert!(Environment::new(vec![0.5, 1.5], 1.0).is_err());
    }

    #[test]
    fn csv_round_trip() {
        let net = gen_complete(4, 1.0).unwrap();
        let env = Environment::draw(&net, 12.5, &mut RngStream::new(1, 1)).unwrap();
        let mut buf = Vec::new();
        write_environment(&env, &net, &mut buf).unwrap();
        assert!(String::from_utf8_lossy(&buf).starts_with("# beta=12.5\nedge_index,u,v,label\n0,0,1,"));
        assert_eq!(read_environment(&buf[..]).unwrap(), env);
        assert!(read_environment("edge_index,u,v,label\n0,0,1,0.5\n".as_bytes()).is_err());
    }
}
