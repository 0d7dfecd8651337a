use crate::core::vector::Vector;
use crate::error::{Error, Result};

/// Which sublevel set the smoothness bound rho(E, S, u) <= gamma * u^q is
/// declared on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SmoothnessDomain {
    /// {x : E(x) <= E(0)} intersected with the unit-l1-weight hull; the
    /// domain of the relaxed (constrained) algorithms.
    SublevelCapHull,
    /// {x : E(x) <= E(0) + 1}; the domain of the free-relaxation algorithms.
    SublevelPlusOne,
}

/// Declared smoothness bound rho(E, u) <= gamma * u^q, q in (1, 2].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothnessCertificate {
    pub gamma: f64,
    pub q: f64,
    pub domain: SmoothnessDomain,
}

impl SmoothnessCertificate {
    pub fn new(gamma: f64, q: f64, domain: SmoothnessDomain) -> Self {
        assert!(gamma > 0.0, "gamma must be positive");
        assert!(q > 1.0 && q <= 2.0, "q must lie in (1, 2]");
        SmoothnessCertificate { gamma, q, domain }
    }

    /// Dual exponent p = q / (q - 1).
    pub fn p(&self) -> f64 {
        self.q / (self.q - 1.0)
    }
}

/// Evaluatable convex objective with gradient and (where known) a
/// smoothness certificate.
#[derive(Debug, Clone)]
pub enum ConvexObjective {
    /// E(x) = ||x - f||_2^2
    Quadratic { target: Vector },
    /// E(x) = sum_i |x_i - f_i|^s, s in (1, 2]
    PPowerDistance { target: Vector, power: f64 },
    /// E(x) = log sum_j exp(<a_j, x> - b_j)
    LogSumExp { rows: Vec<Vector>, offsets: Vec<f64> },
}

/// E(x) = ||x - f||_2^2 with certificate (gamma = 1, q = 2).
pub fn quadratic_objective(target: Vector) -> ConvexObjective {
    ConvexObjective::Quadratic { target }
}

pub fn p_power_objective(target: Vector, power: f64) -> Result<ConvexObjective> {
    if !(power > 1.0 && power <= 2.0) {
        return Err(Error::Config {
            key: "objective.s".into(),
            message: format!("power must lie in (1, 2], got {power}"),
        });
    }
    Ok(ConvexObjective::PPowerDistance { target, power })
}

pub fn log_sum_exp_objective(rows: Vec<Vector>, offsets: Vec<f64>) -> ConvexObjective {
    assert_eq!(rows.len(), offsets.len());
    assert!(!rows.is_empty());
    ConvexObjective::LogSumExp { rows, offsets }
}

impl ConvexObjective {
    pub fn dim(&self) -> usize {
        match self {
            ConvexObjective::Quadratic { target } => target.dim(),
            ConvexObjective::PPowerDistance { target, .. } => target.dim(),
            ConvexObjective::LogSumExp { rows, .. } => rows[0].dim(),
        }
    }

    pub fn eval(&self, x: &Vector) -> f64 {
        match self {
            ConvexObjective::Quadratic { target } => {
                let mut acc = 0.0;
                for (xi, fi) in x.as_slice().iter().zip(target.as_slice()) {
                    let d = xi - fi;
                    acc += d * d;
                }
                acc
            }
            ConvexObjective::PPowerDistance { target, power } => x
                .as_slice()
                .iter()
                .zip(target.as_slice())
                .map(|(xi, fi)| (xi - fi).abs().powf(*power))
                .sum(),
            ConvexObjective::LogSumExp { rows, offsets } => {
                let exps: Vec<f64> = rows
                    .iter()
                    .zip(offsets)
                    .map(|(a, b)| a.dot(x) - b)
                    .collect();
                let m = exps.iter().fold(f64::NEG_INFINITY, |acc, e| acc.max(*e));
                m + exps.iter().map(|e| (e - m).exp()).sum::<f64>().ln()
            }
        }
    }

    pub fn grad(&self, x: &Vector) -> Vector {
        match self {
            ConvexObjective::Quadratic { target } => x.sub(target).scaled(2.0),
            ConvexObjective::PPowerDistance { target, power } => {
                let coords = x
                    .as_slice()
                    .iter()
                    .zip(target.as_slice())
                    .map(|(xi, fi)| {
                        let d = xi - fi;
                        power * d.abs().powf(power - 1.0) * d.signum()
                    })
                    .collect();
                Vector::new(coords).expect("p-power gradient is finite")
            }
            ConvexObjective::LogSumExp { rows, offsets } => {
                let exps: Vec<f64> = rows
                    .iter()
                    .zip(offsets)
                    .map(|(a, b)| a.dot(x) - b)
                    .collect();
                let m = exps.iter().fold(f64::NEG_INFINITY, |acc, e| acc.max(*e));
                let weights: Vec<f64> = exps.iter().map(|e| (e - m).exp()).collect();
                let total: f64 = weights.iter().sum();
                let mut coords = vec![0.0; self.dim()];
                for (w, a) in weights.iter().zip(rows) {
                    for (c, ai) in coords.iter_mut().zip(a.as_slice()) {
                        *c += w / total * ai;
                    }
                }
                Vector::new(coords).expect("log-sum-exp gradient is finite")
            }
        }
    }

    /// Smoothness certificate on the given domain, when one is known for
    /// this objective family.
    pub fn certificate(&self, domain: SmoothnessDomain) -> Option<SmoothnessCertificate> {
        match self {
            ConvexObjective::Quadratic { .. } => {
                Some(SmoothnessCertificate::new(1.0, 2.0, domain))
            }
            ConvexObjective::PPowerDistance { target, power } => {
                // per-coordinate: |a+t|^s + |a-t|^s - 2|a|^s <= 2 t^s, and a
                // unit l2 direction satisfies sum |y_i|^s <= n^(1 - s/2)
                let n = target.dim() as f64;
                Some(SmoothnessCertificate::new(
                    n.powf(1.0 - power / 2.0),
                    *power,
                    domain,
                ))
            }
            ConvexObjective::LogSumExp { rows, .. } => {
                // Hessian bounded by A^T diag(p) A <= ||A||_F^2 I
                let frob_sq: f64 = rows.iter().map(|a| a.dot(a)).sum();
                Some(SmoothnessCertificate::new(frob_sq.max(1e-12) / 2.0, 2.0, domain))
            }
        }
    }

    pub fn descriptor(&self) -> String {
        match self {
            ConvexObjective::Quadratic { target } => {
                format!("quadratic f={:?}", target.as_slice())
            }
            ConvexObjective::PPowerDistance { target, power } => {
                format!("p-power s={power} f={:?}", target.as_slice())
            }
            ConvexObjective::LogSumExp { rows, .. } => {
                format!("log-sum-exp rows={}", rows.len())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_examples() {
        let f = Vector::new(vec![0.5, 0.5]).unwrap();
        let obj = quadratic_objective(f.clone());
        let zero = Vector::zeros(2).unwrap();
        assert!((obj.eval(&zero) - 0.5).abs() < 1e-15);
        assert_eq!(obj.grad(&zero).as_slice(), &[-1.0, -1.0]);
        assert_eq!(obj.eval(&f), 0.0);
        let cert = obj.certificate(SmoothnessDomain::SublevelCapHull).unwrap();
        assert_eq!((cert.gamma, cert.q), (1.0, 2.0));
        assert_eq!(cert.p(), 2.0);
    }

    #[test]
    fn log_sum_exp_gradient_is_convex_combination() {
        let rows = vec![
            Vector::new(vec![1.0, 0.0]).unwrap(),
            Vector::new(vec![0.0, 1.0]).unwrap(),
        ];
        let obj = log_sum_exp_objective(rows, vec![0.0, 0.0]);
        let x = Vector::new(vec![0.3, -0.2]).unwrap();
        let g = obj.grad(&x);
        let total: f64 = g.as_slice().iter().sum();
        assert!((total - 1.0).abs() < 1e-12);
    }
}
