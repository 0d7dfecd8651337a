use crate::error::{Error, Result};

/// Parameters of the power-decay recurrence: increments bounded by
/// A * n^(-alpha), with multiplicative decay factor (1 - beta/n) forced
/// whenever the sequence sits above A * n^(-alpha).
#[derive(Debug, Clone, Copy)]
pub struct DecayRecurrenceParams {
    pub alpha: f64,
    pub beta: f64,
    pub big_a: f64,
    pub a0: f64,
}

impl DecayRecurrenceParams {
    pub fn new(alpha: f64, beta: f64, big_a: f64, a0: f64) -> Result<Self> {
        if !(alpha > 0.0 && beta > alpha) {
            return Err(Error::RecurrenceHypothesis {
                step: 0,
                detail: format!("need 0 < alpha < beta, got alpha = {alpha}, beta = {beta}"),
            });
        }
        if !(big_a > 0.0) {
            return Err(Error::RecurrenceHypothesis {
                step: 0,
                detail: format!("need A > 0, got {big_a}"),
            });
        }
        Ok(DecayRecurrenceParams {
            alpha,
            beta,
            big_a,
            a0,
        })
    }
}

/// Generate the worst-case-greedy sequence allowed by the hypotheses (take
/// the largest admissible value at every step) and report the observed
/// sup_n a_n * n^alpha / A — an empirical stand-in for the recurrence's
/// stability constant C(alpha, beta).
pub fn decay_recurrence_constant(params: &DecayRecurrenceParams, n_max: usize) -> Result<f64> {
    if params.a0 >= params.big_a {
        return Err(Error::RecurrenceHypothesis {
            step: 0,
            detail: format!(
                "a0 = {} must be below A = {}",
                params.a0, params.big_a
            ),
        });
    }
    let mut a = params.a0;
    let mut sup = 0.0f64;
    for n in 1..=n_max {
        let prev_threshold = params.big_a * ((n - 1) as f64).powf(-params.alpha);
        let next = if a < prev_threshold {
            a + params.big_a * (n as f64).powf(-params.alpha)
        } else {
            a * (1.0 - params.beta / (n - 1) as f64)
        };
        // per-step hypothesis audit
        if next > a + params.big_a * (n as f64).powf(-params.alpha) + 1e-12 {
            return Err(Error::RecurrenceHypothesis {
                step: n,
                detail: "increment bound violated".into(),
            });
        }
        a = next;
        sup = sup.max(a * (n as f64).powf(params.alpha) / params.big_a);
    }
    Ok(sup)
}

/// Error-tolerance threshold: the smallest sampled epsilon with
/// A(eps)^q * m^(1-q) <= eps. Samples must be sorted by epsilon with
/// A nonincreasing and A >= 1. Returns `None` when no sample qualifies.
pub fn epsilon_m_bound(samples: &[(f64, f64)], q: f64, m: usize) -> Result<Option<f64>> {
    let mut prev_a = f64::INFINITY;
    for (i, &(eps, a)) in samples.iter().enumerate() {
        if i > 0 && eps < samples[i - 1].0 {
            return Err(Error::Config {
                key: "epsilon_samples".into(),
                message: "samples must be sorted by epsilon".into(),
            });
        }
        if a > prev_a + 1e-12 || a < 1.0 {
            return Err(Error::Config {
                key: "epsilon_samples".into(),
                message: "A(eps) must be nonincreasing and at least 1".into(),
            });
        }
        prev_a = a;
    }
    let m_pow = (m as f64).powf(1.0 - q);
    Ok(samples
        .iter()
        .find(|(eps, a)| a.powf(q) * m_pow <= *eps)
        .map(|(eps, _)| *eps))
}
