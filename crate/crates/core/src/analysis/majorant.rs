use crate::core::{ErrorSchedule, RunTrace};
use crate::error::{Error, Result};

/// Parameters of the one-step recurrence
/// a_m = a_{m-1} + inf_{0<=lambda<=1}(-lambda v a_{m-1} + B lambda^q) + delta_{m-1},
/// iterated with equality to produce the extremal (majorant) sequence.
#[derive(Debug, Clone)]
pub struct MajorantParams {
    pub v: f64,
    pub big_b: f64,
    pub q: f64,
    pub schedule: ErrorSchedule,
    pub a0: f64,
}

impl MajorantParams {
    pub fn new(v: f64, big_b: f64, q: f64, schedule: ErrorSchedule, a0: f64) -> Self {
        assert!(v > 0.0 && v <= 1.0, "v must lie in (0, 1]");
        assert!(big_b > 0.0, "B must be positive");
        assert!(q > 1.0 && q <= 2.0, "q must lie in (1, 2]");
        assert!(a0 >= 0.0, "a0 must be nonnegative");
        MajorantParams {
            v,
            big_b,
            q,
            schedule,
            a0,
        }
    }

    /// inf over lambda in [0, 1] of -lambda v a + B lambda^q, via the
    /// closed-form unconstrained minimizer clipped to the interval.
    pub fn one_step_inf(&self, a: f64) -> f64 {
        if a <= 0.0 {
            return 0.0;
        }
        let unconstrained = (self.v * a / (self.q * self.big_b)).powf(1.0 / (self.q - 1.0));
        let lambda = unconstrained.min(1.0);
        -lambda * self.v * a + self.big_b * lambda.powf(self.q)
    }
}

/// a_0 .. a_{m_max} of the extremal sequence.
pub fn majorant_sequence(params: &MajorantParams, m_max: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(m_max + 1);
    let mut a = params.a0;
    out.push(a);
    for m in 1..=m_max {
        a = a + params.one_step_inf(a) + params.schedule.delta(m - 1);
        out.push(a);
    }
    out
}

/// Pointwise domination test: every trace gap a_m must sit below the
/// majorant built from the same delta schedule and the trace's own a_0.
/// Valid because the recurrence map is nondecreasing in a_{m-1} for v <= 1.
pub fn check_majorant_domination(trace: &RunTrace, params: &MajorantParams) -> Result<bool> {
    let gaps = trace.gaps().ok_or(Error::MissingReference)?;
    let mut anchored = params.clone();
    anchored.a0 = gaps[0].max(0.0);
    let majorant = majorant_sequence(&anchored, gaps.len() - 1);
    Ok(gaps
        .iter()
        .zip(&majorant)
        .all(|(a, bound)| *a <= bound + 1e-9))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algorithms::{run_wrga, Reference};
    use crate::core::{
        quadratic_objective, AlgorithmConfig, AlgorithmKind, Dictionary, NormKind, Vector,
    };

    fn quad_params(schedule: ErrorSchedule) -> MajorantParams {
        MajorantParams::new(1.0, 8.0, 2.0, schedule, 0.5)
    }

    #[test]
    fn first_step_closed_form() {
        let p = quad_params(ErrorSchedule::Zero);
        let seq = majorant_sequence(&p, 1);
        // lambda* = a0/16, inner = -a0^2/32
        assert!((seq[1] - (0.5 - 0.25 / 32.0)).abs() < 1e-15);
        assert_eq!(seq[1], 0.4921875);
    }

    #[test]
    fn zero_start_is_capped_by_delta_partial_sums() {
        let mut p = quad_params(ErrorSchedule::Power { c: 0.1, q: 2.0 });
        p.a0 = 0.0;
        let seq = majorant_sequence(&p, 5);
        assert_eq!(seq[0], 0.0);
        // the inf term vanishes at a = 0, so a_1 is exactly delta_0;
        // afterwards it only subtracts
        assert_eq!(seq[1], p.schedule.delta(0));
        let mut partial = 0.0;
        for (m, a) in seq.iter().enumerate() {
            assert!(*a >= 0.0);
            assert!(*a <= partial + 1e-12, "a_{m} = {a} vs sum {partial}");
            if m < 5 {
                partial += p.schedule.delta(m);
            }
        }
        p.schedule = ErrorSchedule::Zero;
        assert!(majorant_sequence(&p, 5).iter().all(|a| *a == 0.0));
    }

    #[test]
    fn exact_majorant_decays_like_one_over_m() {
        let p = quad_params(ErrorSchedule::Zero);
        let seq = majorant_sequence(&p, 10_000);
        let sup = seq
            .iter()
            .enumerate()
            .skip(1)
            .map(|(m, a)| m as f64 * a)
            .fold(0.0f64, f64::max);
        assert!(sup.is_finite());
        // m * a_m stabilizes rather than growing
        let tail_a = 10_000.0 * seq[10_000];
        let mid_a = 5_000.0 * seq[5_000];
        assert!((tail_a / mid_a - 1.0).abs() < 0.05, "{mid_a} -> {tail_a}");
    }

    #[test]
    fn majorant_is_nonincreasing_without_errors() {
        let p = quad_params(ErrorSchedule::Zero);
        let seq = majorant_sequence(&p, 500);
        for pair in seq.windows(2) {
            assert!(pair[1] <= pair[0]);
        }
    }

    #[test]
    fn dominates_exact_wrga_run_and_detects_violations() {
        let obj = quadratic_objective(Vector::new(vec![0.5, 0.5]).unwrap());
        let dict = Dictionary::canonical(2, NormKind::P(2.0)).unwrap();
        let mut cfg = AlgorithmConfig::new(AlgorithmKind::Wrga);
        cfg.max_iterations = 100;
        let mut trace = run_wrga(&obj, &dict, &cfg, Some(&Reference::analytic(0.0))).unwrap();

        let p = quad_params(ErrorSchedule::Zero);
        assert!(check_majorant_domination(&trace, &p).unwrap());

        // negative control: corrupt one step
        trace.records[10].value += 1.0;
        assert!(!check_majorant_domination(&trace, &p).unwrap());
    }

    #[test]
    fn missing_reference_is_an_error() {
        let obj = quadratic_objective(Vector::new(vec![0.5, 0.5]).unwrap());
        let dict = Dictionary::canonical(2, NormKind::P(2.0)).unwrap();
        let cfg = AlgorithmConfig::new(AlgorithmKind::Wrga);
        let trace = run_wrga(&obj, &dict, &cfg, None).unwrap();
        let p = quad_params(ErrorSchedule::Zero);
        assert!(check_majorant_domination(&trace, &p).is_err());
    }
}
