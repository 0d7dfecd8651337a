//! The four greedy loops, exact and delta-approximate, producing run traces.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::core::{
    AlgorithmConfig, AlgorithmKind, ConvexObjective, Dictionary, ErrorMode, Expansion,
    IterationRecord, RunTrace, Vector,
};
use crate::error::{Error, Result};
use crate::search::{
    apply_error_mode, free_relaxation_search, joint_dict_free_search, joint_dict_line_search,
    line_search_unit_interval, weak_argmax_frank_wolfe, weak_argmax_relative, SearchResult,
};

/// Reference optimum b = inf over the hull (or the sublevel set) of E,
/// supplied by the caller together with how it was obtained.
#[derive(Debug, Clone)]
pub struct Reference {
    pub value: f64,
    pub provenance: String,
}

impl Reference {
    pub fn analytic(value: f64) -> Self {
        Reference {
            value,
            provenance: "analytic".into(),
        }
    }
}

/// Loop state: the iterate as an expansion plus cached point and value.
struct GreedyState {
    expansion: Expansion,
    point: Vector,
    value: f64,
}

pub fn run_wrga(
    obj: &ConvexObjective,
    dict: &Dictionary,
    cfg: &AlgorithmConfig,
    b_ref: Option<&Reference>,
) -> Result<RunTrace> {
    run_algorithm(obj, dict, cfg, b_ref)
}

pub fn run_rega(
    obj: &ConvexObjective,
    dict: &Dictionary,
    cfg: &AlgorithmConfig,
    b_ref: Option<&Reference>,
) -> Result<RunTrace> {
    run_algorithm(obj, dict, cfg, b_ref)
}

pub fn run_wgafr(
    obj: &ConvexObjective,
    dict: &Dictionary,
    cfg: &AlgorithmConfig,
    b_ref: Option<&Reference>,
) -> Result<RunTrace> {
    run_algorithm(obj, dict, cfg, b_ref)
}

pub fn run_egafr(
    obj: &ConvexObjective,
    dict: &Dictionary,
    cfg: &AlgorithmConfig,
    b_ref: Option<&Reference>,
) -> Result<RunTrace> {
    run_algorithm(obj, dict, cfg, b_ref)
}

/// Outcome of a tolerant run: the trace collected so far, plus the error
/// that aborted it, if any.
pub struct RunOutcome {
    pub trace: RunTrace,
    pub error: Option<Error>,
}

/// Run the algorithm named in the config. One seeded rng drives every
/// random decision (only inject-mode perturbations use it), so traces are
/// bit-reproducible from the config alone.
pub fn run_algorithm(
    obj: &ConvexObjective,
    dict: &Dictionary,
    cfg: &AlgorithmConfig,
    b_ref: Option<&Reference>,
) -> Result<RunTrace> {
    let outcome = run_algorithm_tolerant(obj, dict, cfg, b_ref)?;
    match outcome.error {
        Some(err) => Err(err),
        None => Ok(outcome.trace),
    }
}

/// Like [`run_algorithm`], but a search-layer failure mid-run returns the
/// partial trace together with the error instead of discarding it.
pub fn run_algorithm_tolerant(
    obj: &ConvexObjective,
    dict: &Dictionary,
    cfg: &AlgorithmConfig,
    b_ref: Option<&Reference>,
) -> Result<RunOutcome> {
    cfg.validate()?;
    if obj.dim() != dict.dim() {
        return Err(Error::Config {
            key: "objective".into(),
            message: format!(
                "objective dimension {} does not match dictionary dimension {}",
                obj.dim(),
                dict.dim()
            ),
        });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut state = GreedyState {
        expansion: Expansion::zero(dict),
        point: Vector::zeros(dict.dim())?,
        value: 0.0,
    };
    state.value = obj.eval(&state.point);
    let initial_value = state.value;

    let mut records = Vec::with_capacity(cfg.max_iterations);
    let mut stationary = false;
    let mut abort: Option<Error> = None;

    for m in 1..=cfg.max_iterations {
        let delta = cfg.schedule.delta(m - 1);
        if stationary {
            push_noop(&mut records, m, delta, &state, b_ref);
            continue;
        }
        // in inject mode the search itself runs to full precision and the
        // budget is spent adversarially afterwards
        let search_target = match cfg.error_mode {
            ErrorMode::Tolerance => delta,
            ErrorMode::Inject => 0.0,
        };

        let step = match step_once(obj, dict, cfg, &mut rng, &state, delta, search_target) {
            Ok(step) => step,
            Err(source) => {
                abort = Some(Error::AtIteration {
                    iteration: m,
                    source: Box::new(source),
                });
                break;
            }
        };

        let (atom, result) = match step {
            Some(step) => step,
            None => {
                stationary = true;
                push_noop(&mut records, m, delta, &state, b_ref);
                continue;
            }
        };

        let w_used = result.w.unwrap_or(result.lambda);
        state.expansion.relax_update(w_used, result.lambda, atom);
        state.point = state.expansion.materialize(dict);
        state.value = obj.eval(&state.point);

        records.push(IterationRecord {
            m,
            atom: Some(atom),
            lambda: result.lambda,
            w: result.w,
            value: state.value,
            gap: b_ref.map(|r| state.value - r.value),
            delta_budget: delta,
            injected_error: result.injected_error,
            expansion: state.expansion.clone(),
        });
    }

    Ok(RunOutcome {
        trace: RunTrace {
            config: cfg.clone(),
            objective_desc: obj.descriptor(),
            b_ref: b_ref.map(|r| r.value),
            b_ref_provenance: b_ref
                .map(|r| r.provenance.clone())
                .unwrap_or_else(|| "none".into()),
            initial_value,
            records,
        },
        error: abort,
    })
}

/// One greedy iteration. Returns `None` when the selection rule certifies
/// stationarity and the run should coast to the iteration budget as no-ops.
fn step_once(
    obj: &ConvexObjective,
    dict: &Dictionary,
    cfg: &AlgorithmConfig,
    rng: &mut ChaCha8Rng,
    state: &GreedyState,
    delta: f64,
    search_target: f64,
) -> Result<Option<(usize, SearchResult)>> {
    let current = &state.point;
    match cfg.algorithm {
        AlgorithmKind::Wrga => {
            let grad = obj.grad(current);
            let choice = weak_argmax_relative(&grad, current, dict, cfg.weakness)?;
            if choice.stationary {
                return Ok(None);
            }
            let atom = dict.atom(choice.index);
            let res = line_search_unit_interval(obj, current, atom, search_target)?;
            let mut eval = |l: f64, _w: Option<f64>| obj.eval(&current.blend(l, l, atom));
            let res = apply_error_mode(res, delta, cfg.error_mode, rng, &mut eval)?;
            Ok(Some((choice.index, res)))
        }
        AlgorithmKind::Rega => {
            let res = joint_dict_line_search(obj, current, dict, search_target)?;
            let atom_idx = res.atom.expect("joint search always selects an atom");
            if delta == 0.0 && res.value >= state.value - 1e-15 * (1.0 + state.value.abs()) {
                return Ok(None);
            }
            let atom = dict.atom(atom_idx);
            let mut eval = |l: f64, _w: Option<f64>| obj.eval(&current.blend(l, l, atom));
            let res = apply_error_mode(res, delta, cfg.error_mode, rng, &mut eval)?;
            Ok(Some((atom_idx, res)))
        }
        AlgorithmKind::Wgafr => {
            let grad = obj.grad(current);
            let choice = weak_argmax_frank_wolfe(&grad, dict, cfg.weakness)?;
            if choice.stationary {
                return Ok(None);
            }
            let atom = dict.atom(choice.index);
            let res = free_relaxation_search(obj, current, atom, search_target, cfg.w_max)?;
            let mut eval = |l: f64, w: Option<f64>| {
                obj.eval(&current.blend(w.unwrap_or(0.0), l, atom))
            };
            let res = apply_error_mode(res, delta, cfg.error_mode, rng, &mut eval)?;
            Ok(Some((choice.index, res)))
        }
        AlgorithmKind::Egafr => {
            let res = joint_dict_free_search(obj, current, dict, search_target, cfg.w_max)?;
            let atom_idx = res.atom.expect("joint search always selects an atom");
            if delta == 0.0 && res.value >= state.value - 1e-15 * (1.0 + state.value.abs()) {
                return Ok(None);
            }
            let atom = dict.atom(atom_idx);
            let mut eval = |l: f64, w: Option<f64>| {
                obj.eval(&current.blend(w.unwrap_or(0.0), l, atom))
            };
            let res = apply_error_mode(res, delta, cfg.error_mode, rng, &mut eval)?;
            Ok(Some((atom_idx, res)))
        }
    }
}

fn push_noop(
    records: &mut Vec<IterationRecord>,
    m: usize,
    delta: f64,
    state: &GreedyState,
    b_ref: Option<&Reference>,
) {
    records.push(IterationRecord {
        m,
        atom: None,
        lambda: 0.0,
        w: None,
        value: state.value,
        gap: b_ref.map(|r| state.value - r.value),
        delta_budget: delta,
        injected_error: 0.0,
        expansion: state.expansion.clone(),
    });
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::{quadratic_objective, ErrorSchedule, NormKind};

    fn quad_half() -> (ConvexObjective, Dictionary) {
        let obj = quadratic_objective(Vector::new(vec![0.5, 0.5]).unwrap());
        let dict = Dictionary::canonical(2, NormKind::P(2.0)).unwrap();
        (obj, dict)
    }

    #[test]
    fn wrga_golden_trace() {
        let (obj, dict) = quad_half();
        let mut cfg = AlgorithmConfig::new(AlgorithmKind::Wrga);
        cfg.max_iterations = 2;
        let trace = run_wrga(&obj, &dict, &cfg, Some(&Reference::analytic(0.0))).unwrap();
        let vals = trace.values();
        assert!((vals[0] - 0.5).abs() < 1e-12);
        assert!((vals[1] - 0.25).abs() < 1e-7);
        assert!((vals[2] - 0.05).abs() < 1e-7);
    }

    #[test]
    fn wrga_stationary_at_origin() {
        let obj = quadratic_objective(Vector::zeros(2).unwrap());
        let dict = Dictionary::canonical(2, NormKind::P(2.0)).unwrap();
        let mut cfg = AlgorithmConfig::new(AlgorithmKind::Wrga);
        cfg.max_iterations = 5;
        let trace = run_wrga(&obj, &dict, &cfg, None).unwrap();
        assert_eq!(trace.records.len(), 5);
        for r in &trace.records {
            assert_eq!(r.atom, None);
            assert_eq!(r.value, 0.0);
        }
    }

    #[test]
    fn wrga_delta_run_stays_within_budget_of_exact() {
        let (obj, dict) = quad_half();
        let mut exact = AlgorithmConfig::new(AlgorithmKind::Wrga);
        exact.max_iterations = 30;
        let exact_trace = run_wrga(&obj, &dict, &exact, None).unwrap();

        let mut noisy = exact.clone();
        noisy.schedule = ErrorSchedule::Power { c: 0.01, q: 2.0 };
        noisy.error_mode = ErrorMode::Inject;
        noisy.seed = 42;
        let noisy_trace = run_wrga(&obj, &dict, &noisy, None).unwrap();

        let mut budget = 0.0;
        for (m, (e, n)) in exact_trace
            .values()
            .iter()
            .zip(noisy_trace.values())
            .enumerate()
            .skip(1)
        {
            budget += noisy.schedule.delta(m - 1);
            assert!(n <= e + budget + 1e-9, "m = {m}: {n} vs {e} + {budget}");
        }
    }

    #[test]
    fn rega_matches_wrga_on_symmetric_instance() {
        let (obj, dict) = quad_half();
        let mut cfg = AlgorithmConfig::new(AlgorithmKind::Rega);
        cfg.max_iterations = 1;
        let trace = run_rega(&obj, &dict, &cfg, None).unwrap();
        assert!((trace.records[0].value - 0.25).abs() < 1e-7);
    }

    #[test]
    fn rega_stalls_at_hull_optimum() {
        let obj = quadratic_objective(Vector::new(vec![2.0, 0.0]).unwrap());
        let dict = Dictionary::canonical(2, NormKind::P(2.0)).unwrap();
        let mut cfg = AlgorithmConfig::new(AlgorithmKind::Rega);
        cfg.max_iterations = 50;
        let trace = run_rega(&obj, &dict, &cfg, None).unwrap();
        // b = inf over the unit l1 ball is 1, attained at (1, 0)
        let last = trace.final_value();
        assert!(last >= 1.0 - 1e-9);
        assert!(last <= 1.0 + 1e-6, "last = {last}");
    }

    #[test]
    fn rega_exact_trace_is_monotone() {
        let (obj, dict) = quad_half();
        let mut cfg = AlgorithmConfig::new(AlgorithmKind::Rega);
        cfg.max_iterations = 20;
        let trace = run_rega(&obj, &dict, &cfg, None).unwrap();
        let vals = trace.values();
        for pair in vals.windows(2) {
            assert!(pair[1] <= pair[0] + 1e-10);
        }
    }

    #[test]
    fn wgafr_reaches_optimum_in_two_steps() {
        let (obj, dict) = quad_half();
        let mut cfg = AlgorithmConfig::new(AlgorithmKind::Wgafr);
        cfg.max_iterations = 2;
        let trace = run_wgafr(&obj, &dict, &cfg, None).unwrap();
        assert!(trace.final_value() <= 1e-8, "E(G_2) = {}", trace.final_value());
    }

    #[test]
    fn wgafr_minimizes_outside_the_hull() {
        let obj = quadratic_objective(Vector::new(vec![2.0, 0.0]).unwrap());
        let dict = Dictionary::canonical(2, NormKind::P(2.0)).unwrap();
        let mut cfg = AlgorithmConfig::new(AlgorithmKind::Wgafr);
        cfg.max_iterations = 5;
        cfg.w_max = 1.0;
        let trace = run_wgafr(&obj, &dict, &cfg, None).unwrap();
        assert!(trace.final_value() <= 1e-8, "E = {}", trace.final_value());
    }

    #[test]
    fn wgafr_delta_one_respects_sublevel_bound() {
        let (obj, dict) = quad_half();
        let mut cfg = AlgorithmConfig::new(AlgorithmKind::Wgafr);
        cfg.max_iterations = 20;
        cfg.schedule = ErrorSchedule::Constant(1.0);
        cfg.error_mode = ErrorMode::Inject;
        cfg.seed = 9;
        let trace = run_wgafr(&obj, &dict, &cfg, None).unwrap();
        let e0 = trace.initial_value;
        for v in trace.values() {
            assert!(v <= e0 + 1.0 + 1e-10, "E = {v} vs E(0)+1 = {}", e0 + 1.0);
        }
    }

    #[test]
    fn egafr_matches_wgafr_on_canonical_quadratic() {
        let (obj, dict) = quad_half();
        let mut cfg = AlgorithmConfig::new(AlgorithmKind::Egafr);
        cfg.max_iterations = 2;
        let e = run_egafr(&obj, &dict, &cfg, None).unwrap();
        cfg.algorithm = AlgorithmKind::Wgafr;
        let w = run_wgafr(&obj, &dict, &cfg, None).unwrap();
        for (a, b) in e.values().iter().zip(w.values()) {
            assert!((a - b).abs() < 1e-6, "{a} vs {b}");
        }
        assert!(e.final_value() <= 1e-8);
    }

    #[test]
    fn egafr_stationary_at_origin() {
        let obj = quadratic_objective(Vector::zeros(2).unwrap());
        let dict = Dictionary::canonical(2, NormKind::P(2.0)).unwrap();
        let mut cfg = AlgorithmConfig::new(AlgorithmKind::Egafr);
        cfg.max_iterations = 3;
        let trace = run_egafr(&obj, &dict, &cfg, None).unwrap();
        for r in &trace.records {
            assert_eq!(r.value, 0.0);
        }
    }

    #[test]
    fn hull_membership_of_relaxed_iterates() {
        let (obj, dict) = quad_half();
        for kind in [AlgorithmKind::Wrga, AlgorithmKind::Rega] {
            let mut cfg = AlgorithmConfig::new(kind);
            cfg.max_iterations = 50;
            let trace = run_algorithm(&obj, &dict, &cfg, None).unwrap();
            for r in &trace.records {
                assert!(r.expansion.l1_weight() <= 1.0 + 1e-10);
            }
        }
    }

    #[test]
    fn determinism_bitwise() {
        let (obj, dict) = quad_half();
        let mut cfg = AlgorithmConfig::new(AlgorithmKind::Wrga);
        cfg.max_iterations = 20;
        cfg.schedule = ErrorSchedule::Power { c: 0.01, q: 2.0 };
        cfg.error_mode = ErrorMode::Inject;
        cfg.seed = 1234;
        let a = run_wrga(&obj, &dict, &cfg, None).unwrap();
        let b = run_wrga(&obj, &dict, &cfg, None).unwrap();
        for (x, y) in a.records.iter().zip(&b.records) {
            assert_eq!(x.value.to_bits(), y.value.to_bits());
            assert_eq!(x.lambda.to_bits(), y.lambda.to_bits());
        }
    }
}
