use crate::core::{ConvexObjective, Dictionary, Vector};
use crate::error::{Error, Result};
use crate::search::golden::golden_min;
use crate::search::{floor_gap, SearchResult};

const MAX_SWEEPS: usize = 200;
const MAX_BOX_DOUBLINGS: u32 = 10;
const EDGE_FRACTION: f64 = 1.0 - 1e-9;

/// WGAFR step (2): minimize (w, lambda) -> E((1 - w) G + lambda phi) over
/// the box [-W, W]^2 by alternating certified 1-D convex searches (each
/// slice is convex with the other variable fixed). If a slice minimizer
/// lands on the box boundary the box doubles, up to 2^10 times, and the
/// search restarts; a persistent boundary hit means the objective is not
/// coercive along the search plane and is reported as an error.
pub fn free_relaxation_search(
    obj: &ConvexObjective,
    current: &Vector,
    atom: &Vector,
    target_gap: f64,
    w_max: f64,
) -> Result<SearchResult> {
    let base = obj.eval(current);
    let floor = floor_gap(base);
    let slice_stop = (target_gap / 4.0).max(floor);
    let mut evals = 0usize;

    let mut half = w_max;
    for doubling in 0..=MAX_BOX_DOUBLINGS {
        let mut w = 0.0f64;
        let mut lambda = 0.0f64;
        let mut value = base;
        evals += 1;
        let mut gap_lambda = 0.0f64;
        let mut gap_w = 0.0f64;
        let mut improvement = f64::INFINITY;
        let mut hit_edge = false;

        for _ in 0..MAX_SWEEPS {
            let prev = value;

            let mut f_lambda = |l: f64| obj.eval(&current.blend(w, l, atom));
            let lm = golden_min(&mut f_lambda, -half, half, target_gap / 4.0, floor)?;
            evals += lm.evals;
            if lm.value < value {
                lambda = lm.x;
                value = lm.value;
            }
            gap_lambda = lm.certified_gap;

            let mut f_w = |wv: f64| obj.eval(&current.blend(wv, lambda, atom));
            let wm = golden_min(&mut f_w, -half, half, target_gap / 4.0, floor)?;
            evals += wm.evals;
            if wm.value < value {
                w = wm.x;
                value = wm.value;
            }
            gap_w = wm.certified_gap;

            if lambda.abs() >= EDGE_FRACTION * half || w.abs() >= EDGE_FRACTION * half {
                hit_edge = true;
                break;
            }
            improvement = prev - value;
            if improvement < slice_stop && gap_lambda < slice_stop && gap_w < slice_stop {
                break;
            }
        }

        if hit_edge {
            if doubling == MAX_BOX_DOUBLINGS {
                return Err(Error::UnboundedDirection { half_width: half });
            }
            half *= 2.0;
            continue;
        }

        let certified = gap_lambda + gap_w + improvement.max(0.0);
        return Ok(SearchResult {
            atom: None,
            lambda,
            w: Some(w),
            value,
            certified_gap: certified,
            evals,
            box_half_width: Some(half),
            injected_error: 0.0,
            injection_flat: false,
        });
    }
    unreachable!("loop either returns or errors on the last doubling")
}

/// EGAFR step: free-relaxation search per atom, best over atoms, ties
/// broken by lowest atom index.
pub fn joint_dict_free_search(
    obj: &ConvexObjective,
    current: &Vector,
    dict: &Dictionary,
    target_gap: f64,
    w_max: f64,
) -> Result<SearchResult> {
    if dict.is_empty() {
        return Err(Error::EmptyDictionary);
    }
    let mut best: Option<SearchResult> = None;
    let mut total_evals = 0usize;
    for i in 0..dict.len() {
        let mut res = free_relaxation_search(obj, current, dict.atom(i), target_gap, w_max)?;
        total_evals += res.evals;
        res.atom = Some(i);
        match &best {
            Some(b) if res.value >= b.value => {}
            _ => best = Some(res),
        }
    }
    let mut best = best.expect("dictionary is nonempty");
    best.evals = total_evals;
    Ok(best)
}
