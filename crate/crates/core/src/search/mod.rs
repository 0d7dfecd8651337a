//! Inner oracles for the greedy steps: weak dictionary argmax, certified
//! inexact line search on [0, 1], 2-D free-relaxation search, joint
//! dictionary x step searches, and controlled error injection.

pub mod free;
pub mod golden;
pub mod inject;

use crate::core::{ConvexObjective, Dictionary, Vector};
use crate::error::{Error, Result};
use golden::golden_min;

pub use free::{free_relaxation_search, joint_dict_free_search};
pub use inject::{apply_error_mode, ParamBox};

/// Relative threshold below which the best greedy score is treated as
/// stationary (the greedy loops have no natural stopping rule; we need one).
pub const STATIONARY_TOL: f64 = 1e-13;

/// Outcome of one inner minimization: parameters, achieved value, and a
/// certified additive bound on the distance to the true minimum.
#[derive(Debug, Clone)]
pub struct SearchResult {
    /// Atom chosen by a joint search; `None` for fixed-direction searches.
    pub atom: Option<usize>,
    pub lambda: f64,
    /// Free-relaxation weight; `None` for [0, 1] convex-combination searches.
    pub w: Option<f64>,
    pub value: f64,
    pub certified_gap: f64,
    pub evals: usize,
    /// Final half-width of the (w, lambda) box, for free searches.
    pub box_half_width: Option<f64>,
    /// Error actually added on top of the search result by inject mode.
    pub injected_error: f64,
    /// Set when inject mode found no admissible perturbation (flat step).
    pub injection_flat: bool,
}

impl SearchResult {
    fn line(lambda: f64, value: f64, certified_gap: f64, evals: usize) -> Self {
        SearchResult {
            atom: None,
            lambda,
            w: None,
            value,
            certified_gap,
            evals,
            box_half_width: None,
            injected_error: 0.0,
            injection_flat: false,
        }
    }
}

/// Atom selected by a weak greedy step.
#[derive(Debug, Clone, Copy)]
pub struct AtomChoice {
    pub index: usize,
    pub score: f64,
    /// True when even the best score is numerically zero, i.e. the current
    /// iterate is stationary for this selection rule.
    pub stationary: bool,
}

fn weak_argmax_by_score(
    scores: impl Iterator<Item = f64>,
    t: f64,
    scale: f64,
) -> Result<AtomChoice> {
    let scores: Vec<f64> = scores.collect();
    if scores.is_empty() {
        return Err(Error::EmptyDictionary);
    }
    let mut best = 0usize;
    for (i, &s) in scores.iter().enumerate() {
        if s > scores[best] {
            best = i;
        }
    }
    let sup = scores[best];
    let stationary = sup < STATIONARY_TOL * (1.0 + scale);
    if stationary || t >= 1.0 {
        return Ok(AtomChoice {
            index: best,
            score: sup,
            stationary,
        });
    }
    // lowest index meeting the weakness threshold
    let threshold = t * sup;
    let index = scores
        .iter()
        .position(|&s| s >= threshold)
        .expect("the exact argmax always meets the threshold");
    Ok(AtomChoice {
        index,
        score: scores[index],
        stationary: false,
    })
}

/// WGAFR selection: atom phi with <-E'(G), phi> >= t * sup_g <-E'(G), g>.
/// Exact scan; for t = 1 the exact argmax with ties broken by lowest index,
/// for t < 1 the lowest-index atom above the threshold.
pub fn weak_argmax_frank_wolfe(
    gradient: &Vector,
    dict: &Dictionary,
    t: f64,
) -> Result<AtomChoice> {
    let scale = gradient.norm2();
    weak_argmax_by_score(
        dict.atoms().iter().map(|g| -gradient.dot(g)),
        t,
        scale,
    )
}

/// WRGA selection: same scan with score <-E'(G), g - G>.
pub fn weak_argmax_relative(
    gradient: &Vector,
    current: &Vector,
    dict: &Dictionary,
    t: f64,
) -> Result<AtomChoice> {
    let scale = gradient.norm2();
    let base = gradient.dot(current);
    weak_argmax_by_score(
        dict.atoms().iter().map(|g| -gradient.dot(g) + base),
        t,
        scale,
    )
}

pub(crate) fn floor_gap(base_value: f64) -> f64 {
    1e-12 * (1.0 + base_value.abs())
}

/// Minimize lambda -> E((1 - lambda) G + lambda phi) over [0, 1] with a
/// certified gap no worse than max(target_gap, floor).
pub fn line_search_unit_interval(
    obj: &ConvexObjective,
    current: &Vector,
    atom: &Vector,
    target_gap: f64,
) -> Result<SearchResult> {
    let mut f = |lambda: f64| obj.eval(&current.blend(lambda, lambda, atom));
    let base = f(0.0);
    let out = golden_min(&mut f, 0.0, 1.0, target_gap, floor_gap(base))?;
    Ok(SearchResult::line(out.x, out.value, out.certified_gap, out.evals + 1))
}

/// REGA step: best line search over every atom, ties broken by lowest atom
/// index. Each per-atom search gets the full target gap, so the certified
/// gap of the winner certifies the joint infimum too.
pub fn joint_dict_line_search(
    obj: &ConvexObjective,
    current: &Vector,
    dict: &Dictionary,
    target_gap: f64,
) -> Result<SearchResult> {
    if dict.is_empty() {
        return Err(Error::EmptyDictionary);
    }
    let mut best: Option<SearchResult> = None;
    let mut total_evals = 0usize;
    for i in 0..dict.len() {
        let mut res = line_search_unit_interval(obj, current, dict.atom(i), target_gap)?;
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
