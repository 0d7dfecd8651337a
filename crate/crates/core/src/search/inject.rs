use rand::Rng;

use crate::core::ErrorMode;
use crate::error::{Error, Result};
use crate::search::SearchResult;

/// Feasible parameter region of the search whose result is being perturbed.
#[derive(Debug, Clone, Copy)]
pub struct ParamBox {
    pub lambda: (f64, f64),
    /// Present only for free-relaxation searches.
    pub w: Option<(f64, f64)>,
}

impl ParamBox {
    pub fn unit_interval() -> Self {
        ParamBox {
            lambda: (0.0, 1.0),
            w: None,
        }
    }

    pub fn square(half_width: f64) -> Self {
        ParamBox {
            lambda: (-half_width, half_width),
            w: Some((-half_width, half_width)),
        }
    }
}

/// Realize the delta error budget on a search result.
///
/// In `Tolerance` mode the slack is the search's own inexactness: the
/// result passes through unchanged, after checking that its certified gap
/// actually fits the budget. In `Inject` mode the returned parameters are
/// perturbed along a seeded random axis direction and rescaled by bisection
/// until the objective value exceeds the unperturbed one by an amount in
/// [delta/2, delta]; if no direction inside the box reaches delta/2 the
/// result is returned unperturbed with the flat flag set.
pub fn apply_error_mode(
    mut result: SearchResult,
    delta: f64,
    mode: ErrorMode,
    rng: &mut impl Rng,
    eval: &mut dyn FnMut(f64, Option<f64>) -> f64,
) -> Result<SearchResult> {
    let bounds = match result.box_half_width {
        Some(h) => ParamBox::square(h),
        None => ParamBox::unit_interval(),
    };
    if delta == 0.0 {
        return Ok(result);
    }
    match mode {
        ErrorMode::Tolerance => {
            if result.certified_gap > delta + 1e-12 {
                return Err(Error::GapContract {
                    gap: result.certified_gap,
                    tolerance: delta,
                });
            }
            Ok(result)
        }
        ErrorMode::Inject => {
            let base = result.value;
            let lo = 0.5 * delta;
            let hi = delta;

            // candidate axes: (d_lambda, d_w); order and signs are seeded
            let mut axes: Vec<(f64, f64)> = vec![(1.0, 0.0), (-1.0, 0.0)];
            if bounds.w.is_some() {
                axes.push((0.0, 1.0));
                axes.push((0.0, -1.0));
            }
            for i in (1..axes.len()).rev() {
                let j = rng.gen_range(0..=i);
                axes.swap(i, j);
            }

            let w0 = result.w;
            let value_at = |s: f64, axis: (f64, f64), eval: &mut dyn FnMut(f64, Option<f64>) -> f64| {
                let l = result.lambda + s * axis.0;
                let w = w0.map(|w| w + s * axis.1);
                eval(l, w)
            };

            for axis in axes {
                // farthest admissible step along this axis inside the box
                let s_max_lambda = if axis.0 > 0.0 {
                    bounds.lambda.1 - result.lambda
                } else if axis.0 < 0.0 {
                    result.lambda - bounds.lambda.0
                } else {
                    f64::INFINITY
                };
                let s_max_w = match (bounds.w, w0) {
                    (Some((_, whi)), Some(w)) if axis.1 > 0.0 => whi - w,
                    (Some((wlo, _)), Some(w)) if axis.1 < 0.0 => w - wlo,
                    _ => f64::INFINITY,
                };
                let s_max = s_max_lambda.min(s_max_w);
                if !(s_max > 0.0) {
                    continue;
                }
                let s_max = if s_max.is_finite() { s_max } else { 1.0 };
                let inc_max = value_at(s_max, axis, eval) - base;
                if inc_max < lo {
                    continue;
                }
                // bisect for an increase inside [delta/2, delta]
                let mut a = 0.0f64;
                let mut b = s_max;
                let mut s = s_max;
                let mut inc = inc_max;
                for _ in 0..200 {
                    if inc >= lo && inc <= hi {
                        break;
                    }
                    let mid = 0.5 * (a + b);
                    let mid_inc = value_at(mid, axis, eval) - base;
                    if mid_inc > hi {
                        b = mid;
                    } else if mid_inc < lo {
                        a = mid;
                    } else {
                        s = mid;
                        inc = mid_inc;
                        break;
                    }
                    s = mid;
                    inc = mid_inc;
                }
                if inc < lo || inc > hi {
                    continue;
                }
                result.lambda += s * axis.0;
                if let (Some(w), true) = (result.w, axis.1 != 0.0) {
                    result.w = Some(w + s * axis.1);
                }
                result.value = base + inc;
                result.injected_error = inc;
                result.certified_gap += inc;
                return Ok(result);
            }

            result.injection_flat = true;
            result.injected_error = 0.0;
            Ok(result)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::{quadratic_objective, Vector};
    use crate::search::line_search_unit_interval;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn exact_line_result() -> (crate::core::ConvexObjective, Vector, Vector, SearchResult) {
        let obj = quadratic_objective(Vector::new(vec![0.5, 0.5]).unwrap());
        let zero = Vector::zeros(2).unwrap();
        let e1 = Vector::new(vec![1.0, 0.0]).unwrap();
        let res = line_search_unit_interval(&obj, &zero, &e1, 0.0).unwrap();
        (obj, zero, e1, res)
    }

    #[test]
    fn zero_delta_is_identity() {
        let (obj, zero, e1, res) = exact_line_result();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut eval = |l: f64, _w: Option<f64>| obj.eval(&zero.blend(l, l, &e1));
        for mode in [ErrorMode::Tolerance, ErrorMode::Inject] {
            let out = apply_error_mode(res.clone(), 0.0, mode, &mut rng, &mut eval).unwrap();
            assert_eq!(out.lambda, res.lambda);
            assert_eq!(out.value, res.value);
            assert_eq!(out.injected_error, 0.0);
        }
    }

    #[test]
    fn tolerance_checks_certified_gap() {
        let (_, _, _, mut res) = exact_line_result();
        res.certified_gap = 0.5;
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut eval = |_: f64, _: Option<f64>| 0.0;
        let err = apply_error_mode(res, 0.01, ErrorMode::Tolerance, &mut rng, &mut eval);
        assert!(matches!(err, Err(Error::GapContract { .. })));
    }

    #[test]
    fn inject_lands_in_half_delta_band() {
        let (obj, zero, e1, res) = exact_line_result();
        let exact = res.value;
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut eval = |l: f64, _w: Option<f64>| obj.eval(&zero.blend(l, l, &e1));
        let delta = 0.01;
        let out = apply_error_mode(res, delta, ErrorMode::Inject, &mut rng, &mut eval).unwrap();
        let excess = out.value - exact;
        assert!(excess >= 0.5 * delta - 1e-12 && excess <= delta + 1e-12, "excess = {excess}");
        assert!((0.0..=1.0).contains(&out.lambda));
    }

    #[test]
    fn inject_on_flat_direction_is_noop() {
        let (_, _, _, mut res) = exact_line_result();
        res.certified_gap = 0.0;
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut eval = |_: f64, _: Option<f64>| 1.0; // constant objective slice
        res.value = 1.0;
        let out = apply_error_mode(res, 0.01, ErrorMode::Inject, &mut rng, &mut eval).unwrap();
        assert!(out.injection_flat);
        assert_eq!(out.injected_error, 0.0);
    }
}
