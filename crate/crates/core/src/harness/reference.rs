use crate::algorithms::Reference;
use crate::core::{ConvexObjective, Dictionary, Vector};
use crate::error::{Error, Result};
use crate::harness::config_file::BRefMode;

/// Resolve the reference optimum b = inf over A1(D) of E for a run.
pub fn compute_reference(
    mode: BRefMode,
    obj: &ConvexObjective,
    dict: &Dictionary,
) -> Result<Option<Reference>> {
    match mode {
        BRefMode::None => Ok(None),
        BRefMode::Analytic => analytic_reference(obj).map(Some),
        BRefMode::BruteForce => brute_force_reference(obj, dict).map(Some),
    }
}

/// b = 0 for a quadratic whose target lies inside the unit l1 ball (then f
/// itself is in the hull of any canonical-like dictionary and E(f) = 0).
fn analytic_reference(obj: &ConvexObjective) -> Result<Reference> {
    match obj {
        ConvexObjective::Quadratic { target } => {
            let l1: f64 = target.as_slice().iter().map(|c| c.abs()).sum();
            if l1 <= 1.0 + 1e-12 {
                Ok(Reference::analytic(0.0))
            } else {
                Err(Error::AnalyticReferenceUnavailable(l1))
            }
        }
        _ => Err(Error::Config {
            key: "bref.mode".into(),
            message: "analytic reference only covers quadratic objectives".into(),
        }),
    }
}

const COARSE_PTS: usize = 41;
const REFINE_PTS: usize = 21;
const REFINE_ROUNDS: usize = 5;

/// Dense grid over the coefficient simplex (one coefficient in [-1, 1] per
/// atom pair, l1 weight at most 1), followed by local refinement around the
/// best grid point. Trustworthy only for small dictionaries, so it is
/// limited to 3 pairs.
fn brute_force_reference(obj: &ConvexObjective, dict: &Dictionary) -> Result<Reference> {
    let reps = dict.representatives();
    let k = reps.len();
    if k > 3 {
        return Err(Error::ReferenceTooLarge(k));
    }
    let atoms: Vec<&Vector> = reps.iter().map(|&i| dict.atom(i)).collect();
    let dim = dict.dim();

    let eval_coeffs = |c: &[f64]| -> f64 {
        let mut coords = vec![0.0; dim];
        for (ci, a) in c.iter().zip(&atoms) {
            for (out, ai) in coords.iter_mut().zip(a.as_slice()) {
                *out += ci * ai;
            }
        }
        obj.eval(&Vector::new(coords).expect("grid point is finite"))
    };

    let mut center = vec![0.0; k];
    let mut half = 1.0f64;
    let mut best_c = center.clone();
    let mut best_v = eval_coeffs(&best_c);

    for round in 0..=REFINE_ROUNDS {
        let pts = if round == 0 { COARSE_PTS } else { REFINE_PTS };
        let mut idx = vec![0usize; k];
        let mut c = vec![0.0f64; k];
        'grid: loop {
            for d in 0..k {
                let frac = idx[d] as f64 / (pts - 1) as f64;
                c[d] = (center[d] - half + 2.0 * half * frac).clamp(-1.0, 1.0);
            }
            let l1: f64 = c.iter().map(|x| x.abs()).sum();
            if l1 <= 1.0 + 1e-12 {
                let v = eval_coeffs(&c);
                if v < best_v {
                    best_v = v;
                    best_c = c.clone();
                }
            }
            // odometer increment
            for d in 0..k {
                idx[d] += 1;
                if idx[d] < pts {
                    continue 'grid;
                }
                idx[d] = 0;
            }
            break;
        }
        center = best_c.clone();
        half /= 5.0;
    }

    Ok(Reference {
        value: best_v,
        provenance: format!(
            "brute-force grid over {k}-pair coefficient l1-ball, {COARSE_PTS} pts/axis + {REFINE_ROUNDS} refinements (final step {:.1e})",
            2.0 * half / (REFINE_PTS - 1) as f64
        ),
    })
}
