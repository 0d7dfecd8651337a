use crate::error::{Error, Result};

const INV_PHI: f64 = 0.618_033_988_749_894_9;
const MIN_BRACKET: f64 = 1e-14;

#[derive(Debug, Clone, Copy)]
pub struct LineMin {
    pub x: f64,
    pub value: f64,
    pub certified_gap: f64,
    pub evals: usize,
}

/// Golden-section minimization of a convex function on [a, b] with a
/// certified additive gap. The bracket always contains a minimizer; with
/// best value v seen so far, unimodality bounds the remaining gap by
/// max(f(a), f(b)) - v. The bracket shrinks until that bound drops below
/// `target_gap` (never below `floor_gap`) or the bracket collapses.
pub fn golden_min(
    f: &mut dyn FnMut(f64) -> f64,
    a: f64,
    b: f64,
    target_gap: f64,
    floor_gap: f64,
) -> Result<LineMin> {
    debug_assert!(b >= a);
    let stop_gap = target_gap.max(floor_gap).max(0.0);

    let mut evals = 0usize;
    let mut eval = |x: f64, evals: &mut usize| -> Result<f64> {
        *evals += 1;
        let v = f(x);
        if !v.is_finite() {
            return Err(Error::NonFiniteEval { lambda: x });
        }
        Ok(v)
    };

    let mut lo = a;
    let mut hi = b;
    let mut flo = eval(lo, &mut evals)?;
    let mut fhi = eval(hi, &mut evals)?;

    let mut best_x = if flo <= fhi { lo } else { hi };
    let mut best_v = flo.min(fhi);

    if hi - lo < MIN_BRACKET {
        return Ok(LineMin {
            x: best_x,
            value: best_v,
            certified_gap: 0.0,
            evals,
        });
    }

    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = eval(x1, &mut evals)?;
    let mut f2 = eval(x2, &mut evals)?;

    loop {
        for (x, v) in [(x1, f1), (x2, f2)] {
            if v < best_v {
                best_v = v;
                best_x = x;
            }
        }
        let gap = (flo.max(fhi) - best_v).max(0.0);
        if gap <= stop_gap || hi - lo < MIN_BRACKET {
            return Ok(LineMin {
                x: best_x,
                value: best_v,
                certified_gap: gap,
                evals,
            });
        }
        if f1 < f2 {
            hi = x2;
            fhi = f2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = eval(x1, &mut evals)?;
        } else {
            lo = x1;
            flo = f1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = eval(x2, &mut evals)?;
        }
    }
}
