//! Brute-force oracles shared by the integration tests. These deliberately
//! avoid the library's own search code so they can certify it.

#![allow(dead_code)]

use greedyco::core::{ConvexObjective, Dictionary, Vector};

/// Dense-grid minimum of `f` over [a, b].
pub fn grid_min_1d(f: impl Fn(f64) -> f64, a: f64, b: f64, points: usize) -> (f64, f64) {
    let mut best_x = a;
    let mut best_v = f(a);
    for i in 1..points {
        let x = a + (b - a) * i as f64 / (points - 1) as f64;
        let v = f(x);
        if v < best_v {
            best_v = v;
            best_x = x;
        }
    }
    (best_x, best_v)
}

/// Dense-grid minimum of `f` over [a, b] x [a, b].
pub fn grid_min_2d(
    f: impl Fn(f64, f64) -> f64,
    a: f64,
    b: f64,
    points: usize,
) -> ((f64, f64), f64) {
    let mut best = ((a, a), f(a, a));
    for i in 0..points {
        let x = a + (b - a) * i as f64 / (points - 1) as f64;
        for j in 0..points {
            let y = a + (b - a) * j as f64 / (points - 1) as f64;
            let v = f(x, y);
            if v < best.1 {
                best = ((x, y), v);
            }
        }
    }
    best
}

/// Objective value along the convex-combination update
/// (1 - lambda) G + lambda phi.
pub fn blend_value(obj: &ConvexObjective, current: &Vector, atom: &Vector, lambda: f64) -> f64 {
    obj.eval(&current.blend(lambda, lambda, atom))
}

/// Objective value along the free-relaxation update (1 - w) G + lambda phi.
pub fn free_value(
    obj: &ConvexObjective,
    current: &Vector,
    atom: &Vector,
    w: f64,
    lambda: f64,
) -> f64 {
    obj.eval(&current.blend(w, lambda, atom))
}

/// Target vector f = sum of c_i * atom_i with sum |c_i| = 1, guaranteeing
/// f lies in the unit hull of the dictionary (so inf over the hull is 0 for
/// the squared-distance objective).
pub fn hull_point(dict: &Dictionary, coeffs: &[f64]) -> Vector {
    let total: f64 = coeffs.iter().map(|c| c.abs()).sum();
    assert!(total > 0.0);
    let mut coords = vec![0.0; dict.dim()];
    for (i, c) in coeffs.iter().enumerate() {
        for (out, a) in coords.iter_mut().zip(dict.atom(2 * i).as_slice()) {
            *out += c / total * a;
        }
    }
    Vector::new(coords).unwrap()
}
