use crate::core::dictionary::Dictionary;
use crate::core::vector::Vector;

/// Atom-coefficient representation of an iterate. Coefficients are kept as
/// exact bookkeeping of the updates applied, so l1 weight (and hence hull
/// membership for the relaxed algorithms) is read off directly.
#[derive(Debug, Clone, PartialEq)]
pub struct Expansion {
    coeffs: Vec<f64>,
}

impl Expansion {
    pub fn zero(dict: &Dictionary) -> Self {
        Expansion {
            coeffs: vec![0.0; dict.len()],
        }
    }

    /// Nonzero (atom index, coefficient) pairs.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.coeffs
            .iter()
            .copied()
            .enumerate()
            .filter(|(_, c)| *c != 0.0)
    }

    pub fn coefficient(&self, atom: usize) -> f64 {
        self.coeffs[atom]
    }

    pub fn l1_weight(&self) -> f64 {
        self.coeffs.iter().map(|c| c.abs()).sum()
    }

    pub fn materialize(&self, dict: &Dictionary) -> Vector {
        let mut coords = vec![0.0; dict.dim()];
        for (i, c) in self.pairs() {
            for (out, a) in coords.iter_mut().zip(dict.atom(i).as_slice()) {
                *out += c * a;
            }
        }
        // coefficients are finite and atoms are unit norm, so this cannot fail
        Vector::new(coords).expect("materialized expansion is finite")
    }

    /// G <- (1 - w) G + lambda * atom. With w = lambda this is the convex
    /// combination update of WRGA/REGA; general w is the free relaxation.
    pub fn relax_update(&mut self, w: f64, lambda: f64, atom: usize) {
        for c in &mut self.coeffs {
            *c *= 1.0 - w;
        }
        self.coeffs[atom] += lambda;
    }
}
