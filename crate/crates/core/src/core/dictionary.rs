use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::core::vector::{NormKind, Vector};
use crate::error::{Error, Result};

const UNIT_NORM_TOL: f64 = 1e-12;

/// Finite symmetric set of unit-norm atoms. For every atom g the negation
/// -g is stored explicitly and the pairing index is recorded, so symmetry
/// is a lookup rather than a geometric search.
#[derive(Debug, Clone)]
pub struct Dictionary {
    atoms: Vec<Vector>,
    norm_kind: NormKind,
    pairing: Vec<usize>,
}

impl Dictionary {
    fn from_pairs(pairs: Vec<Vector>, norm_kind: NormKind) -> Result<Self> {
        let mut atoms = Vec::with_capacity(pairs.len() * 2);
        let mut pairing = Vec::with_capacity(pairs.len() * 2);
        for v in pairs {
            let idx = atoms.len();
            pairing.push(idx + 1);
            pairing.push(idx);
            let neg = v.neg();
            atoms.push(v);
            atoms.push(neg);
        }
        let dict = Dictionary {
            atoms,
            norm_kind,
            pairing,
        };
        dict.validate()?;
        Ok(dict)
    }

    fn validate(&self) -> Result<()> {
        if self.atoms.len() < 2 || self.atoms.len() % 2 != 0 {
            return Err(Error::BadAtomCount(self.atoms.len()));
        }
        for (index, atom) in self.atoms.iter().enumerate() {
            let norm = atom.norm(self.norm_kind);
            if (norm - 1.0).abs() > UNIT_NORM_TOL {
                return Err(Error::AtomNotUnit { index, norm });
            }
        }
        Ok(())
    }

    /// The canonical instance {±e_1, ..., ±e_n}.
    pub fn canonical(n: usize, norm_kind: NormKind) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidDimension);
        }
        let mut pairs = Vec::with_capacity(n);
        for i in 0..n {
            let mut coords = vec![0.0; n];
            coords[i] = 1.0;
            pairs.push(Vector::new(coords)?);
        }
        Self::from_pairs(pairs, norm_kind)
    }

    /// `count / 2` random directions, normalized and paired with their
    /// negations. Deterministic for a fixed seed.
    pub fn random(n: usize, count: usize, norm_kind: NormKind, seed: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidDimension);
        }
        if count < 2 || count % 2 != 0 {
            return Err(Error::BadAtomCount(count));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut pairs = Vec::with_capacity(count / 2);
        while pairs.len() < count / 2 {
            let coords: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let norm = norm_kind.norm(&coords);
            if norm < 1e-6 {
                continue;
            }
            let v = Vector::new(coords.iter().map(|c| c / norm).collect())?;
            pairs.push(v);
        }
        Self::from_pairs(pairs, norm_kind)
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.atoms[0].dim()
    }

    pub fn atom(&self, i: usize) -> &Vector {
        &self.atoms[i]
    }

    pub fn atoms(&self) -> &[Vector] {
        &self.atoms
    }

    pub fn norm_kind(&self) -> NormKind {
        self.norm_kind
    }

    /// Index of -atoms[i].
    pub fn pair_of(&self, i: usize) -> usize {
        self.pairing[i]
    }

    /// Indices of one representative per ±pair (the lower index of each).
    pub fn representatives(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| i < self.pairing[i]).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_r2() {
        let d = Dictionary::canonical(2, NormKind::P(2.0)).unwrap();
        assert_eq!(d.len(), 4);
        assert_eq!(d.atom(0).as_slice(), &[1.0, 0.0]);
        assert_eq!(d.atom(1).as_slice(), &[-1.0, 0.0]);
        assert_eq!(d.atom(2).as_slice(), &[0.0, 1.0]);
        assert_eq!(d.atom(3).as_slice(), &[0.0, -1.0]);
        for i in 0..4 {
            assert!((d.atom(i).norm2() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn canonical_r1_and_rejections() {
        let d = Dictionary::canonical(1, NormKind::P(2.0)).unwrap();
        assert_eq!(d.len(), 2);
        assert_eq!(d.atom(0).as_slice(), &[1.0]);
        assert_eq!(d.atom(1).as_slice(), &[-1.0]);
        assert!(Dictionary::canonical(0, NormKind::P(2.0)).is_err());
    }

    #[test]
    fn canonical_inf_norm() {
        let d = Dictionary::canonical(3, NormKind::Inf).unwrap();
        assert_eq!(d.len(), 6);
        for i in 0..6 {
            assert!((d.atom(i).norm(NormKind::Inf) - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn random_deterministic_symmetric() {
        let a = Dictionary::random(2, 8, NormKind::P(2.0), 7).unwrap();
        let b = Dictionary::random(2, 8, NormKind::P(2.0), 7).unwrap();
        assert_eq!(a.len(), 8);
        for i in 0..8 {
            assert_eq!(a.atom(i), b.atom(i));
            assert!((a.atom(i).norm2() - 1.0).abs() <= 1e-12);
            let paired = a.atom(a.pair_of(i));
            for (x, y) in a.atom(i).as_slice().iter().zip(paired.as_slice()) {
                assert!((x + y).abs() < 1e-15);
            }
            assert_eq!(a.pair_of(a.pair_of(i)), i);
        }
        assert!(Dictionary::random(2, 7, NormKind::P(2.0), 7).is_err());
    }
}
