use crate::error::{Error, Result};

/// Which norm the ambient space carries. Dictionary atoms are normalized
/// under this norm; everything else in a run uses the same choice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NormKind {
    P(f64),
    Inf,
}

impl NormKind {
    pub fn p(p: f64) -> Result<Self> {
        if p.is_infinite() && p > 0.0 {
            return Ok(NormKind::Inf);
        }
        if !p.is_finite() || p < 1.0 {
            return Err(Error::BadNormExponent(p));
        }
        Ok(NormKind::P(p))
    }

    pub fn norm(&self, coords: &[f64]) -> f64 {
        match self {
            NormKind::P(p) if *p == 1.0 => coords.iter().map(|c| c.abs()).sum(),
            NormKind::P(p) if *p == 2.0 => {
                coords.iter().map(|c| c * c).sum::<f64>().sqrt()
            }
            NormKind::P(p) => coords
                .iter()
                .map(|c| c.abs().powf(*p))
                .sum::<f64>()
                .powf(1.0 / *p),
            NormKind::Inf => coords.iter().fold(0.0, |acc, c| acc.max(c.abs())),
        }
    }
}

impl std::fmt::Display for NormKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            NormKind::P(p) => write!(f, "p={p}"),
            NormKind::Inf => write!(f, "p=inf"),
        }
    }
}

/// Point in R^n. Entries are always finite; NaN/inf is rejected at
/// construction and every arithmetic result is re-checked in debug builds.
#[derive(Debug, Clone, PartialEq)]
pub struct Vector {
    coords: Vec<f64>,
}

impl Vector {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidDimension);
        }
        for (index, &value) in coords.iter().enumerate() {
            if !value.is_finite() {
                return Err(Error::NonFiniteEntry { index, value });
            }
        }
        Ok(Vector { coords })
    }

    pub fn zeros(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDimension);
        }
        Ok(Vector {
            coords: vec![0.0; dim],
        })
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.coords
    }

    pub fn dot(&self, other: &Vector) -> f64 {
        debug_assert_eq!(self.dim(), other.dim());
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a * b)
            .sum()
    }

    pub fn norm(&self, kind: NormKind) -> f64 {
        kind.norm(&self.coords)
    }

    pub fn norm2(&self) -> f64 {
        self.coords.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    pub fn scaled(&self, factor: f64) -> Vector {
        Vector {
            coords: self.coords.iter().map(|c| c * factor).collect(),
        }
    }

    pub fn add_scaled(&self, factor: f64, other: &Vector) -> Vector {
        debug_assert_eq!(self.dim(), other.dim());
        Vector {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + factor * b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Vector) -> Vector {
        self.add_scaled(-1.0, other)
    }

    pub fn neg(&self) -> Vector {
        self.scaled(-1.0)
    }

    /// (1 - w) * self + lambda * dir, the update shape shared by every
    /// algorithm in this crate.
    pub fn blend(&self, w: f64, lambda: f64, dir: &Vector) -> Vector {
        debug_assert_eq!(self.dim(), dir.dim());
        Vector {
            coords: self
                .coords
                .iter()
                .zip(&dir.coords)
                .map(|(g, d)| (1.0 - w) * g + lambda * d)
                .collect(),
        }
    }
}
