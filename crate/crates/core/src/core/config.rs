use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlgorithmKind {
    Wrga,
    Rega,
    Wgafr,
    Egafr,
}

impl AlgorithmKind {
    pub fn name(&self) -> &'static str {
        match self {
            AlgorithmKind::Wrga => "wrga",
            AlgorithmKind::Rega => "rega",
            AlgorithmKind::Wgafr => "wgafr",
            AlgorithmKind::Egafr => "egafr",
        }
    }

    pub fn uses_gradient(&self) -> bool {
        matches!(self, AlgorithmKind::Wrga | AlgorithmKind::Wgafr)
    }

    pub fn free_relaxation(&self) -> bool {
        matches!(self, AlgorithmKind::Wgafr | AlgorithmKind::Egafr)
    }
}

impl std::str::FromStr for AlgorithmKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "wrga" => Ok(AlgorithmKind::Wrga),
            "rega" => Ok(AlgorithmKind::Rega),
            "wgafr" => Ok(AlgorithmKind::Wgafr),
            "egafr" => Ok(AlgorithmKind::Egafr),
            other => Err(Error::Config {
                key: "algorithm.name".into(),
                message: format!("unknown algorithm `{other}`"),
            }),
        }
    }
}

/// Error sequence {delta_k}, k = 0, 1, ...; every value must lie in [0, 1].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ErrorSchedule {
    Zero,
    Constant(f64),
    /// delta_k = c * (k + 1)^(-q)
    Power { c: f64, q: f64 },
    /// delta_k = 1 / (k + 2); decays too slowly for the rate bounds but
    /// fast enough for plain convergence.
    Harmonic,
}

impl ErrorSchedule {
    pub fn delta(&self, k: usize) -> f64 {
        match self {
            ErrorSchedule::Zero => 0.0,
            ErrorSchedule::Constant(d) => *d,
            ErrorSchedule::Power { c, q } => c * ((k + 1) as f64).powf(-q),
            ErrorSchedule::Harmonic => 1.0 / (k + 2) as f64,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, ErrorSchedule::Zero)
            || matches!(self, ErrorSchedule::Constant(d) if *d == 0.0)
    }

    pub fn validate(&self) -> Result<()> {
        // the first term is the largest for every supported shape
        let d0 = self.delta(0);
        if !(0.0..=1.0).contains(&d0) || !d0.is_finite() {
            return Err(Error::BadDelta { k: 0, value: d0 });
        }
        Ok(())
    }

    pub fn describe(&self) -> String {
        match self {
            ErrorSchedule::Zero => "zero".into(),
            ErrorSchedule::Constant(d) => format!("constant:{d}"),
            ErrorSchedule::Power { c, q } => format!("power:c={c},q={q}"),
            ErrorSchedule::Harmonic => "harmonic".into(),
        }
    }
}

/// How the delta_k slack is realized. `Tolerance` lets the inner search
/// stop once its certified gap is below delta; `Inject` runs the search to
/// full precision and then perturbs the result so the loss is close to the
/// full budget, stress-testing the convergence bounds near worst case.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorMode {
    Tolerance,
    Inject,
}

impl ErrorMode {
    pub fn name(&self) -> &'static str {
        match self {
            ErrorMode::Tolerance => "tolerance",
            ErrorMode::Inject => "inject",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlgorithmConfig {
    pub algorithm: AlgorithmKind,
    /// Constant weakness parameter t in (0, 1].
    pub weakness: f64,
    pub schedule: ErrorSchedule,
    pub error_mode: ErrorMode,
    pub max_iterations: usize,
    /// Initial half-width of the (w, lambda) search box for the
    /// free-relaxation algorithms.
    pub w_max: f64,
    pub seed: u64,
}

impl AlgorithmConfig {
    pub fn new(algorithm: AlgorithmKind) -> Self {
        AlgorithmConfig {
            algorithm,
            weakness: 1.0,
            schedule: ErrorSchedule::Zero,
            error_mode: ErrorMode::Tolerance,
            max_iterations: 100,
            w_max: 1.0,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.weakness > 0.0 && self.weakness <= 1.0) {
            return Err(Error::BadWeakness(self.weakness));
        }
        self.schedule.validate()?;
        if !(self.w_max >= 1.0) {
            return Err(Error::BadBoxWidth(self.w_max));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_schedule_values() {
        let s = ErrorSchedule::Power { c: 0.01, q: 2.0 };
        assert!((s.delta(5) - 0.01 / 36.0).abs() < 1e-15);
        assert!((s.delta(0) - 0.01).abs() < 1e-15);
    }

    #[test]
    fn validation() {
        let mut cfg = AlgorithmConfig::new(AlgorithmKind::Wrga);
        assert!(cfg.validate().is_ok());
        cfg.weakness = 1.5;
        assert!(cfg.validate().is_err());
        cfg.weakness = 1.0;
        cfg.schedule = ErrorSchedule::Constant(2.0);
        assert!(cfg.validate().is_err());
        cfg.schedule = ErrorSchedule::Zero;
        cfg.w_max = 0.5;
        assert!(cfg.validate().is_err());
    }
}
