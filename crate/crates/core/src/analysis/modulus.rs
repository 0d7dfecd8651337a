use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::core::{
    ConvexObjective, Dictionary, SmoothnessCertificate, SmoothnessDomain, Vector,
};
use crate::error::{Error, Result};

/// Sampled lower bound on the modulus of smoothness
/// rho(E, S, u) = (1/2) sup_{x in S, ||y|| = 1} |E(x+uy) + E(x-uy) - 2E(x)|.
#[derive(Debug, Clone)]
pub struct ModulusEstimate {
    pub u_grid: Vec<f64>,
    pub estimates: Vec<f64>,
    pub samples: usize,
    pub sampler_desc: String,
}

/// Draws points from the declared smoothness domain: the sublevel set
/// {E <= E(0)} intersected with the unit hull, or {E <= E(0) + 1}.
/// Candidates are random atom combinations, rejected until they satisfy
/// the sublevel constraint.
pub struct DomainSampler<'a> {
    obj: &'a ConvexObjective,
    dict: &'a Dictionary,
    domain: SmoothnessDomain,
}

impl<'a> DomainSampler<'a> {
    pub fn new(obj: &'a ConvexObjective, dict: &'a Dictionary, domain: SmoothnessDomain) -> Self {
        DomainSampler { obj, dict, domain }
    }

    fn limit(&self) -> f64 {
        let e0 = self
            .obj
            .eval(&Vector::zeros(self.dict.dim()).expect("dict dimension >= 1"));
        match self.domain {
            SmoothnessDomain::SublevelCapHull => e0,
            SmoothnessDomain::SublevelPlusOne => e0 + 1.0,
        }
    }

    fn describe(&self) -> String {
        match self.domain {
            SmoothnessDomain::SublevelCapHull => "rejection sampling on D ∩ A1(D)".into(),
            SmoothnessDomain::SublevelPlusOne => "rejection sampling on D1".into(),
        }
    }

    pub fn sample(&self, rng: &mut ChaCha8Rng) -> Result<Vector> {
        let limit = self.limit() + 1e-9;
        let weight_cap = match self.domain {
            SmoothnessDomain::SublevelCapHull => 1.0,
            SmoothnessDomain::SublevelPlusOne => 2.0,
        };
        for _ in 0..10_000 {
            let raw: Vec<f64> = (0..self.dict.len()).map(|_| rng.gen::<f64>()).collect();
            let total: f64 = raw.iter().sum();
            let scale = rng.gen::<f64>() * weight_cap / total.max(1e-300);
            let mut coords = vec![0.0; self.dict.dim()];
            for (i, r) in raw.iter().enumerate() {
                for (c, a) in coords.iter_mut().zip(self.dict.atom(i).as_slice()) {
                    *c += r * scale * a;
                }
            }
            let x = Vector::new(coords)?;
            if self.obj.eval(&x) <= limit {
                return Ok(x);
            }
        }
        // origin is always admissible
        let origin = Vector::zeros(self.dict.dim())?;
        let value = self.obj.eval(&origin);
        if value <= limit {
            Ok(origin)
        } else {
            Err(Error::SampleOutsideDomain { value, limit })
        }
    }
}

/// Monte-Carlo estimate of the modulus on a u-grid. The same (x, y) sample
/// set is reused for every u, so the estimate inherits the monotonicity of
/// the pathwise second differences. Reported as a lower bound on the sup.
pub fn estimate_modulus(
    obj: &ConvexObjective,
    sampler: &DomainSampler,
    u_grid: &[f64],
    directions_per_u: usize,
    seed: u64,
) -> Result<ModulusEstimate> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let norm_kind = sampler.dict.norm_kind();
    let dim = sampler.dict.dim();
    let limit = sampler.limit() + 1e-9;

    let mut pairs = Vec::with_capacity(directions_per_u);
    for _ in 0..directions_per_u {
        let x = sampler.sample(&mut rng)?;
        let value = obj.eval(&x);
        if value > limit {
            return Err(Error::SampleOutsideDomain { value, limit });
        }
        let y = loop {
            let coords: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let norm = norm_kind.norm(&coords);
            if norm > 1e-6 {
                break Vector::new(coords.iter().map(|c| c / norm).collect())?;
            }
        };
        pairs.push((x, y));
    }

    let mut estimates = Vec::with_capacity(u_grid.len());
    for &u in u_grid {
        let mut best = 0.0f64;
        for (x, y) in &pairs {
            let plus = obj.eval(&x.add_scaled(u, y));
            let minus = obj.eval(&x.add_scaled(-u, y));
            let second = (plus + minus - 2.0 * obj.eval(x)).abs();
            best = best.max(0.5 * second);
        }
        estimates.push(best);
    }

    Ok(ModulusEstimate {
        u_grid: u_grid.to_vec(),
        estimates,
        samples: directions_per_u,
        sampler_desc: sampler.describe(),
    })
}

/// Result of checking a declared certificate against a sampled modulus.
#[derive(Debug, Clone)]
pub struct CertificateReport {
    /// max over the grid of estimate(u) / (gamma * u^q)
    pub max_ratio: f64,
    /// grid points where the estimate exceeded the certified bound:
    /// (u, estimate, bound)
    pub failures: Vec<(f64, f64, f64)>,
}

impl CertificateReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// One-sided test of rho(E, u) <= gamma * u^q on the estimate's grid.
pub fn check_certificate(
    estimate: &ModulusEstimate,
    cert: &SmoothnessCertificate,
) -> CertificateReport {
    let mut max_ratio = 0.0f64;
    let mut failures = Vec::new();
    for (&u, &est) in estimate.u_grid.iter().zip(&estimate.estimates) {
        let bound = cert.gamma * u.powf(cert.q);
        if bound > 0.0 {
            max_ratio = max_ratio.max(est / bound);
        }
        if est > bound + 1e-9 {
            failures.push((u, est, bound));
        }
    }
    CertificateReport { max_ratio, failures }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::{quadratic_objective, NormKind};

    fn setup() -> (ConvexObjective, Dictionary) {
        let obj = quadratic_objective(Vector::new(vec![0.5, 0.5]).unwrap());
        let dict = Dictionary::canonical(2, NormKind::P(2.0)).unwrap();
        (obj, dict)
    }

    #[test]
    fn quadratic_modulus_is_u_squared() {
        let (obj, dict) = setup();
        let sampler = DomainSampler::new(&obj, &dict, SmoothnessDomain::SublevelCapHull);
        let grid = [0.01, 0.05, 0.1, 0.5];
        let est = estimate_modulus(&obj, &sampler, &grid, 50, 11).unwrap();
        for (&u, &e) in est.u_grid.iter().zip(&est.estimates) {
            // every sample gives exactly u^2 for the l2 quadratic
            assert!((e - u * u).abs() <= 1e-6 * u * u, "u = {u}, est = {e}");
        }
    }

    #[test]
    fn linear_objective_has_zero_modulus() {
        // affine map via log-sum-exp with a single row
        let obj = crate::core::log_sum_exp_objective(
            vec![Vector::new(vec![0.2, -0.3]).unwrap()],
            vec![0.0],
        );
        let dict = Dictionary::canonical(2, NormKind::P(2.0)).unwrap();
        let sampler = DomainSampler::new(&obj, &dict, SmoothnessDomain::SublevelPlusOne);
        let est = estimate_modulus(&obj, &sampler, &[0.1, 0.5], 30, 5).unwrap();
        for e in est.estimates {
            assert!(e <= 1e-12);
        }
    }

    #[test]
    fn certificate_checks() {
        let (obj, dict) = setup();
        let sampler = DomainSampler::new(&obj, &dict, SmoothnessDomain::SublevelCapHull);
        let grid = [0.01, 0.1, 0.3, 1.0];
        let est = estimate_modulus(&obj, &sampler, &grid, 50, 11).unwrap();

        let good = SmoothnessCertificate::new(1.0, 2.0, SmoothnessDomain::SublevelCapHull);
        let report = check_certificate(&est, &good);
        assert!(report.ok());
        assert!(report.max_ratio <= 1.0 + 1e-9);

        let bad = SmoothnessCertificate::new(0.5, 2.0, SmoothnessDomain::SublevelCapHull);
        let report = check_certificate(&est, &bad);
        assert!(!report.ok());
        assert!((report.max_ratio - 2.0).abs() < 1e-3);
    }

    #[test]
    fn estimate_grows_with_samples() {
        let (obj, dict) = setup();
        let sampler = DomainSampler::new(&obj, &dict, SmoothnessDomain::SublevelCapHull);
        let grid = [0.2];
        let few = estimate_modulus(&obj, &sampler, &grid, 5, 3).unwrap();
        let many = estimate_modulus(&obj, &sampler, &grid, 50, 3).unwrap();
        assert!(many.estimates[0] >= few.estimates[0] - 1e-15);
    }
}
