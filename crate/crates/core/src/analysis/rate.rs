use crate::error::{Error, Result};

/// Log-log least-squares fit of a_m ~ C * m^slope over an index window.
#[derive(Debug, Clone, Copy)]
pub struct RateFit {
    pub slope: f64,
    pub intercept: f64,
    /// max abs deviation of log a_m from the fitted line
    pub residual: f64,
    pub points: usize,
}

impl RateFit {
    /// Flags sequences that do not decay at all over the window.
    pub fn no_decay(&self) -> bool {
        self.slope > -0.05
    }
}

/// Fit the decay exponent of `sequence` (indexed so that sequence[m] = a_m)
/// over m in [m_lo, m_hi]. Nonpositive entries are trimmed; fewer than 10
/// surviving points is an error.
pub fn fit_rate_exponent(sequence: &[f64], m_lo: usize, m_hi: usize) -> Result<RateFit> {
    let hi = m_hi.min(sequence.len().saturating_sub(1));
    let lo = m_lo.max(1);
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for m in lo..=hi {
        let a = sequence[m];
        if a > 0.0 {
            xs.push((m as f64).ln());
            ys.push(a.ln());
        }
    }
    if xs.len() < 10 {
        return Err(Error::DegenerateWindow(xs.len()));
    }
    let n = xs.len() as f64;
    let mean_x = xs.iter().sum::<f64>() / n;
    let mean_y = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (x, y) in xs.iter().zip(&ys) {
        sxx += (x - mean_x) * (x - mean_x);
        sxy += (x - mean_x) * (y - mean_y);
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let residual = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - (slope * x + intercept)).abs())
        .fold(0.0f64, f64::max);
    Ok(RateFit {
        slope,
        intercept,
        residual,
        points: xs.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_law() {
        let seq: Vec<f64> = (0..2000)
            .map(|m| if m == 0 { 1.0 } else { 1.0 / m as f64 })
            .collect();
        let fit = fit_rate_exponent(&seq, 10, 1000).unwrap();
        assert!((fit.slope + 1.0).abs() <= 1e-12);
        assert!(fit.residual <= 1e-10);
    }

    #[test]
    fn scaled_power_law_with_floor() {
        let seq: Vec<f64> = (0..2000)
            .map(|m| if m == 0 { 5.0 } else { 5.0 / m as f64 + 1e-9 })
            .collect();
        let fit = fit_rate_exponent(&seq, 10, 1000).unwrap();
        assert!(fit.slope >= -1.02 && fit.slope <= -0.98, "slope = {}", fit.slope);
    }

    #[test]
    fn constant_sequence_flags_no_decay() {
        let seq = vec![0.7; 200];
        let fit = fit_rate_exponent(&seq, 10, 100).unwrap();
        assert!(fit.slope.abs() < 1e-12);
        assert!(fit.no_decay());
    }

    #[test]
    fn degenerate_window_errors() {
        let seq = vec![0.0; 200];
        assert!(matches!(
            fit_rate_exponent(&seq, 10, 100),
            Err(Error::DegenerateWindow(0))
        ));
        let short = vec![1.0; 5];
        assert!(fit_rate_exponent(&short, 1, 4).is_err());
    }
}
