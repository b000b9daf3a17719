//! Least-squares fit of `ln(estimate) = ln C - c k` over the positive
//! estimates of a decay table.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct DecayFit {
    pub ks: Vec<usize>,
    pub estimates: Vec<f64>,
    /// Fitted rate `c` (negated slope).
    pub c_hat: f64,
    /// Fitted prefactor `C`.
    pub big_c_hat: f64,
    /// Coefficient of determination in log space.
    pub r_squared: f64,
    /// Number of positive estimates used.
    pub used: usize,
}

impl DecayFit {
    pub fn slope(&self) -> f64 {
        -self.c_hat
    }

    /// Fits `estimates[i] ≈ C e^{-c ks[i]}`, ignoring non-positive entries.
    pub fn fit(ks: &[usize], estimates: &[f64]) -> Result<Self> {
        if ks.len() != estimates.len() {
            return Err(Error::InvalidArgument("ks and estimates differ in length".into()));
        }
        if ks.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument("ks must be strictly increasing".into()));
        }
        let points: Vec<(f64, f64)> = ks
            .iter()
            .zip(estimates)
            .filter(|(_, &e)| e > 0.0)
            .map(|(&k, &e)| (k as f64, e.ln()))
            .collect();
        if points.len() < 2 {
            return Err(Error::BelowResolution);
        }
        let n = points.len() as f64;
        let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
        let my = points.iter().map(|p| p.1).sum::<f64>() / n;
        let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
        let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let syy: f64 = points.iter().map(|p| (p.1 - my).powi(2)).sum();
        let slope = sxy / sxx;
        let intercept = my - slope * mx;
        let r_squared = if syy > 0.0 { sxy * sxy / (sxx * syy) } else { 1.0 };
        Ok(Self {
            ks: ks.to_vec(),
            estimates: estimates.to_vec(),
            c_hat: -slope,
            big_c_hat: intercept.exp(),
            r_squared,
            used: points.len(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_exact_exponential() {
        let ks = [5, 10, 15, 20];
        let est: Vec<f64> = ks.iter().map(|&k| 3.0 * (-0.2 * k as f64).exp()).collect();
        let f = DecayFit::fit(&ks, &est).unwrap();
        assert!((f.c_hat - 0.2).abs() < 1e-12);
        assert!((f.big_c_hat - 3.0).abs() < 1e-10);
        assert!((f.r_squared - 1.0).abs() < 1e-12);
    }

    #[test]
    fn skips_zeros_and_reports_resolution() {
        let f = DecayFit::fit(&[1, 2, 3], &[0.5, 0.25, 0.0]).unwrap();
        assert_eq!(f.used, 2);
        assert!((f.c_hat - 2f64.ln()).abs() < 1e-12);
        assert_eq!(DecayFit::fit(&[1, 2], &[0.1, 0.0]), Err(Error::BelowResolution));
        assert!(DecayFit::fit(&[2, 1], &[0.1, 0.2]).is_err());
    }
}
