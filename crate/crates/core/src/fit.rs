//! Ordinary least-squares line fits.

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    /// Coefficient of determination; one when `y` is constant and fitted
    /// exactly.
    pub r_squared: f64,
    pub rms_residual: f64,
}

impl LinearFit {
    pub fn predict(&self, x: f64) -> f64 {
        self.slope * x + self.intercept
    }
}

/// `y ≈ slope·x + intercept`. Needs two distinct `x` values.
pub fn linear_fit(x: &[f64], y: &[f64]) -> Result<LinearFit> {
    if x.len() != y.len() {
        return Err(Error::InvalidParameter(format!(
            "fit needs paired data, got {} x and {} y",
            x.len(),
            y.len()
        )));
    }
    if x.len() < 2 {
        return Err(Error::InsufficientData(format!("{} points", x.len())));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let syy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InsufficientData("all x values coincide".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = x
        .iter()
        .zip(y)
        .map(|(a, b)| (b - slope * a - intercept).powi(2))
        .sum();
    let r_squared = if syy == 0.0 { 1.0 } else { 1.0 - ss_res / syy };
    Ok(LinearFit {
        slope,
        intercept,
        r_squared,
        rms_residual: (ss_res / n).sqrt(),
    })
}

/// Fits `log y` against `log x`; the slope is the power-law exponent.
pub fn power_law_fit(x: &[f64], y: &[f64]) -> Result<LinearFit> {
    if x.iter().chain(y).any(|v| !(*v > 0.0)) {
        return Err(Error::InvalidParameter(
            "power-law fit needs strictly positive data".into(),
        ));
    }
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    linear_fit(&lx, &ly)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_line() {
        let f = linear_fit(&[1.0, 2.0, 3.0], &[3.0, 5.0, 7.0]).unwrap();
        assert!((f.slope - 2.0).abs() < 1e-14);
        assert!((f.intercept - 1.0).abs() < 1e-14);
        assert!((f.r_squared - 1.0).abs() < 1e-14);
        assert!(f.rms_residual < 1e-14);
    }

    #[test]
    fn noisy_line() {
        // residuals ±0.1 alternate, symmetric about the true line
        let x = [0.0, 1.0, 2.0, 3.0];
        let y = [0.1, 0.9, 2.1, 2.9];
        let f = linear_fit(&x, &y).unwrap();
        assert!((f.slope - 0.96).abs() < 1e-12);
        assert!(f.r_squared > 0.98 && f.r_squared < 1.0);
    }

    #[test]
    fn power_law_exponent() {
        let x = [4.0, 6.0, 8.0, 10.0];
        let y: Vec<f64> = x.iter().map(|v: &f64| 0.3 * v.powf(1.5)).collect();
        let f = power_law_fit(&x, &y).unwrap();
        assert!((f.slope - 1.5).abs() < 1e-12);
    }

    #[test]
    fn rejects_degenerate_input() {
        assert!(linear_fit(&[1.0], &[2.0]).is_err());
        assert!(linear_fit(&[1.0, 1.0], &[2.0, 3.0]).is_err());
        assert!(linear_fit(&[1.0, 2.0], &[2.0]).is_err());
        assert!(power_law_fit(&[1.0, 2.0], &[0.0, 1.0]).is_err());
    }
}
