//! Least-squares line fits on log-log data.

use crate::error::{Error, Result};

/// Result of fitting `ln y = slope · ln x + intercept`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLaw {
    pub exponent: f64,
    pub constant: f64,
    pub rows_used: usize,
}

impl PowerLaw {
    pub fn eval(&self, x: f64) -> f64 {
        self.constant * x.powf(self.exponent)
    }
}

/// Ordinary least squares for `y = slope · x + intercept`.
///
/// Returns `None` when fewer than two points are given or all `x` coincide.
pub fn line_fit(points: &[(f64, f64)]) -> Option<(f64, f64)> {
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx <= 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    Some((slope, my - slope * mx))
}

/// Fits `y ≈ C · x^α` over rows with strictly positive, finite `x` and `y`.
/// Other rows are dropped; fewer than three remaining rows refuse the fit.
pub fn power_law_fit(rows: impl IntoIterator<Item = (f64, f64)>) -> Result<PowerLaw> {
    let logs: Vec<(f64, f64)> = rows
        .into_iter()
        .filter(|&(x, y)| x > 0.0 && y > 0.0 && x.is_finite() && y.is_finite())
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    if logs.len() < 3 {
        return Err(Error::FitRefused { usable: logs.len() });
    }
    let (slope, intercept) =
        line_fit(&logs).ok_or(Error::FitRefused { usable: logs.len() })?;
    Ok(PowerLaw {
        exponent: slope,
        constant: intercept.exp(),
        rows_used: logs.len(),
    })
}
