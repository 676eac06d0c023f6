use nalgebra::{Matrix4, SymmetricEigen, Vector4};
use rayon::prelude::*;

use super::jet::Jet1;
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::C64;

/// Admissible-differential statistics at one scale.
///
/// For every point `z_i` with at least two neighbours within the scale, the
/// differential `(a, b)` minimising `Σ_j |f_j − f_i − a Δ − b Δ̄|² / |Δ|²`
/// (with `Δ = z_j − z_i`) is fitted. `sigma` is the smallest singular value
/// of the normalised design divided by `√m`, `fit_error` the largest
/// remaining remainder, and `spread = 2 · fit_error / sigma` the diameter of
/// the set of differentials whose remainders stay within that error.
/// Collinear neighbourhoods leave one direction undetermined: `sigma = 0`
/// and the spread is infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeterminacyRow {
    pub scale: f64,
    pub points_fitted: usize,
    pub min_sigma: f64,
    pub median_sigma: f64,
    pub max_fit_error: f64,
    pub median_spread: f64,
    /// Largest deviation of the fitted differential from the jet's own.
    pub max_diff_deviation: f64,
}

impl DeterminacyRow {
    pub const CSV_HEADER: &'static str =
        "scale,points_fitted,min_sigma,median_sigma,max_fit_error,median_spread,max_diff_deviation";

    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.scale,
            self.points_fitted,
            self.min_sigma,
            self.median_sigma,
            self.max_fit_error,
            self.median_spread,
            self.max_diff_deviation
        )
    }
}

struct PointFit {
    sigma: f64,
    fit_error: f64,
    spread: f64,
    deviation: f64,
}

/// Real rows of `a Δ + b Δ̄` in the unknowns `(re a, im a, re b, im b)`.
fn rows(u: C64) -> [[f64; 4]; 2] {
    [[u.re, -u.im, u.re, u.im], [u.im, u.re, -u.im, u.re]]
}

fn fit_point(jet: &Jet1, i: usize, scale: f64) -> Option<PointFit> {
    let z = jet.base().points();
    let f = jet.values();
    let mut ata = Matrix4::<f64>::zeros();
    let mut atb = Vector4::<f64>::zeros();
    let mut m = 0usize;
    let mut eqs = Vec::new();
    for j in 0..z.len() {
        let d = z[j] - z[i];
        let r = d.norm();
        if j == i || r > scale {
            continue;
        }
        let u = d / r;
        let rhs = (f[j] - f[i]) / r;
        let [r1, r2] = rows(u);
        for (row, y) in [(r1, rhs.re), (r2, rhs.im)] {
            let v = Vector4::from(row);
            ata += v * v.transpose();
            atb += v * y;
        }
        eqs.push((u, rhs));
        m += 1;
    }
    if m < 2 {
        return None;
    }
    let eig = SymmetricEigen::new(ata);
    let lmax = eig.eigenvalues.max();
    // Eigenvalues below roundoff relative to the largest count as zero.
    let lmin = eig.eigenvalues.min();
    let lmin = if lmin > 1e-12 * lmax { lmin } else { 0.0 };
    let sigma = (lmin / m as f64).sqrt();
    // Pseudo-inverse on the well-conditioned eigenspace.
    let mut x = Vector4::zeros();
    for k in 0..4 {
        let l = eig.eigenvalues[k];
        if l > 1e-12 * lmax {
            let v = eig.eigenvectors.column(k);
            x += v * (v.dot(&atb) / l);
        }
    }
    let (a, b) = (C64::new(x[0], x[1]), C64::new(x[2], x[3]));
    let fit_error = eqs
        .iter()
        .map(|&(u, rhs)| (rhs - a * u - b * u.conj()).norm())
        .fold(0.0, f64::max);
    let spread = if sigma > 0.0 {
        2.0 * fit_error / sigma
    } else {
        f64::INFINITY
    };
    let deviation = ((a - jet.holo(i)).norm_sqr() + (b - jet.anti(i)).norm_sqr()).sqrt();
    Some(PointFit {
        sigma,
        fit_error,
        spread,
        deviation,
    })
}

fn median(mut v: Vec<f64>) -> f64 {
    if v.is_empty() {
        return f64::NAN;
    }
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Fits the best differential from neighbours at each scale and reports how
/// tightly the data pin it down.
pub fn determinacy_scan(jet: &Jet1, scales: &[f64]) -> Result<Vec<DeterminacyRow>> {
    if scales.iter().any(|s| !(*s > 0.0 && s.is_finite())) {
        return Err(Error::invalid("scales must be positive and finite"));
    }
    let n = jet.len() as u128;
    Budget::from_env().check_pairs(n * n * scales.len() as u128)?;
    Ok(scales
        .iter()
        .map(|&scale| {
            let fits: Vec<PointFit> = (0..jet.len())
                .into_par_iter()
                .filter_map(|i| fit_point(jet, i, scale))
                .collect();
            DeterminacyRow {
                scale,
                points_fitted: fits.len(),
                min_sigma: fits.iter().map(|p| p.sigma).fold(f64::INFINITY, f64::min),
                median_sigma: median(fits.iter().map(|p| p.sigma).collect()),
                max_fit_error: fits.iter().map(|p| p.fit_error).fold(0.0, f64::max),
                median_spread: median(fits.iter().map(|p| p.spread).collect()),
                max_diff_deviation: fits.iter().map(|p| p.deviation).fold(0.0, f64::max),
            }
        })
        .collect())
}
