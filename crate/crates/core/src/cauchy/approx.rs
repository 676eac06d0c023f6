use serde::{Deserialize, Serialize};

use super::dbar::dbar_fd;
use super::grid_function::GridFunction;
use super::transform::{cauchy_eval, cauchy_transform};
use crate::error::{Error, Result};
use crate::functions::SmoothFn;
use crate::grid::Grid;
use crate::plane_sets::{delta_mask, SetSample};

/// Where `∂̄F` came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DbarSource {
    /// The callable's own `∂̄F` at the nodes.
    Exact,
    /// [`dbar_fd`] of `F` sampled at the nodes.
    FiniteDifference,
}

/// Outcome of one truncated-Cauchy-integral approximation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApproxReport {
    pub delta: f64,
    /// `max_i |F(z_i) − h_δ(z_i)|` over the sample.
    pub sup_error_on_e: f64,
    /// `max |∂̄ h_δ|` (finite differences) over nodes within `δ/2` of the
    /// sample; 0 when no node is that close.
    pub dbar_residual_inside: f64,
    /// Area of the removed δ-neighbourhood.
    pub truncated_area: f64,
    pub dbar_source: DbarSource,
    /// The δ-neighbourhood is finer than the sample resolution.
    pub under_resolved: bool,
}

impl ApproxReport {
    pub const CSV_HEADER: &'static str = "delta,sup_error,dbar_residual,trunc_area";

    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{}",
            self.delta, self.sup_error_on_e, self.dbar_residual_inside, self.truncated_area
        )
    }
}

/// Approximates `F` on the compact set sampled by `sample` by a function
/// holomorphic near the set:
///
/// ```text
/// h_δ = C[∂̄F · 1_{C∖U_δ}],
/// ```
///
/// `U_δ` the rasterised δ-neighbourhood of the sample. Since `F = C[∂̄F]`
/// for compactly supported C¹ `F`, the error on the set is the Cauchy
/// integral of `∂̄F` over `U_δ`, which vanishes with `δ` when the set has
/// measure zero. `h_δ` is returned on the grid and evaluated on the sample
/// by the same cell sum.
pub fn holo_approx<F: SmoothFn + ?Sized>(
    f: &F,
    sample: &SetSample,
    delta: f64,
    grid: &Grid,
    source: DbarSource,
) -> Result<(GridFunction, ApproxReport)> {
    if delta.is_nan() || delta < grid.h {
        return Err(Error::invalid(format!(
            "δ = {delta} is below the grid spacing {}; the truncation is unresolved",
            grid.h
        )));
    }
    let (center, radius) = f
        .support_disk()
        .ok_or_else(|| Error::invalid("the function must have compact support"))?;
    if !grid.contains_disk(center, radius) {
        return Err(Error::invalid("the grid does not cover the support of the function"));
    }
    let near = delta_mask(sample, delta, grid)?;
    let dbar = match source {
        DbarSource::Exact => GridFunction::from_fn(*grid, |z| f.dzbar(z))?,
        DbarSource::FiniteDifference => dbar_fd(&GridFunction::from_fn(*grid, |z| f.value(z))?)?,
    };
    let keep = near.complement();
    let h_delta = cauchy_transform(&dbar, Some(&keep))?;
    let on_e = cauchy_eval(&dbar, Some(&keep), sample.points())?;
    let sup_error_on_e = sample
        .points()
        .iter()
        .zip(&on_e)
        .map(|(&z, &v)| (f.value(z) - v).norm())
        .fold(0.0, f64::max);

    let half = delta_mask(sample, 0.5 * delta, grid)?;
    let residual = dbar_fd(&h_delta)?;
    let dbar_residual_inside = residual
        .values()
        .iter()
        .zip(&half.cells)
        .filter(|(_, &inside)| inside)
        .map(|(v, _)| v.norm())
        .fold(0.0, f64::max);

    if !sup_error_on_e.is_finite() || !dbar_residual_inside.is_finite() {
        return Err(Error::NonFinite("holomorphic approximation".into()));
    }
    Ok((
        h_delta,
        ApproxReport {
            delta,
            sup_error_on_e,
            dbar_residual_inside,
            truncated_area: near.area,
            dbar_source: source,
            under_resolved: near.under_resolved,
        },
    ))
}
