use rayon::prelude::*;

use super::sample::SetSample;
use crate::error::{Error, Result};
use crate::grid::Grid;

/// Rasterised δ-neighbourhood of a sample: grid cells whose centre lies
/// within `δ` of some sample point.
#[derive(Debug, Clone, PartialEq)]
pub struct DeltaMask {
    pub grid: Grid,
    pub delta: f64,
    /// One flag per grid cell, row-major.
    pub cells: Vec<bool>,
    /// `count · h²`.
    pub area: f64,
    /// Set when `δ` is below the sample resolution.
    pub under_resolved: bool,
}

impl DeltaMask {
    pub fn count(&self) -> usize {
        self.cells.iter().filter(|&&c| c).count()
    }

    /// Flags of the complement.
    pub fn complement(&self) -> Vec<bool> {
        self.cells.iter().map(|c| !c).collect()
    }

    /// `self ⊆ other`, cell by cell.
    pub fn is_subset_of(&self, other: &DeltaMask) -> bool {
        self.cells.len() == other.cells.len() && self.cells.iter().zip(&other.cells).all(|(&a, &b)| !a || b)
    }
}

/// Marks the cells within `δ` of the sample.
///
/// The grid must cover the sample's bounding box padded by `δ`. Each row is
/// built independently from a per-cell predicate, so the result does not
/// depend on how rows are scheduled.
pub fn delta_mask(sample: &SetSample, delta: f64, grid: &Grid) -> Result<DeltaMask> {
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::invalid("δ must be positive and finite"));
    }
    let (lo, hi) = sample.bounding_box();
    let pad = crate::C64::new(delta, delta);
    if !grid.contains_box(lo - pad, hi + pad) {
        return Err(Error::invalid("grid does not cover the sample padded by δ"));
    }

    let mut by_y: Vec<_> = sample.points().to_vec();
    by_y.sort_by(|a, b| a.im.total_cmp(&b.im).then(a.re.total_cmp(&b.re)));
    let d2 = delta * delta;
    let h = grid.h;
    let x0 = grid.corner.re;
    let nx = grid.nx;

    let rows: Vec<Vec<bool>> = (0..grid.ny)
        .into_par_iter()
        .map(|j| {
            let y = grid.node(0, j).im;
            let start = by_y.partition_point(|p| p.im < y - delta);
            let end = by_y.partition_point(|p| p.im <= y + delta);
            let mut diff = vec![0i32; nx + 1];
            for p in &by_y[start..end] {
                let dy = p.im - y;
                let inside = |i: usize| {
                    let dx = x0 + h * (i as f64 + 0.5) - p.re;
                    dx * dx + dy * dy <= d2
                };
                let w = (d2 - dy * dy).max(0.0).sqrt();
                let last = (nx - 1) as f64;
                // The rounded guesses are within one cell of the exact ends;
                // settle them against the predicate itself.
                let lo = ((p.re - w - x0) / h - 0.5).ceil().clamp(0.0, last) as usize;
                let hi = ((p.re + w - x0) / h - 0.5).floor().clamp(0.0, last) as usize;
                let (lo, hi) = (lo.saturating_sub(1), (hi + 1).min(nx - 1));
                let Some(a) = (lo..=hi).find(|&i| inside(i)) else {
                    continue;
                };
                let b = (a..=hi).rev().find(|&i| inside(i)).unwrap_or(a);
                diff[a] += 1;
                diff[b + 1] -= 1;
            }
            let mut acc = 0;
            diff[..nx]
                .iter()
                .map(|d| {
                    acc += d;
                    acc > 0
                })
                .collect()
        })
        .collect();

    let cells: Vec<bool> = rows.into_iter().flatten().collect();
    let count = cells.iter().filter(|&&c| c).count();
    Ok(DeltaMask {
        grid: *grid,
        delta,
        area: count as f64 * grid.cell_area(),
        under_resolved: delta < sample.resolution(),
        cells,
    })
}
