use std::f64::consts::PI;
use std::sync::Arc;

use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};

use super::grid_function::GridFunction;
use super::kernel::cell_integral;
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::C64;

fn density(g: &GridFunction, mask: Option<&[bool]>) -> Result<Vec<C64>> {
    match mask {
        Some(m) => Ok(g.masked(m)?.into_values()),
        None => Ok(g.values().to_vec()),
    }
}

/// Row FFTs of a `rows × cols` row-major array. Each row is transformed on
/// its own, so the result does not depend on how rows are scheduled.
fn fft_rows(data: &mut [C64], cols: usize, fft: &Arc<dyn Fft<f64>>) {
    let scratch = fft.get_inplace_scratch_len();
    data.par_chunks_mut(cols).for_each_init(
        || vec![C64::new(0.0, 0.0); scratch],
        |s, row| fft.process_with_scratch(row, s),
    );
}

fn transpose(data: &[C64], rows: usize, cols: usize) -> Vec<C64> {
    let mut out = vec![C64::new(0.0, 0.0); data.len()];
    out.par_chunks_mut(rows).enumerate().for_each(|(c, col)| {
        for (r, v) in col.iter_mut().enumerate() {
            *v = data[r * cols + c];
        }
    });
    out
}

/// Forward 2D FFT of a `py × px` array; the spectrum is returned transposed
/// (`px × py`), which is all a pointwise product needs.
fn forward(mut data: Vec<C64>, px: usize, py: usize, fx: &Arc<dyn Fft<f64>>, fy: &Arc<dyn Fft<f64>>) -> Vec<C64> {
    fft_rows(&mut data, px, fx);
    let mut t = transpose(&data, py, px);
    fft_rows(&mut t, py, fy);
    t
}

/// `C[g]` at every node of `g`'s grid, with `g` restricted to the cells
/// selected by `mask` (all cells when `None`).
///
/// On the lattice the cell integrals depend only on the index offset, so the
/// cell sum is a discrete convolution, evaluated with zero-padded FFTs. It
/// agrees with [`cauchy_transform_direct`] up to roundoff.
pub fn cauchy_transform(g: &GridFunction, mask: Option<&[bool]>) -> Result<GridFunction> {
    let grid = *g.grid();
    let d = density(g, mask)?;
    let (nx, ny) = (grid.nx, grid.ny);
    let px = (2 * nx).next_power_of_two();
    let py = (2 * ny).next_power_of_two();

    let mut a = vec![C64::new(0.0, 0.0); px * py];
    for j in 0..ny {
        a[j * px..j * px + nx].copy_from_slice(&d[j * nx..(j + 1) * nx]);
    }
    // out[n] = Σ_m d[m] K(m − n) = (d ∗ B)[n] with B[e] = K(−e), where
    // K(e) is the integral over the cell offset by e from the node.
    let mut b = vec![C64::new(0.0, 0.0); px * py];
    b.par_chunks_mut(px).enumerate().for_each(|(r, row)| {
        let ej = if r < py / 2 { r as i64 } else { r as i64 - py as i64 };
        if ej.unsigned_abs() as usize >= ny {
            return;
        }
        for (c, v) in row.iter_mut().enumerate() {
            let ei = if c < px / 2 { c as i64 } else { c as i64 - px as i64 };
            if (ei.unsigned_abs() as usize) < nx {
                *v = cell_integral(C64::new(-(ei as f64) * grid.h, -(ej as f64) * grid.h), grid.h);
            }
        }
    });

    let mut planner = FftPlanner::<f64>::new();
    let (fx, fy) = (planner.plan_fft_forward(px), planner.plan_fft_forward(py));
    let (ix, iy) = (planner.plan_fft_inverse(px), planner.plan_fft_inverse(py));
    let fa = forward(a, px, py, &fx, &fy);
    let fb = forward(b, px, py, &fx, &fy);
    let mut prod: Vec<C64> = fa.iter().zip(&fb).map(|(x, y)| x * y).collect();
    fft_rows(&mut prod, py, &iy);
    let mut spatial = transpose(&prod, px, py);
    fft_rows(&mut spatial, px, &ix);

    let scale = -1.0 / (PI * (px * py) as f64);
    let mut out = Vec::with_capacity(grid.len());
    for j in 0..ny {
        out.extend(spatial[j * px..j * px + nx].iter().map(|v| v * scale));
    }
    GridFunction::new(grid, out)
}

/// Reference implementation of [`cauchy_transform`]: the cell sum at every
/// node, cells visited in storage order.
pub fn cauchy_transform_direct(g: &GridFunction, mask: Option<&[bool]>) -> Result<GridFunction> {
    let grid = *g.grid();
    let values = eval_points(&grid, &density(g, mask)?, &(0..grid.len()).map(|k| grid.node_at(k)).collect::<Vec<_>>());
    GridFunction::new(grid, values)
}

/// `C[g]` at arbitrary points by the cell-exact sum (no interpolation).
pub fn cauchy_eval(g: &GridFunction, mask: Option<&[bool]>, points: &[C64]) -> Result<Vec<C64>> {
    if points.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(Error::NonFinite("evaluation points".into()));
    }
    Ok(eval_points(g.grid(), &density(g, mask)?, points))
}

fn eval_points(grid: &Grid, d: &[C64], points: &[C64]) -> Vec<C64> {
    let active: Vec<(C64, C64)> = d
        .iter()
        .enumerate()
        .filter(|(_, v)| v.re != 0.0 || v.im != 0.0)
        .map(|(k, &v)| (grid.node_at(k), v))
        .collect();
    let h = grid.h;
    points
        .par_iter()
        .map(|&z| {
            let mut sum = C64::new(0.0, 0.0);
            for &(c, v) in &active {
                sum += v * cell_integral(c - z, h);
            }
            sum * (-1.0 / PI)
        })
        .collect()
}
