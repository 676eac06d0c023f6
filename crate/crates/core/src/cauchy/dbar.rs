use rayon::prelude::*;

use super::grid_function::GridFunction;
use crate::error::{Error, Result};
use crate::C64;

/// Derivative along one axis at position `k` of `n` equally spaced samples.
/// Centred inside, second-order one-sided at the two ends.
#[inline]
fn diff(u: impl Fn(usize) -> C64, k: usize, n: usize, h: f64) -> C64 {
    let inv = 1.0 / (2.0 * h);
    if k == 0 {
        (-3.0 * u(0) + 4.0 * u(1) - u(2)) * inv
    } else if k == n - 1 {
        (3.0 * u(n - 1) - 4.0 * u(n - 2) + u(n - 3)) * inv
    } else {
        (u(k + 1) - u(k - 1)) * inv
    }
}

/// `∂̄u = (u_x + i u_y) / 2` by finite differences. Exact for quadratic
/// polynomials in `x` and `y`, everywhere on the grid.
pub fn dbar_fd(u: &GridFunction) -> Result<GridFunction> {
    let g = *u.grid();
    if g.nx < 3 || g.ny < 3 {
        return Err(Error::invalid("finite differences need at least a 3×3 grid"));
    }
    let values: Vec<C64> = (0..g.len())
        .into_par_iter()
        .map(|k| {
            let (i, j) = (k % g.nx, k / g.nx);
            let ux = diff(|a| u.at(a, j), i, g.nx, g.h);
            let uy = diff(|b| u.at(i, b), j, g.ny, g.h);
            0.5 * (ux + C64::i() * uy)
        })
        .collect();
    GridFunction::new(g, values)
}
