use rayon::prelude::*;

use super::grid_function::GridFunction;
use crate::error::{Error, Result};
use crate::plane_sets::Region;
use crate::C64;

/// Sup of `|u|` on the boundary and in the interior of a region.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaxPrincipleReport {
    pub sup_boundary: f64,
    pub sup_interior: f64,
    /// `sup_interior ≤ sup_boundary + 1e−12·(1 + sup_boundary)`.
    pub pass: bool,
}

impl MaxPrincipleReport {
    fn new(sup_boundary: f64, sup_interior: f64) -> Self {
        MaxPrincipleReport {
            sup_boundary,
            sup_interior,
            pass: sup_interior <= sup_boundary + 1e-12 * (1.0 + sup_boundary),
        }
    }
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for a maximiser of `f` on `[a, b]`.
fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..80 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    fc.max(fd).max(f(a)).max(f(b))
}

/// Compares the boundary and interior maxima of `|u|` for a callable `u`.
///
/// The boundary is sampled at `resolution` equally spaced arclength points
/// per component and every local maximum is refined by golden-section
/// search. The interior is a `resolution × resolution` lattice over the
/// bounding box, restricted to the region.
pub fn max_principle_check(u: impl Fn(C64) -> C64 + Sync, region: &Region, resolution: usize) -> Result<MaxPrincipleReport> {
    if resolution < 8 {
        return Err(Error::invalid("resolution must be at least 8"));
    }
    let mut sup_boundary: f64 = 0.0;
    for curve in &region.boundary {
        let len = curve.length();
        let step = len / resolution as f64;
        let g = |s: f64| u(curve.point_at(s)).norm();
        let vals: Vec<f64> = (0..resolution).into_par_iter().map(|k| g(k as f64 * step)).collect();
        let refined: Vec<f64> = (0..resolution)
            .into_par_iter()
            .filter(|&k| {
                let prev = vals[(k + resolution - 1) % resolution];
                let next = vals[(k + 1) % resolution];
                vals[k] >= prev && vals[k] >= next
            })
            .map(|k| {
                let s = k as f64 * step;
                golden_max(|t| g(t.rem_euclid(len)), s - step, s + step)
            })
            .collect();
        sup_boundary = vals.iter().chain(&refined).fold(sup_boundary, |m, &v| m.max(v));
    }
    let (lo, hi) = region.bounding_box();
    let n = resolution;
    let dx = (hi.re - lo.re) / n as f64;
    let dy = (hi.im - lo.im) / n as f64;
    let sup_interior = (0..n * n)
        .into_par_iter()
        .map(|k| C64::new(lo.re + dx * ((k % n) as f64 + 0.5), lo.im + dy * ((k / n) as f64 + 0.5)))
        .filter(|&z| region.contains(z))
        .map(|z| u(z).norm())
        .reduce(|| 0.0, f64::max);
    if !(sup_boundary.is_finite() && sup_interior.is_finite()) {
        return Err(Error::NonFinite("maximum principle check".into()));
    }
    Ok(MaxPrincipleReport::new(sup_boundary, sup_interior))
}

/// Grid version: nodes inside the region with a 4-neighbour outside it (or
/// on the grid edge) form the discrete boundary, the other inside nodes the
/// interior.
pub fn max_principle_check_grid(u: &GridFunction, region: &Region) -> Result<MaxPrincipleReport> {
    let g = *u.grid();
    let inside: Vec<bool> = g.sample(|z| region.contains(z));
    let at = |i: isize, j: isize| {
        i >= 0 && j >= 0 && (i as usize) < g.nx && (j as usize) < g.ny && inside[g.index(i as usize, j as usize)]
    };
    let mut sup_boundary: f64 = 0.0;
    let mut sup_interior: f64 = 0.0;
    let mut any = false;
    for j in 0..g.ny {
        for i in 0..g.nx {
            if !inside[g.index(i, j)] {
                continue;
            }
            any = true;
            let (a, b) = (i as isize, j as isize);
            let v = u.at(i, j).norm();
            if at(a - 1, b) && at(a + 1, b) && at(a, b - 1) && at(a, b + 1) {
                sup_interior = sup_interior.max(v);
            } else {
                sup_boundary = sup_boundary.max(v);
            }
        }
    }
    if !any {
        return Err(Error::invalid("no grid node lies inside the region"));
    }
    Ok(MaxPrincipleReport::new(sup_boundary, sup_interior))
}
