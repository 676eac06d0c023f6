//! The distributional identity `∂̄(f·1_E) = f·∂̄1_E` on regions with
//! rectifiable boundary, checked by pairing both sides with test functions.
//!
//! For a test function `φ`,
//!
//! ```text
//! ⟨∂̄(f 1_E), φ⟩ = −∬_E f ∂̄φ dA,
//! ⟨f ∂̄1_E, φ⟩   = −∬_E ∂̄(fφ) dA + ∬_E (∂̄f) φ dA = −(1/2i) ∮_{∂E} fφ dz + ∬_E (∂̄f) φ dA.
//! ```
//!
//! The two area integrals and the contour integral are evaluated
//! independently; the distribution `∂̄1_E` itself is never formed.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::functions::SmoothFn;
use crate::grid::Grid;
use crate::plane_sets::Region;
use crate::quadrature::GaussLegendre;
use crate::C64;

/// Gauss–Legendre nodes per boundary piece.
pub const CONTOUR_NODES: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairingReport {
    /// `−∬_E f ∂̄φ dA`.
    pub lhs: C64,
    /// `−∬_E ∂̄(fφ) dA`.
    pub rhs_area: C64,
    /// `−(1/2i) ∮ fφ dz`.
    pub rhs_contour: C64,
    /// `lhs − rhs_area`, analytically `∬_E (∂̄f) φ dA`.
    pub residual: C64,
    /// `|rhs_area − rhs_contour|`.
    pub stokes_gap: f64,
}

impl PairingReport {
    pub const CSV_HEADER: &'static str =
        "case,lhs_re,lhs_im,rhs_area_re,rhs_area_im,rhs_contour_re,rhs_contour_im,residual_abs,stokes_gap";

    pub fn csv_line(&self, case: &str) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{}",
            case,
            self.lhs.re,
            self.lhs.im,
            self.rhs_area.re,
            self.rhs_area.im,
            self.rhs_contour.re,
            self.rhs_contour.im,
            self.residual.norm(),
            self.stokes_gap
        )
    }
}

/// Cell-centre quadrature of `integrand` over the cells whose centre lies in
/// the region. Rows are summed independently, then combined in row order.
pub fn area_integral(region: &Region, grid: &Grid, integrand: impl Fn(C64) -> C64 + Sync) -> C64 {
    let rows: Vec<C64> = (0..grid.ny)
        .into_par_iter()
        .map(|j| {
            let mut s = C64::new(0.0, 0.0);
            for i in 0..grid.nx {
                let z = grid.node(i, j);
                if region.contains(z) {
                    s += integrand(z);
                }
            }
            s
        })
        .collect();
    rows.iter().sum::<C64>() * grid.cell_area()
}

/// `∮_{∂E} u dz` by composite Gauss–Legendre on pieces no longer than `h`.
pub fn contour_integral(region: &Region, h: f64, u: impl Fn(C64) -> C64 + Sync) -> C64 {
    let gl = GaussLegendre::new(CONTOUR_NODES);
    region
        .boundary
        .iter()
        .map(|curve| {
            let pieces = curve.pieces(h);
            let parts: Vec<C64> = pieces
                .par_iter()
                .map(|p| {
                    gl.mapped(0.0, 1.0).fold(C64::new(0.0, 0.0), |acc, (t, w)| {
                        let (z, dz) = p.eval(t);
                        acc + w * u(z) * dz
                    })
                })
                .collect();
            parts.iter().sum::<C64>()
        })
        .sum()
}

/// Boundary points used by [`contour_integral`].
fn contour_nodes(region: &Region, h: f64) -> Vec<C64> {
    let gl = GaussLegendre::new(CONTOUR_NODES);
    region
        .boundary
        .iter()
        .flat_map(|c| c.pieces(h))
        .flat_map(|p| gl.mapped(0.0, 1.0).map(move |(t, _)| p.eval(t).0).collect::<Vec<_>>())
        .collect()
}

fn check_inputs<P: SmoothFn + ?Sized>(phi: &P, region: &Region, grid: &Grid) -> Result<()> {
    let (c, r) = phi
        .support_disk()
        .ok_or_else(|| Error::invalid("the test function must have compact support"))?;
    if !grid.contains_disk(c, r) {
        return Err(Error::invalid("the test function's support touches the grid boundary"));
    }
    let (lo, hi) = region.bounding_box();
    if !grid.contains_box(lo, hi) {
        return Err(Error::invalid("the region does not lie inside the grid"));
    }
    Ok(())
}

/// Evaluates both sides of the identity against `φ`.
pub fn pair<F: SmoothFn + ?Sized, P: SmoothFn + ?Sized>(f: &F, phi: &P, region: &Region, grid: &Grid) -> Result<PairingReport> {
    check_inputs(phi, region, grid)?;
    let lhs = -area_integral(region, grid, |z| f.value(z) * phi.dzbar(z));
    let rhs_area = -area_integral(region, grid, |z| f.dzbar(z) * phi.value(z) + f.value(z) * phi.dzbar(z));
    let rhs_contour = -contour_integral(region, grid.h, |z| f.value(z) * phi.value(z)) / C64::new(0.0, 2.0);
    let report = PairingReport {
        lhs,
        rhs_area,
        rhs_contour,
        residual: lhs - rhs_area,
        stokes_gap: (rhs_area - rhs_contour).norm(),
    };
    let parts = [lhs, rhs_area, rhs_contour];
    if parts.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
        return Err(Error::NonFinite("pairing".into()));
    }
    Ok(report)
}

/// One member of a uniformly convergent sequence, compared with the last.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityEntry {
    pub report: PairingReport,
    /// `max |f_k − f_last|` over the quadrature nodes.
    pub sup_gap: f64,
    /// `sup_gap · (‖∂̄φ‖_{L¹(E)} + length(∂E)·‖φ‖_sup / 2)`.
    pub bound: f64,
    pub lhs_gap: f64,
    pub contour_gap: f64,
    pub within_bound: bool,
}

/// Pairs every member of `fs` and checks that the pairing values move by
/// no more than the sup-distance to the limit allows. All norms are the
/// discrete ones of the quadratures actually used, so the bound holds up to
/// roundoff.
pub fn uniform_limit_stability<P: SmoothFn + ?Sized>(
    fs: &[&dyn SmoothFn],
    phi: &P,
    region: &Region,
    grid: &Grid,
) -> Result<Vec<StabilityEntry>> {
    if fs.len() < 2 {
        return Err(Error::invalid("a sequence needs at least two members"));
    }
    let reports = fs
        .iter()
        .map(|f| pair(*f, phi, region, grid))
        .collect::<Result<Vec<_>>>()?;
    let limit = fs[fs.len() - 1];
    let last = reports[reports.len() - 1];

    let mut nodes: Vec<C64> = (0..grid.len())
        .map(|k| grid.node_at(k))
        .filter(|&z| region.contains(z))
        .collect();
    nodes.extend(contour_nodes(region, grid.h));
    let dbar_phi_l1 = area_integral(region, grid, |z| C64::new(phi.dzbar(z).norm(), 0.0)).re;
    let phi_sup = nodes.iter().map(|&z| phi.value(z).norm()).fold(0.0, f64::max);
    let length: f64 = region.boundary.iter().map(|c| c.length()).sum();
    let weight = dbar_phi_l1 + length * phi_sup / 2.0;

    Ok(fs
        .iter()
        .zip(reports)
        .map(|(f, report)| {
            let sup_gap = nodes
                .par_iter()
                .map(|&z| (f.value(z) - limit.value(z)).norm())
                .reduce(|| 0.0, f64::max);
            let bound = sup_gap * weight;
            let lhs_gap = (report.lhs - last.lhs).norm();
            let contour_gap = (report.rhs_contour - last.rhs_contour).norm();
            let slack = 1e-12 * (1.0 + last.lhs.norm() + last.rhs_contour.norm());
            StabilityEntry {
                report,
                sup_gap,
                bound,
                lhs_gap,
                contour_gap,
                within_bound: lhs_gap <= bound + slack && contour_gap <= bound + slack,
            }
        })
        .collect())
}
