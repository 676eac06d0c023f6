//! Grid Wirtinger calculus and the planar Cauchy transform
//!
//! ```text
//! C[g](z) = −(1/π) ∬ g(w) / (w − z) dA(w),
//! ```
//!
//! a right inverse of `∂̄`. Densities are piecewise constant on grid cells and
//! every cell is integrated exactly (see [`cell_integral`]), so the transform
//! of a grid function is defined at every point of the plane, on or off the
//! grid.

mod approx;
mod dbar;
mod grid_function;
mod kernel;
mod max_principle;
mod transform;

pub use approx::{holo_approx, ApproxReport, DbarSource};
pub use dbar::dbar_fd;
pub use grid_function::GridFunction;
pub use kernel::{cell_integral, FAR_FIELD_RATIO};
pub use max_principle::{max_principle_check, max_principle_check_grid, MaxPrincipleReport};
pub use transform::{cauchy_eval, cauchy_transform, cauchy_transform_direct};
