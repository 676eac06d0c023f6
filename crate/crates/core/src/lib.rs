//! Whitney C¹ jets, Wirtinger calculus and planar Cauchy transforms on
//! fractal subsets of the plane.
//!
//! The crate is organised around a handful of data carriers:
//!
//! * [`wirtinger::RealLinearMap`]: a real-linear map `Cⁿ → C` stored as its
//!   complex-linear and conjugate-linear parts.
//! * [`plane_sets::SetSample`]: a finite, resolution-tagged sample of a
//!   compact planar set (Cantor sets, Koch-type curves, grids, circles).
//! * [`jets::Jet1`]: values plus differentials on a sample.
//! * [`cauchy::GridFunction`]: complex values on a uniform cell-centred grid.
//! * [`commutator::KernelMatrix`]: the symmetric kernel `(b(z)-b(w))/(z-w)`.

pub mod budget;
pub mod cauchy;
pub mod commutator;
pub mod error;
pub mod fit;
pub mod functions;
pub mod grid;
pub mod jets;
pub mod perimeter;
pub mod plane_sets;
pub mod quadrature;
pub mod wirtinger;

pub use error::{Error, Result};
pub use grid::Grid;

/// Complex scalar used throughout the crate.
pub type C64 = num_complex::Complex64;
