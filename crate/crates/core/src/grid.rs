//! Uniform rectangular grids with nodes at cell centres.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::C64;

/// `nx × ny` square cells of side `h` whose lower-left corner is `corner`.
///
/// Node `(i, j)` sits at the centre of cell `(i, j)`, i.e. at
/// `corner + h(i + ½) + i·h(j + ½)`. Storage is row-major: index `j·nx + i`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub corner: C64,
    pub nx: usize,
    pub ny: usize,
    pub h: f64,
}

impl Grid {
    pub fn new(corner: C64, nx: usize, ny: usize, h: f64) -> Result<Self> {
        Self::with_budget(corner, nx, ny, h, &Budget::from_env())
    }

    pub fn with_budget(corner: C64, nx: usize, ny: usize, h: f64, budget: &Budget) -> Result<Self> {
        if nx == 0 || ny == 0 {
            return Err(Error::invalid("grid needs at least one cell per side"));
        }
        if !(h > 0.0 && h.is_finite()) || !(corner.re.is_finite() && corner.im.is_finite()) {
            return Err(Error::invalid("grid spacing must be positive and finite"));
        }
        budget.check_nodes(nx as u128 * ny as u128)?;
        Ok(Self { corner, nx, ny, h })
    }

    /// Square `n × n` grid centred at `center` with total side `side`.
    pub fn centered(center: C64, side: f64, n: usize) -> Result<Self> {
        let h = side / n as f64;
        Self::new(center - C64::new(side / 2.0, side / 2.0), n, n, h)
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn width(&self) -> f64 {
        self.nx as f64 * self.h
    }

    pub fn height(&self) -> f64 {
        self.ny as f64 * self.h
    }

    pub fn upper_corner(&self) -> C64 {
        self.corner + C64::new(self.width(), self.height())
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    #[inline]
    pub fn node(&self, i: usize, j: usize) -> C64 {
        C64::new(
            self.corner.re + self.h * (i as f64 + 0.5),
            self.corner.im + self.h * (j as f64 + 0.5),
        )
    }

    pub fn node_at(&self, index: usize) -> C64 {
        self.node(index % self.nx, index / self.nx)
    }

    pub fn cell_area(&self) -> f64 {
        self.h * self.h
    }

    /// Whether the closed disk `|z - center| ≤ radius` lies strictly inside
    /// the grid rectangle.
    pub fn contains_disk(&self, center: C64, radius: f64) -> bool {
        let hi = self.upper_corner();
        center.re - radius > self.corner.re
            && center.re + radius < hi.re
            && center.im - radius > self.corner.im
            && center.im + radius < hi.im
    }

    /// Whether the axis-aligned box `[lo, hi]` lies inside the grid rectangle.
    pub fn contains_box(&self, lo: C64, hi: C64) -> bool {
        let top = self.upper_corner();
        lo.re >= self.corner.re && lo.im >= self.corner.im && hi.re <= top.re && hi.im <= top.im
    }

    /// Same cell layout on a grid whose spacing is halved (twice as many
    /// cells per side, same rectangle).
    pub fn refined(&self) -> Result<Self> {
        Self::new(self.corner, self.nx * 2, self.ny * 2, self.h / 2.0)
    }

    /// Translates the grid by `offset`.
    pub fn translated(&self, offset: C64) -> Self {
        Self {
            corner: self.corner + offset,
            ..*self
        }
    }

    /// Evaluates `f` at every node, in storage order.
    pub fn sample<T, F>(&self, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(C64) -> T + Sync,
    {
        (0..self.len())
            .into_par_iter()
            .map(|k| f(self.node_at(k)))
            .collect()
    }
}
