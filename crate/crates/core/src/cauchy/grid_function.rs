use std::io::{Read, Write};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::C64;

/// Complex values at the nodes (cell centres) of a [`Grid`], row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    grid: Grid,
    values: Vec<C64>,
}

impl GridFunction {
    pub fn new(grid: Grid, values: Vec<C64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::DimensionMismatch {
                expected: grid.len(),
                got: values.len(),
            });
        }
        if values.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::NonFinite("grid function values".into()));
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: Grid) -> Self {
        Self {
            grid,
            values: vec![C64::new(0.0, 0.0); grid.len()],
        }
    }

    /// Samples `f` at every node.
    pub fn from_fn(grid: Grid, f: impl Fn(C64) -> C64 + Sync) -> Result<Self> {
        Self::new(grid, grid.sample(f))
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<C64> {
        self.values
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> C64 {
        self.values[self.grid.index(i, j)]
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// `Σ |v| h²`, summed row by row in a fixed order.
    pub fn l1_norm(&self) -> f64 {
        let rows: Vec<f64> = self
            .values
            .par_chunks(self.grid.nx)
            .map(|row| row.iter().map(|v| v.norm()).sum())
            .collect();
        rows.iter().sum::<f64>() * self.grid.cell_area()
    }

    /// Zero outside the cells where `keep` is true.
    pub fn masked(&self, keep: &[bool]) -> Result<Self> {
        if keep.len() != self.values.len() {
            return Err(Error::DimensionMismatch {
                expected: self.values.len(),
                got: keep.len(),
            });
        }
        let values = self
            .values
            .iter()
            .zip(keep)
            .map(|(&v, &k)| if k { v } else { C64::new(0.0, 0.0) })
            .collect();
        Ok(Self { grid: self.grid, values })
    }

    /// `a·self + other` on the same grid.
    pub fn axpy(&self, a: C64, other: &GridFunction) -> Result<Self> {
        if self.grid != other.grid {
            return Err(Error::invalid("grid functions live on different grids"));
        }
        let values = self.values.iter().zip(&other.values).map(|(&x, &y)| a * x + y).collect();
        Self::new(self.grid, values)
    }

    /// Largest `|self − other|` over nodes at least `ring` nodes away from
    /// the grid edge.
    pub fn interior_sup_diff(&self, other: &GridFunction, ring: usize) -> f64 {
        let g = &self.grid;
        let mut m: f64 = 0.0;
        for j in ring..g.ny.saturating_sub(ring) {
            for i in ring..g.nx.saturating_sub(ring) {
                m = m.max((self.at(i, j) - other.at(i, j)).norm());
            }
        }
        m
    }

    /// Binary layout: corner re, corner im, width, height, h as little-endian
    /// `f64`, then `nx`, `ny` as little-endian `u64`, then the values as
    /// interleaved re/im little-endian `f64`, row-major.
    pub fn write_to(&self, mut w: impl Write) -> std::io::Result<()> {
        let g = &self.grid;
        let mut buf = Vec::with_capacity(56 + 16 * self.values.len());
        for x in [g.corner.re, g.corner.im, g.width(), g.height(), g.h] {
            buf.extend_from_slice(&x.to_le_bytes());
        }
        buf.extend_from_slice(&(g.nx as u64).to_le_bytes());
        buf.extend_from_slice(&(g.ny as u64).to_le_bytes());
        write_values(&mut buf, &self.values);
        w.write_all(&buf)
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        self.write_to(&mut out).expect("writing to a Vec cannot fail");
        out
    }

    pub fn read_from(mut r: impl Read) -> Result<Self> {
        let mut bytes = Vec::new();
        r.read_to_end(&mut bytes)
            .map_err(|e| Error::invalid(format!("reading grid function: {e}")))?;
        Self::from_bytes(&bytes)
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let short = || Error::invalid("truncated grid function data");
        if bytes.len() < 56 {
            return Err(short());
        }
        let f = |k: usize| f64::from_le_bytes(bytes[8 * k..8 * k + 8].try_into().unwrap());
        let u = |k: usize| u64::from_le_bytes(bytes[8 * k..8 * k + 8].try_into().unwrap());
        let (nx, ny) = (u(5) as usize, u(6) as usize);
        let grid = Grid::new(C64::new(f(0), f(1)), nx, ny, f(4))?;
        if (grid.width() - f(2)).abs() > 1e-9 * f(2).abs() || (grid.height() - f(3)).abs() > 1e-9 * f(3).abs() {
            return Err(Error::invalid("grid header is inconsistent"));
        }
        let body = &bytes[56..];
        if body.len() != 16 * grid.len() {
            return Err(short());
        }
        let values = body
            .chunks_exact(16)
            .map(|c| {
                C64::new(
                    f64::from_le_bytes(c[..8].try_into().unwrap()),
                    f64::from_le_bytes(c[8..].try_into().unwrap()),
                )
            })
            .collect();
        Self::new(grid, values)
    }
}

/// Appends interleaved re/im little-endian `f64`s.
pub(crate) fn write_values(buf: &mut Vec<u8>, values: &[C64]) {
    for v in values {
        buf.extend_from_slice(&v.re.to_le_bytes());
        buf.extend_from_slice(&v.im.to_le_bytes());
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binary_round_trip_and_layout() {
        let g = Grid::new(C64::new(-1.0, 0.5), 3, 2, 0.25).unwrap();
        let u = GridFunction::from_fn(g, |z| z * z).unwrap();
        let bytes = u.to_bytes();
        assert_eq!(bytes.len(), 56 + 16 * 6);
        assert_eq!(f64::from_le_bytes(bytes[16..24].try_into().unwrap()), 0.75);
        assert_eq!(u64::from_le_bytes(bytes[40..48].try_into().unwrap()), 3);
        let first = g.node(0, 0) * g.node(0, 0);
        assert_eq!(f64::from_le_bytes(bytes[56..64].try_into().unwrap()), first.re);
        assert_eq!(GridFunction::from_bytes(&bytes).unwrap(), u);
        assert!(GridFunction::from_bytes(&bytes[..60]).is_err());
    }

    #[test]
    fn norms() {
        let g = Grid::new(C64::new(0.0, 0.0), 4, 4, 0.5).unwrap();
        let u = GridFunction::from_fn(g, |_| C64::new(0.0, 2.0)).unwrap();
        assert_eq!(u.sup_norm(), 2.0);
        assert_eq!(u.l1_norm(), 8.0);
        let keep: Vec<bool> = (0..16).map(|k| k < 4).collect();
        assert_eq!(u.masked(&keep).unwrap().l1_norm(), 2.0);
    }

    #[test]
    fn rejects_non_finite() {
        let g = Grid::new(C64::new(0.0, 0.0), 1, 1, 1.0).unwrap();
        assert!(GridFunction::new(g, vec![C64::new(f64::INFINITY, 0.0)]).is_err());
    }
}
