use std::collections::HashSet;

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::ifs::IfsSpec;
use crate::error::{Error, Result};
use crate::C64;

/// Generation tag of a sample point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Cell {
    /// Address in the IFS alphabet; the first letter is the outermost map.
    Word(Vec<u8>),
    /// Curve parameter.
    Param(f64),
    /// Grid position.
    Grid(usize, usize),
    /// Plain position in an explicit point list.
    Index(usize),
}

const ALPHABET: &[u8; 36] = b"0123456789abcdefghijklmnopqrstuvwxyz";

impl Cell {
    /// String form used in JSON documents.
    pub fn tag(&self) -> String {
        match self {
            Cell::Word(w) => w.iter().map(|&k| ALPHABET[k as usize] as char).collect(),
            Cell::Param(t) => format!("{t}"),
            Cell::Grid(i, j) => format!("{i},{j}"),
            Cell::Index(k) => k.to_string(),
        }
    }

    fn parse(tag: &str, origin: &SampleOrigin) -> Result<Cell> {
        let bad = || Error::invalid(format!("malformed cell tag '{tag}'"));
        Ok(match origin {
            SampleOrigin::Ifs { .. } => Cell::Word(
                tag.bytes()
                    .map(|b| ALPHABET.iter().position(|&a| a == b).map(|k| k as u8))
                    .collect::<Option<Vec<u8>>>()
                    .ok_or_else(bad)?,
            ),
            SampleOrigin::Snowflake { .. } => Cell::Param(tag.parse().map_err(|_| bad())?),
            SampleOrigin::Grid { .. } => {
                let (i, j) = tag.split_once(',').ok_or_else(bad)?;
                Cell::Grid(i.parse().map_err(|_| bad())?, j.parse().map_err(|_| bad())?)
            }
            SampleOrigin::Circle { .. } => Cell::Index(tag.parse().map_err(|_| bad())?),
            // Derived samples (translated, mirrored, permuted) keep the tags
            // of their source, whatever kind those were.
            SampleOrigin::Points => {
                if let Ok(k) = tag.parse::<usize>() {
                    Cell::Index(k)
                } else if tag.contains(',') {
                    Cell::parse(tag, &SampleOrigin::Grid {
                        corner: C64::new(0.0, 0.0),
                        spacing: 1.0,
                        nx: 0,
                        ny: 0,
                    })?
                } else if let Ok(t) = tag.parse::<f64>() {
                    Cell::Param(t)
                } else {
                    Cell::parse(tag, &SampleOrigin::Ifs {
                        spec: IfsSpec::four_corner(),
                        depth: 0,
                        base_point: C64::new(0.0, 0.0),
                    })?
                }
            }
        })
    }

    pub fn word(&self) -> Option<&[u8]> {
        match self {
            Cell::Word(w) => Some(w),
            _ => None,
        }
    }
}

/// How a sample was generated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SampleOrigin {
    Ifs {
        spec: IfsSpec,
        depth: usize,
        base_point: C64,
    },
    Snowflake {
        beta: f64,
        depth: usize,
    },
    Grid {
        corner: C64,
        spacing: f64,
        nx: usize,
        ny: usize,
    },
    Circle {
        center: C64,
        radius: f64,
        n: usize,
    },
    Points,
}

impl SampleOrigin {
    pub fn depth(&self) -> Option<usize> {
        match self {
            SampleOrigin::Ifs { depth, .. } | SampleOrigin::Snowflake { depth, .. } => Some(*depth),
            _ => None,
        }
    }
}

/// A finite sample of a compact planar set with resolution `h`: every point
/// of the set lies within `h` of a sample point and vice versa.
#[derive(Debug, Clone, PartialEq)]
pub struct SetSample {
    points: Vec<C64>,
    resolution: f64,
    cells: Vec<Cell>,
    origin: SampleOrigin,
}

fn bits(z: C64) -> (u64, u64) {
    // +0.0 and -0.0 are the same point.
    ((z.re + 0.0).to_bits(), (z.im + 0.0).to_bits())
}

impl SetSample {
    /// Checks one cell per point, finiteness and pairwise distinctness.
    pub fn new(points: Vec<C64>, resolution: f64, cells: Vec<Cell>, origin: SampleOrigin) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::invalid("sample must contain at least one point"));
        }
        if cells.len() != points.len() {
            return Err(Error::DimensionMismatch {
                expected: points.len(),
                got: cells.len(),
            });
        }
        if !(resolution >= 0.0 && resolution.is_finite()) {
            return Err(Error::invalid("sample resolution must be finite and nonnegative"));
        }
        if points.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::NonFinite("sample points".into()));
        }
        let mut seen = HashSet::with_capacity(points.len());
        if !points.iter().all(|&z| seen.insert(bits(z))) {
            return Err(Error::invalid("sample points must be pairwise distinct"));
        }
        Ok(Self {
            points,
            resolution,
            cells,
            origin,
        })
    }

    /// An explicit point list; cells are the list positions.
    pub fn from_points(points: Vec<C64>, resolution: f64) -> Result<Self> {
        let cells = (0..points.len()).map(Cell::Index).collect();
        Self::new(points, resolution, cells, SampleOrigin::Points)
    }

    /// `nx × ny` lattice `corner + spacing·(i + i·j)`.
    pub fn grid(corner: C64, spacing: f64, nx: usize, ny: usize) -> Result<Self> {
        if !(spacing > 0.0 && spacing.is_finite()) {
            return Err(Error::invalid("grid spacing must be positive"));
        }
        let mut points = Vec::with_capacity(nx * ny);
        let mut cells = Vec::with_capacity(nx * ny);
        for j in 0..ny {
            for i in 0..nx {
                points.push(corner + C64::new(spacing * i as f64, spacing * j as f64));
                cells.push(Cell::Grid(i, j));
            }
        }
        Self::new(
            points,
            spacing / 2f64.sqrt(),
            cells,
            SampleOrigin::Grid {
                corner,
                spacing,
                nx,
                ny,
            },
        )
    }

    /// `n` equally spaced points on a circle, starting at angle 0.
    pub fn circle(center: C64, radius: f64, n: usize) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) || n == 0 {
            return Err(Error::invalid("circle needs positive radius and at least one point"));
        }
        let points: Vec<C64> = (0..n)
            .map(|k| center + C64::from_polar(radius, 2.0 * std::f64::consts::PI * k as f64 / n as f64))
            .collect();
        let resolution = radius * (std::f64::consts::PI / n as f64).sin() * 2.0;
        let cells = (0..n).map(Cell::Index).collect();
        Self::new(points, resolution, cells, SampleOrigin::Circle { center, radius, n })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[C64] {
        &self.points
    }

    pub fn resolution(&self) -> f64 {
        self.resolution
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn origin(&self) -> &SampleOrigin {
        &self.origin
    }

    pub fn depth(&self) -> Option<usize> {
        self.origin.depth()
    }

    /// Lower-left and upper-right corners of the bounding box.
    pub fn bounding_box(&self) -> (C64, C64) {
        let mut lo = self.points[0];
        let mut hi = self.points[0];
        for z in &self.points {
            lo.re = lo.re.min(z.re);
            lo.im = lo.im.min(z.im);
            hi.re = hi.re.max(z.re);
            hi.im = hi.im.max(z.im);
        }
        (lo, hi)
    }

    /// Exact diameter of the point set (O(N²)).
    pub fn diameter(&self) -> f64 {
        let mut d2: f64 = 0.0;
        for (i, a) in self.points.iter().enumerate() {
            for b in &self.points[i + 1..] {
                d2 = d2.max((a - b).norm_sqr());
            }
        }
        d2.sqrt()
    }

    /// Same sample shifted by `offset`; the origin becomes an explicit list.
    pub fn translated(&self, offset: C64) -> Result<Self> {
        Self::new(
            self.points.iter().map(|z| z + offset).collect(),
            self.resolution,
            self.cells.clone(),
            SampleOrigin::Points,
        )
    }

    /// Mirror image under complex conjugation.
    pub fn conjugated(&self) -> Result<Self> {
        Self::new(
            self.points.iter().map(|z| z.conj()).collect(),
            self.resolution,
            self.cells.clone(),
            SampleOrigin::Points,
        )
    }

    /// Points in a different order, `order[k]` being the old index of the new
    /// `k`-th point.
    pub fn permuted(&self, order: &[usize]) -> Result<Self> {
        if order.len() != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                got: order.len(),
            });
        }
        Self::new(
            order.iter().map(|&k| self.points[k]).collect(),
            self.resolution,
            order.iter().map(|&k| self.cells[k].clone()).collect(),
            SampleOrigin::Points,
        )
    }

    /// At most `max_points` points chosen with a seeded RNG, original order
    /// preserved. Samples at or under the cap are returned unchanged.
    pub fn subsample(&self, max_points: usize, seed: u64) -> Result<Self> {
        if self.len() <= max_points {
            return Ok(self.clone());
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut chosen = index::sample(&mut rng, self.len(), max_points).into_vec();
        chosen.sort_unstable();
        // The parent's origin is kept so cell tags stay parseable.
        Self::new(
            chosen.iter().map(|&k| self.points[k]).collect(),
            self.resolution,
            chosen.iter().map(|&k| self.cells[k].clone()).collect(),
            self.origin.clone(),
        )
    }

    pub fn to_doc(&self) -> SampleDoc {
        SampleDoc {
            points: self.points.iter().map(|z| [z.re, z.im]).collect(),
            cells: self.cells.iter().map(Cell::tag).collect(),
            metadata: SampleMetadata {
                h: self.resolution,
                depth: self.depth(),
                spec: self.origin.clone(),
            },
        }
    }

    pub fn from_doc(doc: SampleDoc) -> Result<Self> {
        let origin = doc.metadata.spec;
        let cells = doc
            .cells
            .iter()
            .map(|t| Cell::parse(t, &origin))
            .collect::<Result<Vec<_>>>()?;
        Self::new(
            doc.points.into_iter().map(|[re, im]| C64::new(re, im)).collect(),
            doc.metadata.h,
            cells,
            origin,
        )
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_doc()).expect("sample documents always serialize")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let doc: SampleDoc = serde_json::from_str(s).map_err(|e| Error::invalid(format!("sample JSON: {e}")))?;
        Self::from_doc(doc)
    }
}

/// JSON document form of a [`SetSample`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleDoc {
    pub points: Vec<[f64; 2]>,
    pub cells: Vec<String>,
    pub metadata: SampleMetadata,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleMetadata {
    pub h: f64,
    pub depth: Option<usize>,
    pub spec: SampleOrigin,
}
