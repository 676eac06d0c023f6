use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::C64;

/// One positively oriented boundary component.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum BoundaryCurve {
    Circle { center: C64, radius: f64 },
    /// Closed polyline; the last vertex connects back to the first.
    Polygon { vertices: Vec<C64> },
}

impl BoundaryCurve {
    pub fn length(&self) -> f64 {
        match self {
            BoundaryCurve::Circle { radius, .. } => 2.0 * PI * radius,
            BoundaryCurve::Polygon { vertices } => edges(vertices).map(|(a, b)| (b - a).norm()).sum(),
        }
    }

    /// Signed area enclosed (positive for counter-clockwise orientation).
    pub fn signed_area(&self) -> f64 {
        match self {
            BoundaryCurve::Circle { radius, .. } => PI * radius * radius,
            BoundaryCurve::Polygon { vertices } => shoelace(vertices),
        }
    }

    /// Point at arclength `s ∈ [0, length)` measured from the start.
    pub fn point_at(&self, s: f64) -> C64 {
        match self {
            BoundaryCurve::Circle { center, radius } => center + C64::from_polar(*radius, s / radius),
            BoundaryCurve::Polygon { vertices } => {
                let mut rest = s.rem_euclid(self.length());
                for (a, b) in edges(vertices) {
                    let len = (b - a).norm();
                    if rest <= len {
                        return a + (b - a) * (rest / len);
                    }
                    rest -= len;
                }
                vertices[0]
            }
        }
    }

    /// Splits the curve into pieces of length at most `h`, each given as a
    /// parametrisation `u ∈ [0, 1] ↦ (z(u), z'(u))`.
    pub fn pieces(&self, h: f64) -> Vec<Piece> {
        match self {
            BoundaryCurve::Circle { center, radius } => {
                let n = ((2.0 * PI * radius) / h).ceil().max(1.0) as usize;
                let dt = 2.0 * PI / n as f64;
                (0..n)
                    .map(|k| Piece::Arc {
                        center: *center,
                        radius: *radius,
                        t0: k as f64 * dt,
                        dt,
                    })
                    .collect()
            }
            BoundaryCurve::Polygon { vertices } => edges(vertices)
                .flat_map(|(a, b)| {
                    let n = ((b - a).norm() / h).ceil().max(1.0) as usize;
                    (0..n).map(move |k| Piece::Segment {
                        from: a + (b - a) * (k as f64 / n as f64),
                        to: a + (b - a) * ((k + 1) as f64 / n as f64),
                    })
                })
                .collect(),
        }
    }
}

/// A short piece of boundary curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Piece {
    Segment { from: C64, to: C64 },
    Arc { center: C64, radius: f64, t0: f64, dt: f64 },
}

impl Piece {
    /// `(z(u), dz/du)` for `u ∈ [0, 1]`.
    pub fn eval(&self, u: f64) -> (C64, C64) {
        match *self {
            Piece::Segment { from, to } => (from + (to - from) * u, to - from),
            Piece::Arc { center, radius, t0, dt } => {
                let e = C64::from_polar(radius, t0 + u * dt);
                (center + e, C64::new(0.0, dt) * e)
            }
        }
    }
}

fn edges(vertices: &[C64]) -> impl Iterator<Item = (C64, C64)> + '_ {
    let n = vertices.len();
    (0..n).map(move |k| (vertices[k], vertices[(k + 1) % n]))
}

fn shoelace(vertices: &[C64]) -> f64 {
    0.5 * edges(vertices).map(|(a, b)| a.re * b.im - b.re * a.im).sum::<f64>()
}

fn cross(a: C64, b: C64) -> f64 {
    a.re * b.im - a.im * b.re
}

/// Closed segments `[p, q]` and `[r, s]` share a point.
fn segments_meet(p: C64, q: C64, r: C64, s: C64) -> bool {
    let d1 = cross(q - p, r - p);
    let d2 = cross(q - p, s - p);
    let d3 = cross(s - r, p - r);
    let d4 = cross(s - r, q - r);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0)) {
        return true;
    }
    let on = |a: C64, b: C64, c: C64| {
        cross(b - a, c - a) == 0.0
            && c.re >= a.re.min(b.re)
            && c.re <= a.re.max(b.re)
            && c.im >= a.im.min(b.im)
            && c.im <= a.im.max(b.im)
    };
    on(p, q, r) || on(p, q, s) || on(r, s, p) || on(r, s, q)
}

fn is_simple(vertices: &[C64]) -> bool {
    let n = vertices.len();
    let e: Vec<_> = edges(vertices).collect();
    for i in 0..n {
        for j in i + 1..n {
            let adjacent = j == i + 1 || (i == 0 && j == n - 1);
            if adjacent {
                // Adjacent edges may only share their common vertex.
                let (a, b) = e[i];
                let (c, d) = e[j];
                let shared = if j == i + 1 { b } else { a };
                let other_i = if j == i + 1 { a } else { b };
                let other_j = if j == i + 1 { d } else { c };
                if cross(b - a, d - c) == 0.0 && (other_j - shared).norm() > 0.0 {
                    // Collinear neighbours overlap when they fold back.
                    let back = (other_i - shared).re * (other_j - shared).re + (other_i - shared).im * (other_j - shared).im;
                    if back > 0.0 {
                        return false;
                    }
                }
                continue;
            }
            if segments_meet(e[i].0, e[i].1, e[j].0, e[j].1) {
                return false;
            }
        }
    }
    true
}

/// Constructor input for [`region_make`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum RegionSpec {
    Disk { center: C64, radius: f64 },
    Square { corner: C64, side: f64 },
    Polygon { vertices: Vec<C64> },
}

/// A bounded region with rectifiable, positively oriented boundary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Region {
    pub boundary: Vec<BoundaryCurve>,
    pub area: f64,
    pub perimeter: f64,
}

/// Builds a region, orienting polygons counter-clockwise. Area and
/// perimeter come from closed forms (disk) or the shoelace formula.
pub fn region_make(spec: &RegionSpec) -> Result<Region> {
    match spec {
        RegionSpec::Disk { center, radius } => {
            if !(*radius > 0.0 && radius.is_finite()) {
                return Err(Error::invalid("disk radius must be positive"));
            }
            Ok(Region {
                boundary: vec![BoundaryCurve::Circle {
                    center: *center,
                    radius: *radius,
                }],
                area: PI * radius * radius,
                perimeter: 2.0 * PI * radius,
            })
        }
        RegionSpec::Square { corner, side } => {
            if !(*side > 0.0 && side.is_finite()) {
                return Err(Error::invalid("square side must be positive"));
            }
            let c = *corner;
            region_make(&RegionSpec::Polygon {
                vertices: vec![
                    c,
                    c + C64::new(*side, 0.0),
                    c + C64::new(*side, *side),
                    c + C64::new(0.0, *side),
                ],
            })
        }
        RegionSpec::Polygon { vertices } => {
            if vertices.len() < 3 || vertices.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
                return Err(Error::SelfIntersecting);
            }
            if !is_simple(vertices) {
                return Err(Error::SelfIntersecting);
            }
            let mut v = vertices.clone();
            let mut area = shoelace(&v);
            if area == 0.0 {
                return Err(Error::SelfIntersecting);
            }
            if area < 0.0 {
                v.reverse();
                area = -area;
            }
            let curve = BoundaryCurve::Polygon { vertices: v };
            Ok(Region {
                perimeter: curve.length(),
                boundary: vec![curve],
                area,
            })
        }
    }
}

impl Region {
    /// Sum of the components' signed areas.
    pub fn signed_area(&self) -> f64 {
        self.boundary.iter().map(BoundaryCurve::signed_area).sum()
    }

    pub fn contains(&self, z: C64) -> bool {
        self.boundary.iter().any(|c| match c {
            BoundaryCurve::Circle { center, radius } => (z - center).norm_sqr() < radius * radius,
            BoundaryCurve::Polygon { vertices } => {
                let mut inside = false;
                for (a, b) in edges(vertices) {
                    if (a.im > z.im) != (b.im > z.im) {
                        let x = a.re + (z.im - a.im) / (b.im - a.im) * (b.re - a.re);
                        if z.re < x {
                            inside = !inside;
                        }
                    }
                }
                inside
            }
        })
    }

    pub fn bounding_box(&self) -> (C64, C64) {
        let mut lo = C64::new(f64::INFINITY, f64::INFINITY);
        let mut hi = C64::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        let mut grow = |z: C64| {
            lo.re = lo.re.min(z.re);
            lo.im = lo.im.min(z.im);
            hi.re = hi.re.max(z.re);
            hi.im = hi.im.max(z.im);
        };
        for c in &self.boundary {
            match c {
                BoundaryCurve::Circle { center, radius } => {
                    grow(center - C64::new(*radius, *radius));
                    grow(center + C64::new(*radius, *radius));
                }
                BoundaryCurve::Polygon { vertices } => vertices.iter().copied().for_each(&mut grow),
            }
        }
        (lo, hi)
    }
}
