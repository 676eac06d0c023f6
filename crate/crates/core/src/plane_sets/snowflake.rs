use std::f64::consts::PI;

use super::sample::{Cell, SampleOrigin, SetSample};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::C64;

/// Koch-type curve from `0` to `1`: each segment is replaced by four copies
/// of ratio `ρ(β) = 1 / (2(1 + cos β))`, the middle two tilted by `±β`.
///
/// Vertices carry quaternary parameters `t = k / 4^depth`; the natural
/// parametrisation is Hölder with exponent `α = ln(1/ρ) / ln 4`.
#[derive(Debug, Clone, PartialEq)]
pub struct SnowflakeCurve {
    beta: f64,
    depth: usize,
    ratio: f64,
    alpha: f64,
    params: Vec<f64>,
    points: Vec<C64>,
}

impl SnowflakeCurve {
    /// The five level-1 vertices for angle `β`.
    pub fn generator(beta: f64) -> [C64; 5] {
        let rho = Self::ratio_for(beta);
        let peak = C64::new(rho, 0.0) + C64::from_polar(rho, beta);
        [
            C64::new(0.0, 0.0),
            C64::new(rho, 0.0),
            peak,
            C64::new(1.0 - rho, 0.0),
            C64::new(1.0, 0.0),
        ]
    }

    pub fn ratio_for(beta: f64) -> f64 {
        1.0 / (2.0 * (1.0 + beta.cos()))
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// Per-segment length ratio `ρ`.
    pub fn ratio(&self) -> f64 {
        self.ratio
    }

    /// Hölder exponent of the parametrisation.
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn points(&self) -> &[C64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// The vertices as a [`SetSample`] with parameter cells. Every sub-arc
    /// between consecutive vertices has diameter `ρ^depth`.
    pub fn to_sample(&self) -> Result<SetSample> {
        SetSample::new(
            self.points.clone(),
            self.ratio.powi(self.depth as i32),
            self.params.iter().map(|&t| Cell::Param(t)).collect(),
            SampleOrigin::Snowflake {
                beta: self.beta,
                depth: self.depth,
            },
        )
    }

    /// Smallest and largest `|z(t) − z(s)| / |t − s|^α` over all vertex pairs.
    pub fn holder_ratio_bounds(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi: f64 = 0.0;
        for i in 0..self.len() {
            for j in i + 1..self.len() {
                let r = (self.points[j] - self.points[i]).norm()
                    / (self.params[j] - self.params[i]).abs().powf(self.alpha);
                lo = lo.min(r);
                hi = hi.max(r);
            }
        }
        (lo, hi)
    }
}

/// Vertices of the depth-`depth` approximation: `4^depth + 1` points.
pub fn snowflake_sample(beta: f64, depth: usize) -> Result<SnowflakeCurve> {
    snowflake_sample_with_budget(beta, depth, &Budget::from_env())
}

pub fn snowflake_sample_with_budget(beta: f64, depth: usize, budget: &Budget) -> Result<SnowflakeCurve> {
    if !(beta > 0.0 && beta < PI / 2.0) {
        return Err(Error::invalid(format!("generator angle {beta} not in (0, π/2)")));
    }
    let count = u32::try_from(depth)
        .ok()
        .and_then(|d| 4u128.checked_pow(d))
        .map(|c| c + 1)
        .unwrap_or(u128::MAX);
    budget.check_points(count)?;

    let gen = SnowflakeCurve::generator(beta);
    let mut points = vec![C64::new(0.0, 0.0), C64::new(1.0, 0.0)];
    for _ in 0..depth {
        let mut next = Vec::with_capacity(4 * points.len() - 3);
        for seg in points.windows(2) {
            let (a, b) = (seg[0], seg[1]);
            next.push(a);
            for g in &gen[1..4] {
                next.push(a + (b - a) * g);
            }
        }
        next.push(*points.last().expect("nonempty"));
        points = next;
    }
    let n = points.len() - 1;
    let params = (0..=n).map(|k| k as f64 / n as f64).collect();
    let ratio = SnowflakeCurve::ratio_for(beta);
    Ok(SnowflakeCurve {
        beta,
        depth,
        ratio,
        alpha: (1.0 / ratio).ln() / 4f64.ln(),
        params,
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn depth_zero_is_the_chord() {
        let c = snowflake_sample(PI / 3.0, 0).unwrap();
        assert_eq!(c.points(), &[C64::new(0.0, 0.0), C64::new(1.0, 0.0)]);
        assert_eq!(c.params(), &[0.0, 1.0]);
    }

    #[test]
    fn standard_koch_level_one() {
        let c = snowflake_sample(PI / 3.0, 1).unwrap();
        assert_eq!(c.len(), 5);
        assert!((c.ratio() - 1.0 / 3.0).abs() < 1e-15);
        assert!((c.alpha() - 3f64.ln() / 4f64.ln()).abs() < 1e-15);
        let p = c.points();
        assert!((p[1] - C64::new(1.0 / 3.0, 0.0)).norm() < 1e-15);
        assert!((p[2] - C64::new(0.5, (PI / 3.0).sin() / 3.0)).norm() < 1e-15);
        assert!((p[3] - C64::new(2.0 / 3.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn endpoints_pinned_and_vertices_nested() {
        let coarse = snowflake_sample(PI / 3.0, 3).unwrap();
        let fine = snowflake_sample(PI / 3.0, 4).unwrap();
        assert_eq!(fine.points()[0], C64::new(0.0, 0.0));
        assert_eq!(*fine.points().last().unwrap(), C64::new(1.0, 0.0));
        for (k, z) in coarse.points().iter().enumerate() {
            assert_eq!(fine.points()[4 * k], *z);
        }
    }

    #[test]
    fn angle_out_of_range() {
        assert!(snowflake_sample(PI / 2.0, 1).is_err());
        assert!(snowflake_sample(0.0, 1).is_err());
    }
}
