use serde::{Deserialize, Serialize};

use super::sample::{Cell, SampleOrigin, SetSample};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::C64;

/// `z ↦ ratio · e^{i·angle} · z + translation`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Similarity {
    pub ratio: f64,
    pub angle: f64,
    pub translation: C64,
}

impl Similarity {
    pub fn new(ratio: f64, angle: f64, translation: C64) -> Self {
        Self {
            ratio,
            angle,
            translation,
        }
    }

    pub fn multiplier(&self) -> C64 {
        C64::from_polar(self.ratio, self.angle)
    }

    pub fn fixed_point(&self) -> C64 {
        self.translation / (C64::new(1.0, 0.0) - self.multiplier())
    }
}

/// A finite family of contracting similarities; its attractor is the
/// self-similar set being sampled.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "IfsSpecRaw", into = "IfsSpecRaw")]
pub struct IfsSpec {
    maps: Vec<Similarity>,
    multipliers: Vec<C64>,
}

#[derive(Serialize, Deserialize)]
struct IfsSpecRaw {
    maps: Vec<Similarity>,
}

impl TryFrom<IfsSpecRaw> for IfsSpec {
    type Error = Error;
    fn try_from(raw: IfsSpecRaw) -> Result<Self> {
        IfsSpec::new(raw.maps)
    }
}

impl From<IfsSpec> for IfsSpecRaw {
    fn from(spec: IfsSpec) -> Self {
        IfsSpecRaw { maps: spec.maps }
    }
}

impl IfsSpec {
    /// Requires 1 to 36 maps, each with `0 < ratio < 1` and finite data.
    pub fn new(maps: Vec<Similarity>) -> Result<Self> {
        if maps.is_empty() || maps.len() > 36 {
            return Err(Error::invalid("an IFS needs between 1 and 36 maps"));
        }
        for m in &maps {
            if !(m.ratio > 0.0 && m.ratio < 1.0) {
                return Err(Error::invalid(format!("contraction ratio {} not in (0, 1)", m.ratio)));
            }
            if !(m.angle.is_finite() && m.translation.re.is_finite() && m.translation.im.is_finite()) {
                return Err(Error::NonFinite("IFS map".into()));
            }
        }
        let multipliers = maps.iter().map(Similarity::multiplier).collect();
        Ok(Self { maps, multipliers })
    }

    /// Four maps of ratio ¼ fixing the corners of the unit square.
    pub fn four_corner() -> Self {
        Self::corner_family(0.25)
    }

    /// Product of two middle-thirds Cantor sets: ratio ⅓ at the unit-square
    /// corners.
    pub fn middle_thirds_squared() -> Self {
        Self::corner_family(1.0 / 3.0)
    }

    fn corner_family(ratio: f64) -> Self {
        let corners = [
            C64::new(0.0, 0.0),
            C64::new(1.0, 0.0),
            C64::new(0.0, 1.0),
            C64::new(1.0, 1.0),
        ];
        Self::new(
            corners
                .iter()
                .map(|&c| Similarity::new(ratio, 0.0, c * (1.0 - ratio)))
                .collect(),
        )
        .expect("corner family is valid")
    }

    pub fn maps(&self) -> &[Similarity] {
        &self.maps
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    pub fn max_ratio(&self) -> f64 {
        self.maps.iter().map(|m| m.ratio).fold(0.0, f64::max)
    }

    #[inline]
    pub fn apply(&self, k: usize, z: C64) -> C64 {
        self.multipliers[k] * z + self.maps[k].translation
    }

    /// `w_{u₁} ∘ … ∘ w_{u_l}(z)`, innermost map applied first.
    pub fn word_image(&self, word: &[u8], z: C64) -> C64 {
        word.iter().rev().fold(z, |acc, &k| self.apply(k as usize, acc))
    }

    /// Centroid of the fixed points; the base point of the generated samples.
    pub fn center(&self) -> C64 {
        let sum: C64 = self.maps.iter().map(Similarity::fixed_point).sum();
        sum / self.maps.len() as f64
    }

    /// Smallest `r` with `w_k(B(c, r)) ⊂ B(c, r)` for all maps, where `c` is
    /// [`Self::center`]. The attractor lies in that disk.
    pub fn invariant_radius(&self) -> f64 {
        let c = self.center();
        (0..self.len())
            .map(|k| (self.apply(k, c) - c).norm() / (1.0 - self.maps[k].ratio))
            .fold(0.0, f64::max)
    }

    /// Diameter of the invariant disk; the depth-0 cell diameter.
    pub fn initial_diameter(&self) -> f64 {
        2.0 * self.invariant_radius()
    }

    /// `max|t_k| / (1 − max ρ_k)`: the attractor lies in this disk about 0.
    pub fn origin_ball_radius(&self) -> f64 {
        let tmax = self.maps.iter().map(|m| m.translation.norm()).fold(0.0, f64::max);
        tmax / (1.0 - self.max_ratio())
    }
}

/// One point per depth-`depth` cell: the image of the base point
/// [`IfsSpec::center`] under every word of that length, in lexicographic
/// word order. Resolution is `(max ρ)^depth · diam₀`.
pub fn ifs_sample(spec: &IfsSpec, depth: usize) -> Result<SetSample> {
    ifs_sample_with_budget(spec, depth, &Budget::from_env())
}

pub fn ifs_sample_with_budget(spec: &IfsSpec, depth: usize, budget: &Budget) -> Result<SetSample> {
    let k = spec.len() as u128;
    let count = u32::try_from(depth)
        .ok()
        .and_then(|d| k.checked_pow(d))
        .unwrap_or(u128::MAX);
    budget.check_points(count)?;

    let base = spec.center();
    let mut words: Vec<Vec<u8>> = vec![Vec::new()];
    let mut points = vec![base];
    for _ in 0..depth {
        let mut next_words = Vec::with_capacity(words.len() * spec.len());
        let mut next_points = Vec::with_capacity(points.len() * spec.len());
        for letter in 0..spec.len() {
            for (w, &p) in words.iter().zip(&points) {
                let mut nw = Vec::with_capacity(w.len() + 1);
                nw.push(letter as u8);
                nw.extend_from_slice(w);
                next_words.push(nw);
                next_points.push(spec.apply(letter, p));
            }
        }
        words = next_words;
        points = next_points;
    }
    let resolution = spec.max_ratio().powi(depth as i32) * spec.initial_diameter();
    SetSample::new(
        points,
        resolution,
        words.into_iter().map(Cell::Word).collect(),
        SampleOrigin::Ifs {
            spec: spec.clone(),
            depth,
            base_point: base,
        },
    )
}
