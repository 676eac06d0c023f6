//! Functions with exact Wirtinger derivatives.
//!
//! Everything that consumes "a C¹ callable" (jet restriction, the Cauchy
//! approximation pipeline, the pairing identity, commutator kernels) takes a
//! [`SmoothFn`], which supplies the value together with `∂f` and `∂̄f`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::wirtinger::RealLinearMap;
use crate::C64;

/// A C¹ function `C → C` with exact Wirtinger derivatives.
pub trait SmoothFn: Sync {
    fn value(&self, z: C64) -> C64;

    /// `∂f = (f_x − i f_y) / 2`.
    fn dz(&self, z: C64) -> C64;

    /// `∂̄f = (f_x + i f_y) / 2`.
    fn dzbar(&self, z: C64) -> C64;

    /// A closed disk containing the support, when the support is compact.
    fn support_disk(&self) -> Option<(C64, f64)> {
        None
    }

    fn differential(&self, z: C64) -> RealLinearMap {
        RealLinearMap::planar(self.dz(z), self.dzbar(z))
    }
}

impl<F: SmoothFn + ?Sized> SmoothFn for &F {
    fn value(&self, z: C64) -> C64 {
        (**self).value(z)
    }
    fn dz(&self, z: C64) -> C64 {
        (**self).dz(z)
    }
    fn dzbar(&self, z: C64) -> C64 {
        (**self).dzbar(z)
    }
    fn support_disk(&self) -> Option<(C64, f64)> {
        (**self).support_disk()
    }
}

impl<F: SmoothFn + ?Sized> SmoothFn for Box<F> {
    fn value(&self, z: C64) -> C64 {
        (**self).value(z)
    }
    fn dz(&self, z: C64) -> C64 {
        (**self).dz(z)
    }
    fn dzbar(&self, z: C64) -> C64 {
        (**self).dzbar(z)
    }
    fn support_disk(&self) -> Option<(C64, f64)> {
        (**self).support_disk()
    }
}

/// `coeff · z^p · z̄^q`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Monomial {
    pub p: u32,
    pub q: u32,
    pub coeff: C64,
}

/// A polynomial in `z` and `z̄`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Polynomial {
    pub terms: Vec<Monomial>,
}

fn ipow(z: C64, n: u32) -> C64 {
    match n {
        0 => C64::new(1.0, 0.0),
        1 => z,
        _ => z.powu(n),
    }
}

impl Polynomial {
    pub fn new(terms: Vec<Monomial>) -> Self {
        Self { terms }
    }

    pub fn monomial(p: u32, q: u32, coeff: C64) -> Self {
        Self::new(vec![Monomial { p, q, coeff }])
    }

    pub fn z() -> Self {
        Self::monomial(1, 0, C64::new(1.0, 0.0))
    }

    pub fn conj_z() -> Self {
        Self::monomial(0, 1, C64::new(1.0, 0.0))
    }

    /// `Σ c_k z^k`.
    pub fn holomorphic(coeffs: &[C64]) -> Self {
        Self::new(
            coeffs
                .iter()
                .enumerate()
                .filter(|(_, c)| **c != C64::new(0.0, 0.0))
                .map(|(k, &coeff)| Monomial {
                    p: k as u32,
                    q: 0,
                    coeff,
                })
                .collect(),
        )
    }

    /// Taylor polynomial of `exp(z)` of the given degree.
    pub fn exp_partial_sum(degree: u32) -> Self {
        let mut coeffs = Vec::with_capacity(degree as usize + 1);
        let mut c = 1.0;
        for k in 0..=degree {
            if k > 0 {
                c /= k as f64;
            }
            coeffs.push(C64::new(c, 0.0));
        }
        Self::holomorphic(&coeffs)
    }

    pub fn scaled(mut self, factor: C64) -> Self {
        for t in &mut self.terms {
            t.coeff *= factor;
        }
        self
    }

    pub fn plus(mut self, other: &Polynomial) -> Self {
        self.terms.extend_from_slice(&other.terms);
        self
    }

    /// True when no term carries a power of `z̄` with nonzero coefficient.
    pub fn is_holomorphic(&self) -> bool {
        self.terms
            .iter()
            .all(|t| t.q == 0 || t.coeff == C64::new(0.0, 0.0))
    }

    /// Total degree `max(p + q)`.
    pub fn degree(&self) -> u32 {
        self.terms.iter().map(|t| t.p + t.q).max().unwrap_or(0)
    }
}

impl SmoothFn for Polynomial {
    fn value(&self, z: C64) -> C64 {
        let zb = z.conj();
        self.terms
            .iter()
            .map(|t| t.coeff * ipow(z, t.p) * ipow(zb, t.q))
            .sum()
    }

    fn dz(&self, z: C64) -> C64 {
        let zb = z.conj();
        self.terms
            .iter()
            .filter(|t| t.p > 0)
            .map(|t| t.coeff * t.p as f64 * ipow(z, t.p - 1) * ipow(zb, t.q))
            .sum()
    }

    fn dzbar(&self, z: C64) -> C64 {
        let zb = z.conj();
        self.terms
            .iter()
            .filter(|t| t.q > 0)
            .map(|t| t.coeff * t.q as f64 * ipow(z, t.p) * ipow(zb, t.q - 1))
            .sum()
    }
}

/// `(1 − |z−c|²/R²)²` on the disk `|z−c| < R`, zero outside. C¹ across the
/// rim, with a jump in the second derivatives there.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bump {
    pub center: C64,
    pub radius: f64,
}

impl Bump {
    pub fn new(center: C64, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::invalid("bump radius must be positive"));
        }
        Ok(Self { center, radius })
    }

    pub fn unit() -> Self {
        Self {
            center: C64::new(0.0, 0.0),
            radius: 1.0,
        }
    }

    fn s(&self, z: C64) -> (C64, f64) {
        let w = z - self.center;
        (w, w.norm_sqr() / (self.radius * self.radius))
    }
}

impl SmoothFn for Bump {
    fn value(&self, z: C64) -> C64 {
        let (_, s) = self.s(z);
        if s >= 1.0 {
            return C64::new(0.0, 0.0);
        }
        C64::new((1.0 - s) * (1.0 - s), 0.0)
    }

    fn dz(&self, z: C64) -> C64 {
        let (w, s) = self.s(z);
        if s >= 1.0 {
            return C64::new(0.0, 0.0);
        }
        w.conj() * (-2.0 * (1.0 - s) / (self.radius * self.radius))
    }

    fn dzbar(&self, z: C64) -> C64 {
        let (w, s) = self.s(z);
        if s >= 1.0 {
            return C64::new(0.0, 0.0);
        }
        w * (-2.0 * (1.0 - s) / (self.radius * self.radius))
    }

    fn support_disk(&self) -> Option<(C64, f64)> {
        Some((self.center, self.radius))
    }
}

/// Radial C¹ cutoff: `1` for `|z−c| ≤ inner`, `0` for `|z−c| ≥ outer`, and
/// `1 − (3s² − 2s³)` with `s = (r − inner)/(outer − inner)` in between.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Plateau {
    pub center: C64,
    pub inner: f64,
    pub outer: f64,
}

impl Plateau {
    pub fn new(center: C64, inner: f64, outer: f64) -> Result<Self> {
        if !(inner > 0.0 && outer > inner && outer.is_finite()) {
            return Err(Error::invalid("plateau radii must satisfy 0 < inner < outer"));
        }
        Ok(Self {
            center,
            inner,
            outer,
        })
    }

    /// `dχ/dr / (2r)`; the Wirtinger derivatives are this times `w̄` and `w`.
    fn radial(&self, z: C64) -> (C64, f64) {
        let w = z - self.center;
        let r = w.norm();
        if r <= self.inner || r >= self.outer {
            return (w, 0.0);
        }
        let width = self.outer - self.inner;
        let s = (r - self.inner) / width;
        let dchi = -6.0 * s * (1.0 - s) / width;
        (w, dchi / (2.0 * r))
    }
}

impl SmoothFn for Plateau {
    fn value(&self, z: C64) -> C64 {
        let r = (z - self.center).norm();
        let v = if r <= self.inner {
            1.0
        } else if r >= self.outer {
            0.0
        } else {
            let s = (r - self.inner) / (self.outer - self.inner);
            1.0 - s * s * (3.0 - 2.0 * s)
        };
        C64::new(v, 0.0)
    }

    fn dz(&self, z: C64) -> C64 {
        let (w, k) = self.radial(z);
        w.conj() * k
    }

    fn dzbar(&self, z: C64) -> C64 {
        let (w, k) = self.radial(z);
        w * k
    }

    fn support_disk(&self) -> Option<(C64, f64)> {
        Some((self.center, self.outer))
    }
}

/// Pointwise product, via the Leibniz rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Product<A, B>(pub A, pub B);

impl<A: SmoothFn, B: SmoothFn> SmoothFn for Product<A, B> {
    fn value(&self, z: C64) -> C64 {
        self.0.value(z) * self.1.value(z)
    }

    fn dz(&self, z: C64) -> C64 {
        self.0.dz(z) * self.1.value(z) + self.0.value(z) * self.1.dz(z)
    }

    fn dzbar(&self, z: C64) -> C64 {
        self.0.dzbar(z) * self.1.value(z) + self.0.value(z) * self.1.dzbar(z)
    }

    fn support_disk(&self) -> Option<(C64, f64)> {
        match (self.0.support_disk(), self.1.support_disk()) {
            (Some(a), Some(b)) => Some(if a.1 <= b.1 { a } else { b }),
            (a, b) => a.or(b),
        }
    }
}

/// `z ↦ conj(f(z̄))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Conjugated<F>(pub F);

impl<F: SmoothFn> SmoothFn for Conjugated<F> {
    fn value(&self, z: C64) -> C64 {
        self.0.value(z.conj()).conj()
    }

    fn dz(&self, z: C64) -> C64 {
        self.0.dz(z.conj()).conj()
    }

    fn dzbar(&self, z: C64) -> C64 {
        self.0.dzbar(z.conj()).conj()
    }

    fn support_disk(&self) -> Option<(C64, f64)> {
        self.0.support_disk().map(|(c, r)| (c.conj(), r))
    }
}

/// Adapter for three closures `(f, ∂f, ∂̄f)`.
pub struct FnTriple<V, D, B> {
    pub value: V,
    pub dz: D,
    pub dzbar: B,
}

impl<V, D, B> SmoothFn for FnTriple<V, D, B>
where
    V: Fn(C64) -> C64 + Sync,
    D: Fn(C64) -> C64 + Sync,
    B: Fn(C64) -> C64 + Sync,
{
    fn value(&self, z: C64) -> C64 {
        (self.value)(z)
    }
    fn dz(&self, z: C64) -> C64 {
        (self.dz)(z)
    }
    fn dzbar(&self, z: C64) -> C64 {
        (self.dzbar)(z)
    }
}

/// Catalogued function symbols addressable by id from experiment configs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FunctionSymbol {
    Id(String),
    /// User polynomial: list of `[p, q, re, im]` for `(re + i·im) z^p z̄^q`.
    Poly { poly: Vec<[f64; 4]> },
}

/// Symbol ids in the catalog, sorted.
pub const SYMBOL_IDS: [&str; 7] = [
    "bump",
    "conj(z)",
    "koch-parameter",
    "poly",
    "z",
    "z*conj(z)",
    "z^2",
];

/// One-line description of a catalog id.
pub fn symbol_description(id: &str) -> Option<&'static str> {
    Some(match id {
        "bump" => "(1 - |z|^2)^2 on the unit disk, 0 outside",
        "conj(z)" => "complex conjugate, dbar = 1",
        "koch-parameter" => "curve parameter t on a Koch-type curve (zero-differential jet)",
        "poly" => "user polynomial {\"poly\": [[p, q, re, im], ...]} in z and conj(z)",
        "z" => "identity",
        "z*conj(z)" => "|z|^2",
        "z^2" => "square",
        _ => return None,
    })
}

/// A catalog function resolved to something evaluable.
#[derive(Debug, Clone, PartialEq)]
pub enum CatalogFn {
    Polynomial(Polynomial),
    Bump(Bump),
    /// Only meaningful on a Koch-type curve sample; not a function on `C`.
    KochParameter,
}

impl FunctionSymbol {
    pub fn id(s: &str) -> Self {
        FunctionSymbol::Id(s.to_string())
    }

    pub fn resolve(&self) -> Result<CatalogFn> {
        let one = C64::new(1.0, 0.0);
        match self {
            FunctionSymbol::Id(id) => Ok(match id.as_str() {
                "z" => CatalogFn::Polynomial(Polynomial::z()),
                "conj(z)" => CatalogFn::Polynomial(Polynomial::conj_z()),
                "z^2" => CatalogFn::Polynomial(Polynomial::monomial(2, 0, one)),
                "z*conj(z)" => CatalogFn::Polynomial(Polynomial::monomial(1, 1, one)),
                "bump" => CatalogFn::Bump(Bump::unit()),
                "koch-parameter" => CatalogFn::KochParameter,
                other => return Err(Error::invalid(format!("unknown function symbol '{other}'"))),
            }),
            FunctionSymbol::Poly { poly } => {
                let mut terms = Vec::with_capacity(poly.len());
                for &[p, q, re, im] in poly {
                    if p < 0.0 || q < 0.0 || p.fract() != 0.0 || q.fract() != 0.0 || p > 64.0 || q > 64.0 {
                        return Err(Error::invalid("polynomial exponents must be integers in 0..=64"));
                    }
                    if !(re.is_finite() && im.is_finite()) {
                        return Err(Error::NonFinite("polynomial coefficient".into()));
                    }
                    terms.push(Monomial {
                        p: p as u32,
                        q: q as u32,
                        coeff: C64::new(re, im),
                    });
                }
                Ok(CatalogFn::Polynomial(Polynomial::new(terms)))
            }
        }
    }
}

impl CatalogFn {
    /// The function as a [`SmoothFn`], unless it only lives on a curve.
    pub fn as_smooth(&self) -> Option<&dyn SmoothFn> {
        match self {
            CatalogFn::Polynomial(p) => Some(p),
            CatalogFn::Bump(b) => Some(b),
            CatalogFn::KochParameter => None,
        }
    }
}
