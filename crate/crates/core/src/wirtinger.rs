//! Real-linear maps `Cⁿ → C` and complex-linear extension off real subspaces.
//!
//! Real coordinates of `v ∈ Cⁿ` are interleaved: `(Re v₀, Im v₀, Re v₁, …)`.
//! A real-linear map is then a `2 × 2n` real matrix whose first row is the
//! real part of the image and whose second row is the imaginary part.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::C64;

/// Relative cutoff for numerical rank decisions and the complex-linearity test.
pub const RANK_TOLERANCE: f64 = 1e-9;

const I: C64 = C64::new(0.0, 1.0);

/// `L(v) = Σ_j holo_j v_j + anti_j conj(v_j)`.
///
/// The split into the complex-linear part (`holo`, the ∂ part) and the
/// conjugate-linear part (`anti`, the ∂̄ part) is unique.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealLinearMap {
    holo: Vec<C64>,
    anti: Vec<C64>,
}

impl RealLinearMap {
    pub fn new(holo: Vec<C64>, anti: Vec<C64>) -> Result<Self> {
        if holo.is_empty() {
            return Err(Error::invalid("real-linear map needs dimension n ≥ 1"));
        }
        if holo.len() != anti.len() {
            return Err(Error::DimensionMismatch {
                expected: holo.len(),
                got: anti.len(),
            });
        }
        Ok(Self { holo, anti })
    }

    /// The map `v ↦ a·v + b·v̄` on `C`.
    pub fn planar(holo: C64, anti: C64) -> Self {
        Self {
            holo: vec![holo],
            anti: vec![anti],
        }
    }

    pub fn zero(n: usize) -> Self {
        Self {
            holo: vec![C64::new(0.0, 0.0); n],
            anti: vec![C64::new(0.0, 0.0); n],
        }
    }

    pub fn dim(&self) -> usize {
        self.holo.len()
    }

    pub fn holo(&self) -> &[C64] {
        &self.holo
    }

    pub fn anti(&self) -> &[C64] {
        &self.anti
    }

    pub fn apply(&self, v: &[C64]) -> Result<C64> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: v.len(),
            });
        }
        Ok(self
            .holo
            .iter()
            .zip(&self.anti)
            .zip(v)
            .map(|((a, b), x)| a * x + b * x.conj())
            .sum())
    }

    /// Fast path for `n = 1`; uses only the first coordinate.
    #[inline]
    pub fn apply_planar(&self, v: C64) -> C64 {
        self.holo[0] * v + self.anti[0] * v.conj()
    }

    /// Recovers the unique split from the action of a real-linear `f` on the
    /// basis `e_j, i·e_j`.
    pub fn from_action(n: usize, f: impl Fn(&[C64]) -> C64) -> Self {
        let mut holo = Vec::with_capacity(n);
        let mut anti = Vec::with_capacity(n);
        let mut v = vec![C64::new(0.0, 0.0); n];
        for j in 0..n {
            v[j] = C64::new(1.0, 0.0);
            let le = f(&v);
            v[j] = I;
            let lie = f(&v);
            v[j] = C64::new(0.0, 0.0);
            holo.push((le - I * lie) / 2.0);
            anti.push((le + I * lie) / 2.0);
        }
        Self { holo, anti }
    }

    /// Builds the map from its `2 × 2n` real matrix.
    pub fn from_real_matrix(m: &DMatrix<f64>) -> Result<Self> {
        if m.nrows() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                got: m.nrows(),
            });
        }
        if m.ncols() == 0 || !m.ncols().is_multiple_of(2) {
            return Err(Error::invalid(format!(
                "real matrix needs an even, positive column count, got {}",
                m.ncols()
            )));
        }
        if m.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("real matrix".into()));
        }
        let n = m.ncols() / 2;
        let mut holo = Vec::with_capacity(n);
        let mut anti = Vec::with_capacity(n);
        for j in 0..n {
            let le = C64::new(m[(0, 2 * j)], m[(1, 2 * j)]);
            let lie = C64::new(m[(0, 2 * j + 1)], m[(1, 2 * j + 1)]);
            holo.push((le - I * lie) / 2.0);
            anti.push((le + I * lie) / 2.0);
        }
        Ok(Self { holo, anti })
    }

    pub fn to_real_matrix(&self) -> DMatrix<f64> {
        let n = self.dim();
        let mut m = DMatrix::zeros(2, 2 * n);
        for j in 0..n {
            let le = self.holo[j] + self.anti[j];
            let lie = I * (self.holo[j] - self.anti[j]);
            m[(0, 2 * j)] = le.re;
            m[(1, 2 * j)] = le.im;
            m[(0, 2 * j + 1)] = lie.re;
            m[(1, 2 * j + 1)] = lie.im;
        }
        m
    }

    pub fn is_complex_linear(&self, tol: f64) -> bool {
        self.anti.iter().all(|b| b.norm() <= tol)
    }

    pub fn is_conjugate_linear(&self, tol: f64) -> bool {
        self.holo.iter().all(|a| a.norm() <= tol)
    }

    pub fn complex_linear_part(&self) -> Self {
        Self {
            holo: self.holo.clone(),
            anti: vec![C64::new(0.0, 0.0); self.dim()],
        }
    }

    pub fn conjugate_linear_part(&self) -> Self {
        Self {
            holo: vec![C64::new(0.0, 0.0); self.dim()],
            anti: self.anti.clone(),
        }
    }
}

/// Interleaved real coordinates of a complex vector.
pub fn to_real_coords(v: &[C64]) -> Vec<f64> {
    v.iter().flat_map(|z| [z.re, z.im]).collect()
}

pub fn from_real_coords(x: &[f64]) -> Vec<C64> {
    x.chunks_exact(2).map(|c| C64::new(c[0], c[1])).collect()
}

/// A real-linear subspace of `Cⁿ` given by an explicit real basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealSubspace {
    n: usize,
    basis: Vec<Vec<C64>>,
}

impl RealSubspace {
    /// Validates lengths and real-linear independence of the basis.
    pub fn new(n: usize, basis: Vec<Vec<C64>>) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("ambient dimension must be positive"));
        }
        for v in &basis {
            if v.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: v.len(),
                });
            }
            if v.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
                return Err(Error::NonFinite("subspace basis".into()));
            }
        }
        let w = Self { n, basis };
        if !w.basis.is_empty() {
            let rank = numerical_rank(&w.real_matrix());
            if rank < w.basis.len() {
                return Err(Error::DependentBasis {
                    rank,
                    vectors: w.basis.len(),
                });
            }
        }
        Ok(w)
    }

    pub fn zero(n: usize) -> Self {
        Self { n, basis: Vec::new() }
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn real_dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<C64>] {
        &self.basis
    }

    /// Columns are the real coordinates of the basis vectors (`2n × k`).
    pub fn real_matrix(&self) -> DMatrix<f64> {
        let k = self.basis.len();
        let mut m = DMatrix::zeros(2 * self.n, k);
        for (c, v) in self.basis.iter().enumerate() {
            for (r, x) in to_real_coords(v).into_iter().enumerate() {
                m[(r, c)] = x;
            }
        }
        m
    }

    /// Distance from `v` to the subspace (least-squares residual norm).
    pub fn distance(&self, v: &[C64]) -> f64 {
        let b = DVector::from_vec(to_real_coords(v));
        if self.basis.is_empty() {
            return b.norm();
        }
        let a = self.real_matrix();
        let svd = a.clone().svd(true, true);
        let eps = RANK_TOLERANCE * svd.singular_values.max();
        let x = svd.solve(&b, eps).expect("svd computed with u and v");
        (a * x - b).norm()
    }

    /// Whether the two subspaces coincide (each basis lies in the other).
    pub fn same_span(&self, other: &RealSubspace, tol: f64) -> bool {
        self.n == other.n
            && self.real_dim() == other.real_dim()
            && self.basis.iter().all(|v| other.distance(v) <= tol)
            && other.basis.iter().all(|v| self.distance(v) <= tol)
    }
}

/// Number of singular values above `RANK_TOLERANCE · σ_max`.
fn numerical_rank(m: &DMatrix<f64>) -> usize {
    if m.is_empty() {
        return 0;
    }
    let sv = m.clone().svd(false, false).singular_values;
    let cutoff = RANK_TOLERANCE * sv.max();
    sv.iter().filter(|&&s| s > cutoff).count()
}

/// Orthonormal basis of the null space of `m`, as columns.
fn null_space(m: &DMatrix<f64>) -> Vec<DVector<f64>> {
    let cols = m.ncols();
    // Pad to at least square so the SVD yields a full right-singular basis.
    let rows = m.nrows().max(cols);
    let mut padded = DMatrix::zeros(rows, cols);
    padded.view_mut((0, 0), (m.nrows(), cols)).copy_from(m);
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("requested v_t");
    let smax = svd.singular_values.max();
    let cutoff = RANK_TOLERANCE * smax;
    (0..cols)
        .filter(|&k| smax == 0.0 || svd.singular_values[k] <= cutoff)
        .map(|k| v_t.row(k).transpose())
        .collect()
}

/// Null-space coefficients `(c, d)` with `Σ c_k w_k = Σ d_k (i w_k)`; the
/// common value sweeps `W ∩ iW`.
fn intersection_coefficients(w: &RealSubspace) -> Vec<(DVector<f64>, DVector<f64>)> {
    let k = w.real_dim();
    if k == 0 {
        return Vec::new();
    }
    let a = w.real_matrix();
    let ia = RealSubspace {
        n: w.n,
        basis: w.basis.iter().map(|v| v.iter().map(|z| I * z).collect()).collect(),
    }
    .real_matrix();
    let mut m = DMatrix::zeros(2 * w.n, 2 * k);
    m.view_mut((0, 0), (2 * w.n, k)).copy_from(&a);
    m.view_mut((0, k), (2 * w.n, k)).copy_from(&(-ia));
    null_space(&m)
        .into_iter()
        .map(|x| (x.rows(0, k).into_owned(), x.rows(k, k).into_owned()))
        .collect()
}

/// A basis of `W ∩ iW`, the largest complex subspace inside `W`.
///
/// The basis is returned as `u₁, i·u₁, u₂, i·u₂, …` with the `u` complex
/// orthonormal, so the result is visibly closed under multiplication by `i`.
pub fn complex_part(w: &RealSubspace) -> RealSubspace {
    let a = w.real_matrix();
    let mut orthonormal: Vec<Vec<C64>> = Vec::new();
    for (c, _) in intersection_coefficients(w) {
        let v = from_real_coords((&a * c).as_slice());
        let mut r = v.clone();
        for u in &orthonormal {
            let proj: C64 = u.iter().zip(&r).map(|(x, y)| x.conj() * y).sum();
            for (ri, ui) in r.iter_mut().zip(u) {
                *ri -= proj * ui;
            }
        }
        let norm = r.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let scale = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-6 * scale.max(f64::MIN_POSITIVE) {
            orthonormal.push(r.into_iter().map(|z| z / norm).collect());
        }
    }
    let basis = orthonormal
        .into_iter()
        .flat_map(|u| {
            let iu = u.iter().map(|z| I * z).collect();
            [u, iu]
        })
        .collect();
    RealSubspace { n: w.n, basis }
}

/// `W ∩ iW = {0}`.
pub fn is_totally_real(w: &RealSubspace) -> bool {
    intersection_coefficients(w).is_empty()
}

/// Extends the real-linear map given by `values[k] = L(basis[k])` to a
/// complex-linear map on all of `Cⁿ`.
///
/// Succeeds exactly when `L(iv) = iL(v)` on `W ∩ iW` (within
/// [`RANK_TOLERANCE`] relative to the size of the constraint system). The
/// returned map has zero conjugate-linear part; among all extensions it is
/// the one of minimal norm.
pub fn extend_complex_linear(w: &RealSubspace, values: &[C64]) -> Result<RealLinearMap> {
    let k = w.real_dim();
    if values.len() != k {
        return Err(Error::DimensionMismatch {
            expected: k,
            got: values.len(),
        });
    }
    if values.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(Error::NonFinite("prescribed values".into()));
    }
    if k == 0 {
        return Ok(RealLinearMap::zero(w.n));
    }

    let constraints = DMatrix::from_fn(k, w.n, |r, c| w.basis[r][c]);
    let svd = constraints.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let vmax = values.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let tolerance = RANK_TOLERANCE * smax.max(vmax).max(f64::MIN_POSITIVE);

    // For (c, d) in the null space, v = Σ c_k w_k and -iv = Σ d_k w_k.
    let mut defect: f64 = 0.0;
    for (c, d) in intersection_coefficients(w) {
        let lv: C64 = c.iter().zip(values).map(|(ci, val)| val * *ci).sum();
        let lmiv: C64 = d.iter().zip(values).map(|(di, val)| val * *di).sum();
        defect = defect.max((lmiv + I * lv).norm());
    }
    if defect > tolerance {
        return Err(Error::NotComplexLinearOnComplexPart { defect, tolerance });
    }

    let rhs = DVector::from_column_slice(values);
    let holo = svd
        .solve(&rhs, RANK_TOLERANCE * smax)
        .expect("svd computed with u and v");
    RealLinearMap::new(holo.iter().copied().collect(), vec![C64::new(0.0, 0.0); w.n])
}
