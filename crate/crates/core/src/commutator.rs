//! The commutator kernel `K(z, w) = (b(z) − b(w)) / (z − w)` on a sample and
//! its behaviour near the diagonal.
//!
//! For holomorphic `b` the kernel extends continuously to the diagonal with
//! value `∂b`, and `|K(z_i, z_j) − ∂b(z_i)| = O(|z_i − z_j|)`. A
//! conjugate-linear part contributes `∂̄b · conj(z−w)/(z−w)`, which depends on
//! the direction of `z − w` and has no limit on the diagonal.

use rayon::prelude::*;

use crate::cauchy::GridFunction;
use crate::error::{Error, Result};
use crate::fit::power_law_fit;
use crate::functions::SmoothFn;
use crate::jets::Jet1;
use crate::plane_sets::SetSample;
use crate::C64;

/// Largest sample a kernel is built on; larger samples are subsampled.
pub const KERNEL_POINT_CAP: usize = 4096;

/// Symmetric kernel matrix, stored as its strict upper triangle.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelMatrix {
    base: SetSample,
    upper: Vec<C64>,
    diagonal: Option<Vec<C64>>,
}

impl KernelMatrix {
    /// Kernel of the symbol values `b_i` at the sample points; `diagonal`
    /// is `∂b(z_i)` when known.
    pub fn from_values(base: SetSample, b: &[C64], diagonal: Option<Vec<C64>>) -> Result<Self> {
        let n = base.len();
        if b.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: b.len() });
        }
        if let Some(d) = &diagonal {
            if d.len() != n {
                return Err(Error::DimensionMismatch { expected: n, got: d.len() });
            }
        }
        let finite = |v: &C64| v.re.is_finite() && v.im.is_finite();
        if !b.iter().all(finite) || !diagonal.iter().flatten().all(finite) {
            return Err(Error::NonFinite("kernel symbol values".into()));
        }
        if n > KERNEL_POINT_CAP {
            return Err(Error::invalid(format!("kernel limited to {KERNEL_POINT_CAP} points; subsample first")));
        }
        let z = base.points();
        let upper: Vec<C64> = (0..n)
            .into_par_iter()
            .flat_map_iter(|i| (i + 1..n).map(move |j| (b[i] - b[j]) / (z[i] - z[j])))
            .collect();
        Ok(Self { base, upper, diagonal })
    }

    pub fn base(&self) -> &SetSample {
        &self.base
    }

    pub fn len(&self) -> usize {
        self.base.len()
    }

    pub fn is_empty(&self) -> bool {
        self.base.is_empty()
    }

    pub fn diagonal(&self) -> Option<&[C64]> {
        self.diagonal.as_deref()
    }

    #[inline]
    fn slot(&self, i: usize, j: usize) -> usize {
        let n = self.len();
        i * n - i * (i + 1) / 2 + (j - i - 1)
    }

    /// `K(i, j)` for `i ≠ j`; the same stored value serves both orders.
    pub fn entry(&self, i: usize, j: usize) -> C64 {
        assert!(i != j, "off-diagonal entries only");
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        self.upper[self.slot(a, b)]
    }

    /// Dense `n × n` dump in the grid-function binary layout (unit spacing,
    /// corner 0); absent diagonal entries are NaN.
    pub fn to_bytes(&self) -> Vec<u8> {
        let n = self.len();
        let mut buf = Vec::with_capacity(56 + 16 * n * n);
        for x in [0.0, 0.0, n as f64, n as f64, 1.0] {
            buf.extend_from_slice(&f64::to_le_bytes(x));
        }
        buf.extend_from_slice(&(n as u64).to_le_bytes());
        buf.extend_from_slice(&(n as u64).to_le_bytes());
        for i in 0..n {
            for j in 0..n {
                let v = if i == j {
                    self.diagonal.as_ref().map_or(C64::new(f64::NAN, f64::NAN), |d| d[i])
                } else {
                    self.entry(i, j)
                };
                buf.extend_from_slice(&v.re.to_le_bytes());
                buf.extend_from_slice(&v.im.to_le_bytes());
            }
        }
        buf
    }
}

/// Kernel of a smooth symbol with diagonal `∂b`.
pub fn build_kernel_from_fn<B: SmoothFn + ?Sized>(b: &B, sample: &SetSample) -> Result<KernelMatrix> {
    let values: Vec<C64> = sample.points().iter().map(|&z| b.value(z)).collect();
    let diag = sample.points().iter().map(|&z| b.dz(z)).collect();
    KernelMatrix::from_values(sample.clone(), &values, Some(diag))
}

/// Kernel of a jet, with diagonal taken from the jet's `∂f`.
pub fn build_kernel_from_jet(jet: &Jet1) -> Result<KernelMatrix> {
    let diag = (0..jet.len()).map(|i| jet.holo(i)).collect();
    KernelMatrix::from_values(jet.base().clone(), jet.values(), Some(diag))
}

/// [`build_kernel_from_fn`] on at most [`KERNEL_POINT_CAP`] points, chosen
/// with a seeded generator when the sample is larger.
pub fn build_kernel_capped<B: SmoothFn + ?Sized>(b: &B, sample: &SetSample, seed: u64) -> Result<KernelMatrix> {
    build_kernel_from_fn(b, &sample.subsample(KERNEL_POINT_CAP, seed)?)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileRow {
    pub scale: f64,
    /// `max |K(i,j) − ∂b(z_i)|` over ordered pairs within the scale.
    pub osc: Option<f64>,
    /// Largest diameter of `{K(i,j) : |z_i − z_j| ≤ s}` over `i`.
    pub angvar: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalProfile {
    pub rows: Vec<ProfileRow>,
}

impl DiagonalProfile {
    pub fn to_csv(&self) -> String {
        let opt = |v: Option<f64>| v.map_or(String::new(), |x| x.to_string());
        let mut out = String::from("scale,osc,angvar\n");
        for r in &self.rows {
            out.push_str(&format!("{},{},{}\n", r.scale, opt(r.osc), opt(r.angvar)));
        }
        out
    }
}

fn cross(o: C64, a: C64, b: C64) -> f64 {
    (a.re - o.re) * (b.im - o.im) - (a.im - o.im) * (b.re - o.re)
}

/// Diameter of a finite point set, through its convex hull.
fn diameter(points: &mut Vec<C64>) -> f64 {
    points.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    points.dedup();
    if points.len() < 2 {
        return 0.0;
    }
    let mut hull: Vec<C64> = Vec::with_capacity(points.len() + 1);
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &C64>> = if pass == 0 {
            Box::new(points.iter())
        } else {
            Box::new(points.iter().rev())
        };
        for &p in iter {
            while hull.len() >= start + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    let mut d: f64 = 0.0;
    for a in 0..hull.len() {
        for b in a + 1..hull.len() {
            d = d.max((hull[a] - hull[b]).norm());
        }
    }
    d
}

/// `osc` and `angvar` per scale by exact pair scans. `osc` is absent without
/// a diagonal; both are absent at scales where no pair is close enough.
pub fn diagonal_profile(k: &KernelMatrix, scales: &[f64]) -> Result<DiagonalProfile> {
    if scales.is_empty() || scales.iter().any(|s| !(*s > 0.0 && s.is_finite())) {
        return Err(Error::invalid("scales must be positive and finite"));
    }
    let mut order: Vec<usize> = (0..scales.len()).collect();
    order.sort_by(|&a, &b| scales[a].total_cmp(&scales[b]));
    let sorted: Vec<f64> = order.iter().map(|&o| scales[o]).collect();
    let smax = sorted[sorted.len() - 1];
    let z = k.base().points();
    let n = k.len();
    let m = sorted.len();

    // Per point: (osc, angvar) maxima at each ascending scale; −∞ = no pair.
    let per_point = |i: usize| {
        let mut near: Vec<(f64, usize)> = (0..n)
            .filter(|&j| j != i)
            .map(|j| ((z[i] - z[j]).norm(), j))
            .filter(|&(d, _)| d <= smax)
            .collect();
        near.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let mut osc = vec![f64::NEG_INFINITY; m];
        let mut ang = vec![f64::NEG_INFINITY; m];
        let mut taken = 0;
        let mut running_osc = f64::NEG_INFINITY;
        let mut values = Vec::new();
        for (s_idx, &s) in sorted.iter().enumerate() {
            while taken < near.len() && near[taken].0 <= s {
                let v = k.entry(i, near[taken].1);
                if let Some(d) = k.diagonal() {
                    running_osc = running_osc.max((v - d[i]).norm());
                }
                values.push(v);
                taken += 1;
            }
            if taken > 0 {
                osc[s_idx] = running_osc;
                ang[s_idx] = diameter(&mut values.clone());
            }
        }
        (osc, ang)
    };
    let merge = |mut a: (Vec<f64>, Vec<f64>), b: (Vec<f64>, Vec<f64>)| {
        for t in 0..m {
            a.0[t] = a.0[t].max(b.0[t]);
            a.1[t] = a.1[t].max(b.1[t]);
        }
        a
    };
    let empty = || (vec![f64::NEG_INFINITY; m], vec![f64::NEG_INFINITY; m]);
    let (osc, ang) = (0..n).into_par_iter().map(per_point).reduce(empty, merge);

    let mut rows = vec![None; scales.len()];
    for (t, &o) in order.iter().enumerate() {
        let present = ang[t] >= 0.0;
        rows[o] = Some(ProfileRow {
            scale: scales[o],
            osc: (present && k.diagonal().is_some()).then_some(osc[t]),
            angvar: present.then_some(ang[t]),
        });
    }
    Ok(DiagonalProfile {
        rows: rows.into_iter().map(|r| r.expect("every scale is filled")).collect(),
    })
}

/// Classification of a profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Verdict {
    pub holomorphic_like: bool,
    /// Log-log slope of `osc` (of `angvar` when degraded).
    pub exponent: f64,
    /// No diagonal was available; only `angvar` was used.
    pub degraded: bool,
}

/// Slope threshold for the `osc` profile.
pub const SLOPE_THRESHOLD: f64 = 0.5;
/// Largest `angvar` at the smallest scale for a holomorphic-like kernel.
pub const ANGVAR_THRESHOLD: f64 = 0.2;

/// Holomorphic-like iff the `osc` profile decays with log-log slope at
/// least 0.5 and `angvar` at the smallest scale is at most 0.2.
pub fn regularity_verdict(profile: &DiagonalProfile) -> Result<Verdict> {
    let present: Vec<&ProfileRow> = profile.rows.iter().filter(|r| r.angvar.is_some()).collect();
    if present.len() < 3 {
        return Err(Error::FitRefused { usable: present.len() });
    }
    let smallest = present
        .iter()
        .min_by(|a, b| a.scale.total_cmp(&b.scale))
        .and_then(|r| r.angvar)
        .expect("rows are present");
    let degraded = present.iter().any(|r| r.osc.is_none());
    let series: Vec<(f64, f64)> = present
        .iter()
        .map(|r| (r.scale, if degraded { r.angvar } else { r.osc }.unwrap_or(0.0)))
        .collect();
    // A profile that is identically zero is as regular as it gets.
    let exponent = if series.iter().all(|&(_, v)| v == 0.0) {
        f64::INFINITY
    } else {
        match power_law_fit(series.iter().copied()) {
            Ok(fit) => fit.exponent,
            // Fewer than 3 positive rows: partly zero, so decaying fast.
            Err(Error::FitRefused { .. }) => f64::INFINITY,
            Err(e) => return Err(e),
        }
    };
    let angvar_ok = smallest <= ANGVAR_THRESHOLD;
    Ok(Verdict {
        holomorphic_like: if degraded {
            angvar_ok
        } else {
            exponent >= SLOPE_THRESHOLD && angvar_ok
        },
        exponent,
        degraded,
    })
}

/// Kernel values as a grid function over index space (for inspection).
pub fn kernel_as_grid_function(k: &KernelMatrix) -> Result<GridFunction> {
    GridFunction::from_bytes(&k.to_bytes())
}
