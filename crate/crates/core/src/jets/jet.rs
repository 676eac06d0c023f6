use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functions::SmoothFn;
use crate::plane_sets::{SampleOrigin, SetSample, SnowflakeCurve};
use crate::wirtinger::RealLinearMap;
use crate::C64;

/// A Whitney C¹ jet: a value and a differential `df = ∂f dz + ∂̄f dz̄` at
/// every point of a sample.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet1 {
    base: SetSample,
    values: Vec<C64>,
    diffs: Vec<RealLinearMap>,
}

fn finite(z: C64) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

impl Jet1 {
    pub fn new(base: SetSample, values: Vec<C64>, diffs: Vec<RealLinearMap>) -> Result<Self> {
        for len in [values.len(), diffs.len()] {
            if len != base.len() {
                return Err(Error::DimensionMismatch {
                    expected: base.len(),
                    got: len,
                });
            }
        }
        if let Some(d) = diffs.iter().find(|d| d.dim() != 1) {
            return Err(Error::DimensionMismatch {
                expected: 1,
                got: d.dim(),
            });
        }
        if !values.iter().copied().all(finite) {
            return Err(Error::NonFinite("jet values".into()));
        }
        if !diffs.iter().all(|d| finite(d.holo()[0]) && finite(d.anti()[0])) {
            return Err(Error::NonFinite("jet differentials".into()));
        }
        Ok(Jet1 { base, values, diffs })
    }

    pub fn base(&self) -> &SetSample {
        &self.base
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn diffs(&self) -> &[RealLinearMap] {
        &self.diffs
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `∂f` at point `i`.
    pub fn holo(&self, i: usize) -> C64 {
        self.diffs[i].holo()[0]
    }

    /// `∂̄f` at point `i`.
    pub fn anti(&self, i: usize) -> C64 {
        self.diffs[i].anti()[0]
    }

    /// Taylor remainder `|f(z_i) − f(z_j) − df_{z_j}(z_i − z_j)| / |z_i − z_j|`.
    pub fn remainder(&self, i: usize, j: usize) -> f64 {
        let d = self.base.points()[i] - self.base.points()[j];
        let taylor = self.values[j] + self.holo(j) * d + self.anti(j) * d.conj();
        (self.values[i] - taylor).norm() / d.norm()
    }

    /// Serializable form; the base sample is referenced, not embedded.
    pub fn to_doc(&self, sample_file: Option<String>) -> JetDoc {
        JetDoc {
            values: self.values.iter().map(|v| [v.re, v.im]).collect(),
            diffs: (0..self.len())
                .map(|i| {
                    let (a, b) = (self.holo(i), self.anti(i));
                    [a.re, a.im, b.re, b.im]
                })
                .collect(),
            base: SampleRef {
                file: sample_file,
                len: self.base.len(),
                h: self.base.resolution(),
                spec: self.base.origin().clone(),
            },
        }
    }

    /// Rebuilds a jet from its document and the sample it refers to.
    pub fn from_doc(doc: &JetDoc, base: SetSample) -> Result<Self> {
        if doc.base.len != base.len() {
            return Err(Error::DimensionMismatch {
                expected: doc.base.len,
                got: base.len(),
            });
        }
        let values = doc.values.iter().map(|&[re, im]| C64::new(re, im)).collect();
        let diffs = doc
            .diffs
            .iter()
            .map(|&[ar, ai, br, bi]| RealLinearMap::planar(C64::new(ar, ai), C64::new(br, bi)))
            .collect();
        Jet1::new(base, values, diffs)
    }
}

/// JSON layout of a jet.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JetDoc {
    pub values: Vec<[f64; 2]>,
    /// `[re ∂f, im ∂f, re ∂̄f, im ∂̄f]` per point.
    pub diffs: Vec<[f64; 4]>,
    pub base: SampleRef,
}

/// Pointer to the sample a jet lives on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleRef {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub file: Option<String>,
    pub len: usize,
    pub h: f64,
    pub spec: SampleOrigin,
}

/// Jet of a smooth function: values `F(z_i)`, differentials `(∂F, ∂̄F)(z_i)`.
pub fn restrict_smooth<F: SmoothFn + ?Sized>(f: &F, sample: &SetSample) -> Result<Jet1> {
    let values = sample.points().iter().map(|&z| f.value(z)).collect();
    let diffs = sample.points().iter().map(|&z| f.differential(z)).collect();
    Jet1::new(sample.clone(), values, diffs)
}

/// Largest `|∂̄f|` on the sample and where it is attained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DbarDefect {
    pub max: f64,
    pub index: usize,
    pub point: C64,
}

/// Maximum modulus of the conjugate-linear parts; ties go to the first index.
pub fn dbar_defect(jet: &Jet1) -> DbarDefect {
    let (index, max) = (0..jet.len())
        .map(|i| (i, jet.anti(i).norm()))
        .fold((0, f64::NEG_INFINITY), |best, cur| if cur.1 > best.1 { cur } else { best });
    DbarDefect {
        max,
        index,
        point: jet.base().points()[index],
    }
}

/// A locally constant jet with its distance to the approximated function.
#[derive(Debug, Clone, PartialEq)]
pub struct LocallyConstant {
    pub jet: Jet1,
    /// `max_i |f(z_i) − value_i|`.
    pub uniform_error: f64,
}

/// Constant on every depth-`level` cell of an IFS sample, with zero
/// differential. The value on a cell is `f` at the cell's representative,
/// the image of the base point under the cell's word.
pub fn locally_constant_jet(sample: &SetSample, f: impl Fn(C64) -> C64, level: usize) -> Result<LocallyConstant> {
    let SampleOrigin::Ifs {
        spec,
        depth,
        base_point,
    } = sample.origin()
    else {
        return Err(Error::invalid("locally constant jets need an IFS sample with word cells"));
    };
    if level > *depth {
        return Err(Error::invalid(format!("level {level} exceeds sample depth {depth}")));
    }
    let mut values = Vec::with_capacity(sample.len());
    let mut error: f64 = 0.0;
    for (cell, &z) in sample.cells().iter().zip(sample.points()) {
        let word = cell
            .word()
            .ok_or_else(|| Error::invalid("sample cells are not IFS words"))?;
        let v = f(spec.word_image(&word[..level], *base_point));
        error = error.max((f(z) - v).norm());
        values.push(v);
    }
    let diffs = vec![RealLinearMap::planar(C64::new(0.0, 0.0), C64::new(0.0, 0.0)); sample.len()];
    Ok(LocallyConstant {
        jet: Jet1::new(sample.clone(), values, diffs)?,
        uniform_error: error,
    })
}

/// The curve parameter as a function on a Koch-type curve: `f(z(t)) = t`
/// with `df ≡ 0`. Because `|z(t) − z(s)| ≍ |t − s|^α` with `α < 1`, the
/// remainder is `≍ |z − w|^{1/α − 1}` and the jet is Whitney C¹.
pub fn snowflake_zero_diff_jet(curve: &SnowflakeCurve) -> Result<Jet1> {
    if curve.alpha() >= 1.0 - 1e-12 {
        return Err(Error::invalid("a straight segment carries no zero-differential C¹ jet"));
    }
    let values = curve.params().iter().map(|&t| C64::new(t, 0.0)).collect();
    let diffs = vec![RealLinearMap::planar(C64::new(0.0, 0.0), C64::new(0.0, 0.0)); curve.len()];
    Jet1::new(curve.to_sample()?, values, diffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::Polynomial;
    use crate::plane_sets::{ifs_sample, snowflake_sample, IfsSpec};
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn restriction_of_basic_symbols() {
        let s = SetSample::grid(c(-1.0, -1.0), 0.5, 5, 5).unwrap();
        let id = restrict_smooth(&Polynomial::z(), &s).unwrap();
        assert!((0..id.len()).all(|i| id.holo(i) == c(1.0, 0.0) && id.anti(i) == c(0.0, 0.0)));
        let cj = restrict_smooth(&Polynomial::conj_z(), &s).unwrap();
        assert!((0..cj.len()).all(|i| cj.holo(i) == c(0.0, 0.0) && cj.anti(i) == c(1.0, 0.0)));

        let one = SetSample::from_points(vec![c(1.0, 1.0)], 0.0).unwrap();
        let zz = restrict_smooth(&Polynomial::monomial(1, 1, c(1.0, 0.0)), &one).unwrap();
        assert_eq!(zz.values()[0], c(2.0, 0.0));
        assert_eq!(zz.holo(0), c(1.0, -1.0));
        assert_eq!(zz.anti(0), c(1.0, 1.0));
    }

    #[test]
    fn dbar_defect_examples() {
        let s = SetSample::circle(c(0.0, 0.0), 1.0, 64).unwrap();
        let cube = restrict_smooth(&Polynomial::monomial(3, 0, c(1.0, 0.0)), &s).unwrap();
        assert_eq!(dbar_defect(&cube).max, 0.0);
        let conj = restrict_smooth(&Polynomial::conj_z(), &s).unwrap();
        assert_eq!(dbar_defect(&conj).max, 1.0);
        let mixed = Polynomial::z().plus(&Polynomial::monomial(0, 2, c(0.25, 0.0)));
        let d = dbar_defect(&restrict_smooth(&mixed, &s).unwrap());
        assert!((d.max - 0.5).abs() < 1e-15);
        assert!((d.point.norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn locally_constant_errors() {
        let s = ifs_sample(&IfsSpec::four_corner(), 6).unwrap();
        let constant = locally_constant_jet(&s, |_| c(3.0, -1.0), 2).unwrap();
        assert_eq!(constant.uniform_error, 0.0);
        let own = locally_constant_jet(&s, |z| c(z.re, 0.0), 6).unwrap();
        assert_eq!(own.uniform_error, 0.0);
        let coarse = locally_constant_jet(&s, |z| c(z.re, 0.0), 2).unwrap();
        let diam = IfsSpec::four_corner().initial_diameter() / 16.0;
        assert!(coarse.uniform_error > 0.0 && coarse.uniform_error <= diam);
        assert!(locally_constant_jet(&s, |z| z, 7).is_err());
        assert!(coarse.jet.diffs().iter().all(|d| d.holo()[0] == c(0.0, 0.0)));
    }

    #[test]
    fn snowflake_jet_endpoints_and_finiteness() {
        let curve = snowflake_sample(PI / 3.0, 1).unwrap();
        let jet = snowflake_zero_diff_jet(&curve).unwrap();
        assert_eq!(jet.values()[0], c(0.0, 0.0));
        assert_eq!(jet.values()[4], c(1.0, 0.0));
        let mut pairs = 0;
        for i in 0..5 {
            for j in i + 1..5 {
                assert!(jet.remainder(i, j).is_finite());
                pairs += 1;
            }
        }
        assert_eq!(pairs, 10);
    }

    #[test]
    fn doc_round_trip() {
        let s = ifs_sample(&IfsSpec::four_corner(), 2).unwrap();
        let jet = restrict_smooth(&Polynomial::monomial(1, 1, c(1.0, 0.5)), &s).unwrap();
        let doc = jet.to_doc(Some("set.json".into()));
        let text = serde_json::to_string(&doc).unwrap();
        let back: JetDoc = serde_json::from_str(&text).unwrap();
        assert_eq!(Jet1::from_doc(&back, s).unwrap(), jet);
    }

    #[test]
    fn rejects_mismatch_and_nan() {
        let s = SetSample::circle(c(0.0, 0.0), 1.0, 4).unwrap();
        let zero = RealLinearMap::planar(c(0.0, 0.0), c(0.0, 0.0));
        assert!(Jet1::new(s.clone(), vec![c(0.0, 0.0); 3], vec![zero.clone(); 4]).is_err());
        assert!(Jet1::new(s, vec![c(f64::NAN, 0.0); 4], vec![zero; 4]).is_err());
    }
}
