use std::collections::HashMap;

use rayon::prelude::*;

use super::jet::Jet1;
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::fit::{power_law_fit, PowerLaw};
use crate::C64;

/// `sup R(z, w)` over ordered pairs with `|z − w| ≤ scale`; `None` when no
/// pair is that close.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModulusRow {
    pub scale: f64,
    pub sup_r: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModulusTable {
    pub rows: Vec<ModulusRow>,
}

impl ModulusTable {
    /// CSV with header `scale,sup_R`; absent rows leave `sup_R` empty.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("scale,sup_R\n");
        for r in &self.rows {
            match r.sup_r {
                Some(v) => out.push_str(&format!("{},{}\n", r.scale, v)),
                None => out.push_str(&format!("{},\n", r.scale)),
            }
        }
        out
    }
}

/// Scales must be positive, finite and monotone (either direction).
/// Returns the permutation that sorts them ascending.
fn ascending_order(scales: &[f64]) -> Result<Vec<usize>> {
    if scales.is_empty() {
        return Err(Error::invalid("at least one scale is required"));
    }
    if scales.iter().any(|s| !(*s > 0.0 && s.is_finite())) {
        return Err(Error::invalid("scales must be positive and finite"));
    }
    let up = scales.windows(2).all(|w| w[0] < w[1]);
    let down = scales.windows(2).all(|w| w[0] > w[1]);
    if up {
        Ok((0..scales.len()).collect())
    } else if down {
        Ok((0..scales.len()).rev().collect())
    } else {
        Err(Error::invalid("scales must be strictly sorted"))
    }
}

/// Flat copies of the jet data for the inner loops.
struct Packed {
    z: Vec<C64>,
    f: Vec<C64>,
    a: Vec<C64>,
    b: Vec<C64>,
}

impl Packed {
    fn new(jet: &Jet1) -> Self {
        Packed {
            z: jet.base().points().to_vec(),
            f: jet.values().to_vec(),
            a: (0..jet.len()).map(|i| jet.holo(i)).collect(),
            b: (0..jet.len()).map(|i| jet.anti(i)).collect(),
        }
    }

    /// Folds both orientations of the pair `{i, j}` into `acc`.
    #[inline]
    fn visit(&self, i: usize, j: usize, sorted: &[f64], max2: f64, acc: &mut [f64]) {
        let d = self.z[i] - self.z[j];
        let d2 = d.norm_sqr();
        if d2 > max2 {
            return;
        }
        // Same operation order as `Jet1::remainder`, so results match it bitwise.
        let dist = d.norm();
        let k = sorted.partition_point(|&s| s < dist);
        if k == sorted.len() {
            return;
        }
        let rij = (self.f[i] - (self.f[j] + self.a[j] * d + self.b[j] * d.conj())).norm() / dist;
        let e = -d;
        let rji = (self.f[j] - (self.f[i] + self.a[i] * e + self.b[i] * e.conj())).norm() / e.norm();
        acc[k] = acc[k].max(rij).max(rji);
    }
}

fn merge(mut x: Vec<f64>, y: Vec<f64>) -> Vec<f64> {
    for (a, b) in x.iter_mut().zip(y) {
        *a = a.max(b);
    }
    x
}

/// Turns per-bucket maxima (bucket `k` holds pairs with distance in
/// `(s_{k−1}, s_k]`) into the table, in the caller's scale order.
fn assemble(scales: &[f64], order: &[usize], buckets: Vec<f64>) -> ModulusTable {
    let mut running = f64::NEG_INFINITY;
    let mut by_input = vec![None; scales.len()];
    for (k, &idx) in order.iter().enumerate() {
        running = running.max(buckets[k]);
        by_input[idx] = (running >= 0.0).then_some(running);
    }
    ModulusTable {
        rows: scales
            .iter()
            .zip(by_input)
            .map(|(&scale, sup_r)| ModulusRow { scale, sup_r })
            .collect(),
    }
}

fn prepare(jet: &Jet1, scales: &[f64], budget: &Budget) -> Result<(Vec<usize>, Vec<f64>)> {
    if jet.len() < 2 {
        return Err(Error::invalid("the modulus needs at least two points"));
    }
    let n = jet.len() as u128;
    budget.check_pairs(n * (n - 1) / 2)?;
    let order = ascending_order(scales)?;
    let sorted = order.iter().map(|&k| scales[k]).collect();
    Ok((order, sorted))
}

/// Exact Whitney modulus by a full pair scan, parallel over the outer
/// index. The result does not depend on the thread count: every bucket is a
/// maximum of the same set of values.
pub fn whitney_modulus(jet: &Jet1, scales: &[f64]) -> Result<ModulusTable> {
    whitney_modulus_with_budget(jet, scales, &Budget::from_env())
}

pub fn whitney_modulus_with_budget(jet: &Jet1, scales: &[f64], budget: &Budget) -> Result<ModulusTable> {
    let (order, sorted) = prepare(jet, scales, budget)?;
    let p = Packed::new(jet);
    let smax = sorted[sorted.len() - 1];
    let max2 = smax * smax * (1.0 + 4.0 * f64::EPSILON);
    let n = jet.len();
    let buckets = (0..n)
        .into_par_iter()
        .fold(
            || vec![f64::NEG_INFINITY; sorted.len()],
            |mut acc, i| {
                for j in i + 1..n {
                    p.visit(i, j, &sorted, max2, &mut acc);
                }
                acc
            },
        )
        .reduce(|| vec![f64::NEG_INFINITY; sorted.len()], merge);
    Ok(assemble(scales, &order, buckets))
}

/// Same table as [`whitney_modulus`], scanning only pairs in adjacent
/// buckets of a square hash grid with side equal to the largest scale.
pub fn whitney_modulus_bucketed(jet: &Jet1, scales: &[f64]) -> Result<ModulusTable> {
    let (order, sorted) = prepare(jet, scales, &Budget::from_env())?;
    let p = Packed::new(jet);
    let smax = sorted[sorted.len() - 1];
    let max2 = smax * smax * (1.0 + 4.0 * f64::EPSILON);
    let key = |z: C64| ((z.re / smax).floor() as i64, (z.im / smax).floor() as i64);
    let mut cells: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    for (i, &z) in p.z.iter().enumerate() {
        cells.entry(key(z)).or_default().push(i);
    }
    let n = jet.len();
    let buckets = (0..n)
        .into_par_iter()
        .fold(
            || vec![f64::NEG_INFINITY; sorted.len()],
            |mut acc, i| {
                let (cx, cy) = key(p.z[i]);
                for dx in -1..=1 {
                    for dy in -1..=1 {
                        if let Some(list) = cells.get(&(cx + dx, cy + dy)) {
                            for &j in list.iter().filter(|&&j| j > i) {
                                p.visit(i, j, &sorted, max2, &mut acc);
                            }
                        }
                    }
                }
                acc
            },
        )
        .reduce(|| vec![f64::NEG_INFINITY; sorted.len()], merge);
    Ok(assemble(scales, &order, buckets))
}

/// Least-squares fit of `ln sup_R` against `ln s`; the slope is the Hölder
/// exponent. Absent and zero rows are dropped.
pub fn holder_fit(table: &ModulusTable) -> Result<PowerLaw> {
    power_law_fit(table.rows.iter().filter_map(|r| r.sup_r.map(|v| (r.scale, v))))
}
