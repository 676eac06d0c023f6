use std::collections::HashMap;

use nalgebra::{DMatrix, DVector};
use planar_jets::cauchy::{cauchy_transform, dbar_fd, holo_approx, DbarSource, GridFunction};
use planar_jets::commutator::{build_kernel_from_fn, build_kernel_from_jet, diagonal_profile};
use planar_jets::fit::power_law_fit;
use planar_jets::functions::{Bump, Conjugated, Monomial, Polynomial, SmoothFn};
use planar_jets::jets::{dbar_defect, locally_constant_jet, restrict_smooth, whitney_modulus, Jet1};
use planar_jets::perimeter::pair;
use planar_jets::plane_sets::{
    delta_mask, ifs_sample, region_make, snowflake_sample, IfsSpec, RegionSpec, SetSample, Similarity,
};
use planar_jets::wirtinger::{
    extend_complex_linear, is_totally_real, to_real_coords, RealLinearMap, RealSubspace,
};
use planar_jets::{Grid, C64};
use proptest::prelude::*;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn complex(range: f64) -> impl Strategy<Value = C64> {
    (-range..range, -range..range).prop_map(|(re, im)| C64::new(re, im))
}

/// Polynomials `Σ c z^p z̄^q` with `p + q ≤ max_degree`.
fn polynomial(max_degree: u32) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((0..=max_degree, 0..=max_degree, complex(1.0)), 1..5).prop_map(move |terms| {
        Polynomial::new(
            terms
                .into_iter()
                .map(|(p, q, coeff)| {
                    let q = q.min(max_degree - p);
                    Monomial { p, q, coeff }
                })
                .collect(),
        )
    })
}

/// `Σ |c| (p(p−1) + 2pq + q(q−1)) ρ^{p+q−2}`: bounds the second real
/// derivative of the polynomial in any unit direction on `|z| ≤ ρ`.
fn second_derivative_bound(f: &Polynomial, rho: f64) -> f64 {
    f.terms
        .iter()
        .map(|m| {
            let (p, q) = (m.p as f64, m.q as f64);
            let weight = p * (p - 1.0) + 2.0 * p * q + q * (q - 1.0);
            if weight == 0.0 {
                0.0
            } else {
                m.coeff.norm() * weight * rho.powi(m.p as i32 + m.q as i32 - 2)
            }
        })
        .sum()
}

fn cases(n: u32) -> ProptestConfig {
    ProptestConfig {
        cases: n,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

// ---------------------------------------------------------------- wirtinger

fn real_matrix(n: usize) -> impl Strategy<Value = DMatrix<f64>> {
    prop::collection::vec(-3.0f64..3.0, 4 * n).prop_map(move |v| DMatrix::from_row_slice(2, 2 * n, &v))
}

/// Solves the complex system `A x = y` through the equivalent real one.
fn solve_complex(a: &DMatrix<C64>, y: &[C64]) -> Option<Vec<C64>> {
    let n = a.nrows();
    let m = DMatrix::from_fn(2 * n, 2 * n, |r, col| {
        let z = a[(r / 2, col / 2)];
        match (r % 2, col % 2) {
            (0, 0) => z.re,
            (0, _) => -z.im,
            (_, 0) => z.im,
            _ => z.re,
        }
    });
    let sv = m.clone().svd(false, false).singular_values;
    if sv.min() < 1e-3 * sv.max() {
        return None;
    }
    let rhs = DVector::from_iterator(2 * n, y.iter().flat_map(|z| [z.re, z.im]));
    let x = m.lu().solve(&rhs)?;
    Some((0..n).map(|k| c(x[2 * k], x[2 * k + 1])).collect())
}

proptest! {
    #![proptest_config(cases(64))]

    #[test]
    fn splitting_round_trip(m in (1usize..=3).prop_flat_map(real_matrix)) {
        let n = m.ncols() / 2;
        let l = RealLinearMap::from_real_matrix(&m).unwrap();
        for j in 0..n {
            for unit in [c(1.0, 0.0), c(0.0, 1.0)] {
                let mut v = vec![c(0.0, 0.0); n];
                v[j] = unit;
                let x = DVector::from_vec(to_real_coords(&v));
                let want = &m * x;
                let got = l.apply(&v).unwrap();
                prop_assert!((got.re - want[0]).abs() <= 1e-12 && (got.im - want[1]).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn splitting_is_basis_independent(
        n in 1usize..=3,
        entries in prop::collection::vec(-3.0f64..3.0, 12),
        probes in prop::collection::vec(complex(1.0), 36),
    ) {
        let m = DMatrix::from_row_slice(2, 2 * n, &entries[..4 * n]);
        let l = RealLinearMap::from_real_matrix(&m).unwrap();
        // 2n generic vectors; L(v) = Σ holo_j v_j + anti_j v̄_j is a square
        // complex system in (holo, anti).
        let vs: Vec<&[C64]> = probes.chunks(3).take(2 * n).map(|v| &v[..n]).collect();
        let a = DMatrix::from_fn(2 * n, 2 * n, |r, col| {
            if col < n { vs[r][col] } else { vs[r][col - n].conj() }
        });
        let y: Vec<C64> = vs.iter().map(|v| l.apply(v).unwrap()).collect();
        if let Some(x) = solve_complex(&a, &y) {
            for j in 0..n {
                prop_assert!((x[j] - l.holo()[j]).norm() <= 1e-10, "{:?} vs {:?}", x, l);
                prop_assert!((x[n + j] - l.anti()[j]).norm() <= 1e-10);
            }
        }
    }

    #[test]
    fn totally_real_extension_restricts(
        k in 1usize..=3,
        basis in prop::collection::vec(complex(1.0), 9),
        values in prop::collection::vec(complex(2.0), 3),
    ) {
        let vectors: Vec<Vec<C64>> = basis.chunks(3).take(k).map(|v| v.to_vec()).collect();
        let w = match RealSubspace::new(3, vectors.clone()) {
            Ok(w) => w,
            Err(_) => return Ok(()),
        };
        // Generic real k-planes with k ≤ 3 in C³ are totally real; skip the
        // near-degenerate draws.
        let complexified = DMatrix::from_fn(3, k, |r, col| vectors[col][r]);
        prop_assume!(complexified.svd(false, false).singular_values.min() > 1e-3);
        prop_assert!(is_totally_real(&w));
        let l = extend_complex_linear(&w, &values[..k]).unwrap();
        for (v, want) in vectors.iter().zip(&values) {
            prop_assert!((l.apply(v).unwrap() - want).norm() <= 1e-10);
        }
    }
}

// --------------------------------------------------------------- plane sets

fn random_ifs() -> impl Strategy<Value = IfsSpec> {
    prop::collection::vec((0.1f64..0.5, -3.2f64..3.2, complex(1.0)), 2..5).prop_map(|maps| {
        IfsSpec::new(maps.into_iter().map(|(r, a, t)| Similarity::new(r, a, t)).collect()).unwrap()
    })
}

proptest! {
    #![proptest_config(cases(32))]

    #[test]
    fn ifs_nesting_counts_and_cells(spec in random_ifs(), depth in 1usize..=4) {
        let coarse = ifs_sample(&spec, depth - 1).unwrap();
        let fine = ifs_sample(&spec, depth).unwrap();
        prop_assert_eq!(fine.len(), spec.len().pow(depth as u32));
        let rho = spec.max_ratio();
        let d0 = spec.initial_diameter();
        let reach = rho.powi(depth as i32 - 1) * d0;
        for z in fine.points() {
            let nearest = coarse.points().iter().map(|w| (z - w).norm()).fold(f64::INFINITY, f64::min);
            prop_assert!(nearest <= reach * (1.0 + 1e-12));
            prop_assert!(z.norm() <= spec.origin_ball_radius() * (1.0 + 1e-12) + 1e-12);
        }
        // Points sharing a length-m word prefix lie in one level-m cell.
        for m in 0..=depth {
            let mut cells: HashMap<Vec<u8>, Vec<C64>> = HashMap::new();
            for (cell, &z) in fine.cells().iter().zip(fine.points()) {
                cells.entry(cell.word().unwrap()[..m].to_vec()).or_default().push(z);
            }
            prop_assert_eq!(cells.len(), spec.len().pow(m as u32));
            let bound = rho.powi(m as i32) * d0 * (1.0 + 1e-12);
            for pts in cells.values() {
                for a in pts {
                    for b in pts {
                        prop_assert!((a - b).norm() <= bound);
                    }
                }
            }
        }
    }

    #[test]
    fn convex_polygon_area_is_shoelace(
        angles in prop::collection::vec(0.0f64..std::f64::consts::TAU, 3..9),
        radii in prop::collection::vec(0.5f64..2.0, 9),
        clockwise in any::<bool>(),
    ) {
        let mut angles = angles;
        angles.sort_by(f64::total_cmp);
        angles.dedup_by(|a, b| (*a - *b).abs() < 1e-3);
        prop_assume!(angles.len() >= 3);
        // Points on a circle in angular order form a convex polygon.
        let r = radii[0];
        let mut vertices: Vec<C64> = angles.iter().map(|&t| C64::from_polar(r, t)).collect();
        let shoelace: f64 = (0..vertices.len())
            .map(|k| {
                let (a, b) = (vertices[k], vertices[(k + 1) % vertices.len()]);
                a.re * b.im - b.re * a.im
            })
            .sum::<f64>()
            / 2.0;
        prop_assume!(shoelace > 1e-6);
        if clockwise {
            vertices.reverse();
        }
        let region = region_make(&RegionSpec::Polygon { vertices }).unwrap();
        prop_assert!((region.signed_area() - shoelace).abs() <= 1e-12 * shoelace.max(1.0));
        prop_assert!((region.area - shoelace).abs() <= 1e-12 * shoelace.max(1.0));
    }

    #[test]
    fn delta_mask_is_monotone(d1 in 0.02f64..0.3, d2 in 0.02f64..0.3) {
        let s = ifs_sample(&IfsSpec::four_corner(), 3).unwrap();
        let grid = Grid::centered(c(0.5, 0.5), 2.0, 96).unwrap();
        let (lo, hi) = if d1 <= d2 { (d1, d2) } else { (d2, d1) };
        let a = delta_mask(&s, lo, &grid).unwrap();
        let b = delta_mask(&s, hi, &grid).unwrap();
        prop_assert!(a.is_subset_of(&b));
        prop_assert!(a.area <= b.area);
    }
}

#[test]
fn snowflake_pinning_and_holder_ratio() {
    for beta in [std::f64::consts::FRAC_PI_3, 0.8, 1.2] {
        for depth in 1..=7 {
            if depth == 7 && beta != std::f64::consts::FRAC_PI_3 {
                continue;
            }
            let curve = snowflake_sample(beta, depth).unwrap();
            assert_eq!(curve.points()[0], c(0.0, 0.0));
            assert_eq!(*curve.points().last().unwrap(), c(1.0, 0.0));
            let (lo, hi) = curve.holder_ratio_bounds();
            assert!(hi / lo <= 50.0, "beta {beta} depth {depth}: {lo} {hi}");
        }
    }
}

#[test]
fn snowflake_box_dimension() {
    let curve = snowflake_sample(std::f64::consts::FRAC_PI_3, 6).unwrap();
    let rows: Vec<(f64, f64)> = (2..=5)
        .map(|k| {
            let eps = 3f64.powi(-k);
            let mut boxes: Vec<(i64, i64)> = curve
                .points()
                .iter()
                .map(|z| ((z.re / eps).floor() as i64, (z.im / eps).floor() as i64))
                .collect();
            boxes.sort_unstable();
            boxes.dedup();
            (1.0 / eps, boxes.len() as f64)
        })
        .collect();
    let fit = power_law_fit(rows).unwrap();
    let dim = 4f64.ln() / 3f64.ln();
    assert!((fit.exponent - dim).abs() <= 0.05, "{fit:?}");
}

#[test]
fn delta_mask_area_converges_under_refinement() {
    let s = ifs_sample(&IfsSpec::four_corner(), 4).unwrap();
    let areas: Vec<f64> = [64usize, 128, 256, 512]
        .iter()
        .map(|&n| delta_mask(&s, 0.05, &Grid::centered(c(0.5, 0.5), 1.6, n).unwrap()).unwrap().area)
        .collect();
    let last = areas.len() - 1;
    assert!((areas[last] - areas[last - 1]).abs() <= 0.05 * areas[last], "{areas:?}");
}

#[test]
fn cantor_neighbourhood_area_scales_linearly() {
    // The four-corner set has dimension 1, so |U_δ| ≍ δ^{2−1}.
    let s = ifs_sample(&IfsSpec::four_corner(), 6).unwrap();
    let grid = Grid::centered(c(0.5, 0.5), 1.6, 512).unwrap();
    let rows: Vec<(f64, f64)> = [0.1, 0.05, 0.025, 0.0125]
        .iter()
        .map(|&d| (d, delta_mask(&s, d, &grid).unwrap().area))
        .collect();
    let fit = power_law_fit(rows).unwrap();
    assert!((0.7..=1.3).contains(&fit.exponent), "{fit:?}");
}

// --------------------------------------------------------------------- jets

fn cantor(depth: usize) -> SetSample {
    ifs_sample(&IfsSpec::four_corner(), depth).unwrap()
}

const SCALES: [f64; 4] = [1.0, 0.5, 0.25, 0.125];

proptest! {
    #![proptest_config(cases(32))]

    #[test]
    fn remainder_bounded_by_second_derivative(f in polynomial(3)) {
        let s = cantor(3);
        let jet = restrict_smooth(&f, &s).unwrap();
        let m = second_derivative_bound(&f, 2f64.sqrt());
        for row in whitney_modulus(&jet, &SCALES).unwrap().rows {
            if let Some(r) = row.sup_r {
                prop_assert!(r <= 0.5 * m * row.scale * (1.0 + 1e-9) + 1e-12, "{row:?} M={m}");
            }
        }
    }

    #[test]
    fn modulus_ignores_translation_and_labels(f in polynomial(3), seed in any::<u64>()) {
        let s = cantor(3);
        let jet = restrict_smooth(&f, &s).unwrap();
        let base = whitney_modulus(&jet, &SCALES).unwrap();

        let moved = Jet1::new(s.translated(c(5.0, 7.0)).unwrap(), jet.values().to_vec(), jet.diffs().to_vec()).unwrap();
        for (a, b) in base.rows.iter().zip(whitney_modulus(&moved, &SCALES).unwrap().rows) {
            match (a.sup_r, b.sup_r) {
                (Some(x), Some(y)) => prop_assert!((x - y).abs() <= 1e-12 * x.max(1.0)),
                (x, y) => prop_assert_eq!(x, y),
            }
        }

        let mut order: Vec<usize> = (0..s.len()).collect();
        let mut state = seed | 1;
        for k in (1..order.len()).rev() {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            order.swap(k, (state % (k as u64 + 1)) as usize);
        }
        let relabelled = Jet1::new(
            s.permuted(&order).unwrap(),
            order.iter().map(|&k| jet.values()[k]).collect(),
            order.iter().map(|&k| jet.diffs()[k].clone()).collect(),
        )
        .unwrap();
        prop_assert_eq!(whitney_modulus(&relabelled, &SCALES).unwrap(), base);
    }

    #[test]
    fn dbar_defect_vanishes_exactly_for_holomorphic(
        degree in 0u32..=5,
        coeffs in prop::collection::vec(complex(1.0), 6),
        anti in prop::option::of((1u32..=3, 0.1f64..1.0, 0.0f64..6.3)),
    ) {
        let s = cantor(3);
        let mut f = Polynomial::holomorphic(&coeffs[..=degree as usize]);
        if let Some((q, r, t)) = anti {
            f = f.plus(&Polynomial::monomial(0, q, C64::from_polar(r, t)));
        }
        let defect = dbar_defect(&restrict_smooth(&f, &s).unwrap());
        prop_assert_eq!(defect.max == 0.0, f.is_holomorphic());
    }

    #[test]
    fn locally_constant_error_matches_oracle(a in complex(1.0), b in complex(1.0), level in 0usize..=4) {
        let s = cantor(4);
        let f = |z: C64| a * z + b * z.conj();
        let lc = locally_constant_jet(&s, f, level).unwrap();
        // Oracle: group points by their level-`level` cell, compare with the
        // cell representative.
        let spec = IfsSpec::four_corner();
        let mut oracle: f64 = 0.0;
        for (cell, &z) in s.cells().iter().zip(s.points()) {
            let rep = spec.word_image(&cell.word().unwrap()[..level], spec.center());
            oracle = oracle.max((f(z) - f(rep)).norm());
        }
        prop_assert_eq!(lc.uniform_error, oracle);
        let lip = a.norm() + b.norm();
        let cell_diameter = 0.25f64.powi(level as i32) * spec.initial_diameter();
        prop_assert!(lc.uniform_error <= lip * cell_diameter * (1.0 + 1e-12));
    }
}

// ------------------------------------------------------------------- cauchy

fn random_grid_function(grid: Grid) -> impl Strategy<Value = GridFunction> {
    prop::collection::vec(complex(1.0), grid.len())
        .prop_map(move |v| GridFunction::new(grid, v).unwrap())
}

proptest! {
    #![proptest_config(cases(16))]

    #[test]
    fn transform_is_linear(
        (g1, g2) in {
            let grid = Grid::new(c(-1.0, -1.0), 20, 16, 0.1).unwrap();
            (random_grid_function(grid), random_grid_function(grid))
        },
        a in complex(2.0),
    ) {
        let combined = cauchy_transform(&g1.axpy(a, &g2).unwrap(), None).unwrap();
        let separate = cauchy_transform(&g1, None).unwrap().axpy(a, &cauchy_transform(&g2, None).unwrap()).unwrap();
        for (x, y) in combined.values().iter().zip(separate.values()) {
            prop_assert!((x - y).norm() <= 1e-10);
        }
    }

    #[test]
    fn transform_commutes_with_lattice_shifts(
        patch in prop::collection::vec(complex(1.0), 36),
        di in 0usize..8,
        dj in 0usize..8,
    ) {
        let grid = Grid::new(c(0.0, 0.0), 16, 16, 0.125).unwrap();
        let place = |oi: usize, oj: usize| {
            let mut v = vec![c(0.0, 0.0); grid.len()];
            for (k, &p) in patch.iter().enumerate() {
                v[grid.index(oi + k % 6, oj + k / 6)] = p;
            }
            GridFunction::new(grid, v).unwrap()
        };
        let base = cauchy_transform(&place(1, 1), None).unwrap();
        let moved = cauchy_transform(&place(1 + di, 1 + dj), None).unwrap();
        for j in 0..grid.ny - dj {
            for i in 0..grid.nx - di {
                prop_assert!((moved.at(i + di, j + dj) - base.at(i, j)).norm() <= 1e-10);
            }
        }
    }
}

proptest! {
    #![proptest_config(cases(4))]

    #[test]
    fn inversion_improves_under_refinement(center in complex(0.3), radius in 0.8f64..1.2) {
        let bump = Bump::new(center, radius).unwrap();
        let errors: Vec<f64> = [32usize, 64, 128, 256]
            .iter()
            .map(|&n| {
                let grid = Grid::centered(c(0.0, 0.0), 4.0, n).unwrap();
                let g = GridFunction::from_fn(grid, |z| bump.dzbar(z)).unwrap();
                let r = dbar_fd(&cauchy_transform(&g, None).unwrap()).unwrap();
                r.interior_sup_diff(&g, 1)
            })
            .collect();
        for w in errors.windows(2) {
            prop_assert!(w[0] >= 1.5 * w[1], "{errors:?}");
        }
    }

    #[test]
    fn truncation_error_is_monotone_in_delta(center in complex(0.1), radius in 1.1f64..1.4) {
        let f = Bump::new(c(0.5, 0.5) + center, radius).unwrap();
        let s = cantor(4);
        let grid = Grid::centered(c(0.5, 0.5), 3.2, 128).unwrap();
        let max_dbar = 4.0 / (3.0 * 3f64.sqrt() * radius);
        let slack = 5.0 * grid.h * max_dbar;
        let mut previous = f64::INFINITY;
        for k in 0..4 {
            let delta = 0.4 * 0.5f64.powi(k);
            let (_, report) = holo_approx(&f, &s, delta, &grid, DbarSource::Exact).unwrap();
            prop_assert!(report.sup_error_on_e <= previous + slack, "{report:?} after {previous}");
            previous = report.sup_error_on_e;
        }
    }
}

#[test]
fn truncated_residual_below_untruncated_residual_outside_support() {
    // Holds once δ ≥ 8h: closer to the truncation edge the finite-difference
    // stencil sees the jump of ∂̄ at the removed cells.
    let f = Bump::new(c(0.5, 0.5), 1.2).unwrap();
    let s = cantor(6);
    let grid = Grid::centered(c(0.5, 0.5), 2.6, 256).unwrap();
    let g = GridFunction::from_fn(grid, |z| f.dzbar(z)).unwrap();
    let full = dbar_fd(&cauchy_transform(&g, None).unwrap()).unwrap();
    let outside = (0..grid.len())
        .filter(|&k| (grid.node_at(k) - c(0.5, 0.5)).norm() > 1.2)
        .map(|k| full.values()[k].norm())
        .fold(0.0, f64::max);
    for k in 0..2 {
        let delta = s.diameter() * 0.125 * 0.5f64.powi(k);
        assert!(delta >= 8.0 * grid.h);
        let (_, report) = holo_approx(&f, &s, delta, &grid, DbarSource::Exact).unwrap();
        assert!(report.dbar_residual_inside <= outside, "{report:?} vs {outside}");
    }
}

// ---------------------------------------------------------------- perimeter

/// `a·φ₁ + φ₂`, supported in the smallest disk about `φ₁`'s centre holding both.
struct Combination {
    a: C64,
    p1: Bump,
    p2: Bump,
}

impl SmoothFn for Combination {
    fn value(&self, z: C64) -> C64 {
        self.a * self.p1.value(z) + self.p2.value(z)
    }
    fn dz(&self, z: C64) -> C64 {
        self.a * self.p1.dz(z) + self.p2.dz(z)
    }
    fn dzbar(&self, z: C64) -> C64 {
        self.a * self.p1.dzbar(z) + self.p2.dzbar(z)
    }
    fn support_disk(&self) -> Option<(C64, f64)> {
        let r = self.p1.radius.max((self.p2.center - self.p1.center).norm() + self.p2.radius);
        Some((self.p1.center, r))
    }
}

/// Tensor Gauss–Legendre over the square `[x0, x0+side] × [y0, y0+side]`.
fn square_quadrature(corner: C64, side: f64, f: impl Fn(C64) -> C64) -> C64 {
    let gl = planar_jets::quadrature::GaussLegendre::new(24);
    let mut total = c(0.0, 0.0);
    for (x, wx) in gl.mapped(corner.re, corner.re + side) {
        for (y, wy) in gl.mapped(corner.im, corner.im + side) {
            total += f(c(x, y)) * (wx * wy);
        }
    }
    total
}

proptest! {
    #![proptest_config(cases(8))]

    #[test]
    fn residual_identity_for_antiholomorphic_parts(which in 0usize..3, center in complex(0.2)) {
        let f = match which {
            0 => Polynomial::conj_z(),
            1 => Polynomial::monomial(0, 2, c(1.0, 0.0)),
            _ => Polynomial::z().plus(&Polynomial::conj_z()),
        };
        let phi = Bump::new(center, 2.0).unwrap();
        let grid = Grid::centered(c(0.0, 0.0), 5.0, 320).unwrap();
        // Square aligned with the grid lines: midpoint rule is second order.
        let corner = c(-0.5, -0.5);
        let square = region_make(&RegionSpec::Square { corner, side: 1.0 }).unwrap();
        let r = pair(&f, &phi, &square, &grid).unwrap();
        let oracle = square_quadrature(corner, 1.0, |z| f.dzbar(z) * phi.value(z));
        // Symmetric cases cancel to 0; measure against the integral of |·|.
        let scale = square_quadrature(corner, 1.0, |z| c((f.dzbar(z) * phi.value(z)).norm(), 0.0)).re;
        prop_assert!((r.residual - oracle).norm() <= 1e-4 * scale, "{:?} vs {oracle}", r.residual);

        let disk = region_make(&RegionSpec::Disk { center: c(0.0, 0.0), radius: 1.0 }).unwrap();
        let r = pair(&f, &phi, &disk, &grid).unwrap();
        let direct: C64 = (0..grid.len())
            .map(|k| grid.node_at(k))
            .filter(|z| z.norm() <= 1.0)
            .map(|z| f.dzbar(z) * phi.value(z))
            .sum::<C64>()
            * grid.cell_area();
        prop_assert!((r.residual - direct).norm() <= 1e-10 * scale.max(1.0));
    }

    #[test]
    fn pairing_is_linear(f1 in polynomial(2), f2 in polynomial(2), a in complex(2.0), c2 in complex(0.3)) {
        let grid = Grid::centered(c(0.0, 0.0), 5.0, 64).unwrap();
        let region = region_make(&RegionSpec::Disk { center: c(0.1, 0.0), radius: 1.0 }).unwrap();
        let p1 = Bump::new(c(0.0, 0.0), 1.5).unwrap();
        let p2 = Bump::new(c2, 1.2).unwrap();
        let close = |x: C64, y: C64, scale: f64| (x - y).norm() <= 1e-10 * scale.max(1.0);

        let sum_f = f1.clone().scaled(a).plus(&f2);
        let (r1, r2, rs) = (
            pair(&f1, &p1, &region, &grid).unwrap(),
            pair(&f2, &p1, &region, &grid).unwrap(),
            pair(&sum_f, &p1, &region, &grid).unwrap(),
        );
        let scale = r1.lhs.norm() + r2.lhs.norm() + r1.rhs_contour.norm() + r2.rhs_contour.norm();
        prop_assert!(close(rs.lhs, a * r1.lhs + r2.lhs, scale));
        prop_assert!(close(rs.rhs_area, a * r1.rhs_area + r2.rhs_area, scale));
        prop_assert!(close(rs.rhs_contour, a * r1.rhs_contour + r2.rhs_contour, scale));

        let combo = Combination { a, p1, p2 };
        let (q1, q2, qs) = (
            pair(&f1, &p1, &region, &grid).unwrap(),
            pair(&f1, &p2, &region, &grid).unwrap(),
            pair(&f1, &combo, &region, &grid).unwrap(),
        );
        let scale = q1.lhs.norm() + q2.lhs.norm() + q1.rhs_contour.norm() + q2.rhs_contour.norm();
        prop_assert!(close(qs.lhs, a * q1.lhs + q2.lhs, scale));
        prop_assert!(close(qs.rhs_area, a * q1.rhs_area + q2.rhs_area, scale));
        prop_assert!(close(qs.rhs_contour, a * q1.rhs_contour + q2.rhs_contour, scale));
    }

    #[test]
    fn pairing_is_additive_over_quadrants(f in polynomial(3), center in complex(0.3)) {
        let grid = Grid::centered(c(0.0, 0.0), 5.0, 160).unwrap();
        let phi = Bump::new(center, 1.9).unwrap();
        let whole = pair(&f, &phi, &region_make(&RegionSpec::Square { corner: c(-1.0, -1.0), side: 2.0 }).unwrap(), &grid).unwrap();
        let mut lhs = c(0.0, 0.0);
        let mut contour = c(0.0, 0.0);
        for corner in [c(-1.0, -1.0), c(0.0, -1.0), c(-1.0, 0.0), c(0.0, 0.0)] {
            let r = pair(&f, &phi, &region_make(&RegionSpec::Square { corner, side: 1.0 }).unwrap(), &grid).unwrap();
            lhs += r.lhs;
            contour += r.rhs_contour;
        }
        let scale = whole.lhs.norm().max(whole.rhs_contour.norm()).max(1.0);
        prop_assert!((lhs - whole.lhs).norm() <= 1e-10 * scale);
        prop_assert!((contour - whole.rhs_contour).norm() <= 1e-10 * scale);
    }
}

#[test]
fn stokes_gap_shrinks_on_aligned_square() {
    let phi = Bump::new(c(0.1, -0.2), 2.0).unwrap();
    let square = region_make(&RegionSpec::Square { corner: c(-0.5, -0.5), side: 1.0 }).unwrap();
    for f in [Polynomial::z(), Polynomial::conj_z(), Polynomial::monomial(1, 1, c(1.0, 0.0))] {
        let mut grid = Grid::centered(c(0.0, 0.0), 5.0, 80).unwrap();
        let mut gaps = Vec::new();
        for _ in 0..3 {
            gaps.push(pair(&f, &phi, &square, &grid).unwrap().stokes_gap);
            grid = grid.refined().unwrap();
        }
        assert!(gaps[0] >= 1.5 * gaps[1] && gaps[1] >= 1.5 * gaps[2], "{gaps:?}");
    }
}

// --------------------------------------------------------------- commutator

proptest! {
    #![proptest_config(cases(32))]

    #[test]
    fn kernels_are_symmetric(f in polynomial(3)) {
        let k = build_kernel_from_fn(&f, &cantor(2)).unwrap();
        for i in 0..k.len() {
            for j in (0..k.len()).filter(|&j| j != i) {
                prop_assert_eq!(k.entry(i, j), k.entry(j, i));
            }
        }
    }

    #[test]
    fn affine_symbols_give_constant_kernels(alpha in complex(2.0), beta in complex(2.0)) {
        let s = cantor(2);
        let b = Polynomial::z().scaled(alpha).plus(&Polynomial::monomial(0, 0, beta));
        let k = build_kernel_from_fn(&b, &s).unwrap();
        // Cancellation in b(z) − b(w) costs eps·|b| / |z − w|; the closest
        // depth-2 points are 3/16 apart.
        let tol = 8.0 * f64::EPSILON * (alpha.norm() * 2f64.sqrt() + beta.norm()) / (3.0 / 16.0) + 1e-15;
        for i in 0..k.len() {
            for j in (0..k.len()).filter(|&j| j != i) {
                prop_assert!((k.entry(i, j) - alpha).norm() <= tol.max(1e-14));
            }
        }
    }

    #[test]
    fn conjugation_covariance(f in polynomial(3)) {
        let s = cantor(2);
        let k = build_kernel_from_fn(&f, &s).unwrap();
        let mirrored = build_kernel_from_fn(&Conjugated(f.clone()), &s.conjugated().unwrap()).unwrap();
        for i in 0..k.len() {
            for j in (0..k.len()).filter(|&j| j != i) {
                let want = k.entry(i, j).conj();
                prop_assert!((mirrored.entry(i, j) - want).norm() <= 1e-14 * want.norm().max(1.0));
            }
        }
    }

    #[test]
    fn holomorphic_oscillation_bounded(coeffs in prop::collection::vec(complex(1.0), 1..5)) {
        let f = Polynomial::holomorphic(&coeffs);
        let jet = restrict_smooth(&f, &cantor(3)).unwrap();
        prop_assert_eq!(dbar_defect(&jet).max, 0.0);
        let profile = diagonal_profile(&build_kernel_from_jet(&jet).unwrap(), &SCALES).unwrap();
        let m = second_derivative_bound(&f, 2f64.sqrt());
        for row in profile.rows {
            if let Some(osc) = row.osc {
                prop_assert!(osc <= 0.5 * m * row.scale * (1.0 + 1e-9) + 1e-12, "{row:?} M={m}");
            }
        }
    }
}

#[test]
fn second_derivative_bound_examples() {
    let f = Polynomial::monomial(2, 0, c(1.0, 0.0));
    assert_eq!(second_derivative_bound(&f, 3.0), 2.0);
    let g = Polynomial::monomial(1, 1, c(1.0, 0.0));
    assert_eq!(second_derivative_bound(&g, 3.0), 2.0);
}
