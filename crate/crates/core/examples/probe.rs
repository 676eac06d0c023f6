use planar_jets::cauchy::*;
use planar_jets::functions::*;
use planar_jets::jets::*;
use planar_jets::perimeter::*;
use planar_jets::plane_sets::*;
use planar_jets::{Grid, C64};
use std::time::Instant;

fn main() {
    let c = |a, b| C64::new(a, b);
    // criterion 5
    let t = Instant::now();
    let e = ifs_sample(&IfsSpec::four_corner(), 6).unwrap();
    let diam = e.diameter();
    println!("diam {diam} bbox {:?}", e.bounding_box());
    let f = Bump::new(c(0.5, 0.5), 1.2).unwrap();
    for n in [256usize, 512] {
        let grid = Grid::centered(c(0.5, 0.5), 2.6, n).unwrap();
        // untruncated reference residual outside support
        let g = GridFunction::from_fn(grid, |z| f.dzbar(z)).unwrap();
        let u = cauchy_transform(&g, None).unwrap();
        let r = dbar_fd(&u).unwrap();
        let outside = (0..grid.len()).filter(|&k| (grid.node_at(k) - c(0.5, 0.5)).norm() > 1.2).map(|k| r.values()[k].norm()).fold(0.0, f64::max);
        let inv = r.interior_sup_diff(&g, 1);
        println!("n={n} h={} untrunc outside-supp residual {outside:e} inversion {inv:e}", grid.h);
        for k in 3..=6 {
            let delta = diam * 0.5f64.powi(k);
            let (_, rep) = holo_approx(&f, &e, delta, &grid, DbarSource::Exact).unwrap();
            println!("  {rep:?}");
        }
    }
    println!("c5 {:?}", t.elapsed());
    // snowflake depth 7
    let t = Instant::now();
    let curve = snowflake_sample(std::f64::consts::PI / 3.0, 7).unwrap();
    let jet = snowflake_zero_diff_jet(&curve).unwrap();
    let scales: Vec<f64> = (1..=6).map(|k| 3f64.powi(-k)).collect();
    let tab = whitney_modulus(&jet, &scales).unwrap();
    println!("{}", tab.to_csv());
    println!("fit {:?} {:?}", holder_fit(&tab), t.elapsed());
    // perimeter stokes on disk
    let phi = Bump::new(c(0.1, -0.2), 2.0).unwrap();
    let disk = region_make(&RegionSpec::Disk { center: c(0.0, 0.0), radius: 1.0 }).unwrap();
    let sq = region_make(&RegionSpec::Square { corner: c(0.0, 0.0), side: 1.0 }).unwrap();
    for f in [Polynomial::z(), Polynomial::monomial(2, 0, c(1.0, 0.0)), Polynomial::conj_z()] {
        for reg in [&disk, &sq] {
            let mut g = Grid::new(c(-2.5, -2.5), 128, 128, 5.0 / 128.0).unwrap();
            let mut line = String::new();
            for _ in 0..4 {
                let r = pair(&f, &phi, reg, &g).unwrap();
                line += &format!(" gap {:.3e} res {:.3e} |", r.stokes_gap, r.residual.norm());
                g = g.refined().unwrap();
            }
            println!("{line}");
        }
    }
}
