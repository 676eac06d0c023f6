//! The experiments behind `run`. Each returns its artifacts in memory; the
//! caller writes them.

use planar_jets::cauchy::{holo_approx, max_principle_check, ApproxReport};
use planar_jets::commutator::{
    build_kernel_capped, build_kernel_from_jet, diagonal_profile, regularity_verdict, KernelMatrix,
    KERNEL_POINT_CAP,
};
use planar_jets::functions::{CatalogFn, Polynomial, SmoothFn};
use planar_jets::jets::{
    determinacy_scan, holder_fit, locally_constant_jet, restrict_smooth, snowflake_zero_diff_jet, whitney_modulus,
    DeterminacyRow, Jet1,
};
use planar_jets::perimeter::{pair, PairingReport};
use planar_jets::plane_sets::{Cell, SampleOrigin, SnowflakeCurve};
use planar_jets::wirtinger::{complex_part, extend_complex_linear, is_totally_real, RealLinearMap, RealSubspace};
use planar_jets::{Error, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::config::{ExperimentConfig, NamedFn};
use crate::error::CliError;

/// One output file.
#[derive(Debug, Clone, PartialEq)]
pub struct Artifact {
    pub name: String,
    /// The case this file belongs to.
    pub case: String,
    pub bytes: Vec<u8>,
}

impl Artifact {
    fn new(name: String, case: &str, bytes: Vec<u8>) -> Self {
        Self {
            name,
            case: case.to_string(),
            bytes,
        }
    }

    fn json(name: String, case: &str, value: &Value) -> Self {
        let mut text = serde_json::to_string_pretty(value).expect("JSON values serialize");
        text.push('\n');
        Self::new(name, case, text.into_bytes())
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct RunOptions {
    pub dump_binary: bool,
}

pub fn run(config: &ExperimentConfig, options: RunOptions) -> Result<Vec<Artifact>, CliError> {
    match config.experiment.as_str() {
        "holo-approx" => holo_approx_cases(config, options),
        "perimeter" => perimeter_cases(config),
        "commutator-scan" => commutator_cases(config, options),
        "snowflake-jet" => snowflake_case(config),
        "whitney-determinacy" => determinacy_cases(config),
        "locally-constant" => locally_constant_cases(config),
        "max-principle" => max_principle_cases(config),
        "extend-linear" => extend_linear_cases(config),
        other => Err(CliError::Config(format!("unknown experiment '{other}'"))),
    }
}

fn smooth<'a>(nf: &'a NamedFn, experiment: &str) -> Result<&'a dyn SmoothFn, CliError> {
    nf.f.as_smooth().ok_or_else(|| {
        CliError::Config(format!("{experiment}: '{}' is not a function on the plane", nf.label))
    })
}

fn csv(header: &str, lines: impl IntoIterator<Item = String>) -> Vec<u8> {
    let mut out = String::from(header);
    out.push('\n');
    for line in lines {
        out.push_str(&line);
        out.push('\n');
    }
    out.into_bytes()
}

fn holo_approx_cases(config: &ExperimentConfig, options: RunOptions) -> Result<Vec<Artifact>, CliError> {
    let sample = config.sample()?;
    let grid = config.grid.expect("validated").build()?;
    let mut out = Vec::new();
    for (k, nf) in config.named_functions()?.iter().enumerate() {
        let f = smooth(nf, "holo-approx")?;
        let mut lines = Vec::new();
        for (m, &delta) in config.deltas.iter().enumerate() {
            let (approx, report) = holo_approx(f, &sample, delta, &grid, config.dbar_source)?;
            lines.push(report.csv_line());
            if options.dump_binary {
                out.push(Artifact::new(format!("holo-approx_{k:02}_delta{m:02}.bin"), &nf.label, approx.to_bytes()));
            }
        }
        out.push(Artifact::new(format!("holo-approx_{k:02}.csv"), &nf.label, csv(ApproxReport::CSV_HEADER, lines)));
    }
    Ok(out)
}

fn perimeter_cases(config: &ExperimentConfig) -> Result<Vec<Artifact>, CliError> {
    let grid = config.grid.expect("validated").build()?;
    let phi = config.test_function.expect("validated");
    let functions = config.named_functions()?;
    let mut out = Vec::new();
    for (r, region) in config.regions()?.iter().enumerate() {
        let mut lines = Vec::new();
        for nf in &functions {
            lines.push(pair(smooth(nf, "perimeter")?, &phi, region, &grid)?.csv_line(&nf.label));
        }
        let case = serde_json::to_string(&config.regions[r]).expect("regions serialize");
        out.push(Artifact::new(format!("perimeter_{r:02}.csv"), &case, csv(PairingReport::CSV_HEADER, lines)));
    }
    Ok(out)
}

fn curve_or_err(config: &ExperimentConfig, what: &str) -> Result<SnowflakeCurve, CliError> {
    config
        .curve()?
        .ok_or_else(|| CliError::Config(format!("{what} needs a Koch-type curve set")))
}

/// The zero-differential jet `t` on at most `cap` curve vertices.
fn koch_jet(config: &ExperimentConfig, cap: Option<usize>) -> Result<Jet1, CliError> {
    let curve = curve_or_err(config, "koch-parameter")?;
    let jet = snowflake_zero_diff_jet(&curve)?;
    let Some(cap) = cap.filter(|&c| c < jet.len()) else {
        return Ok(jet);
    };
    let sub = jet.base().subsample(cap, config.seed)?;
    let values = sub
        .cells()
        .iter()
        .map(|c| match c {
            Cell::Param(t) => Ok(C64::new(*t, 0.0)),
            _ => Err(CliError::Numerical("curve sample lost its parameter cells".into())),
        })
        .collect::<Result<Vec<_>, _>>()?;
    let diffs = vec![RealLinearMap::planar(C64::new(0.0, 0.0), C64::new(0.0, 0.0)); sub.len()];
    Ok(Jet1::new(sub, values, diffs)?)
}

fn commutator_cases(config: &ExperimentConfig, options: RunOptions) -> Result<Vec<Artifact>, CliError> {
    let sample = config.sample()?;
    let mut out = Vec::new();
    for (k, nf) in config.named_functions()?.iter().enumerate() {
        let kernel: KernelMatrix = match &nf.f {
            CatalogFn::KochParameter => build_kernel_from_jet(&koch_jet(config, Some(KERNEL_POINT_CAP))?)?,
            _ => build_kernel_capped(smooth(nf, "commutator-scan")?, &sample, config.seed)?,
        };
        let profile = diagonal_profile(&kernel, &config.scales)?;
        let verdict = match regularity_verdict(&profile) {
            Ok(v) => json!({
                "holomorphic_like": v.holomorphic_like,
                "exponent": finite_or_string(v.exponent),
                "degraded": v.degraded,
            }),
            Err(Error::FitRefused { usable }) => json!({
                "holomorphic_like": null,
                "reason": format!("only {usable} scales have pairs"),
            }),
            Err(e) => return Err(e.into()),
        };
        out.push(Artifact::new(format!("commutator-scan_{k:02}.csv"), &nf.label, profile.to_csv().into_bytes()));
        out.push(Artifact::json(
            format!("commutator-scan_{k:02}_verdict.json"),
            &nf.label,
            &json!({ "function": nf.label, "points": kernel.len(), "verdict": verdict }),
        ));
        if options.dump_binary {
            out.push(Artifact::new(format!("commutator-scan_{k:02}_kernel.bin"), &nf.label, kernel.to_bytes()));
        }
    }
    Ok(out)
}

/// JSON has no infinities; they are written as strings.
fn finite_or_string(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        json!(x.to_string())
    }
}

fn snowflake_case(config: &ExperimentConfig) -> Result<Vec<Artifact>, CliError> {
    let curve = curve_or_err(config, "snowflake-jet")?;
    let jet = snowflake_zero_diff_jet(&curve)?;
    let table = whitney_modulus(&jet, &config.scales)?;
    let fit = holder_fit(&table)?;
    let values = jet.values();
    let summary = json!({
        "beta": curve.beta(),
        "depth": curve.depth(),
        "points": jet.len(),
        "alpha": curve.alpha(),
        "expected_exponent": 1.0 / curve.alpha() - 1.0,
        "fit_exponent": fit.exponent,
        "fit_constant": fit.constant,
        "rows_used": fit.rows_used,
        "value_at_start": values[0].re,
        "value_at_end": values[values.len() - 1].re,
        "max_differential": jet.diffs().iter().map(|d| d.holo()[0].norm().max(d.anti()[0].norm())).fold(0.0, f64::max),
    });
    Ok(vec![
        Artifact::new("snowflake-jet.csv".into(), "koch-parameter", table.to_csv().into_bytes()),
        Artifact::json("snowflake-jet_fit.json".into(), "koch-parameter", &summary),
    ])
}

fn determinacy_cases(config: &ExperimentConfig) -> Result<Vec<Artifact>, CliError> {
    let sample = config.sample()?;
    let mut out = Vec::new();
    for (k, nf) in config.named_functions()?.iter().enumerate() {
        let jet = match &nf.f {
            CatalogFn::KochParameter => koch_jet(config, None)?,
            _ => restrict_smooth(smooth(nf, "whitney-determinacy")?, &sample)?,
        };
        let rows = determinacy_scan(&jet, &config.scales)?;
        out.push(Artifact::new(
            format!("whitney-determinacy_{k:02}.csv"),
            &nf.label,
            csv(DeterminacyRow::CSV_HEADER, rows.iter().map(DeterminacyRow::csv_line)),
        ));
    }
    Ok(out)
}

fn locally_constant_cases(config: &ExperimentConfig) -> Result<Vec<Artifact>, CliError> {
    let sample = config.sample()?;
    let SampleOrigin::Ifs { spec, depth, .. } = sample.origin() else {
        return Err(CliError::Config("locally-constant needs an IFS set".into()));
    };
    if let Some(&bad) = config.levels.iter().find(|&&l| l > *depth) {
        return Err(CliError::Config(format!("level {bad} exceeds the set depth {depth}")));
    }
    let mut out = Vec::new();
    for (k, nf) in config.named_functions()?.iter().enumerate() {
        let f = smooth(nf, "locally-constant")?;
        let mut lines = Vec::new();
        for &level in &config.levels {
            let lc = locally_constant_jet(&sample, |z| f.value(z), level)?;
            let diameter = spec.max_ratio().powi(level as i32) * spec.initial_diameter();
            lines.push(format!("{level},{diameter},{}", lc.uniform_error));
        }
        out.push(Artifact::new(
            format!("locally-constant_{k:02}.csv"),
            &nf.label,
            csv("level,cell_diameter,uniform_error", lines),
        ));
    }
    Ok(out)
}

/// Holomorphic polynomials of random degree `≤ max_degree` with coefficients
/// uniform in the unit square.
pub fn random_polynomials(count: usize, max_degree: u32, seed: u64) -> Vec<Polynomial> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let degree = rng.random_range(0..=max_degree);
            let coeffs: Vec<C64> = (0..=degree)
                .map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect();
            Polynomial::holomorphic(&coeffs)
        })
        .collect()
}

fn max_principle_cases(config: &ExperimentConfig) -> Result<Vec<Artifact>, CliError> {
    let functions = config.named_functions()?;
    let random = random_polynomials(config.trials, config.degree, config.seed);
    let mut out = Vec::new();
    for (r, region) in config.regions()?.iter().enumerate() {
        let mut lines = Vec::new();
        let mut check = |label: &str, f: &dyn SmoothFn| -> Result<(), CliError> {
            let rep = max_principle_check(|z| f.value(z), region, config.resolution)?;
            lines.push(format!("{label},{},{},{}", rep.sup_boundary, rep.sup_interior, rep.pass));
            Ok(())
        };
        for nf in &functions {
            check(&nf.label, smooth(nf, "max-principle")?)?;
        }
        for (t, p) in random.iter().enumerate() {
            check(&format!("random-{t:03}"), p)?;
        }
        let case = serde_json::to_string(&config.regions[r]).expect("regions serialize");
        out.push(Artifact::new(
            format!("max-principle_{r:02}.csv"),
            &case,
            csv("case,sup_boundary,sup_interior,pass", lines),
        ));
    }
    Ok(out)
}

fn extension_json(w: &RealSubspace, values: &[C64]) -> Result<Value, CliError> {
    let base = json!({
        "ambient_dim": w.ambient_dim(),
        "real_dim": w.real_dim(),
        "complex_part_real_dim": complex_part(w).real_dim(),
        "totally_real": is_totally_real(w),
    });
    let result = match extend_complex_linear(w, values) {
        Ok(l) => {
            let err = w
                .basis()
                .iter()
                .zip(values)
                .map(|(v, want)| Ok((l.apply(v)? - want).norm()))
                .collect::<planar_jets::Result<Vec<f64>>>()?
                .into_iter()
                .fold(0.0, f64::max);
            json!({ "status": "extended", "holo": l.holo(), "anti": l.anti(), "restriction_error": err })
        }
        Err(Error::NotComplexLinearOnComplexPart { defect, tolerance }) => {
            json!({ "status": "rejected", "defect": defect, "tolerance": tolerance })
        }
        Err(e) => return Err(e.into()),
    };
    Ok(json!({ "subspace": base, "result": result }))
}

fn extend_linear_cases(config: &ExperimentConfig) -> Result<Vec<Artifact>, CliError> {
    let mut out = Vec::new();
    if let Some(s) = &config.subspace {
        let w = s.build()?;
        out.push(Artifact::json("extend-linear.json".into(), "explicit", &extension_json(&w, &s.values)?));
    }
    if config.trials > 0 {
        let n = config.subspace.as_ref().map_or(3, |s| s.n);
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let mut uniform = || C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let (mut accepted, mut skipped) = (0usize, 0usize);
        let mut max_err: f64 = 0.0;
        for t in 0..config.trials {
            let k = 1 + t % n;
            let basis: Vec<Vec<C64>> = (0..k).map(|_| (0..n).map(|_| uniform()).collect()).collect();
            let values: Vec<C64> = (0..k).map(|_| uniform()).collect();
            let Ok(w) = RealSubspace::new(n, basis) else {
                skipped += 1;
                continue;
            };
            if !is_totally_real(&w) {
                skipped += 1;
                continue;
            }
            let l = extend_complex_linear(&w, &values)?;
            for (v, want) in w.basis().iter().zip(&values) {
                max_err = max_err.max((l.apply(v)? - want).norm());
            }
            accepted += 1;
        }
        // Conjugation on C¹ is real-linear on the complex line C, where it
        // is not complex-linear.
        let line = RealSubspace::new(1, vec![vec![C64::new(1.0, 0.0)], vec![C64::new(0.0, 1.0)]])?;
        let conj_rejected = matches!(
            extend_complex_linear(&line, &[C64::new(1.0, 0.0), C64::new(0.0, -1.0)]),
            Err(Error::NotComplexLinearOnComplexPart { .. })
        );
        out.push(Artifact::json(
            "extend-linear_trials.json".into(),
            "random",
            &json!({
                "ambient_dim": n,
                "trials": config.trials,
                "accepted": accepted,
                "skipped_degenerate": skipped,
                "max_restriction_error": max_err,
                "conjugation_rejected": conj_rejected,
            }),
        ));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(json: &str) -> ExperimentConfig {
        let c: ExperimentConfig = serde_json::from_str(json).unwrap();
        crate::config::validate(&c).unwrap();
        c
    }

    #[test]
    fn perimeter_holomorphic_row() {
        let c = parse(
            r#"{"experiment":"perimeter","grid":{"corner":[-2,-2],"size":[64,64],"h":0.0625},
                "regions":[{"kind":"disk","center":[0,0],"radius":1}],
                "test_function":{"center":[0.1,0],"radius":1.5},"functions":["z"]}"#,
        );
        let out = run(&c, RunOptions::default()).unwrap();
        assert_eq!(out.len(), 1);
        let text = String::from_utf8(out[0].bytes.clone()).unwrap();
        let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
        assert_eq!(row[0], "z");
        assert!(row[7].parse::<f64>().unwrap() <= 1e-6 * std::f64::consts::PI);
    }

    #[test]
    fn explicit_extension() {
        let c = parse(
            r#"{"experiment":"extend-linear","subspace":{"n":2,"basis":[[[1,0],[0,0]],[[0,0],[1,0]]],
                "values":[[2,0],[0,3]]}}"#,
        );
        let out = run(&c, RunOptions::default()).unwrap();
        let v: Value = serde_json::from_slice(&out[0].bytes).unwrap();
        assert_eq!(v["result"]["status"], "extended");
        assert_eq!(v["result"]["holo"], json!([[2.0, 0.0], [0.0, 3.0]]));
    }

    #[test]
    fn random_polynomials_are_seeded() {
        assert_eq!(random_polynomials(5, 8, 7), random_polynomials(5, 8, 7));
        assert_ne!(random_polynomials(5, 8, 7), random_polynomials(5, 8, 8));
        assert!(random_polynomials(50, 8, 1).iter().all(|p| p.degree() <= 8 && p.is_holomorphic()));
    }

    #[test]
    fn koch_parameter_off_curve_is_a_config_error() {
        let c = parse(
            r#"{"experiment":"whitney-determinacy","set":{"kind":"four-corner","depth":2},
                "functions":["koch-parameter"],"scales":[0.5]}"#,
        );
        assert!(matches!(run(&c, RunOptions::default()), Err(CliError::Config(_))));
    }
}
