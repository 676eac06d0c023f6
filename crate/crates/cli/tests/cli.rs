use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use planar_jets::cauchy::GridFunction;
use planar_jets::plane_sets::{ifs_sample, IfsSpec};
use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_planar-jets"))
}

fn configs_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs")
}

fn write_config(dir: &Path, json: &str) -> PathBuf {
    let path = dir.join("config.json");
    std::fs::write(&path, json).unwrap();
    path
}

fn run(config: &Path, out: &Path, extra: &[&str]) -> Output {
    bin()
        .args(["run", "--config"])
        .arg(config)
        .arg("--out")
        .arg(out)
        .args(extra)
        .output()
        .unwrap()
}

fn csv_rows(path: &Path) -> Vec<Vec<String>> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn list_is_stable_and_complete() {
    let a = bin().arg("list").output().unwrap();
    let b = bin().arg("list").output().unwrap();
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    for name in [
        "holo-approx",
        "perimeter",
        "commutator-scan",
        "snowflake-jet",
        "whitney-determinacy",
        "extend-linear",
        "locally-constant",
        "max-principle",
    ] {
        assert!(text.contains(name), "{name} missing");
        assert!(configs_dir().join(format!("{name}.json")).exists(), "no shipped config for {name}");
    }
}

#[test]
fn schema_is_json() {
    let out = bin().arg("schema").output().unwrap();
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["properties"]["experiment"]["enum"].as_array().unwrap().len(), 8);
}

#[test]
fn negative_delta_exits_2_without_files() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        r#"{"experiment":"holo-approx","set":{"kind":"four-corner","depth":3},
            "grid":{"corner":[-0.5,-0.5],"size":[64,64],"h":0.03125},
            "functions":[{"bump":{"center":[0.5,0.5],"radius":0.9}}],"deltas":[0.2,-0.1]}"#,
    );
    let out_dir = tmp.path().join("out");
    let out = run(&cfg, &out_dir, &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out_dir.exists());
}

#[test]
fn budget_override_exits_3() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        r#"{"experiment":"whitney-determinacy","set":{"kind":"four-corner","depth":6},
            "functions":["z"],"scales":[0.1]}"#,
    );
    let out = bin()
        .env("PLANAR_JETS_POINT_BUDGET", "1000")
        .args(["run", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(tmp.path().join("out"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn refused_fit_exits_1() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        r#"{"experiment":"snowflake-jet","set":{"kind":"koch","depth":1},"scales":[0.01,0.005,0.001]}"#,
    );
    assert_eq!(run(&cfg, &tmp.path().join("out"), &[]).status.code(), Some(1));
}

#[test]
fn perimeter_holomorphic_row() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        r#"{"experiment":"perimeter","grid":{"corner":[-2,-2],"size":[128,128],"h":0.03125},
            "regions":[{"kind":"disk","center":[0,0],"radius":1}],
            "test_function":{"center":[0,0],"radius":1.5},"functions":["z"]}"#,
    );
    let out_dir = tmp.path().join("out");
    assert!(run(&cfg, &out_dir, &[]).status.success());
    let rows = csv_rows(&out_dir.join("perimeter_00.csv"));
    assert_eq!(rows.len(), 1);
    // ‖φ‖_sup · area = π.
    assert!(rows[0][7].parse::<f64>().unwrap() <= 1e-6 * std::f64::consts::PI);
}

#[test]
fn holo_approx_rows_decrease_and_dump_parses() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        r#"{"experiment":"holo-approx","set":{"kind":"four-corner","depth":4},
            "grid":{"corner":[-0.8,-0.8],"size":[128,128],"h":0.0203125},
            "functions":[{"bump":{"center":[0.5,0.5],"radius":1.2}}],"deltas":[0.32,0.16,0.08,0.04]}"#,
    );
    let out_dir = tmp.path().join("out");
    let out = run(&cfg, &out_dir, &["--dump-binary"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let errors: Vec<f64> = csv_rows(&out_dir.join("holo-approx_00.csv"))
        .iter()
        .map(|r| r[1].parse().unwrap())
        .collect();
    assert_eq!(errors.len(), 4);
    assert!(errors.windows(2).all(|w| w[1] < w[0]), "{errors:?}");
    let dump = std::fs::read(out_dir.join("holo-approx_00_delta03.bin")).unwrap();
    let g = GridFunction::from_bytes(&dump).unwrap();
    assert_eq!((g.grid().nx, g.grid().ny), (128, 128));

    let manifest: Value = serde_json::from_slice(&std::fs::read(out_dir.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["files"].as_array().unwrap().len(), 5);
}

#[test]
fn set_spec_file_replaces_the_set_and_runs_are_repeatable() {
    let tmp = tempfile::tempdir().unwrap();
    let sample = ifs_sample(&IfsSpec::middle_thirds_squared(), 3).unwrap();
    let set_path = tmp.path().join("set.json");
    std::fs::write(&set_path, sample.to_json()).unwrap();
    let cfg = write_config(
        tmp.path(),
        r#"{"experiment":"locally-constant","set":{"kind":"four-corner","depth":2},
            "functions":["z"],"levels":[1,2,3]}"#,
    );
    let set_arg = set_path.to_str().unwrap();
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    assert!(run(&cfg, &a, &["--set-spec", set_arg, "--threads", "1"]).status.success());
    assert!(run(&cfg, &b, &["--set-spec", set_arg, "--threads", "2"]).status.success());
    assert_eq!(
        std::fs::read(a.join("manifest.json")).unwrap(),
        std::fs::read(b.join("manifest.json")).unwrap()
    );
    // Level 3 exists only because the file's depth-3 set replaced the depth-2 one; its cells are single points.
    let rows = csv_rows(&a.join("locally-constant_00.csv"));
    assert_eq!(rows.len(), 3);
    assert!(rows[2][2].parse::<f64>().unwrap() < 1e-15);
}
