use std::process::{Command, Output};

fn bohr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bohr"))
        .args(args)
        .output()
        .expect("bohr binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn table_is_deterministic_and_echoes_params() {
    let a = bohr(&["table", "--format", "csv"]);
    let b = bohr(&["table", "--format", "csv"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert!(text.starts_with("# command=table max_n=4 tol=1e-13\n"));
    assert_eq!(text.lines().count(), 6);
    assert!(text.contains("\n3,0.179307791906,0.1793\n"));
}

#[test]
fn radius_json_has_params_and_certificate() {
    let o = bohr(&["radius", "--theorem", "thm211", "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["params"]["theorem"], "thm211");
    let root = v["certificate"]["root"].as_f64().unwrap();
    assert!((root - (3.0 - 5f64.sqrt()) / 2.0).abs() < 1e-11);
}

#[test]
fn tolerance_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_bohr"))
        .args(["radius", "--theorem", "cor25", "--n", "2"])
        .env("BOHR_TOL", "1e-6")
        .output()
        .unwrap();
    assert!(o.status.success());
    assert!(stdout(&o).contains("tol=1e-6"));
}

#[test]
fn missing_or_extra_parameters_fail() {
    assert_eq!(bohr(&["radius", "--theorem", "thm12"]).status.code(), Some(2));
    assert_eq!(bohr(&["radius", "--theorem", "thm11", "--n", "2"]).status.code(), Some(2));
    assert_eq!(bohr(&["radius", "--theorem", "nope"]).status.code(), Some(2));
    assert_eq!(bohr(&["table", "--wat"]).status.code(), Some(2));
}

#[test]
fn verify_exit_codes() {
    let ok = bohr(&["verify", "--map", "half_plane_L", "--theorem", "thm211", "--format", "csv"]);
    assert!(ok.status.success());
    let text = stdout(&ok);
    assert!(text.contains("r,partial_sum,tail_bound,bound,verdict"));
    assert_eq!(text.lines().filter(|l| l.ends_with(",pass")).count(), 256);

    let tight = bohr(&["verify", "--map", "half_plane_L", "--theorem", "thm211", "--bound", "0.9"]);
    assert_eq!(tight.status.code(), Some(1));
}

#[test]
fn quasiconformal_pairing() {
    let o = bohr(&["sharpness", "--map", "p_k", "--k", "0.5", "--theorem", "thm12", "--K", "3"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let too_big = bohr(&["verify", "--map", "q_k", "--k", "0.6", "--theorem", "thm23_convex", "--K", "3"]);
    assert_eq!(too_big.status.code(), Some(2));
}

#[test]
fn image_curve_to_file() {
    let dir = std::env::temp_dir().join(format!("bohr-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("curve.csv");
    let o = bohr(&["image-curve", "--map", "harmonic_koebe_K", "--r", "0.3134", "--output", path.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("# map=harmonic_koebe_K r=0.3134 samples=4096 max_mod=0.99995"));
    assert_eq!(text.lines().count(), 4098);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn campaign_and_selfcheck() {
    let o = bohr(&["subordination-campaign", "--seeds", "16", "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["records"].as_array().unwrap().len(), 32);

    assert!(bohr(&["selfcheck", "--quick"]).status.success());
    let perturbed = bohr(&["selfcheck", "--quick", "--perturb"]);
    assert_eq!(perturbed.status.code(), Some(1));
    assert!(stdout(&perturbed).contains("FAIL extremal_equality"));
}
