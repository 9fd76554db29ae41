use std::path::Path;
use std::process::{Command, Output};

fn aggdiff(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_aggdiff")).args(args).output().unwrap()
}

fn write_config(dir: &Path, body: &str) -> String {
    let path = dir.join("c.json");
    std::fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

fn config_1d(out: &Path) -> String {
    format!(
        r#"{{"params": {{"N": 1, "k": -0.5, "m": 1.8, "chi": 1.0}},
            "grid": {{"r_max": 3.0, "n": 128}},
            "io": {{"output_dir": {:?}}}}}"#,
        out.to_str().unwrap()
    )
}

#[test]
fn invalid_kernel_exponent_exits_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"params": {"N": 3, "k": -5, "m": 2.0, "chi": 1.0}, "grid": {"r_max": 3.0, "n": 64}}"#,
    );
    let out = aggdiff(&["stationary", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("k must lie in (−N, 0)"));
}

#[test]
fn unknown_subcommand_prints_usage() {
    let out = aggdiff(&["solve"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"));
}

#[test]
fn numerical_failure_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        &config_1d(dir.path()).replace("\"n\": 128}", "\"n\": 128}, \"solver\": {\"max_iter\": 2}"),
    );
    let out = aggdiff(&["stationary", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn hypergeom_suite_passes() {
    let out = aggdiff(&["verify", "--suite", "hypergeom"]);
    assert_eq!(out.status.code(), Some(0));
    let table = String::from_utf8(out.stdout).unwrap();
    assert!(table.contains("hypergeom/transformation") && table.contains("0 failed"));
}

#[test]
fn stationary_profile_round_trips_through_energy() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &config_1d(dir.path()));
    assert!(aggdiff(&["stationary", "--config", &cfg]).status.success());
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("report.json")).unwrap()).unwrap();
    let profile = dir.path().join("profile.csv");
    let out = aggdiff(&["energy", "--config", &cfg, "--density", profile.to_str().unwrap()]);
    assert!(out.status.success());
    let energy: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let reported = report["energy"]["F"].as_f64().unwrap();
    let recomputed = energy["F"].as_f64().unwrap();
    assert!(
        (reported - recomputed).abs() <= 1e-12 * reported.abs(),
        "{reported} vs {recomputed}"
    );
    assert!(report["el_residual"].as_f64().unwrap() < 1e-6);
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let run = || {
        let dir = tempfile::tempdir().unwrap();
        let cfg = write_config(dir.path(), &config_1d(dir.path()));
        assert!(aggdiff(&["stationary", "--config", &cfg]).status.success());
        let profile = dir.path().join("profile.csv");
        let potential = aggdiff(&["potential", "--config", &cfg, "--density", profile.to_str().unwrap()]);
        assert!(potential.status.success());
        (
            std::fs::read(&profile).unwrap(),
            std::fs::read(dir.path().join("report.json")).unwrap(),
            potential.stdout,
        )
    };
    assert_eq!(run(), run());
}

#[test]
fn evolve_writes_trace_and_final_profile() {
    let dir = tempfile::tempdir().unwrap();
    let body = config_1d(dir.path()).replace(
        "\"n\": 128}",
        "\"n\": 128}, \"evolution\": {\"t_end\": 0.01, \"L\": 1.5, \"n\": 64, \"output_stride\": 10, \"dump_profiles\": true}",
    );
    let cfg = write_config(dir.path(), &body);
    let init = dir.path().join("init.csv");
    // 42 of the 64 cells lie in (−1, 1)
    let dx = 3.0 / 64.0;
    let rows: String = (0..64)
        .map(|i| {
            let x = -1.5 + (i as f64 + 0.5) * dx;
            let v = if x.abs() < 1.0 { 1.0 / (42.0 * dx) } else { 0.0 };
            format!("{x:.17e},{v:.17e}\n")
        })
        .collect();
    std::fs::write(&init, format!("x,rho\n{rows}")).unwrap();
    let out = aggdiff(&["evolve", "--config", &cfg, "--initial", init.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let trace = std::fs::read_to_string(dir.path().join("trace.csv")).unwrap();
    assert!(trace.starts_with("t,mass,Hm,Wk,F\n"));
    assert!(trace.lines().count() > 2);
    assert!(dir.path().join("final.csv").exists());
    let dumps = std::fs::read_dir(dir.path())
        .unwrap()
        .filter(|e| {
            e.as_ref()
                .unwrap()
                .file_name()
                .to_string_lossy()
                .starts_with("profile_")
        })
        .count();
    assert!(dumps > 1);
}

#[test]
fn uniqueness_report_lists_three_pairs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &config_1d(dir.path()));
    assert!(aggdiff(&["uniqueness", "--config", &cfg]).status.success());
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("uniqueness.json")).unwrap()).unwrap();
    assert_eq!(json["distances"].as_array().unwrap().len(), 3);
    assert!(json["max_distance"].as_f64().unwrap() < 1e-4);
    assert_eq!(json["asserted"], serde_json::Value::Bool(true));
}
