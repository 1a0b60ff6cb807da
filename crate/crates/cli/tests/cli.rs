use std::path::PathBuf;
use std::process::{Command, Output};

fn se2sr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_se2sr"))
        .args(args)
        .env_remove("SE2SR_EXP_TOL")
        .env_remove("SE2SR_SOLVER_TOL")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn dist_of_half_turn_is_pi() {
    let o = se2sr(&["dist", "--x", "0", "--y", "0", "--theta", "3.14159265"]);
    assert_eq!(o.status.code(), Some(0));
    let d: f64 = stdout(&o).trim().parse().unwrap();
    assert!((d - std::f64::consts::PI).abs() < 1e-8);
}

#[test]
fn cuttime_of_stable_equilibrium_is_pi() {
    let o = se2sr(&["cuttime", "--gamma", "0", "--c", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim().parse::<f64>().unwrap(), std::f64::consts::PI);
}

#[test]
fn degrees_flag_converts_angles() {
    let a = stdout(&se2sr(&["dist", "--x", "0.5", "--y", "-0.2", "--theta", "90", "--degrees"]));
    let b = stdout(&se2sr(&["dist", "--x", "0.5", "--y", "-0.2", "--theta", "1.5707963267948966"]));
    assert_eq!(a, b);
}

#[test]
fn json_uses_seventeen_digits() {
    let o = se2sr(&["dist", "--x", "1", "--y", "0", "--theta", "0", "--format", "json"]);
    assert_eq!(stdout(&o), "{\"distance\":1.0000000000000000e0}\n");
    let o = se2sr(&["conjtime", "--gamma", "0.3", "--c", "0.1", "--format", "json"]);
    assert_eq!(stdout(&o), "{\"conj_time\":null}\n");
}

#[test]
fn synth_reports_pairs() {
    let o = se2sr(&["synth", "--x", "0", "--y", "0.8", "--theta", "0", "--all", "--samples", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["multiplicity"], "maxwell_pair");
    let sols = v["solutions"].as_array().unwrap();
    assert_eq!(sols.len(), 2);
    assert_eq!(sols[0]["path"].as_array().unwrap().len(), 5);
    let o = se2sr(&["synth", "--x", "0", "--y", "0.8", "--theta", "0", "--samples", "5"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["solutions"].as_array().unwrap().len(), 1);
}

#[test]
fn csv_headers_are_fixed() {
    let o = se2sr(&["exp", "--gamma", "1", "--c", "-0.5", "--t", "2", "--samples", "4"]);
    let s = stdout(&o);
    assert!(s.starts_with("s,x,y,theta,u1,u2\n"));
    assert_eq!(s.lines().count(), 5);
    let o = se2sr(&["sphere", "--radius", "1", "--n", "4"]);
    assert!(stdout(&o).starts_with("x,y,theta,R1,R2\n"));
    let o = se2sr(&["synth", "--x", "0.3", "--y", "0.2", "--theta", "0.4", "--format", "csv"]);
    assert!(stdout(&o).starts_with("s,x,y,theta,u1,u2\n"));
}

#[test]
fn output_is_byte_deterministic() {
    for args in [
        &["front", "--radius", "2", "--n", "6", "--format", "json"][..],
        &["cutlocus", "--n", "32", "--format", "svg"][..],
        &["caustic", "--n", "6"][..],
    ] {
        assert_eq!(se2sr(args).stdout, se2sr(args).stdout);
    }
}

#[test]
fn plot_round_trip_through_files() {
    let csv = scratch("locus.csv");
    let svg = scratch("locus.svg");
    let o = se2sr(&["cutlocus", "--n", "40", "--out", csv.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let o = se2sr(&["plot", "--section", "cut-locus", "--input", csv.to_str().unwrap(), "--out", svg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&svg).unwrap();
    assert!(text.starts_with("<svg") && text.contains("<polygon"));
    let direct = stdout(&se2sr(&["cutlocus", "--n", "40", "--format", "svg"]));
    assert_eq!(text, direct);

    let pts = scratch("sphere.csv");
    se2sr(&["sphere", "--radius", "3.14159", "--n", "12", "--out", pts.to_str().unwrap()]);
    let o = se2sr(&["plot", "--section", "sphere", "--input", pts.to_str().unwrap(), "--band", "0.5"]);
    assert!(stdout(&o).contains("<circle"));
}

#[test]
fn plot_handles_empty_and_malformed_input() {
    let empty = scratch("empty.csv");
    std::fs::write(&empty, "").unwrap();
    let o = se2sr(&["plot", "--section", "caustic", "--input", empty.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).ends_with("</svg>\n"));

    let bad = scratch("bad.csv");
    std::fs::write(&bad, "theta,R11,R12\n0,0,0\n0.1,zero,0\n").unwrap();
    let o = se2sr(&["plot", "--section", "cut-locus", "--input", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
}

#[test]
fn exit_codes() {
    assert_eq!(se2sr(&["frobnicate"]).status.code(), Some(64));
    assert_eq!(se2sr(&["dist", "--x", "1"]).status.code(), Some(64));
    assert_eq!(se2sr(&["dist", "--x", "1", "--y", "0", "--theta", "0", "--format", "svg"]).status.code(), Some(64));
    assert_eq!(se2sr(&["--help"]).status.code(), Some(0));
    // domain errors
    assert_eq!(se2sr(&["sphere", "--radius", "-1"]).status.code(), Some(1));
    assert_eq!(se2sr(&["exp", "--gamma", "0", "--c", "1", "--t", "-1"]).status.code(), Some(1));
    assert_eq!(se2sr(&["dist", "--x", "nan", "--y", "0", "--theta", "0"]).status.code(), Some(1));
    // solver failure: a single start cannot reach this target
    let o = se2sr(&["dist", "--x", "0.3", "--y", "0.2", "--theta", "0.4", "--max-starts", "1", "--solver-tol", "1e-300"]);
    assert_eq!(o.status.code(), Some(2), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn config_file_and_environment() {
    let cfg = scratch("run.cfg");
    std::fs::write(&cfg, "# trajectory resolution\nsamples = 3\n").unwrap();
    let o = se2sr(&["exp", "--gamma", "1", "--c", "0", "--t", "1", "--config", cfg.to_str().unwrap()]);
    assert_eq!(stdout(&o).lines().count(), 4);
    let o = se2sr(&["exp", "--gamma", "1", "--c", "0", "--t", "1", "--config", cfg.to_str().unwrap(), "--samples", "5"]);
    assert_eq!(stdout(&o).lines().count(), 6);

    std::fs::write(&cfg, "colour = blue\n").unwrap();
    let o = se2sr(&["cuttime", "--gamma", "0", "--c", "0", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(64));

    let o = Command::new(env!("CARGO_BIN_EXE_se2sr"))
        .args(["cuttime", "--gamma", "0", "--c", "0"])
        .env("SE2SR_EXP_TOL", "-1")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(64));
}

#[test]
fn selftest_passes() {
    let o = se2sr(&["selftest", "--scale", "0.1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let s = stdout(&o);
    assert_eq!(s.lines().count(), 10);
    assert!(s.lines().all(|l| l.starts_with("PASS ")));
}
