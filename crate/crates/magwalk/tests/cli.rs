use std::process::{Command, Output};

fn magwalk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_magwalk")).args(args).output().expect("spawn magwalk")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn walk_prints_a_normalized_distribution() {
    let o = magwalk(&["walk", "--steps", "4", "--theta", "pi/4", "--spin", "one"]);
    assert!(o.status.success());
    let recs = magwalk::parse_csv(&stdout(&o)).unwrap();
    assert_eq!(recs.len(), 9);
    let total: f64 = recs.iter().map(|r| r["probability"]).sum();
    assert!((total - 1.0).abs() < 1e-10);
}

#[test]
fn fisher_sweep_defaults_to_629_points() {
    let o = magwalk(&["fisher-sweep", "--steps", "6", "--format", "json"]);
    assert!(o.status.success());
    assert_eq!(magwalk::parse_json(&stdout(&o)).unwrap().len(), 629);
}

#[test]
fn rmse_from_a_given_fisher_information() {
    let o = magwalk(&["rmse", "--fisher", "2500"]);
    assert!(o.status.success());
    let r = &magwalk::parse_csv(&stdout(&o)).unwrap()[0];
    assert_eq!(r["rmse_omega"], 0.02);
    assert!((1e-13..5e-13).contains(&r["rmse_tesla"]));
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.toml");
    std::fs::write(&path, "steps = 3\nhalf-width = 9\ntheta = \"pi/4\"\n").unwrap();
    let p = path.to_str().unwrap();
    let o = magwalk(&["walk", "--config", p]);
    assert!(o.status.success());
    assert_eq!(magwalk::parse_csv(&stdout(&o)).unwrap().len(), 19);
    let o = magwalk(&["walk", "--config", p, "--half-width", "4"]);
    assert_eq!(magwalk::parse_csv(&stdout(&o)).unwrap().len(), 9);
}

#[test]
fn output_file_and_sphere_scan() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sphere.csv");
    let o = magwalk(&[
        "sphere-scan",
        "--theta",
        "pi/2",
        "--omega",
        "pi/2",
        "--steps",
        "10",
        "--polar-count",
        "5",
        "--azimuth-count",
        "4",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(o.stdout.is_empty());
    let recs = magwalk::parse_csv(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(recs.len(), 2 + 3 * 4);
}

#[test]
fn fold_check_passes_at_half_lattice() {
    let o = magwalk(&["fold-check", "--steps", "50", "--half-width", "25", "--spin", "one", "--theta", "3pi/8"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn rejections_exit_nonzero_with_a_diagnostic() {
    for args in [
        &["walk", "--spin", "1,1"][..],
        &["walk", "--theta", "pie"],
        &["walk", "--unbounded", "--steps", "10", "--half-width", "3"],
        &["fisher-sweep", "--grid", "1:0:5"],
        &["walk", "--out", "/nonexistent/dir/x.csv"],
        &["rmse", "--fisher", "0"],
        &["walk", "--bounded", "--unbounded"],
    ] {
        let o = magwalk(args);
        assert!(!o.status.success(), "{args:?}");
        assert!(!o.stderr.is_empty(), "{args:?}");
    }
}
