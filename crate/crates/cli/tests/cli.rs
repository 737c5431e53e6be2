use std::path::{Path, PathBuf};
use std::process::Command;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn run(args: &[&str], input: &Path, out: &Path) -> (i32, String) {
    let o = Command::new(env!("CARGO_BIN_EXE_hminimal"))
        .args(args)
        .arg("--input")
        .arg(input)
        .arg("--out")
        .arg(out)
        .output()
        .unwrap();
    (o.status.code().unwrap_or(-1), String::from_utf8_lossy(&o.stderr).into_owned())
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn plateau_scan_good_curve_lists_zero() {
    let dir = tempfile::tempdir().unwrap();
    let (code, err) = run(&["plateau-scan"], &fixture("good_curve.json"), dir.path());
    assert_eq!(code, 0, "{err}");
    let v = json(&dir.path().join("plateau_scan.json"));
    let iso = v["isolated_points"].as_array().unwrap();
    assert!(iso.iter().any(|x| x.as_f64().unwrap().abs() < 1e-12));
}

#[test]
fn phi_continue_bad_curve_is_obstructed() {
    let dir = tempfile::tempdir().unwrap();
    let (code, _) = run(&["phi-continue"], &fixture("bad_curve.json"), dir.path());
    assert_eq!(code, 0);
    let v = json(&dir.path().join("phi_path.json"));
    assert_eq!(v["status"], "OBSTRUCTED");
    let t = v["t_star"].as_f64().unwrap();
    assert!((t - std::f64::consts::FRAC_PI_2).abs() < 0.5);
    let csv = std::fs::read_to_string(dir.path().join("phi_path.csv")).unwrap();
    assert!(csv.starts_with("t,phi,dphi,residual\n"));
}

#[test]
fn gauss_scan_plane_has_single_characteristic_row() {
    let dir = tempfile::tempdir().unwrap();
    let (code, _) = run(&["gauss-scan"], &fixture("plane_patch.json"), dir.path());
    assert_eq!(code, 0);
    let csv = std::fs::read_to_string(dir.path().join("gauss_scan.csv")).unwrap();
    let chars: Vec<&str> = csv.lines().skip(1).filter(|l| l.ends_with(",1")).collect();
    assert_eq!(chars, vec!["0,0,0,0,0,,1"]);
}

#[test]
fn verdicts_for_the_four_curves() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("good_curve.json", false, "MONOTONE", Some("PASS")),
        ("bad_curve.json", true, "OBSTRUCTED", Some("FAIL")),
        ("nonlegendrian_curve.json", false, "NO_RULED_SPANNING_GRAPH", None),
        ("planar_circle.json", false, "INCONCLUSIVE", None),
    ];
    for (name, force, status, fold) in cases {
        let args: &[&str] = if force { &["assemble", "--force"] } else { &["assemble"] };
        let (code, err) = run(args, &fixture(name), dir.path());
        assert_eq!(code, 0, "{name}: {err}");
        let v = json(&dir.path().join("verdict.json"));
        assert_eq!(v["status"], status, "{name}");
        assert_eq!(v["fold_report"]["status"].as_str(), fold, "{name}");
    }
}

#[test]
fn config_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"u": "0", "domain": [-1, 1, -1, 1], "colour": "red"}"#).unwrap();
    assert_eq!(run(&["gauss-scan"], &bad, dir.path()).0, 2);
    std::fs::write(&bad, r#"{"u": "0 +* x", "domain": [-1, 1, -1, 1]}"#).unwrap();
    assert_eq!(run(&["minimality"], &bad, dir.path()).0, 2);
    std::fs::write(&bad, r#"{"c": ["theta", "0", "0"]}"#).unwrap();
    assert_eq!(run(&["plateau-scan"], &bad, dir.path()).0, 2);
    assert_eq!(run(&["gauss-scan"], &dir.path().join("missing.json"), dir.path()).0, 2);
    assert_eq!(run(&["render", "--kind", "PHI_PLOT"], &fixture("plane_patch.json"), dir.path()).0, 2);
}

#[test]
fn renders_are_svg() {
    let dir = tempfile::tempdir().unwrap();
    run(&["assemble"], &fixture("good_curve.json"), dir.path());
    let (code, err) = run(&["render", "--kind", "RULES_XY"], &dir.path().join("assembly.json"), dir.path());
    assert_eq!(code, 0, "{err}");
    let svg = std::fs::read_to_string(dir.path().join("rules_xy.svg")).unwrap();
    assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
}
