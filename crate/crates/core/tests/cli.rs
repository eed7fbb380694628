use std::process::Command;

fn lab(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_bergman-lab")).args(args).output().unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

#[test]
fn threshold_passes_with_exit_zero() {
    let (code, out, _) = lab(&["threshold", "--domain", "disk", "--kernel", "planar-pole", "--per-shell", "20000", "--seed", "3"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["seed"], 3);
    assert_eq!(v["pass"], true);
}

#[test]
fn input_errors_exit_three() {
    assert_eq!(lab(&["threshold", "--domain", "blob", "--kernel", "planar-pole", "--seed", "1"]).0, 3);
    assert_eq!(lab(&["threshold", "--domain", "disk"]).0, 3);
    assert_eq!(lab(&["no-such-command"]).0, 3);
    assert_eq!(lab(&["--replay", "r.json", "loglaw", "--n", "1", "--seed", "1"]).0, 3);
}

#[test]
fn tolerance_failure_exits_two() {
    let (code, _, _) = lab(&["coercivity", "--domain", "ball:n=2", "--beta-scale", "30", "--pairs", "2000", "--seed", "1"]);
    assert_eq!(code, 2);
}

#[test]
fn replay_reproduces_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let p = path.to_str().unwrap();
    let (code, _, _) = lab(&["components", "--domain", "horseshoe", "--w", "-0.75,0", "--delta", "0.6", "--seed", "4", "--out", p]);
    assert_eq!(code, 0);
    let (code, out, err) = lab(&["--replay", p]);
    assert_eq!(code, 0);
    assert!(err.contains("identical"));
    assert_eq!(out, std::fs::read_to_string(&path).unwrap());
    let tampered = out.replacen("\"seed\": 4", "\"seed\": 5", 1);
    std::fs::write(&path, tampered).unwrap();
    assert_eq!(lab(&["--replay", p]).0, 2);
}

#[test]
fn batch_runs_every_entry() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("manifest.json");
    std::fs::write(
        &path,
        r#"{"experiments": [
            {"command": "loglaw", "n": 1, "p": 2, "radii": [0.9, 0.99], "budget": 20000, "seed": 1},
            {"command": "metric", "domain": "disk", "q": 2, "J": 8, "f": "planar-log", "g": "zero", "budget": 20000, "seed": 2}
        ]}"#,
    )
    .unwrap();
    let (code, out, _) = lab(&["batch", path.to_str().unwrap()]);
    assert_eq!(code, 0, "{out}");
    assert_eq!(out.matches("\"version\"").count(), 2);
}
