use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_jacobi-edge"))
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = bin().args(args).output().expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout).into_owned(), String::from_utf8_lossy(&out.stderr).into_owned())
}

#[test]
fn case1_curve_has_default_grid() {
    let (code, out, _) = run(&["gap", "--n", "7", "--lambda1", "-3/4", "--lambda2", "9", "--beta", "7/8"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "s,value");
    assert_eq!(lines.len(), 102);
    assert!(lines[101].starts_with("1.0000000000000000e0,"));
}

#[test]
fn case2_form_from_k() {
    let dir = tempfile::tempdir().unwrap();
    let form = dir.path().join("form.json");
    let (code, _, _) = run(&["gap", "--n", "5", "--beta", "1/2", "--lambda1", "9", "--k", "6", "--grid", "0:1:3", "--form-output", form.to_str().unwrap()]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(form).unwrap()).unwrap();
    assert_eq!(v["form"], "hyp");
}

#[test]
fn json_artifacts_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let paths: Vec<_> = (0..2).map(|i| dir.path().join(format!("out{i}.json"))).collect();
    for p in &paths {
        let (code, _, _) = run(&["pmax", "--n", "3", "--lambda1", "1", "--lambda2", "2/3", "--beta", "3", "--format", "json", "--grid", "0:1:11", "--output", p.to_str().unwrap()]);
        assert_eq!(code, 0);
    }
    assert_eq!(std::fs::read(&paths[0]).unwrap(), std::fs::read(&paths[1]).unwrap());
}

#[test]
fn worked_example_verifies() {
    let (code, out, _) = run(&["verify", "--n", "2", "--lambda1", "0", "--lambda2", "1", "--beta", "2", "--format", "json", "--samples", "20000"]);
    assert_eq!(code, 0, "{out}");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["pass"], true);
    assert_eq!(v["reports"].as_array().unwrap().len(), 4);
}

#[test]
fn exit_codes() {
    let (code, _, err) = run(&["gap", "--n", "3", "--lambda1", "1/2", "--lambda2", "1/5", "--beta", "1/3"]);
    assert_eq!(code, 1);
    assert!(err.contains("case 1 needs"), "{err}");
    assert_eq!(run(&["gap", "--n", "3", "--lambda1", "1", "--lambda2", "1", "--beta", "0.5"]).0, 1);
    assert_eq!(run(&["gap", "--n", "2", "--lambda1", "0", "--lambda2", "1", "--beta", "2", "--grid", "0:2:3"]).0, 1);
    assert_eq!(run(&["circular", "--n", "2", "--beta", "3/2"]).0, 1);
}

#[test]
fn circular_and_mc_commands() {
    let (code, out, _) = run(&["circular", "--n", "2", "--beta", "2", "--grid", "0:2pi:3"]);
    assert_eq!(code, 0);
    let last = out.lines().last().unwrap();
    assert!(last.ends_with(",0.0000000000000000e0"), "{last}");
    let dir = tempfile::tempdir().unwrap();
    let dump = dir.path().join("samples.txt");
    let (code, out, _) = run(&["mc", "--n", "2", "--lambda1", "0", "--lambda2", "1", "--beta", "2", "--samples", "1000", "--seed", "4", "--samples-output", dump.to_str().unwrap(), "--grid", "0:1:3"]);
    assert_eq!(code, 0);
    assert_eq!(std::fs::read_to_string(dump).unwrap().lines().count(), 1000);
    assert!(out.lines().last().unwrap().ends_with(",1.0000000000000000e0"));
}

#[test]
fn thread_count_does_not_change_samples() {
    let args = ["mc", "--n", "3", "--lambda1", "1", "--lambda2", "2", "--beta", "3/2", "--samples", "9000", "--seed", "2", "--format", "json"];
    let one = bin().args(args).env("JACOBI_EDGE_THREADS", "1").output().unwrap().stdout;
    let two = bin().args(args).env("JACOBI_EDGE_THREADS", "2").output().unwrap().stdout;
    assert_eq!(one, two);
}
