use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cursed-games"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn fixture() -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/fixtures/signaling.game")
        .to_string_lossy()
        .into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("JSON output")
}

#[test]
fn check_sce_accepts_the_pooling_profile() {
    let f = fixture();
    let o = run(&["check", &f, "--concept", "sce", "--profile", "[(B,B);(L,R)]", "--chi-s", "0.5", "--psi-s", "0", "--exact"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    assert_eq!(v["verdict"], true);
    assert_eq!(v["partition_phc"], false);
}

#[test]
fn check_cse_rejects_pooling_above_the_bound() {
    let f = fixture();
    let o = run(&["check", &f, "--concept", "cse", "--profile", "[(B,B);(R,R)]", "--chi", "0.9", "--exact"]);
    assert!(o.status.success());
    assert_eq!(json(&o)["verdict"], false);
}

#[test]
fn output_is_deterministic() {
    let f = fixture();
    let args = ["enumerate", f.as_str(), "--concept", "sce", "--chi-s", "1/3", "--psi-s", "0", "--exact"];
    let (a, b) = (run(&args), run(&args));
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(stdout(&a), stdout(&b));
}

#[test]
fn malformed_game_exits_with_input_error() {
    let dir = std::env::temp_dir().join(format!("cursed-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.game");
    std::fs::write(&path, "game broken\nplayers two\n").unwrap();
    let o = run(&["parse", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("2:"));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn bad_arguments_exit_with_input_error() {
    assert_eq!(run(&["check"]).status.code(), Some(2));
    let f = fixture();
    let o = run(&["check", &f, "--concept", "cse", "--profile", "[(A,A);(L,R)]", "--chi", "2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_reports_claims() {
    let o = run(&["verify", "C5"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["passed"], true);
}

#[test]
fn broadcaster_scenario_reports_cutoff() {
    let o = run(&["scenario", "broadcaster", "--alpha", "0.5", "--n", "2", "--chi", "0.7"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    assert_eq!(v["cse"]["engine"], "2");
    assert_eq!(v["cse"]["predicted"], "2");
}

#[test]
fn scramble_then_parse_round_trips() {
    let o = run(&["scramble", &fixture()]);
    assert!(o.status.success());
    let dir = std::env::temp_dir().join(format!("cursed-cli-s-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("s.game");
    std::fs::write(&path, &o.stdout).unwrap();
    let p = run(&["parse", path.to_str().unwrap()]);
    assert!(p.status.success(), "{}", String::from_utf8_lossy(&p.stderr));
    std::fs::remove_dir_all(&dir).ok();
}
