use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_mbgame"));
    c.env_remove("MBGAME_OUT_DIR");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_ok(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("mbgame-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn data_rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn sidon_matrix_report() {
    let v: serde_json::Value = serde_json::from_str(&stdout_ok(&["analyze-matrix", "sidon"])).unwrap();
    assert_eq!(v["rank"], 1);
    assert_eq!(v["abundant"], true);
    assert_eq!(v["max_one_density"], "3/2");
    assert_eq!(v["predicted_exponent"]["value"], "2/3");
}

#[test]
fn matrix_partitions_and_subsystem() {
    let v: serde_json::Value =
        serde_json::from_str(&stdout_ok(&["analyze-matrix", "ap:3", "--partitions", "--columns", "0,1,2"])).unwrap();
    // Bell number of 3
    assert_eq!(v["partitions"].as_array().unwrap().len(), 5);
    assert!(v["subsystem"].is_object());
}

#[test]
fn complete_pattern_density() {
    let v: serde_json::Value = serde_json::from_str(&stdout_ok(&["analyze-pattern", "complete:3:4"])).unwrap();
    assert_eq!(v["r_density"], "3");
    assert_eq!(v["predicted_exponent"]["value"], "1/3");
}

#[test]
fn build_board_round_trips_through_play() {
    let dir = scratch("build");
    let path = dir.join("ap.txt");
    let p = path.to_str().unwrap();
    stdout_ok(&["build-board", "--progression", "3", "--n", "12", "-o", p]);
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("v 12\n"));
    assert_eq!(text.lines().count(), 1 + 30);
    let t: serde_json::Value =
        serde_json::from_str(&stdout_ok(&["play", "--board", p, "--q", "3", "--seed", "9"])).unwrap();
    assert_eq!(t["q"], 3);
    assert!(t["winner"] == "maker" || t["winner"] == "breaker");
}

#[test]
fn small_progressions_solved_exactly() {
    assert_eq!(stdout_ok(&["solve", "--progression", "3", "--n", "4", "--q", "1"]).trim(), "breaker");
    assert_eq!(stdout_ok(&["solve", "--progression", "3", "--n", "5", "--q", "1"]).trim(), "maker");
    let rows = data_rows(&stdout_ok(&["threshold-exact", "--progression", "3", "--n", "3,5"]));
    assert_eq!(rows[0][3], "1");
    assert_eq!(rows[1][3], "2");
}

#[test]
fn criteria_report_has_progression_bounds() {
    let v: serde_json::Value =
        serde_json::from_str(&stdout_ok(&["criteria", "--progression", "3", "--n", "144", "--q", "3"])).unwrap();
    assert_eq!(v["beck"]["maker_wins"], true);
    assert!(v["threeap_bounds"].is_array());
}

#[test]
fn output_directory_from_environment() {
    let dir = scratch("env");
    let out = bin()
        .env("MBGAME_OUT_DIR", &dir)
        .args(["count-solutions", "ap:3", "--n", "10,20"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let written = std::fs::read_to_string(dir.join("solution_counts.csv")).unwrap();
    assert_eq!(written, String::from_utf8(out.stdout).unwrap());
    let rows = data_rows(&written);
    // 2 * (number of 3-term progressions in [10]) = 2 * 20
    assert_eq!(rows[0][1], "40");
}

fn run_dir_bytes(dir: &Path) -> (String, String, String) {
    let read = |f: &str| std::fs::read_to_string(dir.join(f)).unwrap();
    (read("curve.csv"), read("thresholds.csv"), read("games.csv"))
}

#[test]
fn config_runs_are_byte_identical() {
    let dir = scratch("det");
    let cfg = dir.join("cfg.json");
    std::fs::write(
        &cfg,
        r#"{"family": {"kind": "progression", "k": 3}, "n_grid": [24, 48], "trials": 20, "seed": 5, "output": "a"}"#,
    )
    .unwrap();
    let c = cfg.to_str().unwrap();
    stdout_ok(&["estimate-threshold", "--config", c]);
    let b = dir.join("b");
    stdout_ok(&["estimate-threshold", "--config", c, "-o", b.to_str().unwrap()]);
    assert_eq!(run_dir_bytes(&dir.join("a")), run_dir_bytes(&b));
    let (curve, thresholds, games) = run_dir_bytes(&b);
    assert!(curve.contains("n,q,trials,maker_wins,win_rate,ci_lo,ci_hi"));
    // every curve number recounted from the per-game log
    let games = data_rows(&games);
    for row in data_rows(&curve) {
        let wins = games
            .iter()
            .filter(|g| g[0] == row[0] && g[1] == row[1] && g[4] == "maker")
            .count();
        assert_eq!(wins.to_string(), row[3]);
    }
    assert_eq!(data_rows(&thresholds).len(), 2);
    let resolved = dir.join("a").join("config.json");
    let again = dir.join("c");
    stdout_ok(&["estimate-threshold", "--config", resolved.to_str().unwrap(), "-o", again.to_str().unwrap()]);
    assert_eq!(run_dir_bytes(&b), run_dir_bytes(&again));
}

#[test]
fn transcripts_replay_recorded_outcomes() {
    let dir = scratch("tr");
    let d = dir.to_str().unwrap();
    stdout_ok(&[
        "estimate-threshold", "--progression", "3", "--n", "20", "--trials", "5", "-o", d, "--keep-transcripts",
    ]);
    let games = data_rows(&std::fs::read_to_string(dir.join("games.csv")).unwrap());
    let lines: Vec<serde_json::Value> = std::fs::read_to_string(dir.join("transcripts.jsonl"))
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(games.len(), lines.len());
    for (g, t) in games.iter().zip(&lines) {
        assert_eq!(t["transcript"]["winner"], g[4].as_str());
        assert_eq!(t["transcript"]["seed"].to_string(), g[3]);
    }
}

#[test]
fn exponent_needs_three_points() {
    assert!(!run(&["exponent", "--point", "4:2", "--point", "16:4"]).status.success());
    let v: serde_json::Value =
        serde_json::from_str(&stdout_ok(&["exponent", "--point", "4:2", "--point", "16:4", "--point", "64:8"]))
            .unwrap();
    assert!((v["slope"].as_f64().unwrap() - 0.5).abs() < 1e-12);
}

#[test]
fn probability_experiments() {
    let rows = data_rows(&stdout_ok(&[
        "binuni", "--progression", "3", "--n", "30", "--p", "0,0.2", "--samples", "2000",
    ]));
    assert_eq!(rows[0][3], "1.000000");
    assert_eq!(rows[0][6], "1.000000");
    let v: serde_json::Value = serde_json::from_str(&stdout_ok(&[
        "stability", "--progression", "3", "--n", "20", "--m", "8", "--delta", "0.6", "--samples", "200",
    ]))
    .unwrap();
    assert_eq!(v["not_stable"]["samples"], 200);
}

#[test]
fn bad_inputs_fail_cleanly() {
    assert!(!run(&["play", "--progression", "3", "--n", "10", "--q", "1", "--breaker", "nobody"]).status.success());
    assert!(!run(&["estimate-threshold", "--progression", "3", "--n", "20,10"]).status.success());
    assert!(!run(&["estimate-threshold", "--progression", "3", "--n", "10", "--trials", "0"]).status.success());
    assert!(!run(&["play", "--board", "/nonexistent/board.txt", "--q", "1"]).status.success());
}
