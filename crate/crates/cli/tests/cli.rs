//! End-to-end tests of the command-line surface: exit codes, file formats,
//! and the single-seed determinism contract.

use std::path::Path;
use std::process::{Command, Output};

fn maglab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_maglab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn stderr(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}

fn code(output: &Output) -> i32 {
    output.status.code().expect("exit code")
}

#[test]
fn gen_wheel_with_faces() {
    let out = maglab(&["gen", "wheel", "5", "--faces"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.starts_with("graph 6 10 5\n"), "got: {text}");
    assert_eq!(text.lines().filter(|l| l.starts_with("e ")).count(), 10);
    assert_eq!(text.lines().filter(|l| l.starts_with("f ")).count(), 5);
}

#[test]
fn exit_codes_cover_the_documented_table() {
    // 2: usage (clap-level and flag-combination level)
    assert_eq!(code(&maglab(&["solve", "--no-such-flag"])), 2);
    assert_eq!(
        code(&maglab(&[
            "solve", "--gen", "complete", "3", "--e", "--target", "edges", "--kind", "magic",
            "--super"
        ])),
        2,
        "--super without --v is a usage error"
    );
    assert_eq!(
        code(&maglab(&["gen", "petersen", "4", "2"])),
        2,
        "generator parameter violations are usage errors"
    );

    // 3: invalid input
    assert_eq!(
        code(&maglab(&[
            "solve", "--graph", "/nonexistent/g.txt", "--v", "--e", "--target", "edges",
            "--kind", "magic"
        ])),
        3
    );

    // 1: unsolved at the iteration cap (K2 vertex-antimagic is impossible)
    let out = maglab(&[
        "solve", "--gen", "complete", "2", "--e", "--target", "vertices", "--kind", "antimagic",
        "--max-iters", "1000",
    ]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("unsolved value="));

    // 0: solved
    let out = maglab(&[
        "solve", "--gen", "complete", "2", "--v", "--e", "--target", "edges", "--kind", "magic",
        "--max-iters", "10",
    ]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("verified magic k=6"));

    // 4: oracle budget exhausted
    let out = maglab(&[
        "oracle", "--gen", "complete", "4", "--v", "--e", "--target", "vertices", "--kind",
        "magic", "--mode", "count", "--budget", "5",
    ]);
    assert_eq!(code(&out), 4);
    assert!(stderr(&out).contains("budget"));
}

#[test]
fn solve_output_is_seed_deterministic() {
    let args = [
        "solve", "--gen", "wheel", "4", "--v", "--e", "--target", "edges", "--kind", "magic",
        "--seed", "11", "--max-iters", "500000",
    ];
    let first = maglab(&args);
    let second = maglab(&args);
    assert_eq!(code(&first), 0);
    assert_eq!(first.stdout, second.stdout, "same seed, same bytes");

    let different = maglab(&[
        "solve", "--gen", "wheel", "4", "--v", "--e", "--target", "edges", "--kind", "magic",
        "--seed", "12", "--max-iters", "500000",
    ]);
    assert_eq!(code(&different), 0);
    assert_ne!(first.stdout, different.stdout);
}

#[test]
fn oracle_census_prints_frozen_c3_table() {
    let dir = tempfile::tempdir().unwrap();
    let graph_path = dir.path().join("c3.txt");
    let gen = maglab(&["gen", "cycle", "3", "-o", graph_path.to_str().unwrap()]);
    assert_eq!(code(&gen), 0);

    let out = maglab(&[
        "oracle", "--graph", graph_path.to_str().unwrap(), "--v", "--e", "--target", "edges",
        "--kind", "magic", "--mode", "census",
    ]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    for line in ["k=9 6", "k=10 6", "k=11 6", "k=12 6", "total 24"] {
        assert!(text.contains(line), "missing '{line}' in:\n{text}");
    }

    let count = maglab(&[
        "oracle", "--graph", graph_path.to_str().unwrap(), "--v", "--e", "--target", "edges",
        "--kind", "magic", "--mode", "count",
    ]);
    assert_eq!(code(&count), 0);
    assert!(stdout(&count).contains("count 24"));
}

#[test]
fn oracle_reports_nonexistence_for_k2() {
    let out = maglab(&[
        "oracle", "--gen", "complete", "2", "--e", "--target", "vertices", "--kind", "antimagic",
    ]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("exhausted"));
}

#[test]
fn export_ilp_writes_36_binaries_deterministically() {
    let out = maglab(&[
        "export-ilp", "--gen", "complete", "3", "--v", "--e", "--target", "edges", "--K", "12",
    ]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("Minimize"));
    assert!(text.contains("Subject To"));
    let binary_section = text.split("Binary").nth(1).expect("binary section");
    let names: Vec<&str> = binary_section
        .split("End")
        .next()
        .unwrap()
        .split_whitespace()
        .collect();
    assert_eq!(names.len(), 36);

    let again = maglab(&[
        "export-ilp", "--gen", "complete", "3", "--v", "--e", "--target", "edges", "--K", "12",
    ]);
    assert_eq!(out.stdout, again.stdout);
}

#[test]
fn export_ilp_sweep_writes_one_file_per_constant() {
    let dir = tempfile::tempdir().unwrap();
    let base = dir.path().join("k2.lp");
    let out = maglab(&[
        "export-ilp", "--gen", "complete", "2", "--v", "--e", "--target", "edges", "--sweep",
        "-o", base.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    // K2 total edge-magic has the single feasible constant 6
    assert!(dir.path().join("k2-K6.lp").exists());
    assert!(!dir.path().join("k2-K5.lp").exists());
}

#[test]
fn verify_round_trip_and_tampering() {
    let dir = tempfile::tempdir().unwrap();
    let graph_path = dir.path().join("w4.txt");
    let lab_path = dir.path().join("w4.lab");
    assert_eq!(code(&maglab(&["gen", "wheel", "4", "-o", graph_path.to_str().unwrap()])), 0);

    let solve = maglab(&[
        "solve", "--graph", graph_path.to_str().unwrap(), "--v", "--e", "--target", "edges",
        "--kind", "magic", "--seed", "3", "--max-iters", "1000000", "-o",
        lab_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&solve), 0, "stderr: {}", stderr(&solve));

    let verify = maglab(&[
        "verify", "--labelling", lab_path.to_str().unwrap(), "--graph",
        graph_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&verify), 0);
    assert!(stdout(&verify).contains("accepted: magic constant"));

    // swap two labels by hand: the report must name the first violated pair
    let text = std::fs::read_to_string(&lab_path).unwrap();
    let tampered = swap_first_two_labels(&text);
    let tampered_path = dir.path().join("tampered.lab");
    std::fs::write(&tampered_path, tampered).unwrap();
    let rejected = maglab(&[
        "verify", "--labelling", tampered_path.to_str().unwrap(), "--graph",
        graph_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&rejected), 1);
    let report = stdout(&rejected);
    assert!(
        report.contains("not magic") || report.contains("attestation mismatch"),
        "got: {report}"
    );

    // duplicate a label: bijection violation reported before any weight talk
    let duplicated = duplicate_first_label(&text);
    let dup_path = dir.path().join("dup.lab");
    std::fs::write(&dup_path, duplicated).unwrap();
    let rejected = maglab(&[
        "verify", "--labelling", dup_path.to_str().unwrap(), "--graph",
        graph_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&rejected), 1);
    assert!(stdout(&rejected).contains("bijection: label"));
}

/// Exchanges the label values of the first two label lines.
fn swap_first_two_labels(text: &str) -> String {
    let mut lines: Vec<String> = text.lines().map(str::to_string).collect();
    let idx: Vec<usize> = lines
        .iter()
        .enumerate()
        .filter(|(_, l)| {
            l.starts_with("v ") || l.starts_with("e ") || l.starts_with("f ")
        })
        .map(|(i, _)| i)
        .take(2)
        .collect();
    let take_label = |line: &str| line.rsplit(' ').next().unwrap().to_string();
    let (a, b) = (idx[0], idx[1]);
    let (la, lb) = (take_label(&lines[a]), take_label(&lines[b]));
    let swap = |line: &str, new: &str| {
        let mut parts: Vec<&str> = line.split(' ').collect();
        let last = parts.len() - 1;
        parts[last] = new;
        parts.join(" ")
    };
    lines[a] = swap(&lines[a], &lb);
    lines[b] = swap(&lines[b], &la);
    lines.join("\n") + "\n"
}

/// Overwrites the second label line's value with the first one's.
fn duplicate_first_label(text: &str) -> String {
    let mut lines: Vec<String> = text.lines().map(str::to_string).collect();
    let idx: Vec<usize> = lines
        .iter()
        .enumerate()
        .filter(|(_, l)| {
            l.starts_with("v ") || l.starts_with("e ") || l.starts_with("f ")
        })
        .map(|(i, _)| i)
        .take(2)
        .collect();
    let label = lines[idx[0]].rsplit(' ').next().unwrap().to_string();
    let mut parts: Vec<String> = lines[idx[1]].split(' ').map(str::to_string).collect();
    let last = parts.len() - 1;
    parts[last] = label;
    lines[idx[1]] = parts.join(" ");
    lines.join("\n") + "\n"
}

#[test]
fn bench_csv_is_deterministic_apart_from_wall_time() {
    let args = [
        "bench", "--family", "p3power-antimagic", "--from", "1", "--to", "2", "--runs", "2",
        "--seed", "9", "--max-iters", "100000",
    ];
    let first = maglab(&args);
    let second = maglab(&args);
    assert_eq!(code(&first), 0);

    let strip_wall = |raw: &Output| -> Vec<String> {
        stdout(raw)
            .lines()
            .map(|line| {
                let cols: Vec<&str> = line.split(',').collect();
                if cols.len() == 7 {
                    format!(
                        "{},{},{},{},{},{}",
                        cols[0], cols[1], cols[2], cols[3], cols[4], cols[6]
                    )
                } else {
                    line.to_string()
                }
            })
            .collect()
    };
    // wall-time is environmental; every other column is seed-determined
    assert_eq!(strip_wall(&first), strip_wall(&second));

    let text = stdout(&first);
    assert!(text.starts_with("family,param,seed,iterations,accepted,wall_ms,solved\n"));
    assert_eq!(text.lines().count(), 1 + 2 * 2);
    assert!(stderr(&first).contains("fit linear"));
}

#[test]
fn bench_guardrail_needs_force() {
    let out = maglab(&[
        "bench", "--family", "p3power-antimagic", "--from", "1", "--to", "5", "--runs", "1",
        "--max-iters", "1000",
    ]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("guardrail"));
}

#[test]
fn graph_file_round_trips_through_cli() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.txt");
    assert_eq!(code(&maglab(&["gen", "petersen", "5", "2", "-o", path.to_str().unwrap()])), 0);
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("graph 10 15 0\n"));

    // a solve on the reloaded file works end to end
    let out = maglab(&[
        "solve", "--graph", path.to_str().unwrap(), "--e", "--target", "vertices", "--kind",
        "antimagic", "--max-iters", "200000",
    ]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("verified antimagic distinct=10"));
}
