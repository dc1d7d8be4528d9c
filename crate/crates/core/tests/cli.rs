//! Runs the `toposat` binary and checks verdict lines, artefacts and exit codes.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use toposat::cli::{EXIT_FAIL, EXIT_OK, EXIT_PARSE, EXIT_SAT, EXIT_UNSAT, EXIT_UNSAT_WITHIN_BOUND};
use toposat::formula::parse;
use toposat::frames::Model;
use toposat::semantics::holds;

fn toposat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_toposat"))
        .args(args)
        .env_remove("TOPOSAT_THREADS")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 output")
}

fn first_line(o: &Output) -> String {
    stdout(o).lines().next().unwrap_or_default().to_string()
}

/// Two depth-0 ends joined through a middle point, with `r` at both ends.
const SPLIT_REGION_MODEL: &str = r#"{
  "frame": {
    "points": [
      {"id": "a", "depth": 0}, {"id": "b", "depth": 0}, {"id": "c", "depth": 0},
      {"id": "z1", "depth": 1}, {"id": "z2", "depth": 1}
    ],
    "edges": [["z1", "a"], ["z1", "b"], ["z2", "b"], ["z2", "c"]]
  },
  "frame_class": "regc",
  "valuation": {"r": ["a", "c", "z1", "z2"]}
}"#;

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn fork_method_prints_a_checkable_certificate() {
    let o = toposat(&["sat", "--frame", "regc", "--method", "forks", "-e", "C(r1, r2)"]);
    assert_eq!(code(&o), EXIT_SAT);
    let out = stdout(&o);
    let (verdict, json) = out.split_once('\n').unwrap();
    assert!(verdict.starts_with("SAT bound="), "{verdict}");
    assert!(verdict.contains(" method=forks "), "{verdict}");
    let model = Model::from_json(json).unwrap();
    assert!(holds(&model, &parse("C(r1, r2)").unwrap()).unwrap());

    let dir = tempfile::tempdir().unwrap();
    let model_path = write(dir.path(), "cert.json", json);
    let o = toposat(&["check", &model_path, "-e", "C(r1, r2)"]);
    assert_eq!((code(&o), stdout(&o).trim()), (EXIT_OK, "true"));
}

#[test]
fn unsatisfiable_pair_exits_twenty() {
    let o = toposat(&["sat", "-e", "EC(r1, r2) & EC(r1, -r2)"]);
    assert_eq!(code(&o), EXIT_UNSAT);
    assert!(first_line(&o).starts_with("UNSAT bound="));
}

#[test]
fn separated_region_over_connected_frames_is_bounded_unsat() {
    let o = toposat(&["sat", "--frame", "conregc", "--bound", "12", "-e", "!C(r, -r) & r != 0 & r != 1"]);
    assert_eq!(code(&o), EXIT_UNSAT_WITHIN_BOUND);
    assert!(first_line(&o).starts_with("UNSAT_WITHIN_BOUND bound=12 method=bounded"), "{}", first_line(&o));
    let o = toposat(&["sat", "--frame", "regc", "--bound", "12", "-e", "!C(r, -r) & r != 0 & r != 1"]);
    assert_eq!(code(&o), EXIT_SAT);
}

#[test]
fn formula_files_and_stdin_are_read() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "f.txt", "conn(r) & !conn(r * s)\n");
    let o = toposat(&["sat", &path, "--bound", "6"]);
    assert_eq!(code(&o), EXIT_SAT);
    let mut child = Command::new(env!("CARGO_BIN_EXE_toposat"))
        .args(["sat", "-"])
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .stderr(std::process::Stdio::piped())
        .spawn()
        .unwrap();
    {
        use std::io::Write;
        child.stdin.take().unwrap().write_all(b"r = 0 & r != 0").unwrap();
    }
    let o = child.wait_with_output().unwrap();
    assert_eq!(code(&o), EXIT_UNSAT);
}

#[test]
fn valid_reports_the_dual_verdict() {
    let o = toposat(&["valid", "-e", "EC(r1 + r2, r3) -> EC(r1, r3) | EC(r2, r3)"]);
    assert_eq!(code(&o), EXIT_UNSAT);
    assert!(first_line(&o).starts_with("VALID "));
    let o = toposat(&["valid", "-e", "C(r1, r2)"]);
    assert_eq!(code(&o), EXIT_SAT);
    assert!(first_line(&o).starts_with("INVALID "));
    let o = toposat(&["valid", "--frame", "conregc", "--bound", "6", "-e", "C(r, -r) | r = 0 | r = 1"]);
    assert_eq!(code(&o), EXIT_UNSAT_WITHIN_BOUND);
    assert!(first_line(&o).starts_with("VALID_WITHIN_BOUND bound=6"));
}

#[test]
fn malformed_inputs_exit_two() {
    let o = toposat(&["sat", "-e", "C(r1,"]);
    assert_eq!(code(&o), EXIT_PARSE);
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error[parse_error]"));

    let dir = tempfile::tempdir().unwrap();
    let bad_model = write(dir.path(), "bad.json", "{\"frame\":");
    assert_eq!(code(&toposat(&["check", &bad_model, "-e", "r = 0"])), EXIT_PARSE);
    let bad_spec = write(dir.path(), "tiles.json", "{\"tiles\": []}");
    assert_eq!(code(&toposat(&["generate", "tiling", &bad_spec, "-o", "-"])), EXIT_PARSE);
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(code(&toposat(&[])), EXIT_FAIL);
    assert_eq!(code(&toposat(&["sat", "--bound", "0", "-e", "r = 0"])), EXIT_FAIL);
    assert_eq!(code(&toposat(&["sat", "--frame", "nowhere", "-e", "r = 0"])), EXIT_FAIL);
    assert_eq!(code(&toposat(&["--help"])), EXIT_OK);
}

#[test]
fn check_reports_truth_by_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let model = write(dir.path(), "split.json", SPLIT_REGION_MODEL);
    let o = toposat(&["check", &model, "-e", "!conn(r) & conn(1)"]);
    assert_eq!((code(&o), stdout(&o).trim()), (EXIT_OK, "true"));
    let o = toposat(&["check", &model, "-e", "conn(r)"]);
    assert_eq!((code(&o), stdout(&o).trim()), (EXIT_FAIL, "false"));
    // An unknown variable is an evaluation error, not a parse error.
    assert_eq!(code(&toposat(&["check", &model, "-e", "q = 0"])), EXIT_FAIL);
}

#[test]
fn translate_to_fence_logic() {
    let o = toposat(&["translate", "--to", "fp", "-e", "conn(r)"]);
    assert_eq!(code(&o), EXIT_OK);
    assert_eq!(stdout(&o).trim(), "!F(P(r & F(!r & F(r))))");
    let o = toposat(&["translate", "--to", "fp", "-e", "C(r, s)"]);
    assert_eq!(code(&o), EXIT_FAIL);
}

#[test]
fn generated_tiling_witness_checks() {
    let dir = tempfile::tempdir().unwrap();
    let formula = dir.path().join("theta.f");
    let witness = dir.path().join("theta.json");
    let o = toposat(&[
        "generate",
        "tiling",
        "--bundled",
        "uniform",
        "-o",
        formula.to_str().unwrap(),
        "--witness",
        witness.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), EXIT_OK, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(formula.exists() && witness.exists());
    let o = toposat(&["check", witness.to_str().unwrap(), formula.to_str().unwrap()]);
    assert_eq!((code(&o), stdout(&o).trim()), (EXIT_OK, "true"));
}

#[test]
fn generated_machine_formula_is_satisfiable_on_fences() {
    let dir = tempfile::tempdir().unwrap();
    let formula = dir.path().join("psi.f");
    let o = toposat(&["generate", "tm", "--bundled", "accepter", "--input", "11", "-o", formula.to_str().unwrap()]);
    assert_eq!(code(&o), EXIT_OK);
    let o = toposat(&["sat", formula.to_str().unwrap(), "--frame", "fence", "--bound", "15"]);
    assert_eq!(code(&o), EXIT_SAT);
}

#[test]
fn deterministic_runs_are_byte_identical() {
    let args = ["sat", "--deterministic", "--bound", "8", "-e", "conn(r) & !conn(r * s) & C(r, -s)"];
    let a = toposat(&args);
    let b = toposat(&args);
    assert_eq!(code(&a), EXIT_SAT);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stderr, b.stderr);
    assert!(a.stderr.is_empty());
}

#[test]
fn corpus_subcommand() {
    let o = toposat(&["corpus", "--only", "ec-complement-unsat", "--only", "split-region-minimal"]);
    assert_eq!(code(&o), EXIT_OK);
    let out = stdout(&o);
    assert_eq!(out.lines().filter(|l| l.starts_with("PASS\t")).count(), 2);
    assert!(out.ends_with("failures=0\n"));
    let o = toposat(&["corpus", "--list"]);
    assert!(stdout(&o).lines().count() >= 15);
    assert_eq!(code(&toposat(&["corpus", "--only", "no-such-entry"])), EXIT_FAIL);
}
