use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn gozinta(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gozinta"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path
}

fn catalog_file(dir: &TempDir, name: &str) -> PathBuf {
    let out = gozinta(&["catalog", name]);
    assert_eq!(code(&out), 0);
    write(dir, &format!("{name}.box"), &stdout(&out))
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn verify_reports_ok_and_failures() {
    let dir = TempDir::new().unwrap();
    let good = catalog_file(&dir, "ex-3-4-5");
    let out = gozinta(&["verify", s(&good)]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        stdout(&out),
        "[AB]\nB: 4 × 5 × 6(3)\nA: 3 × 4 × 5\n\n[BA]\nA: 4 × 5 × 6(3)\nB: 3 × 4 × 5\nOK\n"
    );

    let bad = write(
        &dir,
        "bad.box",
        "box A dims 3 4 5 expand 1\nbox B dims 3 4 5 expand 1\narrangement BA order B A\n",
    );
    let out = gozinta(&["verify", s(&bad)]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).ends_with("FAIL\n"));
    assert!(stdout(&out).contains("violation: "));
}

#[test]
fn bound_can_be_lifted() {
    let dir = TempDir::new().unwrap();
    let text = "box A dims 5 7 11 expand 1\nbox B dims 6 8 10 expand 1\n\
                arrangement BA order B A\nshow BA A expanded 13\n";
    let file = write(&dir, "loose.box", text);
    assert_eq!(code(&gozinta(&["verify", s(&file)])), 1);
    assert_eq!(code(&gozinta(&["verify", "--no-bound", s(&file)])), 0);
}

#[test]
fn malformed_input_is_a_usage_error() {
    let dir = TempDir::new().unwrap();
    let file = write(&dir, "broken.box", "box A dims 3 four 5\n");
    let out = gozinta(&["verify", s(&file)]);
    assert_eq!(code(&out), 2);
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 1, column 14"), "{err}");
    assert_eq!(code(&gozinta(&["verify", "/nonexistent/file.box"])), 2);
}

#[test]
fn classify_prints_the_chain() {
    let out = gozinta(&["classify", "6,9,10", "7,8,11"]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        stdout(&out),
        "Type 3: a1=6 < b1=7 < b2=8 < a2=9 < a3=10 < b3=11\n"
    );
    let out = gozinta(&["classify", "1,2,3", "5,6,7"]);
    assert_eq!(code(&out), 1);
    assert_eq!(code(&gozinta(&["classify", "1,2", "5,6"])), 2);
}

#[test]
fn achieve_emits_a_bounded_witness() {
    let dir = TempDir::new().unwrap();
    let emitted = dir.path().join("w.box");
    let out = gozinta(&[
        "achieve",
        "--dim",
        "3",
        "--boxes",
        "4",
        "--perm",
        "2413",
        "--emit",
        s(&emitted),
    ]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.starts_with("Witness\ncase "), "{text}");
    assert!(text.contains("[BDAC]"));
    let verify = gozinta(&["verify", s(&emitted)]);
    assert_eq!(code(&verify), 0, "{}", stdout(&verify));
}

#[test]
fn achieve_reports_infeasible_orders() {
    let out = gozinta(&["achieve", "--dim", "3", "--boxes", "4", "--perm", "DCBA"]);
    assert_eq!(code(&out), 1);
    assert_eq!(stdout(&out).lines().next(), Some("ProvedInfeasible"));
    assert_eq!(
        code(&gozinta(&[
            "achieve", "--dim", "3", "--boxes", "4", "--perm", "123"
        ])),
        2
    );
}

#[test]
fn impossible_prints_counts() {
    let out = gozinta(&[
        "impossible",
        "--dim",
        "2",
        "--boxes",
        "3",
        "--perm",
        "132",
        "--perm",
        "213",
        "--perm",
        "231",
        "--perm",
        "312",
        "--perm",
        "321",
    ]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("orders=123,132,213,231,312,321\n"), "{text}");
    assert!(text.contains("cases_total=498677257\n"), "{text}");
    assert!(text.contains("all_infeasible=true\n"));

    let out = gozinta(&["impossible", "--dim", "2", "--boxes", "4"]);
    assert_eq!(code(&out), 1);
    let text = stdout(&out);
    assert!(text.contains("all_infeasible=false\n"));
    assert!(text.contains("feasible case: expand sides"), "{text}");
}

#[test]
fn brute_finds_the_classic_pair() {
    let out = gozinta(&["brute", "--dim", "3", "--boxes", "2", "--max-side", "5"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).starts_with("box A dims 3 4 5 expand 1\nbox B dims 3 4 5 expand 1\n"));
    let out = gozinta(&["brute", "--dim", "3", "--boxes", "2", "--max-side", "3"]);
    assert_eq!((code(&out), stdout(&out)), (1, "none\n".to_string()));
}

#[test]
fn boosting_and_reducing() {
    let dir = TempDir::new().unwrap();
    let pair = catalog_file(&dir, "ex-3-4-5");
    let out = gozinta(&["boost", "concat", s(&pair), s(&pair)]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("arrangement BADC order B A D C\n"));

    let out = gozinta(&["boost", "dup", s(&pair), "2"]);
    assert!(stdout(&out).contains("arrangement BCA order B C A\n"));

    let quad = catalog_file(&dir, "ex-2431");
    let out = gozinta(&["boost", "inv", s(&quad)]);
    assert!(
        stdout(&out).contains("arrangement DACB order D A C B\n"),
        "{}",
        stdout(&out)
    );

    let five = catalog_file(&dir, "ex-butBAC");
    let out = gozinta(&["reduce", s(&five)]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), stdout(&gozinta(&["catalog", "ex-butBAC-2d"])));
}

#[test]
fn transforms() {
    let dir = TempDir::new().unwrap();
    let pair = catalog_file(&dir, "ex-3-4-5");
    let out = gozinta(&["transform", "scale", s(&pair), "1/2"]);
    assert!(stdout(&out).starts_with("box A dims 3/2 2 5/2 expand 1\n"));
    let out = gozinta(&["transform", "shift", s(&pair), "1"]);
    assert!(stdout(&out).starts_with("box A dims 4 5 6 expand 1\n"));
    let long = catalog_file(&dir, "ex-5-7-999");
    let out = gozinta(&["transform", "replace", s(&long), "A", "3", "600"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).starts_with("box A dims 5 7 600 expand 1\n"));
    assert_eq!(
        code(&gozinta(&["transform", "replace", s(&long), "A", "3", "1000"])),
        1
    );
}

#[test]
fn small_commands() {
    let out = gozinta(&["gen-triple", "3"]);
    assert!(stdout(&out).contains("box B dims 7/2 9/2 11/2\n"));
    assert_eq!(stdout(&gozinta(&["coolness", "2413"])), "3\n");
    assert_eq!(stdout(&gozinta(&["coolness", "DCBA"])), "6\n");
    let list = stdout(&gozinta(&["catalog"]));
    assert_eq!(list.lines().count(), 15);
    assert_eq!(code(&gozinta(&["catalog", "nope"])), 2);
}
