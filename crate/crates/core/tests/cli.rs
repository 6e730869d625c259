use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;
use zerosum::text;
use zerosum::theorem::FamilyGroup;
use zerosum::{Element, GroupSpec, Sequence};

fn zerosum(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zerosum"))
        .args(args)
        .env_remove("ZEROSUM_BUDGET")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn extremal_file(dir: &TempDir) -> PathBuf {
    let fam = FamilyGroup::new(&GroupSpec::metacyclic(15, 11).unwrap()).unwrap();
    write(dir, "extremal.seq", &fam.extremal(0, 1, 0).to_file_string())
}

#[test]
fn gao_of_d6() {
    let o = zerosum(&["gao", "--group", "metacyclic n=3 s=2", "--records"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("value=9"));
}

#[test]
fn extremal_sequence_is_free() {
    let dir = TempDir::new().unwrap();
    let f = extremal_file(&dir);
    let o = zerosum(&["check", "--seq", s(&f), "--k", "30", "--records"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("free=true"));
}

#[test]
fn witness_from_long_sequence_verifies() {
    let dir = TempDir::new().unwrap();
    let g = GroupSpec::metacyclic(15, 11).unwrap();
    let mut seq = FamilyGroup::new(&g).unwrap().extremal(0, 1, 0);
    seq.push(Element::rotation(7), 1).unwrap();
    assert_eq!(seq.len(), 45);
    let f = write(&dir, "long.seq", &seq.to_file_string());

    let o = zerosum(&["witness", "--seq", s(&f), "--k", "30", "--records"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    let line = out.lines().find(|l| l.starts_with("witness ")).expect("witness line");
    let w = write(&dir, "w.txt", &format!("{line}\n"));

    let o = zerosum(&["verify-witness", "--seq", s(&f), "--witness", s(&w), "--records"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("valid=true"));

    // flip the first term to a different element
    let parsed = text::parse_witness_line(&g, line).unwrap();
    let mut elems = parsed.elements.clone();
    elems[0] = if elems[0] == Element::rotation(1) { Element::rotation(2) } else { Element::rotation(1) };
    let bad = write(&dir, "bad.txt", &format!("{}\n", text::format_witness_line(parsed.target, &elems)));
    let o = zerosum(&["verify-witness", "--seq", s(&f), "--witness", s(&bad), "--records"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("valid=false"));
}

#[test]
fn replay_prints_steps() {
    let dir = TempDir::new().unwrap();
    let g = GroupSpec::metacyclic(21, 8).unwrap();
    let seq = Sequence::from_counts(&g, [(Element::rotation(1), 40), (Element::reflection(3), 23)]).unwrap();
    let f = write(&dir, "r.seq", &seq.to_file_string());
    let o = zerosum(&["replay", "--seq", s(&f), "--trace", "--records"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    assert!(out.lines().any(|l| l.starts_with("trace step=start")));
    assert!(out.lines().any(|l| l.starts_with("trace step=done")));
    assert!(out.contains("result=witness k=42"));
}

#[test]
fn repro_is_deterministic() {
    let a = zerosum(&["repro", "d6", "--records"]);
    let b = zerosum(&["repro", "d6", "--records"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);

    let a = zerosum(&["repro", "all", "--seed", "42", "--jobs", "1"]);
    let b = zerosum(&["repro", "all", "--seed", "42", "--jobs", "4"]);
    assert_eq!(a.status.code(), Some(0), "{}", stdout(&a));
    assert_eq!(stdout(&a), stdout(&b));
    assert_eq!(stdout(&a).lines().count(), 10);
}

#[test]
fn tiny_budget_exits_with_budget_code() {
    let dir = TempDir::new().unwrap();
    let f = extremal_file(&dir);
    let o = Command::new(env!("CARGO_BIN_EXE_zerosum"))
        .args(["check", "--seq", s(&f), "--k", "30"])
        .env("ZEROSUM_BUDGET", "10")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&o.stderr).contains("budget"));
}

#[test]
fn large_enumeration_is_infeasible() {
    let o = zerosum(&["gao", "--group", "metacyclic n=15 s=11"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn malformed_file_reports_position() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "bad.seq", "group metacyclic n=3 s=2\nseq y * 2, q\n");
    let o = zerosum(&["pi", "--seq", s(&f)]);
    assert_eq!(o.status.code(), Some(64));
    assert!(String::from_utf8_lossy(&o.stderr).contains("2:12:"), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn group_mismatch_is_a_usage_error() {
    let dir = TempDir::new().unwrap();
    let f = extremal_file(&dir);
    let o = zerosum(&["pi", "--seq", s(&f), "--group", "metacyclic n=21 s=8"]);
    assert_eq!(o.status.code(), Some(64));
}

#[test]
fn unknown_flag_is_a_usage_error() {
    assert_eq!(zerosum(&["gao", "--frobnicate"]).status.code(), Some(64));
}
