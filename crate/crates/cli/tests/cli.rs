use std::path::PathBuf;
use std::process::{Command, Output};
use std::sync::Arc;

use equivop::json::{ColorsJson, OperadFile, OperadJson, OperadTable};
use equivop::operad::Operad;
use equivop::signature::{GSet, SigmaGroupoid};

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name).display().to_string()
}

fn run(args: &[&str]) -> (i32, String) {
    let Output { status, stdout, .. } =
        Command::new(env!("CARGO_BIN_EXE_equivop")).args(args).output().expect("binary runs");
    (status.code().expect("exit code"), String::from_utf8(stdout).expect("utf-8 output"))
}

#[test]
fn graph_subgroups_of_z2_at_arity_two() {
    let (code, out) = run(&["enumerate", "graph-subgroups", "--group", "Z2", "--arity-range", "2..2"]);
    assert_eq!(code, 0);
    assert!(out.contains("arity 2: 3"), "{out}");
}

#[test]
fn binary_trees_with_three_leaves() {
    let (code, out) = run(&["enumerate", "trees", "--arity", "3", "--vertex-arities", "2"]);
    assert_eq!(code, 0);
    assert!(out.contains("classes: 1") && out.contains("|Aut|=2"), "{out}");
}

#[test]
fn subgroups_of_s3() {
    let (code, out) = run(&["enumerate", "subgroups", "--group", "S3"]);
    assert_eq!(code, 0);
    assert!(out.contains("subgroups: 6"), "{out}");
}

#[test]
fn pseudo_indexing_graph_family_passes_and_trivial_fails_at_the_stick() {
    let (code, _) = run(&["check", "pseudo-indexing", "--group", "Z2", "--preset", "graph", "--bound", "3"]);
    assert_eq!(code, 0);
    let (code, out) = run(&["check", "pseudo-indexing", "--group", "Z2", "--preset", "trivial", "--bound", "3"]);
    assert_eq!(code, 1);
    assert!(out.contains("eta"), "{out}");
}

#[test]
fn operad_laws_detect_a_mutated_table() {
    let base = Arc::new(SigmaGroupoid::new(GSet::single(), 2));
    let op = Operad::endomorphism_following_colors(base.clone(), &[2]).unwrap();
    let good = OperadTable::from_operad(&op);
    let mut bad = good.clone();
    let target_size = |c: &[usize; 6]| op.size(base.substitute(c[0], c[1], c[3]).unwrap());
    let entry = bad.compositions.iter_mut().find(|c| c[3] != base.unit_signature(0) && target_size(c) > 1).unwrap();
    entry[5] = (entry[5] + 1) % target_size(entry);
    let dir = std::env::temp_dir().join(format!("equivop-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    for (name, table, expected) in [("good.json", good.clone(), 0), ("bad.json", bad, 1)] {
        let file = OperadFile { colors: ColorsJson::from_gset(&GSet::single()), max_arity: 2, operad: OperadJson::Table(table) };
        let path = dir.join(name);
        std::fs::write(&path, serde_json::to_string(&file).unwrap()).unwrap();
        let (code, out) = run(&["check", "operad-laws", path.to_str().unwrap()]);
        assert_eq!(code, expected, "{name}: {out}");
        if expected == 1 {
            assert!(out.contains("tree"), "{out}");
        }
    }
}

#[test]
fn free_binary_extension_matches_the_oracle() {
    let (code, out) = run(&["extend", &data("free_binary.json")]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("2:1 3:3 4:15"), "{out}");
    assert!(out.contains("oracle-match: yes"), "{out}");
}

#[test]
fn identity_attachment_keeps_every_stage() {
    let (code, out) = run(&["extend", &data("identity_attachment.json")]);
    assert_eq!(code, 0, "{out}");
    let rows: Vec<&str> = out.lines().filter(|l| l.starts_with("stage ")).map(|l| l.split(": ").nth(1).unwrap()).collect();
    assert!(rows.len() > 1 && rows.iter().all(|r| *r == "1:1 2:1 3:1 4:1"), "{out}");
}

#[test]
fn small_bound_is_reported_as_not_stabilized() {
    let (code, out) = run(&["extend", &data("free_binary.json"), "--bound", "2"]);
    assert_eq!(code, 1);
    assert!(out.contains("not stabilized"), "{out}");
}

#[test]
fn f_equivalence_witness() {
    let (code, out) = run(&["check", "f-equivalence", &data("sign_fixed_points.json")]);
    assert_eq!(code, 1);
    assert!(out.contains("(;c)") && out.contains("(1,())"), "{out}");
}

#[test]
fn examples_replay() {
    let (code, out) = run(&["examples"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("(b,c;a)") && out.contains("(;a)"), "{out}");
}

#[test]
fn json_reports_are_deterministic() {
    let args = ["properties", "--seed", "3", "--count", "2", "--format", "json"];
    let (code, first) = run(&args);
    assert_eq!(code, 0, "{first}");
    let (_, second) = run(&args);
    assert_eq!(first, second);
    let v: serde_json::Value = serde_json::from_str(&first).unwrap();
    assert_eq!(v["passed"], true);
}

#[test]
fn input_errors_exit_with_two() {
    assert_eq!(run(&["enumerate", "subgroups", "--group", "Q9"]).0, 2);
    assert_eq!(run(&["extend", "/nonexistent/problem.json"]).0, 2);
    assert_eq!(run(&["check", "family", &data("free_binary.json")]).0, 2);
    assert_eq!(run(&["enumerate", "graph-subgroups", "--group", "Z2", "--arity-range", "3..1"]).0, 2);
}

#[test]
fn invalid_family_fails_the_check() {
    let (code, out) = run(&["check", "family", &data("z2_graph_family_bad.json")]);
    assert_eq!(code, 1);
    assert!(out.contains("missing"), "{out}");
}
