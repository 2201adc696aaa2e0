use std::io::Write;
use std::process::{Command, Stdio};

fn fixture(name: &str) -> String {
    format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

struct Run {
    code: i32,
    out: String,
    err: String,
}

fn run_with_stdin(args: &[&str], stdin: &str) -> Run {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("ancestral").chain(args.iter().copied());
    let code = ancestral::cli::run(argv, &mut stdin.as_bytes(), &mut out, &mut err);
    Run {
        code,
        out: String::from_utf8(out).unwrap(),
        err: String::from_utf8(err).unwrap(),
    }
}

fn run(args: &[&str]) -> Run {
    run_with_stdin(args, "")
}

#[test]
fn validate_reports_inducing_path() {
    let r = run(&["validate", &fixture("nonmax.json")]);
    assert_eq!(r.code, 1);
    assert_eq!(r.out.trim(), "ancestral: yes; maximal: no; witness inducing path α↔β↔γ↔δ");

    let r = run(&["validate", &fixture("g2.json")]);
    assert_eq!((r.code, r.out.trim()), (0, "ancestral: yes; maximal: yes; MAG"));

    let r = run(&["--format", "json", "validate", &fixture("nonmax.json")]);
    let v: serde_json::Value = serde_json::from_str(&r.out).unwrap();
    assert_eq!(v["maximal"], false);
    assert_eq!(v["mag"], false);
}

#[test]
fn validate_rejects_duplicate_edges() {
    let r = run(&["validate", &fixture("duplicate.json")]);
    assert_eq!(r.code, 2);
    assert!(r.err.contains("A") && r.err.contains("B"), "{}", r.err);
}

#[test]
fn separate_collider() {
    let coll = fixture("collider.json");
    let r = run(&["separate", &coll, "--x", "X", "--y", "Y"]);
    assert_eq!(r.code, 0);
    assert!(r.out.starts_with("separated"), "{}", r.out);

    let r = run(&["separate", &coll, "--x", "X", "--y", "Y", "--given", "Z"]);
    assert_eq!(r.out.trim(), "connected via X→Z←Y");

    let r = run(&["--format", "json", "separate", &fixture("chain.json"), "--x", "X", "--y", "Y"]);
    let v: serde_json::Value = serde_json::from_str(&r.out).unwrap();
    assert_eq!(v["connected"], true);
}

#[test]
fn separate_unknown_label() {
    let r = run(&["separate", &fixture("chain.json"), "--x", "X", "--y", "Q"]);
    assert_eq!(r.code, 2);
    assert!(r.err.contains("Q"));
}

#[test]
fn equiv_verdicts() {
    let r = run(&["equiv", &fixture("g2.json"), &fixture("g2_bi.json")]);
    assert_eq!((r.code, r.out.trim()), (0, "equivalent"));

    // node order in the second file does not matter
    let r = run(&["equiv", &fixture("g2.json"), &fixture("g2_bi_reordered.json")]);
    assert_eq!(r.code, 0);

    let r = run(&["equiv", &fixture("chain.json"), &fixture("collider.json")]);
    assert_eq!(r.code, 1);
    assert!(r.out.starts_with("not equivalent: unshielded collider"), "{}", r.out);

    let r = run(&["equiv", "--oracle", &fixture("chain.json"), &fixture("collider.json")]);
    assert_eq!((r.code, r.out.trim()), (1, "not equivalent"));

    let r = run(&["equiv", &fixture("g2.json"), &fixture("chain.json")]);
    assert_eq!(r.code, 2);
}

#[test]
fn moves_and_apply() {
    let r = run(&["moves", &fixture("g2.json")]);
    assert_eq!(r.out, "dir-to-bi X Y\nreverse X Y\n");

    let r = run(&["--format", "json", "apply", &fixture("g2.json"), "--kind", "dir-to-bi", "--x", "X", "--y", "Y"]);
    assert_eq!(r.code, 0);
    assert_eq!(r.out.trim(), std::fs::read_to_string(fixture("g2_bi.json")).unwrap().trim());
}

#[test]
fn apply_rejects_unblanketed_edge() {
    let r = run(&["apply", &fixture("nonblk.json"), "--kind", "dir-to-bi", "--x", "X", "--y", "Y"]);
    assert_eq!(r.code, 2);
    assert!(r.out.is_empty());
    assert!(r.err.contains("not blanketed: parent Z of X is not a parent of Y"), "{}", r.err);

    let r = run(&["apply", &fixture("g2.json"), "--kind", "sideways", "--x", "X", "--y", "Y"]);
    assert_eq!(r.code, 2);
}

#[test]
fn apply_reads_stdin() {
    let input = std::fs::read_to_string(fixture("g2.json")).unwrap();
    let r = run_with_stdin(&["apply", "-", "--kind", "reverse", "--x", "X", "--y", "Y"], &input);
    assert_eq!(r.code, 0);
    assert_eq!(r.out.trim(), "2;1>0\tY→X");
}

#[test]
fn class_of_collider() {
    let r = run(&["class", &fixture("collider.json")]);
    assert_eq!(r.out.lines().count(), 4);

    let r = run(&["--format", "json", "class", &fixture("collider.json"), "--max", "2"]);
    let v: serde_json::Value = serde_json::from_str(&r.out).unwrap();
    assert_eq!(v["truncated"], true);
    assert_eq!(v["members"].as_array().unwrap().len(), 2);
}

#[test]
fn enumerate_counts() {
    let r = run(&["enumerate", "--n", "2"]);
    assert_eq!(r.out, "2;\n2;0<>1\n2;0>1\n2;1>0\n");
    let r = run(&["enumerate", "--n", "3"]);
    assert_eq!(r.out.lines().count(), 56);
    let r = run(&["enumerate", "--n", "9"]);
    assert_eq!(r.code, 2);
}

#[test]
fn conjecture_report() {
    let r = run(&["conjecture", "--n", "3"]);
    assert_eq!(r.code, 0, "{}", r.err);
    let v: serde_json::Value = serde_json::from_str(&r.out).unwrap();
    assert_eq!(v["n"], 3);
    assert_eq!(v["mag_count"], 56);
    for check in ["thm2_vs_oracle", "thm3_sound", "thm3_necessary", "thm4_iff", "lemma1", "lemma2"] {
        assert!(v["checks"][check].is_object(), "missing {check}");
    }
    let r = run(&["conjecture", "--n", "2", "--no-checks"]);
    let v: serde_json::Value = serde_json::from_str(&r.out).unwrap();
    assert!(v["checks"].is_null());
}

#[test]
fn dot_round_trip_through_stdin() {
    let r = run(&["dot", &fixture("nonmax.json")]);
    assert!(r.out.contains("\"β\" -> \"δ\";"), "{}", r.out);
    let back = run_with_stdin(&["--format", "json", "validate", "-"], &r.out);
    assert_eq!(back.code, 1);
}

#[test]
fn usage_errors() {
    assert_eq!(run(&[]).code, 2);
    assert_eq!(run(&["frobnicate"]).code, 2);
    assert_eq!(run(&["validate", "/nonexistent.json"]).code, 2);
    let help = run(&["--help"]);
    assert_eq!(help.code, 0);
    assert!(help.out.contains("separate"));
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_ancestral");
    let status = Command::new(bin).args(["validate", &fixture("nonmax.json")]).output().unwrap();
    assert_eq!(status.status.code(), Some(1));

    let mut child = Command::new(bin)
        .args(["equiv", &fixture("g2.json"), "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    let bi = std::fs::read(fixture("g2_bi.json")).unwrap();
    child.stdin.take().unwrap().write_all(&bi).unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "equivalent");
}

#[test]
fn outputs_are_deterministic() {
    let nonmax = fixture("nonmax.json");
    let g2 = fixture("g2.json");
    let collider = fixture("collider.json");
    let cases: [&[&str]; 5] = [
        &["--format", "json", "class", &collider],
        &["moves", &g2],
        &["validate", &nonmax],
        &["dot", &nonmax],
        &["conjecture", "--n", "3"],
    ];
    for args in cases {
        let (a, b) = (run(args), run(args));
        assert_eq!((a.code, a.out), (b.code, b.out), "{args:?}");
    }
}
