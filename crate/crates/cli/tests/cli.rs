use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use arglab::io::{table_from_csv, table_from_json};
use arglab::ArgLabellingTable;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures").join(name)
}

fn arglab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_arglab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn arglab_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_arglab"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json_table(o: &Output) -> ArgLabellingTable {
    assert_eq!(o.status.code(), Some(0), "{}", stderr(o));
    table_from_json(&stdout(o)).unwrap().table
}

fn fixture_table(name: &str) -> ArgLabellingTable {
    table_from_json(&std::fs::read_to_string(fixture(&format!("{name}.json"))).unwrap())
        .unwrap()
        .table
}

fn manifest() -> String {
    fixture("figure1.json").display().to_string()
}

#[test]
fn solve_complete_matches_table2() {
    for af in ["example1.apx", "example1.tgf"] {
        let o = arglab(&["solve", fixture(af).to_str().unwrap(), "--semantics", "complete"]);
        assert_eq!(json_table(&o), fixture_table("tbl2"));
        assert_eq!(stderr(&o), "3 rows\n");
    }
}

#[test]
fn solve_is_deterministic() {
    let apx = fixture("example1.apx");
    let args = ["solve", "--semantics", "admissible", apx.to_str().unwrap()];
    assert_eq!(arglab(&args).stdout, arglab(&args).stdout);
}

#[test]
fn solve_weak_labels() {
    let o = arglab(&[
        "--labels",
        "weak",
        "solve",
        fixture("example1.apx").to_str().unwrap(),
        "--semantics",
        "complete",
    ]);
    let text = stdout(&o);
    assert!(text.contains("\"labels\": [\"in\", \"lc\"]"), "{text}");
    assert!(!text.contains("\"und\""));
}

#[test]
fn solve_empty_framework() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("empty.apx");
    std::fs::write(&path, "").unwrap();
    let t = json_table(&arglab(&["solve", path.to_str().unwrap(), "--semantics", "grounded"]));
    assert!(t.header().is_empty());
    assert_eq!(t.len(), 1);
}

#[test]
fn solve_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out.csv");
    let o = arglab(&[
        "--format",
        "csv",
        "solve",
        fixture("example1.apx").to_str().unwrap(),
        "--semantics",
        "stable",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let t = table_from_csv(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(t.len(), 1);
}

#[test]
fn solve_usage_errors() {
    let apx = fixture("example1.apx");
    let o = arglab(&["solve", apx.to_str().unwrap(), "--semantics", "ideal"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("possible values"));

    let dir = tempfile::tempdir().unwrap();
    let odd = dir.path().join("graph.txt");
    std::fs::write(&odd, "arg(a).").unwrap();
    let o = arglab(&["solve", odd.to_str().unwrap(), "--semantics", "complete"]);
    assert_eq!(o.status.code(), Some(2));

    let bad = dir.path().join("bad.apx");
    std::fs::write(&bad, "arg(a).\natt(a,b).\n").unwrap();
    let o = arglab(&["solve", bad.to_str().unwrap(), "--semantics", "complete"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("line 2"), "{}", stderr(&o));
}

#[test]
fn query_projection() {
    let o = arglab(&["query", &manifest(), "--query", "{ v : {aG,aF,aE} | tbl2(v) }"]);
    assert_eq!(json_table(&o), fixture_table("tbl4"));
}

#[test]
fn query_join_engines_agree() {
    let q = "{ v : header(tbl2) | tbl2(v) \
        and exists v1 : header(tbl4) [ tbl4(v1) and v.aG == v1.aG and v.aF == v1.aF and v.aE == v1.aE ] \
        and exists v2 : header(tbl5) [ tbl5(v2) and v.aD == v2.aD and v.aC == v2.aC and v.aB == v2.aB and v.aA == v2.aA ] }";
    let guarded = arglab(&["query", &manifest(), "--query", q, "--engine", "guarded"]);
    let t = json_table(&guarded);
    assert_eq!(t.len(), 1);
    assert_eq!(stdout(&guarded).matches("\"out\", \"in\", \"out\", \"in\", \"out\", \"in\", \"out\"").count(), 1);
    let naive = arglab(&["query", &manifest(), "--query", q, "--engine", "naive"]);
    assert_eq!(naive.stdout, guarded.stdout);
}

#[test]
fn query_from_file_and_strict() {
    let dir = tempfile::tempdir().unwrap();
    let qf = dir.path().join("q.txt");
    std::fs::write(&qf, "{ v : {aG,aF,aE} |\n  tbl2(v) }\n").unwrap();
    let o = arglab(&["query", &manifest(), "--query-file", qf.to_str().unwrap()]);
    assert_eq!(json_table(&o).len(), 3);
    let o = arglab(&["query", &manifest(), "--query-file", qf.to_str().unwrap(), "--strict-membership"]);
    assert!(json_table(&o).is_empty());
}

#[test]
fn query_errors() {
    let o = arglab(&["query", &manifest(), "--query", "{ v : {aA} |\n tbl2(v) and }"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("2:14"), "{}", stderr(&o));

    let o = arglab(&["query", &manifest(), "--query", "{ v : {aA} | nope(v) }"]);
    assert_eq!(o.status.code(), Some(3));

    let o = arglab(&["query", &manifest(), "--query", "{ v : header(tbl2) | not tbl2(v) }", "--engine", "guarded"]);
    assert_eq!(o.status.code(), Some(5));

    let big = "{ v : {a1,a2,a3,a4,a5,a6,a7,a8,a9,a10,a11,a12,a13} | 0 <= count(v,\"in\") }";
    let o = arglab(&["query", &manifest(), "--query", big]);
    assert_eq!(o.status.code(), Some(4));

    let o = arglab(&["query", &manifest()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn derive_kinds() {
    let m = manifest();
    let run = |args: &[&str]| json_table(&arglab(args));
    assert_eq!(
        run(&["derive", "partial", "--manifest", &m, "--table", "tbl2", "--cols", "aG,aF,aE"]),
        fixture_table("tbl4")
    );
    let g = run(&["derive", "grounded", "--manifest", &m, "--table", "tbl2"]);
    assert_eq!(g.len(), 1);
    assert!(g.rows().next().unwrap().count(arglab::Label::Und) == 5);
    assert_eq!(run(&["derive", "stable", "--manifest", &m, "--table", "tbl2"]).len(), 1);
    assert_eq!(run(&["derive", "preferred", "--manifest", &m, "--table", "tbl2"]).len(), 2);
    assert_eq!(
        run(&["derive", "dependent", "--manifest", &m, "--table", "tbl2", "--constrain", "aE=in"]).len(),
        1
    );
    assert_eq!(
        run(&["derive", "dependent", "--manifest", &m, "--table", "tbl2", "--fragments", "tbl5"]).len(),
        1
    );
    assert_eq!(
        run(&["derive", "multi-agent", "--manifest", &m, "--parts", "tbl4,tbl5", "--membership", "tbl2"]),
        run(&["derive", "stable", "--manifest", &m, "--table", "tbl2"])
    );
}

#[test]
fn derive_explanation() {
    let apx = fixture("example1.apx");
    let o = arglab(&["derive", "explanation", "--af", apx.to_str().unwrap(), "--target", "aB", "--emit-query"]);
    assert_eq!(json_table(&o), fixture_table("tbl3"));
    assert!(stderr(&o).contains("v.aB == \"in\""));
}

#[test]
fn derive_flag_misuse() {
    let m = manifest();
    for args in [
        vec!["derive", "partial", "--manifest", &m, "--table", "tbl2"],
        vec!["derive", "stable", "--manifest", &m],
        vec!["derive", "explanation", "--target", "aB"],
        vec!["derive", "dependent", "--manifest", &m, "--table", "tbl2", "--constrain", "aE"],
        vec!["derive", "multi-agent", "--manifest", &m, "--parts", "tbl4", "--membership", "tbl2"],
        vec!["derive", "partial", "--manifest", &m, "--table", "tbl4", "--cols", "aA"],
    ] {
        let o = arglab(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
    }
}

#[test]
fn export_sql() {
    let o = arglab(&["export-sql", &manifest()]);
    assert_eq!(o.status.code(), Some(0));
    let dump = stdout(&o);
    assert_eq!(dump.matches("CREATE TABLE").count(), 5);
    assert_eq!(dump, stdout(&arglab(&["export-sql", &manifest()])));

    let dir = tempfile::tempdir().unwrap();
    let qout = dir.path().join("stable.sql");
    let o = arglab(&[
        "export-sql",
        &manifest(),
        "--query",
        "{ v : header(tbl2) | tbl2(v) and not 1 <= count(v,\"und\") }",
        "--query-out",
        qout.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), dump);
    assert!(std::fs::read_to_string(qout).unwrap().starts_with("SELECT DISTINCT"));

    let o = arglab(&["export-sql", &manifest(), "--query", "{ v : header(tbl2) | not tbl2(v) }"]);
    assert_eq!(o.status.code(), Some(5));
    assert!(stderr(&o).contains("`v`"));
}

#[test]
fn repl_session() {
    let input = "\\tables\n\
        { v : header(tbl2) | tbl2(v) and (3 <= count(v,\"in\") or 4 <= count(v,\"und\")) }\n\
        { v : {aA} | oops }\n\
        { v : {aG} | tbl4(v) }\n\
        \\quit\n\
        { v : {aG} | tbl4(v) }\n";
    let o = arglab_stdin(&["repl", &manifest()], input);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("tbl1\ntbl2\ntbl3\ntbl4\ntbl5\n"), "{out}");
    assert!(out.contains("out  in   out  in   out  in   out\n"));
    assert!(out.contains("und  und  und  und  und  in   out\n"));
    assert!(out.contains("(2 rows)"));
    // stops at \quit
    assert_eq!(out.matches("(1 row)").count(), 1);
    assert_eq!(stderr(&o).matches("error:").count(), 1);
}

#[test]
fn repl_empty_input() {
    let o = arglab_stdin(&["repl", &manifest()], "");
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
}
