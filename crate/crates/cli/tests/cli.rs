use std::process::{Command, Output};

use serde_json::Value;
use symprod_cli::{flatten, grid_documents, report_document, report_text, ReportDocument, CSV_HEADER};

fn symprod(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_symprod")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn json_report_parses_back_to_the_same_document() {
    for (n, g) in [(1, 0), (1, 2), (2, 0), (3, 2), (4, 1)] {
        let doc = report_document(n, g, false, true).unwrap();
        let text = serde_json::to_string(&doc).unwrap();
        let back: ReportDocument = serde_json::from_str(&text).unwrap();
        assert_eq!(back, doc);
    }
}

#[test]
fn text_lines_are_the_json_leaves() {
    let doc = report_document(3, 2, false, false).unwrap();
    let value = serde_json::to_value(&doc).unwrap();
    let text = report_text(&doc);
    let lines: Vec<&str> = text.lines().collect();
    let leaves = flatten(&value);
    assert_eq!(lines.len(), leaves.len());
    for (line, (k, v)) in lines.iter().zip(&leaves) {
        assert_eq!(*line, format!("{k} = {v}"));
    }
    assert!(lines.contains(&"report.cat.value = 5"));
    assert!(lines.contains(&"report.betti.value = [1, 4, 7, 8, 7, 4, 1]"));
}

#[test]
fn projective_plane_report() {
    let o = symprod(&["report", "--n", "2", "--g", "0", "--format", "json"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["schema_version"], "1");
    assert_eq!(v["report"]["betti"]["value"], serde_json::json!([1, 0, 1, 0, 1]));
    assert_eq!(v["report"]["cat"]["value"], 2);
    assert_eq!(v["report"]["tc"]["value"], 4);
    assert_eq!(v["report"]["spin"]["value"]["manifold_spin"], false);
    assert_eq!(v["chern"]["c1"], "3c*");
    assert_eq!(v["chern"]["total"], "1 + 3c* + 3c*^2");
}

#[test]
fn guard_refusal_exits_two() {
    let o = symprod(&["report", "--n", "2", "--g", "12"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("override"));
    assert!(o.stdout.is_empty());
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(symprod(&["report", "--n", "2"]).status.code(), Some(2));
    assert_eq!(symprod(&["verify", "--mutate-ideal", "nonsense"]).status.code(), Some(2));
    assert_eq!(symprod(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn verify_exit_codes() {
    let clean = symprod(&["verify", "--max-n", "3", "--max-g", "3", "--only", "1,2,3,5,8,9,10"]);
    assert_eq!(clean.status.code(), Some(0), "{}", stdout(&clean));
    let mutated = symprod(&["verify", "--max-n", "2", "--max-g", "3", "--mutate-ideal", "pair-factor"]);
    assert_eq!(mutated.status.code(), Some(1));
    assert!(stdout(&mutated).contains("pair_factor family removed"));
}

#[test]
fn verify_json_lists_every_check() {
    let o = symprod(&["verify", "--max-n", "2", "--max-g", "1", "--format", "json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let results = v["results"].as_array().unwrap();
    // n in 1..=2, g in 0..=1, ten checks each.
    assert_eq!(results.len(), 40);
    assert_eq!(v["summary"]["total"], 40);
}

#[test]
fn grid_csv_has_one_row_per_point() {
    let o = symprod(&["grid", "--max-n", "6", "--max-g", "6"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some(CSV_HEADER));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 36);
    assert!(rows[0].starts_with("1,1,2,1 2 1,0,"));
}

#[test]
fn grid_json_lines_match_the_library() {
    let o = symprod(&["grid", "--max-n", "2", "--max-g", "2", "--format", "json"]);
    let docs = grid_documents(2, 1, 2, false).unwrap();
    let parsed: Vec<ReportDocument> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(parsed, docs);
}

#[test]
fn out_flag_writes_the_same_bytes() {
    let dir = std::env::temp_dir().join(format!("symprod-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("r.json");
    let p = path.to_str().unwrap();
    let a = symprod(&["report", "--n", "3", "--g", "1", "--format", "json", "--out", p]);
    assert!(a.status.success() && a.stdout.is_empty());
    let b = symprod(&["report", "--n", "3", "--g", "1", "--format", "json"]);
    assert_eq!(std::fs::read(&path).unwrap(), b.stdout);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn thread_count_does_not_change_output() {
    let run = |k: &str| {
        Command::new(env!("CARGO_BIN_EXE_symprod"))
            .env("SYMPROD_THREADS", k)
            .args(["grid", "--max-n", "4", "--max-g", "3", "--format", "json"])
            .output()
            .unwrap()
            .stdout
    };
    assert_eq!(run("1"), run("4"));
}
