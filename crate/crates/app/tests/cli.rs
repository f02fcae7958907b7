use std::collections::BTreeSet;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn exemplar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_exemplar")).args(args).output().unwrap()
}

fn json_stdout(out: &Output) -> Value {
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn files(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut out = Vec::new();
    let mut stack = vec![dir.to_owned()];
    while let Some(d) = stack.pop() {
        for e in fs::read_dir(&d).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                out.push((p.strip_prefix(dir).unwrap().display().to_string(), fs::read(&p).unwrap()));
            }
        }
    }
    out.sort();
    out
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(exemplar(&["teleport"]).status.code(), Some(2));
    assert_eq!(exemplar(&[]).status.code(), Some(2));
    assert_eq!(exemplar(&["recommend"]).status.code(), Some(2));
    assert_eq!(exemplar(&["whatif", "--id", "app-0001", "--edit", "leverage"]).status.code(), Some(2));
    let help = exemplar(&["--help"]);
    assert_eq!(help.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&help.stdout).contains("demo-credit"));
}

#[test]
fn recommend_from_profile_file() {
    let dir = tempfile::tempdir().unwrap();
    let profile = dir.path().join("credit.json");
    fs::write(
        &profile,
        r#"{"model": {"task_kind": "Emulation", "target_judgeable_by_user": true, "perspective": "Actor", "pragmatic_goal_focus": true},
            "user": {"expertise": "Expert", "role": "loan officer"}}"#,
    )
    .unwrap();
    let r = json_stdout(&exemplar(&["recommend", "--profile", profile.to_str().unwrap()]));
    let top2: BTreeSet<&str> = r["ranked_modes"].as_array().unwrap()[..2].iter().map(|m| m.as_str().unwrap()).collect();
    assert_eq!(top2, BTreeSet::from(["KnowledgeStructures", "DirectRecall"]));
    assert_eq!(r, json_stdout(&exemplar(&["recommend", "--case", "credit"])));

    let docs = json_stdout(&exemplar(&["recommend", "--case", "documentation"]));
    assert_eq!(docs["ranked_modes"][0], "DirectRecall");

    let missing = exemplar(&["recommend", "--profile", "/definitely/not/here.json"]);
    assert_eq!(missing.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&missing.stderr).starts_with("error:"));
}

#[test]
fn demo_credit_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for out in [&a, &b] {
        let s = json_stdout(&exemplar(&["demo-credit", "--n", "500", "--seed", "7", "--out", out.to_str().unwrap()]));
        assert_eq!(s["applicants"], 500);
    }
    let (fa, fb) = (files(&a), files(&b));
    assert!(fa.len() > 4);
    assert_eq!(fa, fb);

    let svg = dir.path().join("pdp.svg");
    let artifacts = a.join("artifacts.json");
    let out = exemplar(&["plot", "--input", artifacts.to_str().unwrap(), "--pointer", "/pdp", "--out", svg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(fs::read_to_string(&svg).unwrap().starts_with("<svg"));
    let bad = exemplar(&["plot", "--input", artifacts.to_str().unwrap(), "--out", svg.to_str().unwrap()]);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn whatif_reports_rescoring() {
    let same = json_stdout(&exemplar(&["whatif", "--id", "app-0003", "--seed", "7"]));
    assert_eq!(same["delta"], 0.0);
    let out = exemplar(&["whatif", "--id", "app-0003", "--seed", "7", "--edit", "leverage=1e9"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(exemplar(&["whatif", "--id", "nobody"]).status.code(), Some(1));
}

#[test]
fn ingest_then_explain() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("t4.jsonl");
    fs::write(
        &input,
        "{\"id\":\"A\",\"embedding\":[0,0],\"label\":0}\n{\"id\":\"B\",\"embedding\":[0,1],\"label\":0}\n\
         {\"id\":\"C\",\"embedding\":[10,0],\"label\":1}\n{\"id\":\"D\",\"embedding\":[10,1],\"label\":1}\n",
    )
    .unwrap();
    let col = dir.path().join("t4.col");
    let s = json_stdout(&exemplar(&["ingest", "--input", input.to_str().unwrap(), "--out", col.to_str().unwrap()]));
    assert_eq!(s["stored"], 4);
    let cf = json_stdout(&exemplar(&[
        "explain", "--collection", col.to_str().unwrap(), "--method", "counterfactual", "--query-id", "A",
    ]));
    assert_eq!(cf["id"], "C");
    let unknown = exemplar(&["explain", "--collection", col.to_str().unwrap(), "--method", "astrology", "--query-id", "A"]);
    assert_eq!(unknown.status.code(), Some(1));
}

#[test]
fn docs_answer_reuses_validated_log() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("corpus");
    fs::create_dir(&corpus).unwrap();
    fs::write(corpus.join("policy.txt"), "Capital buffers are reported quarterly.\n\nLiquidity rules apply to banks.").unwrap();
    let log = dir.path().join("answers.log");
    let (c, l) = (corpus.to_str().unwrap(), log.to_str().unwrap());
    let q = "How often are capital buffers reported?";

    let first = json_stdout(&exemplar(&["demo-docs", "--corpus", c, "--query", q, "--log", l]));
    assert_eq!(first["source"], "PassagesOnly");
    let stored = json_stdout(&exemplar(&[
        "demo-docs", "--corpus", c, "--query", q, "--log", l, "--record", "Quarterly.", "--validator", "analyst-2",
    ]));
    assert_eq!(stored["validator"], "analyst-2");
    let reused = json_stdout(&exemplar(&["demo-docs", "--corpus", c, "--query", q, "--log", l]));
    assert_eq!(reused["source"], "ValidatedLog");
    assert_eq!(reused["answer"], "Quarterly.");
    assert_eq!(reused["validator"], "analyst-2");
    assert!(!String::from_utf8_lossy(&exemplar(&["demo-docs", "--corpus", c, "--query", q, "--log", l]).stdout).contains("confidence"));
    assert_eq!(exemplar(&["demo-docs", "--corpus", c, "--query", q, "--record", "x"]).status.code(), Some(2));
}
