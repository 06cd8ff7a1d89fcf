use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Stdio};

use serde_json::Value;
use simcol::graph_core::{GraphCollection, Multihypergraph};

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn simcol(args: &[&str], stdin: Option<&str>) -> Run {
    let mut child = Command::new(env!("CARGO_BIN_EXE_simcol"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    let mut input = child.stdin.take().unwrap();
    input.write_all(stdin.unwrap_or("").as_bytes()).unwrap();
    drop(input);
    let out = child.wait_with_output().unwrap();
    Run {
        code: out.status.code().unwrap(),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn temp(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("simcol-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn json(text: &str) -> Value {
    serde_json::from_str(text).unwrap()
}

#[test]
fn bipartite_construction_needs_four_colours() {
    let inst = simcol(&["construct", "bipartite-lb", "3"], None);
    assert_eq!(inst.code, 0);
    let solved = simcol(&["solve", "-"], Some(&inst.stdout));
    assert_eq!(solved.code, 0, "{}", solved.stderr);
    let v = json(&solved.stdout);
    assert_eq!(v["optimum"], 4);
    assert_eq!(v["optimal"], true);
    assert_eq!(v["verdict"]["status"], "valid");
}

#[test]
fn nu_search_seven() {
    let run = simcol(&["nu-search", "7"], None);
    assert_eq!(run.code, 0);
    let v = json(&run.stdout);
    assert_eq!(v["size"], "7/3");
    assert_eq!(v["optimal"], true);
}

#[test]
fn exhausted_search_budget_exits_three() {
    let run = simcol(&["nu-search", "9", "--budget", "10"], None);
    assert_eq!(run.code, 3);
    assert_eq!(json(&run.stdout)["optimal"], false);
}

#[test]
fn tampered_certificate_fails_verification() {
    let inst = simcol(&["construct", "bipartite-lb", "2"], None).stdout;
    let file = temp("bip.json", &inst);
    let solved = json(&simcol(&["solve", file.to_str().unwrap()], None).stdout);
    let mut colouring = solved["colouring"].clone();
    let good = temp(
        "good.json",
        &serde_json::json!({ "colouring": colouring }).to_string(),
    );
    let ok = simcol(
        &["verify", file.to_str().unwrap(), good.to_str().unwrap()],
        None,
    );
    assert_eq!(ok.code, 0);
    // give the first edge the colour of an adjacent edge in the same graph
    let c = GraphCollection::from_json(&inst).unwrap();
    let (a, b) = c.conflict_graph().edges()[0];
    colouring[a][2] = colouring[b][2].clone();
    let bad = temp(
        "bad.json",
        &serde_json::json!({ "colouring": colouring }).to_string(),
    );
    let run = simcol(
        &["verify", file.to_str().unwrap(), bad.to_str().unwrap()],
        None,
    );
    assert_eq!(run.code, 1);
    let v = json(&run.stdout);
    assert_eq!(v["verdict"]["status"], "violation");
    assert!(v["verdict"]["first"].is_array() && v["verdict"]["second"].is_array());
}

#[test]
fn list_counterexample_is_infeasible() {
    let inst = simcol(&["construct", "list-counter", "2"], None).stdout;
    let file = temp("lc.json", &inst);
    let path = file.to_str().unwrap();
    let run = simcol(&["list-solve", path, path], None);
    assert_eq!(run.code, 1);
    assert_eq!(json(&run.stdout)["feasible"], false);
    assert_eq!(json(&simcol(&["solve", path], None).stdout)["optimum"], 2);
}

#[test]
fn hypergraph_commands() {
    let fano = simcol(&["construct", "fks", "3", "6"], None).stdout;
    let h = Multihypergraph::from_text(&fano).unwrap();
    assert_eq!(h.edge_count(), 14);
    let idx = json(&simcol(&["hyper-index", "-"], Some(&fano)).stdout);
    assert_eq!(idx["optimum"], 14);
    let plane = simcol(&["construct", "projective", "3"], None).stdout;
    let nu = json(&simcol(&["nu", "-"], Some(&plane)).stdout);
    assert_eq!(nu["nu_star"], "13/4");
    assert_eq!(nu["tau_star"], "13/4");
    assert_eq!(nu["duality"], true);
}

#[test]
fn emitted_instances_round_trip() {
    for args in [
        vec!["construct", "bipartite-lb", "4"],
        vec!["construct", "star-split", "3", "6"],
        vec!["construct", "list-counter", "3"],
        vec!["construct", "same-set", "3"],
    ] {
        let text = simcol(&args, None).stdout;
        let c = GraphCollection::from_json(&text).unwrap();
        let canonical = c.to_json();
        assert_eq!(
            GraphCollection::from_json(&canonical).unwrap().to_json(),
            canonical
        );
        let mut full = json(&text);
        let obj = full.as_object_mut().unwrap();
        obj.retain(|k, _| ["k", "vertices", "edges"].contains(&k.as_str()));
        assert_eq!(full, json(&canonical));
    }
    for args in [
        vec!["construct", "projective", "2"],
        vec!["construct", "affine", "3"],
        vec!["construct", "nu-lower", "5", "7"],
    ] {
        let text = simcol(&args, None).stdout;
        let h = Multihypergraph::from_text(&text).unwrap();
        assert_eq!(h.to_text().trim_end(), text.trim_end());
    }
}

#[test]
fn sparsify_is_reproducible() {
    let inst = simcol(&["construct", "star-split", "3", "8"], None).stdout;
    let file = temp("stars.json", &inst);
    let args = [
        "sparsify",
        file.to_str().unwrap(),
        "--seed",
        "11",
        "--eps",
        "1/15",
    ];
    let a = simcol(&args, None);
    let b = simcol(&args, None);
    assert_eq!(a.code, 0, "{}", a.stderr);
    let (va, vb) = (json(&a.stdout), json(&b.stdout));
    assert_eq!(va["colouring"], vb["colouring"]);
    assert_eq!(va["report"]["epsilon"], "1/15");
    assert_eq!(va["report"]["valid"], true);
    let cert = temp(
        "stars-cert.json",
        &serde_json::json!({ "colouring": va["colouring"] }).to_string(),
    );
    assert_eq!(
        simcol(
            &["verify", file.to_str().unwrap(), cert.to_str().unwrap()],
            None
        )
        .code,
        0
    );
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(simcol(&["frobnicate"], None).code, 2);
    assert_eq!(simcol(&["construct", "nonsense", "3"], None).code, 2);
    assert_eq!(simcol(&["construct", "projective", "4"], None).code, 2);
    assert_eq!(simcol(&["solve", "-"], Some("not json")).code, 2);
    assert_eq!(
        simcol(
            &["sparsify", "-", "--eps", "1/5"],
            Some(r#"{"k":1,"edges":[[0,1,[1]]]}"#)
        )
        .code,
        2
    );
}
