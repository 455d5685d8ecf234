use std::process::Command;

use serde_json::Value;

fn xisp(args: &[&str], env: &[(&str, &str)]) -> (i32, Value) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_xisp"));
    cmd.args(args).env_remove("XISP_SESSION");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().unwrap();
    let doc = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap(), doc)
}

#[test]
fn tnorm_of_a_unit_vector() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("e.json");
    std::fs::write(&p, r#"{"entries": [["7", "1"]]}"#).unwrap();
    let (code, doc) = xisp(&["tnorm", p.to_str().unwrap()], &[]);
    assert_eq!(code, 0);
    assert_eq!(doc, serde_json::json!({ "value": "1" }));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.json");
    std::fs::write(&p, r#"{"entries": [["0", "1"]]}"#).unwrap();
    let (code, doc) = xisp(&["tnorm", p.to_str().unwrap()], &[]);
    assert_eq!((code, doc["error"].as_str()), (2, Some("malformed-input")));
    let (code, doc) = xisp(&["scc", "--n", "3", "--eps", "1/4"], &[]);
    assert_eq!((code, doc["error"].as_str()), (3, Some("infeasible-at-budget")));
    let (code, _) = xisp(&["tnorm", dir.path().join("missing.json").to_str().unwrap()], &[]);
    assert_eq!(code, 4);
    let (code, _) = xisp(&["build", "exact-pair", "--n", "2", "--mode", "faithful"], &[]);
    assert_eq!(code, 3);
}

#[test]
fn schreier_and_scc_commands() {
    let (code, doc) = xisp(&["schreier", "member", "--n", "2", "2", "3", "4", "5", "6", "7"], &[]);
    assert_eq!(code, 0);
    assert_eq!(doc["member"], Value::Bool(true));
    let (_, doc) = xisp(&["schreier", "member", "--n", "1", "1", "2"], &[]);
    assert_eq!(doc["member"], Value::Bool(false));
    let (code, doc) = xisp(&["scc", "--n", "1", "--eps", "1/2", "--start", "3"], &[]);
    assert_eq!(code, 0);
    assert_eq!(doc["descriptor"]["coefficients"]["entries"][0], serde_json::json!(["3", "1/3"]));
    assert_eq!(doc["validation"]["valid"], Value::Bool(true));
}

#[test]
fn sessions_replay_byte_for_byte() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    let (code, first) = xisp(&["build", "dependent", "--n", "2", "--mode", "scaled", "--session", a.to_str().unwrap()], &[]);
    assert_eq!(code, 0);
    assert_eq!(first["sequence"]["weights"][0], "132");
    let (_, second) = xisp(&["build", "dependent", "--n", "2"], &[("XISP_SESSION", b.to_str().unwrap())]);
    assert_eq!(first["sequence"], second["sequence"]);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    // replaying against the saved session changes nothing
    let (_, third) = xisp(&["build", "dependent", "--n", "2", "--session", a.to_str().unwrap()], &[]);
    assert_eq!(first["sequence"], third["sequence"]);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn norm_writes_to_out() {
    let dir = tempfile::tempdir().unwrap();
    let v = dir.path().join("v.json");
    let out = dir.path().join("cert.json");
    std::fs::write(&v, r#"{"entries": [["3", "1"], ["4", "1"], ["5", "1"]]}"#).unwrap();
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_xisp"));
    let status = cmd.args(["norm", v.to_str().unwrap(), "--budget", "4,4,16", "--out", out.to_str().unwrap()]).status().unwrap();
    assert!(status.success());
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(doc["certificate"]["upper"], "3/2");
    assert_eq!(doc["certificate"]["budget"]["depth"], 4);
    assert_eq!(doc["manifest"]["mode"], "scaled");
}

#[test]
fn verify_a_suite() {
    let (code, doc) = xisp(&["verify", "sandwich", "--seed", "5"], &[]);
    assert_eq!(code, 0);
    assert_eq!(doc["reports"][0]["suite"], "sandwich");
    assert_eq!(doc["reports"][0]["pass"], Value::Bool(true));
    let (code, _) = xisp(&["verify", "no-such-suite"], &[]);
    assert_eq!(code, 2);
}
