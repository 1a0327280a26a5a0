use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use sha2::{Digest, Sha256};

fn modclass(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_modclass"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn structured(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.extend(["--format", "structured"]);
    let out = modclass(&all);
    let doc = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap(), doc)
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn cache_entries(dir: &Path) -> Vec<std::path::PathBuf> {
    let mut v: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    v.sort();
    v
}

#[test]
fn count_c7_in_characteristic_2() {
    let (code, doc) = structured(&["count", "-g", "C7", "-p", "2"]);
    assert_eq!(code, 0);
    assert_eq!(doc["schema_version"], 1);
    assert_eq!(doc["result"]["total"], 7);
    assert_eq!(doc["result"]["oracle"], 7);
    assert_eq!(doc["result"]["agree"], true);
    let sizes: Vec<u64> = doc["result"]["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["fiber_size"].as_u64().unwrap())
        .collect();
    assert_eq!(sizes, [1, 3, 3]);

    let table = modclass(&["count", "-g", "C7", "-p", "2"]);
    assert!(table.status.success());
    assert!(stdout(&table).contains("total: 7"));
}

#[test]
fn count_s3_in_coprime_characteristic() {
    let (code, doc) = structured(&["count", "-g", "S3", "-p", "5"]);
    assert_eq!(code, 0);
    assert_eq!(doc["result"]["total"], 3);
    assert_eq!(doc["result"]["oracle"], 3);
}

#[test]
fn verify_s3_passes() {
    let out = modclass(&["verify", "-g", "S3", "-p", "2", "-b", "4", "--seed", "5"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(stdout(&out).contains("all clauses pass: yes"));
}

#[test]
fn group_file_matches_catalog_entry() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s3.json");
    fs::write(&path, r#"{"degree": 3, "generators": [[2, 1, 3], [2, 3, 1]]}"#).unwrap();
    let from_file = modclass(&["count", "-g", path.to_str().unwrap(), "-p", "3"]);
    let from_catalog = modclass(&["count", "-g", "S3", "-p", "3"]);
    assert!(from_file.status.success());
    assert_eq!(from_file.stdout, from_catalog.stdout);
}

#[test]
fn usage_errors_exit_1() {
    assert_eq!(modclass(&["count", "-g", "S3", "-p", "4"]).status.code(), Some(1));
    assert_eq!(modclass(&["count", "-g", "NOPE", "-p", "2"]).status.code(), Some(1));
    assert_eq!(
        modclass(&["decompose", "/nonexistent/module.json"]).status.code(),
        Some(1)
    );
    assert_eq!(
        modclass(&["count", "-g", "S4", "-p", "2", "--max-group-order", "10"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        modclass(&["fiber", "-g", "S3", "-p", "2", "-w", "9"]).status.code(),
        Some(1)
    );

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{\"schema_version\": 1}").unwrap();
    let out = modclass(&["decompose", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("malformed module document"));
}

#[test]
fn output_is_reproducible() {
    let a = modclass(&[
        "fiber",
        "-g",
        "C7",
        "-p",
        "2",
        "-w",
        "1",
        "-b",
        "3",
        "--format",
        "structured",
    ]);
    let b = modclass(&[
        "fiber",
        "-g",
        "C7",
        "-p",
        "2",
        "-w",
        "1",
        "-b",
        "3",
        "--format",
        "structured",
    ]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn cache_hit_and_disabled_cache_agree() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap();
    let uncached = modclass(&["simples", "-g", "C7", "-p", "2", "--format", "structured"]);
    let first = modclass(&[
        "simples",
        "-g",
        "C7",
        "-p",
        "2",
        "--format",
        "structured",
        "--cache-dir",
        cache,
    ]);
    assert_eq!(cache_entries(dir.path()).len(), 1);
    let second = modclass(&[
        "simples",
        "-g",
        "C7",
        "-p",
        "2",
        "--format",
        "structured",
        "--cache-dir",
        cache,
    ]);
    assert!(first.status.success() && second.status.success());
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(uncached.stdout, first.stdout);
    assert!(stderr(&second).is_empty());
}

#[test]
fn corrupt_cache_entry_is_recomputed() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap();
    let args = ["count", "-g", "A4", "-p", "2", "--cache-dir", cache];
    let fresh = modclass(&args);
    let entries = cache_entries(dir.path());
    assert_eq!(entries.len(), 1);

    fs::write(&entries[0], "{\"key\": \"truncated").unwrap();
    let again = modclass(&args);
    assert!(again.status.success());
    assert!(stderr(&again).contains("warning: corrupt cache entry"));
    assert_eq!(again.stdout, fresh.stdout);

    // the repaired entry is served silently afterwards
    let third = modclass(&args);
    assert!(stderr(&third).is_empty());
    assert_eq!(third.stdout, fresh.stdout);
}

#[test]
fn disagreement_exits_2() {
    // a well-formed entry whose report disagrees with the oracle
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap();
    let args = ["count", "-g", "C3", "-p", "2", "--cache-dir", cache];
    assert_eq!(modclass(&args).status.code(), Some(0));
    let path = &cache_entries(dir.path())[0];
    let mut entry: Value = serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap();
    let mut report: Value = serde_json::from_str(entry["payload"].as_str().unwrap()).unwrap();
    report["total"] = 2.into();
    report["agree"] = false.into();
    let payload = report.to_string();
    entry["digest"] = hex::encode(Sha256::digest(payload.as_bytes())).into();
    entry["payload"] = payload.into();
    fs::write(path, entry.to_string()).unwrap();
    let out = modclass(&args);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).contains("agree: no"));
}

#[test]
fn module_commands_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let (code, doc) = structured(&["simples", "-g", "S3", "-p", "2"]);
    assert_eq!(code, 0);
    let modules = doc["result"]["modules"].as_array().unwrap();
    assert_eq!(modules.len(), 2);
    let two = dir.path().join("two.json");
    fs::write(&two, modules[1]["module"].to_string()).unwrap();
    let trivial = dir.path().join("trivial.json");
    fs::write(&trivial, modules[0]["module"].to_string()).unwrap();

    let (code, ext) = structured(&["extend", two.to_str().unwrap(), "-n", "2"]);
    assert_eq!(code, 0);
    assert_eq!(ext["result"]["field"]["n"], 2);
    let ext_path = dir.path().join("ext.json");
    fs::write(&ext_path, ext["result"].to_string()).unwrap();

    let (code, res) = structured(&["restrict", ext_path.to_str().unwrap(), "-n", "1"]);
    assert_eq!(code, 0);
    assert_eq!(res["result"]["dim"], 4);
    let res_path = dir.path().join("res.json");
    fs::write(&res_path, res["result"].to_string()).unwrap();

    // restricting W (x) GF(4) back to GF(2) gives two copies of W
    let (code, dec) = structured(&["decompose", res_path.to_str().unwrap()]);
    assert_eq!(code, 0);
    let summands = dec["result"]["summands"].as_array().unwrap();
    assert_eq!(summands.len(), 1);
    assert_eq!(summands[0]["dim"], 2);
    assert_eq!(summands[0]["multiplicity"], 2);

    // the trivial module of S3 at p = 2: vertex of order 2 with a
    // one-dimensional correspondent in its self-normalizing vertex
    let (code, green) = structured(&["green", trivial.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(green["result"]["vertex_order"], 2);
    assert_eq!(green["result"]["source"]["dim"], 1);
    assert_eq!(green["result"]["correspondent"]["dim"], 1);

    let out = modclass(&["vertex", res_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1), "decomposable input is a usage error");
}
