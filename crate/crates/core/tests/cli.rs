use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn agcolor(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_agcolor"))
        .args(args)
        .env_remove("AGCOLOR_BUDGET")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn construct(dir: &Path, n: &str, q: &str, method: &str) -> String {
    let out = dir.join(format!("{method}-{n}-{q}.json"));
    let out = out.to_str().unwrap().to_owned();
    let o = agcolor(&[
        "construct",
        "--n",
        n,
        "--q",
        q,
        "--method",
        method,
        "--out",
        &out,
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    out
}

fn class_count(path: &str) -> usize {
    let v: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    v["classes"].as_array().unwrap().len()
}

#[test]
fn construct_writes_colorings() {
    let dir = tempfile::tempdir().unwrap();
    let ep = construct(dir.path(), "4", "2", "even-pseudo");
    assert_eq!(class_count(&ep), 29);
    assert!(Path::new(&format!("{ep}.manifest.json")).exists());
    let ag3 = construct(dir.path(), "3", "2", "ag3-achromatic");
    assert_eq!(class_count(&ag3), 10);

    let o = agcolor(&[
        "construct",
        "--n",
        "2",
        "--q",
        "3",
        "--method",
        "plane-pseudo",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["classes"].as_array().unwrap().len(), 8);
}

#[test]
fn construct_rejects_bad_dimensions() {
    let o = agcolor(&[
        "construct",
        "--n",
        "3",
        "--q",
        "2",
        "--method",
        "even-pseudo",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("requires even n"));
    let o = agcolor(&["construct", "--n", "3", "--q", "6", "--method", "chromatic"]);
    assert_eq!(o.status.code(), Some(2));
    let o = agcolor(&["construct", "--n", "3"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let ea = construct(dir.path(), "4", "2", "even-achromatic");
    let o = agcolor(&["verify", "--coloring", &ea, "--check", "proper,complete"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let report: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["class_count"], 24);
    assert_eq!(report["proper"]["holds"], true);
    assert_eq!(report["complete"]["holds"], true);

    let ep = construct(dir.path(), "4", "2", "even-pseudo");
    let o = agcolor(&["verify", "--coloring", &ep, "--check", "proper"]);
    assert_eq!(o.status.code(), Some(1));
    let report: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["proper"]["holds"], false);
    assert_eq!(
        report["proper"]["witness"]["lines"]
            .as_array()
            .unwrap()
            .len(),
        2
    );

    let o = agcolor(&["verify", "--coloring", &ep]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn verify_reports_a_tampered_partition() {
    let dir = tempfile::tempdir().unwrap();
    let path = construct(dir.path(), "3", "2", "ag3-achromatic");
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    // overwrite one line id with another: one line twice, one missing
    let other = v["classes"][1]["lines"][0].clone();
    v["classes"][0]["lines"][0] = other;
    let tampered = dir.path().join("tampered.json");
    std::fs::write(&tampered, serde_json::to_string(&v).unwrap()).unwrap();
    let o = agcolor(&[
        "verify",
        "--coloring",
        tampered.to_str().unwrap(),
        "--check",
        "proper,complete",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let report: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["partition"]["holds"], false);
    assert!(report["partition"]["error"].is_string());

    std::fs::write(&tampered, "{not json").unwrap();
    let o = agcolor(&["verify", "--coloring", tampered.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bounds_and_table() {
    let o = agcolor(&["bounds", "--n", "3", "--q", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["psi_upper_exact"], 17);
    assert_eq!(v["alpha_lower"], 10);
    assert_eq!(v["chromatic"], 7);

    let o = agcolor(&["table", "--q", "2,3", "--n", "2..5", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 9);
    assert!(text.lines().nth(1).unwrap().starts_with("2,2,"));

    let o = agcolor(&["bounds", "--n", "3", "--q", "10"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn oracle_on_a_plane() {
    let o = agcolor(&["oracle", "--n", "2", "--q", "3", "--index", "psi"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["value"], 8);
    assert_eq!(v["exact"], true);
    assert_eq!(v["witness"].as_array().unwrap().len(), 8);

    let o = agcolor(&[
        "oracle",
        "--n",
        "2",
        "--q",
        "4",
        "--index",
        "psi",
        "--max-nodes",
        "5000",
    ]);
    assert_eq!(o.status.code(), Some(3));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["exact"], false);
    assert!(v["lower"].as_u64().unwrap() <= v["upper"].as_u64().unwrap());

    let o = agcolor(&["oracle", "--n", "3", "--q", "3", "--index", "chi"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn manifests_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let path = construct(dir.path(), "3", "3", "odd-pseudo");
    let read = |p: &str| std::fs::read(p).unwrap();
    let (first, first_manifest) = (read(&path), read(&format!("{path}.manifest.json")));
    construct(dir.path(), "3", "3", "odd-pseudo");
    assert_eq!(read(&path), first);
    assert_eq!(read(&format!("{path}.manifest.json")), first_manifest);

    let m: Value = serde_json::from_slice(&first_manifest).unwrap();
    assert_eq!(m["command"], "construct");
    assert_eq!(m["outputs"][0]["path"], path.as_str());
    let digest = m["outputs"][0]["sha256"].as_str().unwrap();
    assert_eq!(digest.len(), 64);
    assert_eq!(
        digest,
        hex::encode(<sha2::Sha256 as sha2::Digest>::digest(&first))
    );
}
