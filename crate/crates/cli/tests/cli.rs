use std::path::Path;
use std::process::{Command, Output};

use lpbridge::tanner::{construct, girth, write_alist_file, ConstructionKind, ConstructionSpec, TannerGraph};

fn lpbridge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lpbridge")).args(args).env_remove("LDPC_SENSE_THREADS").output().unwrap()
}

fn ok(args: &[&str]) -> String {
    let out = lpbridge(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

/// Rows as maps from header names to fields.
fn records(csv_text: &str) -> Vec<std::collections::HashMap<String, String>> {
    let mut r = csv::Reader::from_reader(csv_text.as_bytes());
    let header = r.headers().unwrap().clone();
    r.records().map(|rec| header.iter().map(String::from).zip(rec.unwrap().iter().map(String::from)).collect()).collect()
}

fn rate(row: &std::collections::HashMap<String, String>) -> f64 {
    row["success_rate"].parse().unwrap()
}

#[test]
fn certified_chain_always_recovers() {
    let out = ok(&["recover-cs", "--matrix", "corpus:chain_3x4", "--k", "1", "--trials", "100"]);
    let rows = records(&out);
    assert_eq!(rows.len(), 1);
    assert_eq!(rate(&rows[0]), 1.0);
}

#[test]
fn pair_fails_sometimes() {
    let out = ok(&["recover-cs", "--matrix", "corpus:pair", "--k", "1", "--trials", "100", "--seed", "5"]);
    assert!(rate(&records(&out)[0]) < 1.0);
}

#[test]
fn girth_passes_through() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.alist");
    let spec = ConstructionSpec::new(ConstructionKind::GallagerRegular, 3, 6, 96, 0);
    let h = construct(&spec).unwrap().into_binary().unwrap();
    write_alist_file(&h, &path).unwrap();
    let out = ok(&["girth", "--matrix", path.to_str().unwrap()]);
    let want = girth(&TannerGraph::from_matrix(&h)).to_string();
    assert_eq!(records(&out)[0]["girth"], want);
    // The construct command writes the same file.
    let made = dir.path().join("made.alist");
    ok(&["construct", "--matrix", "gallager:3:6:96", "--out", made.to_str().unwrap()]);
    assert_eq!(std::fs::read(&made).unwrap(), std::fs::read(&path).unwrap());
}

fn write_config(dir: &Path, body: &str) -> String {
    let path = dir.join("cfg.json");
    std::fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn identical_seed_gives_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"schema": 1, "matrix": {"corpus": "hamming_7_4"}, "k": [1, 2], "channel": {"bsc": [0.05, 0.1]},
            "trials": 40, "seed": 17}"#,
    );
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    ok(&["experiment", "--config", &cfg, "--out", a.to_str().unwrap(), "--threads", "1"]);
    ok(&["experiment", "--config", &cfg, "--out", b.to_str().unwrap(), "--threads", "3"]);
    let bytes = std::fs::read(&a).unwrap();
    assert_eq!(bytes, std::fs::read(&b).unwrap());
    assert_eq!(records(std::str::from_utf8(&bytes).unwrap()).len(), 4);
    let other = ok(&["experiment", "--config", &cfg, "--seed", "18"]);
    assert_ne!(other.as_bytes(), &bytes[..]);
}

#[test]
fn bad_configs_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let typo = write_config(dir.path(), r#"{"schema": 1, "matrix": {"corpus": "pair"}, "trails": 3}"#);
    let out = lpbridge(&["girth", "--config", &typo]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("trails"));
    let future = write_config(dir.path(), r#"{"schema": 2, "matrix": {"corpus": "pair"}}"#);
    assert!(!lpbridge(&["girth", "--config", &future]).status.success());
    assert!(!lpbridge(&["recover-cs", "--matrix", "corpus:pair", "--k", "1", "--trials", "0"]).status.success());
}

#[test]
fn threads_fall_back_to_env() {
    let out = Command::new(env!("CARGO_BIN_EXE_lpbridge"))
        .args(["recover-cs", "--matrix", "corpus:pair", "--k", "1", "--trials", "5"])
        .env("LDPC_SENSE_THREADS", "not-a-number")
        .output()
        .unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("LDPC_SENSE_THREADS"));
}

#[test]
fn success_rate_falls_with_sparsity() {
    let out = ok(&["recover-cs", "--matrix", "peg:3:6:48", "--k", "1,4,8,12,16", "--trials", "100", "--seed", "3"]);
    let rates: Vec<f64> = records(&out).iter().map(rate).collect();
    for w in rates.windows(2) {
        let sigma = (w[0] * (1.0 - w[0]) / 100.0).sqrt().max(0.01);
        assert!(w[1] <= w[0] + 2.0 * sigma, "{rates:?}");
    }
    assert_eq!(rates[0], 1.0);
}

#[test]
fn other_commands_produce_their_tables() {
    let nsp = ok(&["nsp-check", "--matrix", "corpus:petersen_incidence", "--k", "1,2", "--c", "1.5", "--non-strict"]);
    assert!(records(&nsp).iter().all(|r| r["holds"] == "true"));
    let pw = ok(&["pseudoweight", "--omega", "2,1,1"]);
    assert_eq!(records(&pw)[0]["awgnc"], "2.66666666667");
    let br = ok(&["bridge-check", "--matrix", "corpus:hamming_7_4", "--trials", "30"]);
    assert_eq!(records(&br)[0]["passed"], "30");
    let cv = ok(&["cover-check", "--matrix", "corpus:chain_3x4", "--trials", "10"]);
    assert!(records(&cv).iter().all(|r| r["violations"] == "0"));
    let ex = ok(&["expand-check", "--matrix", "corpus:k33_incidence", "--gamma", "0.5", "--delta", "0.5"]);
    assert_eq!(records(&ex)[0]["holds"], "true");
    let dc = ok(&["decode-cc", "--matrix", "corpus:hamming_7_4", "--channel", "bec", "--params", "0.1", "--trials", "20"]);
    assert_eq!(records(&dc)[0]["param"], "bec_p");
}
