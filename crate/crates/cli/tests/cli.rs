use std::process::{Command, Output};

fn plancherel(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_plancherel")).args(args).output().expect("binary runs")
}

fn masked(json: &[u8]) -> serde_json::Value {
    let mut v: serde_json::Value = serde_json::from_slice(json).expect("valid JSON");
    v["timestamp"] = serde_json::Value::Null;
    v
}

#[test]
fn sample_rows_are_reproducible() {
    let args = ["sample", "--method", "rsk", "--n", "10", "--count", "3", "--seed", "7"];
    let a = plancherel(&args);
    let b = plancherel(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(reader.headers().unwrap(), vec!["index", "partition", "lambda1", "lambda1_conjugate", "w"]);
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 3);
    for (i, row) in rows.iter().enumerate() {
        assert_eq!(row[0], i.to_string());
        let l: plancherel::Partition = row[1].parse().unwrap();
        assert_eq!(l.size(), 10);
        assert_eq!(row[2], l.first_row().to_string());
        assert_eq!(row[3], l.first_column().to_string());
    }
}

#[test]
fn sample_out_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.csv");
    let out = plancherel(&[
        "sample",
        "--method",
        "growth",
        "--n",
        "12",
        "--count",
        "50",
        "--seed",
        "3",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let stdout = plancherel(&["sample", "--method", "growth", "--n", "12", "--count", "50", "--seed", "3"]);
    assert_eq!(std::fs::read(&path).unwrap(), stdout.stdout);
}

#[test]
fn clt_json_is_identical_up_to_timestamp() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let path = dir.path().join(name);
        let out = plancherel(&["clt", "--n", "16", "--count", "5000", "--seed", "3", "--json", path.to_str().unwrap()]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        std::fs::read(path).unwrap()
    };
    let (a, b) = (run("a.json"), run("b.json"));
    assert_eq!(masked(&a), masked(&b));
    let v = masked(&a);
    assert_eq!(v["command"], "clt");
    assert_eq!(v["seed"], 3);
    for field in ["kolmogorov_distance", "bound", "within_bound", "generator", "pathwise_violations"] {
        assert!(!v["results"][field].is_null(), "missing {field}");
    }
    // Timestamp is the only line that may differ.
    let (ta, tb) = (String::from_utf8(a).unwrap(), String::from_utf8(b).unwrap());
    let strip = |t: &str| t.lines().filter(|l| !l.contains("\"timestamp\"")).collect::<Vec<_>>().join("\n");
    assert_eq!(strip(&ta), strip(&tb));
}

#[test]
fn verify_passes_and_names_checks() {
    let out = plancherel(&["verify", "characters", "--n", "5"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = masked(&out.stdout);
    assert_eq!(v["passed"], true);
    assert!(v["assertions"].as_array().unwrap().len() > 10);
    assert_eq!(masked(&plancherel(&["verify", "characters", "--n", "5"]).stdout), v);
}

#[test]
fn chain_matrix_file_has_exact_entries() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.json");
    let out = plancherel(&[
        "chain",
        "--kind",
        "downup",
        "--n",
        "3",
        "--k",
        "1",
        "--matrix",
        path.to_str().unwrap(),
        "--spectrum",
        "--mix",
        "5",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let m: serde_json::Value = serde_json::from_slice(&std::fs::read(path).unwrap()).unwrap();
    assert_eq!(m["index"], serde_json::json!(["[3]", "[2,1]", "[1,1,1]"]));
    assert_eq!(m["entries"][0], serde_json::json!(["1/3", "2/3", "0"]));
    assert_eq!(m["entries"][1], serde_json::json!(["1/6", "2/3", "1/6"]));
}

#[test]
fn tensor_report_lists_exact_deviation() {
    let out = plancherel(&["tensor", "--n", "3", "--k", "1", "--r", "2"]);
    assert!(out.status.success());
    let v = masked(&out.stdout);
    assert_eq!(v["results"]["deviation"], "1/27");
    assert_eq!(v["results"]["bound"], "2/27");
    assert_eq!(v["results"]["rows"][1]["multiplicity"], "3");
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(plancherel(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(plancherel(&["sample", "--n", "3", "--bogus"]).status.code(), Some(2));
    assert_eq!(plancherel(&["chain", "--kind", "downup", "--n", "3", "--k", "4"]).status.code(), Some(2));
    let capped = plancherel(&["verify", "--nmax", "40"]);
    assert_eq!(capped.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&capped.stderr).contains("limit"));
}

#[test]
fn exact_cap_can_be_raised_from_the_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_plancherel"))
        .args(["tensor", "--n", "9", "--k", "1", "--r", "3"])
        .env("PLANCHEREL_EXACT_CAP", "9")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let blocked = Command::new(env!("CARGO_BIN_EXE_plancherel"))
        .args(["tensor", "--n", "9", "--k", "1", "--r", "3"])
        .env("PLANCHEREL_EXACT_CAP", "8")
        .output()
        .unwrap();
    assert_eq!(blocked.status.code(), Some(2));
}
