use serde_json::Value;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn qcorr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qcorr")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn measure_bell_geometric_discord() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("m.json");
    let bell = data("bell.json");
    let run = qcorr(&["measure", "--kind", "gdiscord", "--measured", "A", path_str(&bell), "--out", path_str(&out)]);
    assert_eq!(code(&run), 0);
    assert!(String::from_utf8_lossy(&run.stdout).contains("gdiscord(A|B)"));
    let report = read_json(&out);
    let value = report["payload"]["result"]["value"].as_f64().unwrap();
    assert!((value - 0.5).abs() < 1e-9);
    assert_eq!(report["optimizer"]["grid"], serde_json::json!([64, 128]));
}

#[test]
fn theorem3_report_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    for p in [&a, &b] {
        let run = qcorr(&["verify", "theorem3", "--samples", "200", "--seed", "42", "--out", path_str(p)]);
        assert_eq!(code(&run), 0);
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let report = read_json(&a);
    assert_eq!(report["seed"], 42);
    assert!(report["payload"]["min_deficit"].as_f64().unwrap() >= -1e-6);
    assert_eq!(report["payload"]["pass"], true);
    assert_eq!(report["payload"]["samples"], 200);
}

#[test]
fn certificate_has_negative_deficit() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("c.json");
    let dec = data("separable_discordant.json");
    for measure in ["gdiscord", "discord"] {
        let run = qcorr(&["certificate", "theorem1", "--dec", path_str(&dec), "--measure", measure, "--out", path_str(&out)]);
        assert_eq!(code(&run), 0, "{}", String::from_utf8_lossy(&run.stderr));
        let payload = &read_json(&out)["payload"];
        assert!(payload["report"]["deficit"].as_f64().unwrap() < -1e-3);
        assert_eq!(payload["report"]["verdict"], "Violated");
        assert!(payload["chain_check"]["marginal_residual"].as_f64().unwrap() <= 1e-14);
        assert_eq!(payload["state"]["dims"], serde_json::json!([2, 2, 2]));
    }
}

#[test]
fn certificate_without_correlations_fails() {
    let dir = tempfile::tempdir().unwrap();
    let dec = dir.path().join("cq.json");
    std::fs::write(
        &dec,
        r#"{"kind":"decomposition","dims":[2,2],"data":[
            {"weight":0.5,"psi":[[1,0],[0,0]],"phi":[[1,0],[0,0]]},
            {"weight":0.5,"psi":[[0,0],[1,0]],"phi":[[0,0],[1,0]]}]}"#,
    )
    .unwrap();
    let run = qcorr(&["certificate", "theorem1", "--dec", path_str(&dec), "--measure", "gdiscord"]);
    assert_eq!(code(&run), 1);
    assert!(String::from_utf8_lossy(&run.stderr).contains("does not exceed"));
}

#[test]
fn validate_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad_trace = dir.path().join("t.json");
    std::fs::write(&bad_trace, r#"{"kind":"density","dims":[2],"data":[[[0.5,0],[0,0]],[[0,0],[0.4,0]]]}"#).unwrap();
    let run = qcorr(&["validate", path_str(&bad_trace)]);
    assert_eq!(code(&run), 1);
    assert!(String::from_utf8_lossy(&run.stdout).contains("trace"));

    let malformed = dir.path().join("m.json");
    std::fs::write(&malformed, "{\"kind\": \"pure\", ").unwrap();
    assert_eq!(code(&qcorr(&["validate", path_str(&malformed)])), 2);
    assert_eq!(code(&qcorr(&["validate", "/nonexistent/state.json"])), 2);

    for name in ["bell.json", "ghz.json", "w.json", "classical.json", "separable_discordant.json"] {
        assert_eq!(code(&qcorr(&["validate", path_str(&data(name))])), 0, "{name}");
    }
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&qcorr(&[])), 2);
    assert_eq!(code(&qcorr(&["frobnicate"])), 2);
    assert_eq!(code(&qcorr(&["measure", "--kind", "negativity", "--measured", "A", "x.json"])), 2);
    assert_eq!(code(&qcorr(&["verify", "theorem3", "--samples", "0"])), 2);
    let bell = data("bell.json");
    assert_eq!(code(&qcorr(&["measure", "--kind", "discord", "--measured", "Z", path_str(&bell)])), 2);
    assert_eq!(code(&qcorr(&["--help"])), 0);
}

#[test]
fn deficit_expectations() {
    let ghz = data("ghz.json");
    assert_eq!(code(&qcorr(&["deficit", "--measure", "gdiscord", "--expect", "satisfied", path_str(&ghz)])), 0);
    assert_eq!(code(&qcorr(&["deficit", "--measure", "gdiscord", "--expect", "violated", path_str(&ghz)])), 1);
    let w = data("w.json");
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("d.json");
    let run = qcorr(&["deficit", "--measure", "concurrence2", "--head", "B", path_str(&w), "--out", path_str(&out)]);
    assert_eq!(code(&run), 0);
    let payload = &read_json(&out)["payload"];
    assert_eq!(payload["head"], "B");
    assert!(payload["deficit"].as_f64().unwrap().abs() < 1e-9);
}

#[test]
fn deficit_tolerance_override_is_recorded() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("d.json");
    let ghz = data("ghz.json");
    let run = qcorr(&["deficit", "--measure", "discord", "--tolerance", "1e-3", path_str(&ghz), "--out", path_str(&out)]);
    assert_eq!(code(&run), 0);
    let report = read_json(&out);
    assert_eq!(report["tolerances"]["deficit"].as_f64().unwrap(), 1e-3);
    assert_eq!(report["payload"]["tolerance"].as_f64().unwrap(), 1e-3);
}

#[test]
fn brun_scan_csv_shape_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    for p in [&a, &b] {
        assert_eq!(code(&qcorr(&["scan", "brun", "--samples", "10", "--seed", "7", "--out", path_str(p)])), 0);
    }
    let text = std::fs::read_to_string(&a).unwrap();
    assert_eq!(text, std::fs::read_to_string(&b).unwrap());
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(reader.headers().unwrap().len(), 11);
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 10);
    for row in &rows {
        assert_eq!(row.len(), 11);
        let deficit: f64 = row[10].parse().unwrap();
        assert!(deficit >= -1e-6);
        assert_eq!(row[1].split('e').next().unwrap().replace(['-', '.'], "").len(), 17);
    }
}

#[test]
fn brun_scan_json_matches_csv() {
    let dir = tempfile::tempdir().unwrap();
    let (c, j) = (dir.path().join("s.csv"), dir.path().join("s.json"));
    assert_eq!(code(&qcorr(&["scan", "brun", "--samples", "5", "--seed", "3", "--out", path_str(&c)])), 0);
    let run = qcorr(&["scan", "brun", "--samples", "5", "--seed", "3", "--format", "json", "--out", path_str(&j)]);
    assert_eq!(code(&run), 0);
    let report = read_json(&j);
    let text = std::fs::read_to_string(&c).unwrap();
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    for (row, sample) in reader.records().zip(report["payload"].as_array().unwrap()) {
        let row = row.unwrap();
        let deficit: f64 = row[10].parse().unwrap();
        assert_eq!(deficit, sample["report"]["deficit"].as_f64().unwrap());
    }
}

#[test]
fn extend_reports_smallest_n() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("e.json");
    let dec = data("separable_discordant.json");
    let run = qcorr(&["extend", "--dec", path_str(&dec), "--measure", "gdiscord", "--n-max", "4", "--out", path_str(&out)]);
    assert_eq!(code(&run), 0);
    let payload = &read_json(&out)["payload"];
    assert_eq!(payload["smallest_violating_n"], 2);
    assert_eq!(payload["n_upper_bound"], 16);
    assert_eq!(payload["reports"].as_array().unwrap().len(), 4);
    let run = qcorr(&["extend", "--dec", path_str(&dec), "--measure", "gdiscord", "--n-max", "1"]);
    assert_eq!(code(&run), 1);
}

#[test]
fn discord_search_witness_replays() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s.json");
    let run = qcorr(&["search", "discord-pure-violation", "--samples", "200", "--seed", "5", "--out", path_str(&out)]);
    assert_eq!(code(&run), 0);
    let witness = &read_json(&out)["payload"]["witness"];
    let deficit = witness["report"]["deficit"].as_f64().unwrap();
    assert!(deficit < -1e-3);

    let state = dir.path().join("w.json");
    std::fs::write(&state, serde_json::to_string(&witness["state"]).unwrap()).unwrap();
    let replay = dir.path().join("r.json");
    let run = qcorr(&["deficit", "--measure", "discord", path_str(&state), "--out", path_str(&replay)]);
    assert_eq!(code(&run), 0);
    assert_eq!(read_json(&replay)["payload"]["deficit"].as_f64().unwrap(), deficit);
}

#[test]
fn gdiscord_increase_finds_witness() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("g.json");
    let run = qcorr(&["search", "gdiscord-increase", "--trials", "300", "--seed", "9", "--out", path_str(&out)]);
    assert_eq!(code(&run), 0);
    let payload = &read_json(&out)["payload"];
    assert!(payload["max_increase"].as_f64().unwrap() > 1e-6);
    let kraus = payload["witness"]["kraus"].as_array().unwrap();
    assert!(!kraus.is_empty() && kraus.len() <= 4);
}
