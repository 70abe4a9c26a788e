use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn filtsurf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_filtsurf"))
        .args(args)
        .env("FILTSURF_LOG", "error")
        .output()
        .unwrap()
}

fn ok(args: &[&str]) -> String {
    let out = filtsurf(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn config_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = filtsurf(&["generate", "--n", "0", "--out", s(dir.path())]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("n-graphs"));
    let out = filtsurf(&["transform", "--data", s(dir.path()), "--weight", "bogus"]);
    assert_eq!(out.status.code(), Some(2));
    let out = filtsurf(&["transform", "--data", s(dir.path()), "--descriptor", "bogus"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn pipeline_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let p = |x: &str| dir.path().join(x);
    ok(&[
        "generate",
        "--n",
        "12",
        "--timesteps",
        "3",
        "--seed",
        "7",
        "--out",
        s(&p("data")),
    ]);
    let meta: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(p("data").join("meta.json")).unwrap()).unwrap();
    assert_eq!(meta["classes"].as_object().unwrap().len(), 12);

    ok(&["transform", "--data", s(&p("data")), "--out", s(&p("tr"))]);
    let first: Vec<_> = ["manifest.json", "index.json", "surfaces/g000003.fsurf"]
        .iter()
        .map(|f| fs::read(p("tr").join(f)).unwrap())
        .collect();
    ok(&["transform", "--data", s(&p("data")), "--out", s(&p("tr"))]);
    let second: Vec<_> = ["manifest.json", "index.json", "surfaces/g000003.fsurf"]
        .iter()
        .map(|f| fs::read(p("tr").join(f)).unwrap())
        .collect();
    assert_eq!(first, second);

    let manifest: serde_json::Value = serde_json::from_slice(&first[0]).unwrap();
    let stdout = ok(&[
        "evaluate",
        "--surfaces",
        s(&p("tr")),
        "--trees",
        "20",
        "--folds",
        "3",
        "--reps",
        "2",
        "--save-model",
        s(&p("m.bin")),
        "--out",
        s(&p("ev")),
    ]);
    assert!(stdout.trim().contains(" ± "));
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(p("ev").join("cv_report.json")).unwrap()).unwrap();
    let product = ["n_std", "m", "d"]
        .iter()
        .map(|k| manifest[k].as_u64().unwrap())
        .product::<u64>();
    assert_eq!(report["n_features"].as_u64().unwrap(), product);
    assert_eq!(report["folds"].as_array().unwrap().len(), 2);

    ok(&[
        "predict",
        "--model",
        s(&p("m.bin")),
        "--data",
        s(&p("data")),
        "--out",
        s(&p("pr")),
    ]);
    let preds = fs::read_to_string(p("pr").join("predictions.csv")).unwrap();
    assert_eq!(preds.lines().next(), Some("graph_id,class,predicted"));
    assert_eq!(preds.lines().count(), 13);
}

#[test]
fn four_sample_toy_gives_two_accuracies() {
    let dir = tempfile::tempdir().unwrap();
    let p = |x: &str| dir.path().join(x);
    ok(&["generate", "--n", "4", "--timesteps", "2", "--out", s(&p("data"))]);
    ok(&["transform", "--data", s(&p("data")), "--out", s(&p("tr"))]);
    ok(&[
        "evaluate",
        "--surfaces",
        s(&p("tr")),
        "--trees",
        "5",
        "--folds",
        "2",
        "--reps",
        "1",
        "--out",
        s(&p("ev")),
    ]);
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(p("ev").join("cv_report.json")).unwrap()).unwrap();
    let accs: Vec<_> = report["folds"]
        .as_array()
        .unwrap()
        .iter()
        .flat_map(|r| r.as_array().unwrap().clone())
        .collect();
    assert_eq!(accs.len(), 2);

    let out = filtsurf(&[
        "evaluate",
        "--surfaces",
        s(&p("tr")),
        "--folds",
        "3",
        "--out",
        s(&p("ev3")),
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn bench_writes_one_row_per_size() {
    let dir = tempfile::tempdir().unwrap();
    let stdout = ok(&[
        "bench",
        "--sizes",
        "20,30,40",
        "--trees",
        "5",
        "--timesteps",
        "2",
        "--out",
        s(dir.path()),
    ]);
    let csv = fs::read_to_string(dir.path().join("bench.csv")).unwrap();
    assert_eq!(csv, stdout);
    let rows: Vec<Vec<&str>> = csv.lines().skip(1).map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 3);
    let bytes: Vec<u64> = rows.iter().map(|r| r[4].parse().unwrap()).collect();
    assert!(bytes.windows(2).all(|w| w[0] < w[1]));
    assert_eq!(rows[2][5], "12800");
}
