use std::path::Path;
use std::process::{Command, Output};

use moment_sentinel::cli::{parse_scores, DataFile, ModelFile};
use moment_sentinel::detector::score;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_moment-sentinel"))
        .args(args)
        .env("MOMENT_SENTINEL_THREADS", "1")
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = bin(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn generate_is_deterministic_and_sized() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for d in [&a, &b] {
        ok(&["generate", "pshape", "--seed", "4", "--out", p(d)]);
    }
    let read = |d: &Path, f: &str| std::fs::read(d.join(f)).unwrap();
    assert_eq!(read(&a, "train.csv"), read(&b, "train.csv"));
    assert_eq!(read(&a, "test.csv"), read(&b, "test.csv"));
    let test = DataFile::read(&a.join("test.csv")).unwrap();
    assert_eq!(test.points.len(), 350);
    assert_eq!(test.labels.unwrap().iter().filter(|&&l| !l).count(), 50);

    ok(&["generate", "bimodal", "--n-train", "300", "--out", p(&a)]);
    let train = DataFile::read(&a.join("train.csv")).unwrap();
    assert_eq!((train.points.len(), train.dim()), (300, 1));
    assert!(train.labels.is_none());
}

#[test]
fn fit_score_eval_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(&[
        "generate",
        "pshape",
        "--n-train",
        "200",
        "--n-inliers",
        "40",
        "--n-outliers",
        "10",
        "--out",
        p(d),
    ]);
    let model = d.join("model.json");
    let fit_out = ok(&[
        "fit",
        "--data",
        p(&d.join("train.csv")),
        "--degree",
        "4",
        "--out",
        p(&model),
    ]);
    assert!(fit_out.contains("15 moments"), "{fit_out}");
    let file = ModelFile::from_json(&std::fs::read_to_string(&model).unwrap()).unwrap();
    assert_eq!(file.moments.len(), 15);
    assert!(file.whitening.is_some());

    let scores = d.join("scores.csv");
    ok(&[
        "score",
        "--model",
        p(&model),
        "--data",
        p(&d.join("test.csv")),
        "--out",
        p(&scores),
    ]);
    let rows = parse_scores(&std::fs::read_to_string(&scores).unwrap()).unwrap();
    assert_eq!(rows.len(), 50);
    assert!(rows.iter().enumerate().all(|(i, r)| r.index == i));

    // Scores from the persisted model equal in-memory scoring.
    let m = file.to_model().unwrap();
    let test = DataFile::read(&d.join("test.csv")).unwrap();
    for (r, x) in rows.iter().zip(&test.points).take(5) {
        assert!((score(&m, x).unwrap().rho - r.rho).abs() <= 1e-12);
    }

    let roc = d.join("roc.csv");
    let json = ok(&[
        "eval",
        "--scores",
        p(&scores),
        "--data",
        p(&d.join("test.csv")),
        "--out",
        p(&roc),
    ]);
    let v: serde_json::Value = serde_json::from_str(json.trim()).unwrap();
    assert_eq!(v["n_pos"], 40);
    assert_eq!(v["n_neg"], 10);
    let auc = v["auc"].as_f64().unwrap();
    assert!((0.0..=1.0).contains(&auc));
    assert!(std::fs::read_to_string(&roc)
        .unwrap()
        .starts_with("threshold,fpr,tpr\n"));
}

#[test]
fn fit_is_reproducible_with_pinned_timestamp() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(&["generate", "swissroll", "--n-train", "80", "--out", p(d)]);
    let fit_to = |name: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_moment-sentinel"))
            .args([
                "fit",
                "--data",
                p(&d.join("train.csv")),
                "--degree",
                "2",
                "--seed",
                "9",
            ])
            .args(["--out", p(&d.join(name))])
            .env("SOURCE_DATE_EPOCH", "1700000000")
            .output()
            .unwrap();
        assert!(out.status.success());
        std::fs::read_to_string(d.join(name)).unwrap()
    };
    let (a, b) = (fit_to("a.json"), fit_to("b.json"));
    assert_eq!(a, b);
    let file = ModelFile::from_json(&a).unwrap();
    assert_eq!(file.provenance.created_at, Some(1_700_000_000));
    assert_eq!(file.provenance.seed, Some(9));
}

#[test]
fn unwhitened_model_and_zero_radius() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(&[
        "generate",
        "bimodal",
        "--n-train",
        "100",
        "--n-inliers",
        "5",
        "--n-outliers",
        "2",
        "--out",
        p(d),
    ]);
    let model = d.join("m.json");
    ok(&[
        "fit",
        "--data",
        p(&d.join("train.csv")),
        "--degree",
        "2",
        "--no-whiten",
        "--out",
        p(&model),
    ]);
    let file = ModelFile::from_json(&std::fs::read_to_string(&model).unwrap()).unwrap();
    assert!(file.whitening.is_none());
    let scores = d.join("s.csv");
    ok(&[
        "score",
        "--model",
        p(&model),
        "--data",
        p(&d.join("test.csv")),
        "--r",
        "0",
        "--out",
        p(&scores),
    ]);
    assert_eq!(
        parse_scores(&std::fs::read_to_string(&scores).unwrap())
            .unwrap()
            .len(),
        7
    );
}

#[test]
fn eval_fixture_values() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let data = d.join("data.csv");
    std::fs::write(&data, "x1,label\n0,1\n0,1\n0,0\n0,0\n").unwrap();
    let cases = [([0.9, 0.8, 0.4, 0.3], 1.0), ([0.9, 0.35, 0.4, 0.3], 0.75)];
    for (s, expect) in cases {
        let scores = d.join("s.csv");
        let body: String = s
            .iter()
            .enumerate()
            .map(|(i, v)| format!("{i},{v},optimal\n"))
            .collect();
        std::fs::write(&scores, format!("index,rho,status\n{body}")).unwrap();
        let json = ok(&["eval", "--scores", p(&scores), "--data", p(&data)]);
        let v: serde_json::Value = serde_json::from_str(json.trim()).unwrap();
        assert_eq!(v["auc"].as_f64().unwrap(), expect);
    }
    let short = d.join("short.csv");
    std::fs::write(&short, "index,rho,status\n0,0.5,optimal\n").unwrap();
    assert_eq!(
        bin(&["eval", "--scores", p(&short), "--data", p(&data)])
            .status
            .code(),
        Some(3)
    );
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    // Usage errors.
    assert_eq!(
        bin(&["generate", "torus", "--out", p(d)]).status.code(),
        Some(2)
    );
    assert_eq!(bin(&["frobnicate"]).status.code(), Some(2));
    ok(&[
        "generate",
        "pshape",
        "--n-train",
        "50",
        "--n-inliers",
        "3",
        "--n-outliers",
        "1",
        "--out",
        p(d),
    ]);
    let train = d.join("train.csv");
    assert_eq!(
        bin(&[
            "fit",
            "--data",
            p(&train),
            "--degree",
            "0",
            "--out",
            p(&d.join("m.json"))
        ])
        .status
        .code(),
        Some(2)
    );
    let empty = d.join("empty.toml");
    std::fs::write(&empty, "").unwrap();
    assert_eq!(
        bin(&["bench", "--config", p(&empty)]).status.code(),
        Some(2)
    );
    // Data errors.
    assert_eq!(
        bin(&[
            "fit",
            "--data",
            p(&d.join("missing.csv")),
            "--degree",
            "2",
            "--out",
            p(&d.join("m.json"))
        ])
        .status
        .code(),
        Some(3)
    );
    let model = d.join("m.json");
    ok(&[
        "fit",
        "--data",
        p(&train),
        "--degree",
        "2",
        "--out",
        p(&model),
    ]);
    let wrong = d.join("wrong.csv");
    std::fs::write(&wrong, "x1\n0.5\n").unwrap();
    let out = bin(&[
        "score",
        "--model",
        p(&model),
        "--data",
        p(&wrong),
        "--out",
        p(&d.join("s.csv")),
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(!d.join("s.csv").exists());
}

#[test]
fn bench_table_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bench.toml");
    std::fs::write(
        &cfg,
        "[[experiment]]\ndistribution = \"bimodal\"\nn_train = [50, 80]\nn_test_inliers = 30\nn_test_outliers = 6\ndegrees = [2, 4]\nparzen = true\nseed = 5\n",
    )
    .unwrap();
    let a = ok(&["bench", "--config", p(&cfg)]);
    let b = ok(&["bench", "--config", p(&cfg)]);
    assert_eq!(a, b);
    let lines: Vec<&str> = a.lines().collect();
    assert_eq!(lines[0], "N,method,degree,auc,failures");
    assert_eq!(lines.len(), 1 + 6);
}
