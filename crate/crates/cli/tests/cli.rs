use std::path::Path;
use std::process::{Command, Output};

fn surveycode(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_surveycode"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("run surveycode")
}

fn ok(args: &[&str], dir: &Path) -> String {
    let out = surveycode(args, dir);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn train_and_predict_twice_give_identical_files() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(&["synth", "--out", "data.csv", "--records", "300"], d);
    ok(
        &["--seed", "7", "split", "--data", "data.csv", "--out", "split.json"],
        d,
    );
    for alg in ["br", "lp", "cc", "ecc"] {
        for run in 0..2 {
            let model = format!("{alg}{run}.json");
            let preds = format!("{alg}{run}.jsonl");
            ok(
                &[
                    "--seed",
                    "7",
                    "train",
                    "--data",
                    "data.csv",
                    "--split",
                    "split.json",
                    "--algorithm",
                    alg,
                    "--model",
                    &model,
                ],
                d,
            );
            ok(
                &[
                    "predict",
                    "--model",
                    &model,
                    "--answers",
                    "data.csv",
                    "--split",
                    "split.json",
                    "--out",
                    &preds,
                ],
                d,
            );
        }
        let a = std::fs::read(d.join(format!("{alg}0.jsonl"))).unwrap();
        let b = std::fs::read(d.join(format!("{alg}1.jsonl"))).unwrap();
        assert!(!a.is_empty());
        assert_eq!(a, b, "{alg} predictions differ between runs");
        assert_eq!(a.iter().filter(|&&c| c == b'\n').count(), 60);
    }
}

#[test]
fn imported_predictions_match_direct_evaluation() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(&["synth", "--out", "data.csv", "--records", "200"], d);
    ok(&["split", "--data", "data.csv", "--out", "split.json"], d);
    ok(
        &[
            "train",
            "--data",
            "data.csv",
            "--split",
            "split.json",
            "--algorithm",
            "br",
            "--min1",
            "--model",
            "m.json",
        ],
        d,
    );
    let direct = ok(
        &[
            "evaluate",
            "--data",
            "data.csv",
            "--split",
            "split.json",
            "--model",
            "m.json",
            "--predictions",
            "p.jsonl",
        ],
        d,
    );
    let imported = ok(&["import-eval", "--data", "data.csv", "--predictions", "p.jsonl"], d);
    assert_eq!(direct, imported);
    assert!(direct.contains("br-min1"));
    let t = ok(
        &[
            "triage",
            "--predictions",
            "p.jsonl",
            "--model",
            "m.json",
            "--truth",
            "data.csv",
            "--out",
            "triage.json",
        ],
        d,
    );
    assert!(t.contains("automatic"));
    let report: serde_json::Value = serde_json::from_slice(&std::fs::read(d.join("triage.json")).unwrap()).unwrap();
    assert!(report["auto_zero_one"].is_number());
}

#[test]
fn config_file_and_errors() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(&["synth", "--out", "data.csv", "--records", "100"], d);
    std::fs::write(
        d.join("c.toml"),
        "[dataset]\npath = \"data.csv\"\n[split]\ntrain = 0.5\nvalidation = 0.25\ntest = 0.25\nseed = 3\n",
    )
    .unwrap();
    let out = ok(
        &["--config", "c.toml", "split", "--data", "data.csv", "--out", "s.json"],
        d,
    );
    assert!(out.starts_with("train 50  validation 25  test 25"), "{out}");

    let bad = surveycode(&["stats", "--data", "missing.csv"], d);
    assert!(!bad.status.success());
    assert!(String::from_utf8_lossy(&bad.stderr).contains("missing.csv"));

    std::fs::write(
        d.join("bad.jsonl"),
        "{\"id\":\"1\",\"model_tag\":\"x\",\"predicted\":[\"9999\"]}\n",
    )
    .unwrap();
    let bad = surveycode(&["import-eval", "--data", "data.csv", "--predictions", "bad.jsonl"], d);
    assert!(!bad.status.success());
    let msg = String::from_utf8_lossy(&bad.stderr);
    assert!(msg.contains("line 1") && msg.contains("9999"), "{msg}");
}
