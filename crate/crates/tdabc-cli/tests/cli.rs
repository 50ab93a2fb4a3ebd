//! Command-level behavior: file contracts and exit codes.

use std::path::Path;
use std::process::Command;

fn tdabc() -> Command {
    Command::new(env!("CARGO_BIN_EXE_tdabc"))
}

#[test]
fn generate_writes_csv_and_manifest() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("circles.csv");
    let status = tdabc()
        .args([
            "generate",
            "circles",
            "--samples",
            "50",
            "--noise",
            "3",
            "--seed",
            "1",
            "--out",
        ])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let csv = std::fs::read_to_string(&out).unwrap();
    assert_eq!(csv.lines().count(), 51); // header + 50 rows
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.with_extension("json")).unwrap())
            .unwrap();
    assert_eq!(manifest["classes"], 2);
    assert_eq!(manifest["sizes"], serde_json::json!([25, 25]));
    assert_eq!(manifest["generator"], "circles");
}

#[test]
fn generate_sphere_row_count() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("sphere.csv");
    let status = tdabc()
        .args(["generate", "sphere", "--no-header", "--out"])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    assert_eq!(std::fs::read_to_string(&out).unwrap().lines().count(), 653);
}

#[test]
fn generate_rejects_bad_spec_naming_the_field() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("x.csv");
    let output = tdabc()
        .args([
            "generate",
            "swissroll",
            "--samples",
            "301",
            "--classes",
            "6",
            "--out",
        ])
        .arg(&out)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("301") && stderr.contains("6"), "{stderr}");
}

#[test]
fn run_produces_one_result_set_per_pair_and_report_aggregates() {
    let tmp = tempfile::tempdir().unwrap();
    let config_path = tmp.path().join("run.json");
    let out_dir = tmp.path().join("results");
    let config = serde_json::json!({
        "seed": 3,
        "output_dir": out_dir,
        "datasets": [
            {"kind": "circles", "n_samples": 30, "noise": 3.0},
            {"kind": "moons", "n_samples": 30, "noise": 10.0}
        ],
        "classifiers": [
            {"kind": "tdabc-a", "q": 2},
            {"kind": "tdabc-m", "q": 2},
            {"kind": "tdabc-r", "q": 2},
            {"kind": "knn", "k": 5},
            {"kind": "wknn", "k": 5}
        ],
        "plan": {"fold_fraction": 0.1, "repeats": 1, "seed": 3}
    });
    std::fs::write(&config_path, serde_json::to_string(&config).unwrap()).unwrap();
    let status = tdabc()
        .args(["run", "--config"])
        .arg(&config_path)
        .status()
        .unwrap();
    assert!(status.success());

    // one metrics + one confusion file per (dataset, classifier)
    for dataset in ["circles", "moons"] {
        let base = out_dir.join(dataset);
        let dirs: Vec<_> = std::fs::read_dir(&base).unwrap().flatten().collect();
        assert_eq!(dirs.len(), 5, "{dataset}");
        for d in dirs {
            assert!(d.path().join("metrics.json").is_file());
            assert!(d.path().join("metrics.csv").is_file());
            assert!(d.path().join("confusion.csv").is_file());
            assert!(d.path().join("predictions.csv").is_file());
        }
    }

    let report_dir = tmp.path().join("report");
    let status = tdabc()
        .args(["report", "--results"])
        .arg(&out_dir)
        .arg("--out")
        .arg(&report_dir)
        .status()
        .unwrap();
    assert!(status.success());
    let accuracy = std::fs::read_to_string(report_dir.join("accuracy.csv")).unwrap();
    let mut lines = accuracy.lines();
    assert_eq!(lines.next().unwrap(), "classifier,circles,moons,mean,stdev");
    assert_eq!(accuracy.lines().count(), 6); // header + 5 classifiers
    assert!(report_dir.join("summary.csv").is_file());
    assert!(report_dir.join("circles-tdabc-a-barcode.svg").is_file());
    assert!(report_dir.join("moons-knn-confusion.svg").is_file());

    // mean/stdev columns agree with hand recomputation from the dataset cells
    for line in accuracy.lines().skip(1) {
        let fields: Vec<&str> = line.split(',').collect();
        let a: f64 = fields[1].parse().unwrap();
        let b: f64 = fields[2].parse().unwrap();
        let mean: f64 = fields[3].parse().unwrap();
        let stdev: f64 = fields[4].parse().unwrap();
        // cells carry 4 decimals, so the recomputation tolerance is loose
        let want_mean = (a + b) / 2.0;
        let want_sd = ((a - want_mean).powi(2) + (b - want_mean).powi(2)).sqrt(); // ddof 1
        assert!((mean - want_mean).abs() <= 1e-4, "{line}");
        assert!((stdev - want_sd).abs() <= 1e-4, "{line}");
    }
}

#[test]
fn report_merges_rows_across_runs() {
    let tmp = tempfile::tempdir().unwrap();
    let out_dir = tmp.path().join("results");
    for (name, kind) in [("circles", "circles"), ("moons", "moons")] {
        let config_path = tmp.path().join(format!("{name}.json"));
        let config = serde_json::json!({
            "datasets": [{"name": name, "kind": kind, "n_samples": 20, "noise": 3.0}],
            "classifiers": [{"kind": "knn", "k": 3}, {"kind": "wknn", "k": 3}],
            "plan": {"repeats": 1, "seed": 1},
            "output_dir": out_dir
        });
        std::fs::write(&config_path, serde_json::to_string(&config).unwrap()).unwrap();
        let status = tdabc()
            .args(["run", "--config"])
            .arg(&config_path)
            .status()
            .unwrap();
        assert!(status.success());
    }
    let report_dir = tmp.path().join("report");
    let status = tdabc()
        .args(["report", "--results"])
        .arg(&out_dir)
        .arg("--out")
        .arg(&report_dir)
        .status()
        .unwrap();
    assert!(status.success());
    let accuracy = std::fs::read_to_string(report_dir.join("accuracy.csv")).unwrap();
    // one row per classifier spanning both runs' datasets
    assert_eq!(accuracy.lines().next().unwrap(), "classifier,circles,moons,mean,stdev");
    assert_eq!(accuracy.lines().count(), 3);
}

#[test]
fn run_missing_dataset_file_exits_2() {
    let tmp = tempfile::tempdir().unwrap();
    let config_path = tmp.path().join("run.json");
    let config = serde_json::json!({
        "datasets": [{"kind": "csv", "path": "does-not-exist.csv"}],
        "classifiers": [{"kind": "knn", "k": 5}],
        "output_dir": tmp.path().join("results")
    });
    std::fs::write(&config_path, serde_json::to_string(&config).unwrap()).unwrap();
    let output = tdabc()
        .args(["run", "--config"])
        .arg(&config_path)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn run_invalid_config_exits_2() {
    let tmp = tempfile::tempdir().unwrap();
    let config_path = tmp.path().join("run.json");
    std::fs::write(&config_path, "{\"datasets\": []}").unwrap();
    let output = tdabc()
        .args(["run", "--config"])
        .arg(&config_path)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(
        stderr.contains("classifiers") || stderr.contains("datasets"),
        "{stderr}"
    );
}

#[test]
fn report_on_empty_dir_exits_nonzero() {
    let tmp = tempfile::tempdir().unwrap();
    let empty = tmp.path().join("empty");
    std::fs::create_dir_all(&empty).unwrap();
    let output = tdabc()
        .args(["report", "--results"])
        .arg(&empty)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn run_applies_cli_overrides() {
    let tmp = tempfile::tempdir().unwrap();
    let config_path = tmp.path().join("run.json");
    let out_dir = tmp.path().join("results");
    let config = serde_json::json!({
        "datasets": [{"kind": "circles", "n_samples": 20, "noise": 3.0}],
        "classifiers": [{"kind": "tdabc-a", "q": 5}],
        "plan": {"repeats": 1}
    });
    std::fs::write(&config_path, serde_json::to_string(&config).unwrap()).unwrap();
    let status = tdabc()
        .args(["run", "--config"])
        .arg(&config_path)
        .arg("--out")
        .arg(&out_dir)
        .args([
            "--q",
            "2",
            "--strategy",
            "M",
            "--sublevel",
            "birth",
            "--seed",
            "9",
            "--jobs",
            "2",
        ])
        .status()
        .unwrap();
    assert!(status.success());
    let resolved: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out_dir.join("run_config.json")).unwrap())
            .unwrap();
    assert_eq!(resolved["classifiers"][0]["q"], 2);
    assert_eq!(resolved["classifiers"][0]["kind"], "tdabc-m");
    assert_eq!(resolved["classifiers"][0]["sublevel_choice"], "birth");
    assert_eq!(resolved["seed"], 9);
    let dirs: Vec<_> = std::fs::read_dir(out_dir.join("circles"))
        .unwrap()
        .flatten()
        .collect();
    assert_eq!(dirs.len(), 1);
    assert!(dirs[0].file_name().to_string_lossy().contains("tdabc-m"));
}

#[test]
fn path_in_config_resolves_relative_to_config_dir() {
    let tmp = tempfile::tempdir().unwrap();
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("../tdabc/tests/data/iris.csv");
    std::fs::copy(&data, tmp.path().join("iris.csv")).unwrap();
    let config_path = tmp.path().join("run.json");
    let config = serde_json::json!({
        "datasets": [{"kind": "csv", "path": "iris.csv"}],
        "classifiers": [{"kind": "knn", "k": 15}],
        "plan": {"repeats": 1, "seed": 2},
        "output_dir": tmp.path().join("results")
    });
    std::fs::write(&config_path, serde_json::to_string(&config).unwrap()).unwrap();
    let status = tdabc()
        .args(["run", "--config"])
        .arg(&config_path)
        .status()
        .unwrap();
    assert!(status.success());
    let metrics =
        std::fs::read_to_string(tmp.path().join("results/iris/00-knn/metrics.csv")).unwrap();
    let acc: f64 = metrics
        .lines()
        .find(|l| l.starts_with("accuracy,"))
        .unwrap()
        .split(',')
        .nth(1)
        .unwrap()
        .parse()
        .unwrap();
    assert!(acc > 0.9, "iris knn accuracy {acc}");
}
