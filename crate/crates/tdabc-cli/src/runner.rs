//! The `run` command: evaluate every (dataset, classifier) pair under the
//! configured cross-validation plan and write one result directory per pair.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use tdabc::classifiers::{dataset_diagrams, ClassifierConfig, ClassifierKind};
use tdabc::dataset::LabeledDataset;
use tdabc::evaluation::{
    compute_metrics, confusion_matrix, repeated_cv, CountMode, CvPlan, ExecutionDetail,
    MetricReport, METRIC_NAMES,
};

use crate::config::RunConfig;
use crate::Failure;

/// Per-job descriptor stored next to the result files; `report` relies on it.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct JobMeta {
    pub dataset: String,
    pub display_name: String,
    pub order: usize,
    pub classifier: ClassifierConfig,
    pub plan: CvPlan,
    pub count_mode: CountMode,
    pub executions: usize,
    pub num_labels: usize,
    pub label_names: Option<Vec<String>>,
}

pub fn classifier_slug(kind: ClassifierKind) -> &'static str {
    match kind {
        ClassifierKind::TdabcR => "tdabc-r",
        ClassifierKind::TdabcM => "tdabc-m",
        ClassifierKind::TdabcA => "tdabc-a",
        ClassifierKind::Knn => "knn",
        ClassifierKind::Wknn => "wknn",
    }
}

fn write(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents)
        .map_err(|e| Failure::internal(format!("writing {}: {e}", path.display())))
}

pub fn cmd_run(config: &RunConfig, config_dir: &Path) -> Result<(), Failure> {
    config.validate().map_err(Failure::user)?;
    let out_root = &config.output_dir;
    fs::create_dir_all(out_root)
        .map_err(|e| Failure::user(format!("cannot create {}: {e}", out_root.display())))?;

    // materialize datasets up front so user errors surface before any work
    let mut datasets: Vec<(String, LabeledDataset)> = Vec::new();
    for entry in &config.datasets {
        let name = entry.display_name();
        let mut ds = entry
            .source
            .load(config.seed, config_dir)
            .map_err(|e| Failure::user(format!("dataset {name:?}: {e}")))?;
        ds.name = name.clone();
        datasets.push((name, ds));
    }

    let resolved = serde_json::to_string_pretty(config)
        .map_err(|e| Failure::internal(format!("serializing config: {e}")))?;
    write(&out_root.join("run_config.json"), &resolved)?;

    let mut jobs: Vec<(usize, usize)> = Vec::new();
    for d in 0..datasets.len() {
        for c in 0..config.classifiers.len() {
            jobs.push((d, c));
        }
    }
    let failures: Vec<Failure> = jobs
        .par_iter()
        .filter_map(|&(d, c)| {
            let (name, ds) = &datasets[d];
            let mut cfg = config.classifiers[c].clone();
            cfg.seed = cfg.seed.wrapping_add(config.seed);
            run_one(out_root, name, ds, &cfg, c, &config.plan, config.count_mode).err()
        })
        .collect();
    if let Some(first) = failures.into_iter().next() {
        return Err(first);
    }
    Ok(())
}

fn run_one(
    out_root: &Path,
    dataset_name: &str,
    ds: &LabeledDataset,
    cfg: &ClassifierConfig,
    order: usize,
    plan: &CvPlan,
    count_mode: CountMode,
) -> Result<(), Failure> {
    let dir = job_dir(out_root, dataset_name, order, cfg.kind);
    fs::create_dir_all(&dir)
        .map_err(|e| Failure::internal(format!("cannot create {}: {e}", dir.display())))?;

    let outcome = repeated_cv(ds, cfg, plan).map_err(|e| {
        Failure::internal(format!("{dataset_name}/{}: {e}", cfg.kind.display_name()))
    })?;
    let report = compute_metrics(
        &outcome.y_true,
        &outcome.y_pred,
        ds.num_labels(),
        count_mode,
    )
    .map_err(|e| Failure::internal(e.to_string()))?;
    let confusion = confusion_matrix(&outcome.y_true, &outcome.y_pred, ds.num_labels())
        .map_err(|e| Failure::internal(e.to_string()))?;

    let meta = JobMeta {
        dataset: dataset_name.to_string(),
        display_name: cfg.kind.display_name().to_string(),
        order,
        classifier: cfg.clone(),
        plan: plan.clone(),
        count_mode,
        executions: outcome.executions,
        num_labels: ds.num_labels(),
        label_names: ds.label_names.clone(),
    };
    write(&dir.join("meta.json"), &to_json(&meta)?)?;
    write(&dir.join("metrics.json"), &to_json(&report)?)?;
    write(&dir.join("metrics.csv"), &metrics_csv(&report))?;
    write(
        &dir.join("confusion.csv"),
        &confusion_csv(&confusion, &meta),
    )?;
    write(
        &dir.join("predictions.csv"),
        &predictions_csv(&outcome.y_true, &outcome.y_pred),
    )?;
    write(
        &dir.join("selection.json"),
        &to_json::<Vec<ExecutionDetail>>(&outcome.details)?,
    )?;

    if cfg.kind.is_tdabc() {
        let diagrams = dataset_diagrams(&ds.points, cfg)
            .map_err(|e| Failure::internal(format!("{dataset_name} diagrams: {e}")))?;
        write(&dir.join("diagrams.csv"), &diagrams.to_csv())?;
    }
    Ok(())
}

pub fn job_dir(out_root: &Path, dataset_name: &str, order: usize, kind: ClassifierKind) -> PathBuf {
    out_root
        .join(sanitize(dataset_name))
        .join(format!("{order:02}-{}", classifier_slug(kind)))
}

fn sanitize(name: &str) -> String {
    name.chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '-' || c == '_' {
                c
            } else {
                '_'
            }
        })
        .collect()
}

fn to_json<T: Serialize>(value: &T) -> Result<String, Failure> {
    serde_json::to_string_pretty(value)
        .map_err(|e| Failure::internal(format!("serialization: {e}")))
}

pub fn metrics_csv(report: &MetricReport) -> String {
    let mut out = String::from("metric,value\n");
    for name in METRIC_NAMES {
        let _ = writeln!(out, "{name},{}", report.metric(name).expect("known metric"));
    }
    out
}

pub fn confusion_csv(matrix: &[Vec<usize>], meta: &JobMeta) -> String {
    let label = |i: usize| -> String {
        meta.label_names
            .as_ref()
            .and_then(|ns| ns.get(i).cloned())
            .unwrap_or_else(|| i.to_string())
    };
    let mut out = String::from("true\\predicted");
    for c in 0..matrix.len() {
        let _ = write!(out, ",{}", label(c));
    }
    out.push('\n');
    for (r, row) in matrix.iter().enumerate() {
        let _ = write!(out, "{}", label(r));
        for v in row {
            let _ = write!(out, ",{v}");
        }
        out.push('\n');
    }
    out
}

fn predictions_csv(y_true: &[usize], y_pred: &[usize]) -> String {
    let mut out = String::from("index,true,predicted\n");
    for (i, (t, p)) in y_true.iter().zip(y_pred.iter()).enumerate() {
        let _ = writeln!(out, "{i},{t},{p}");
    }
    out
}
