//! The `report` command: aggregate run output into per-metric tables, a
//! summary table, and SVG figures.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use tdabc::evaluation::{MetricReport, METRIC_NAMES};

use crate::runner::JobMeta;
use crate::svg;
use crate::Failure;

struct Job {
    meta: JobMeta,
    metrics: MetricReport,
    dir: std::path::PathBuf,
}

fn scan_jobs(results: &Path) -> Result<Vec<Job>, Failure> {
    let mut jobs = Vec::new();
    let mut dirs = Vec::new();
    collect_dirs(results, 0, &mut dirs);
    dirs.sort();
    for dir in dirs {
        let meta_path = dir.join("meta.json");
        if !meta_path.is_file() {
            continue;
        }
        let meta: JobMeta = read_json(&meta_path)?;
        let metrics: MetricReport = read_json(&dir.join("metrics.json"))?;
        jobs.push(Job { meta, metrics, dir });
    }
    if jobs.is_empty() {
        return Err(Failure::user(format!(
            "no run results under {} (expected <dataset>/<classifier>/meta.json)",
            results.display()
        )));
    }
    Ok(jobs)
}

fn collect_dirs(dir: &Path, depth: usize, out: &mut Vec<std::path::PathBuf>) {
    if depth > 3 {
        return;
    }
    let Ok(entries) = fs::read_dir(dir) else {
        return;
    };
    for entry in entries.flatten() {
        let path = entry.path();
        if path.is_dir() {
            out.push(path.clone());
            collect_dirs(&path, depth + 1, out);
        }
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let raw = fs::read_to_string(path)
        .map_err(|e| Failure::user(format!("reading {}: {e}", path.display())))?;
    serde_json::from_str(&raw)
        .map_err(|e| Failure::user(format!("parsing {}: {e}", path.display())))
}

pub fn cmd_report(results: &Path, out: &Path) -> Result<(), Failure> {
    let jobs = scan_jobs(results)?;
    fs::create_dir_all(out)
        .map_err(|e| Failure::user(format!("cannot create {}: {e}", out.display())))?;

    // cell grid: classifier rows (ordered by config position) x dataset columns
    let mut datasets: Vec<String> = jobs.iter().map(|j| j.meta.dataset.clone()).collect();
    datasets.sort();
    datasets.dedup();
    let mut classifiers: Vec<(usize, String)> = jobs
        .iter()
        .map(|j| (j.meta.order, j.meta.display_name.clone()))
        .collect();
    classifiers.sort();
    classifiers.dedup();

    let mut tables_json = serde_json::Map::new();
    for metric in METRIC_NAMES {
        let mut table = String::from("classifier");
        for d in &datasets {
            let _ = write!(table, ",{d}");
        }
        table.push_str(",mean,stdev\n");
        let mut metric_json = serde_json::Map::new();
        for (order, name) in &classifiers {
            let _ = write!(table, "{name}");
            let mut values = Vec::new();
            let mut row_json = serde_json::Map::new();
            for d in &datasets {
                let cell = jobs
                    .iter()
                    .rfind(|j| j.meta.dataset == *d && j.meta.order == *order)
                    .and_then(|j| j.metrics.metric(metric));
                match cell {
                    Some(v) => {
                        values.push(v);
                        let _ = write!(table, ",{v:.4}");
                        row_json.insert(d.clone(), v.into());
                    }
                    None => table.push(','),
                }
            }
            let (mean, stdev) = mean_stdev(&values);
            let _ = writeln!(table, ",{mean:.4},{stdev:.4}");
            row_json.insert("mean".into(), mean.into());
            row_json.insert("stdev".into(), stdev.into());
            metric_json.insert(name.clone(), row_json.into());
        }
        write_out(&out.join(format!("{metric}.csv")), &table)?;
        tables_json.insert(metric.to_string(), metric_json.into());
    }
    let tables = serde_json::to_string_pretty(&serde_json::Value::Object(tables_json))
        .map_err(|e| Failure::internal(format!("tables.json: {e}")))?;
    write_out(&out.join("tables.json"), &tables)?;

    // summary: metric rows x classifier columns, mean±stdev across datasets
    let mut summary = String::from("metric");
    for (_, name) in &classifiers {
        let _ = write!(summary, ",{name}");
    }
    summary.push('\n');
    for metric in METRIC_NAMES {
        let _ = write!(summary, "{metric}");
        for (order, _) in &classifiers {
            let values: Vec<f64> = datasets
                .iter()
                .filter_map(|d| {
                    jobs.iter()
                        .rfind(|j| j.meta.dataset == *d && j.meta.order == *order)
                        .and_then(|j| j.metrics.metric(metric))
                })
                .collect();
            let (mean, stdev) = mean_stdev(&values);
            let _ = write!(summary, ",{mean:.4}±{stdev:.4}");
        }
        summary.push('\n');
    }
    write_out(&out.join("summary.csv"), &summary)?;

    // figures
    for job in &jobs {
        let stem = format!(
            "{}-{}",
            job.meta.dataset,
            crate::runner::classifier_slug(job.meta.classifier.kind)
        );
        let confusion_path = job.dir.join("confusion.csv");
        if confusion_path.is_file() {
            let matrix = parse_confusion(&confusion_path)?;
            let labels: Vec<String> = job
                .meta
                .label_names
                .clone()
                .unwrap_or_else(|| (0..job.meta.num_labels).map(|i| i.to_string()).collect());
            write_out(
                &out.join(format!("{stem}-confusion.svg")),
                &svg::confusion_heatmap(&matrix, &labels),
            )?;
        }
        let diagram_path = job.dir.join("diagrams.csv");
        if diagram_path.is_file() {
            let bars = parse_diagrams(&diagram_path)?;
            let max_eps = bars
                .iter()
                .map(|b| if b.2.is_finite() { b.2 } else { b.1 })
                .fold(0.0f64, f64::max);
            write_out(
                &out.join(format!("{stem}-barcode.svg")),
                &svg::barcode(&bars, max_eps),
            )?;
        }
    }
    Ok(())
}

fn write_out(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents)
        .map_err(|e| Failure::internal(format!("writing {}: {e}", path.display())))
}

pub fn mean_stdev(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (0.0, 0.0);
    }
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var =
        values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (values.len() - 1) as f64;
    (mean, var.sqrt())
}

fn parse_confusion(path: &Path) -> Result<Vec<Vec<usize>>, Failure> {
    let raw = fs::read_to_string(path)
        .map_err(|e| Failure::user(format!("reading {}: {e}", path.display())))?;
    let mut matrix = Vec::new();
    for line in raw.lines().skip(1) {
        let row: Result<Vec<usize>, _> = line
            .split(',')
            .skip(1)
            .map(|f| f.trim().parse::<usize>())
            .collect();
        matrix.push(row.map_err(|e| Failure::user(format!("{}: {e}", path.display())))?);
    }
    Ok(matrix)
}

fn parse_diagrams(path: &Path) -> Result<Vec<(usize, f64, f64)>, Failure> {
    let raw = fs::read_to_string(path)
        .map_err(|e| Failure::user(format!("reading {}: {e}", path.display())))?;
    let mut bars = Vec::new();
    for line in raw.lines().skip(1) {
        let mut parts = line.split(',');
        let bad = || Failure::user(format!("{}: malformed line {line:?}", path.display()));
        let dim: usize = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
        let birth: f64 = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
        let death_raw = parts.next().ok_or_else(bad)?;
        let death = if death_raw == "inf" {
            f64::INFINITY
        } else {
            death_raw.parse().map_err(|_| bad())?
        };
        bars.push((dim, birth, death));
    }
    Ok(bars)
}
