//! Repeated cross-validation and macro-averaged multi-class metrics.
//!
//! The harness shuffles with a repeat-specific seed, splits into ⌈n/R⌉ folds
//! (stratified by default), rotates each fold as the test set, and concatenates
//! the per-fold truth/prediction vectors across all repeats. Metrics follow
//! the one-vs-all counting scheme with two count modes; a label whose metric
//! denominator vanishes contributes 0 to the macro average instead of being
//! skipped.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classifiers::{predict, ClassifierConfig, ClassifyError};
use crate::dataset::LabeledDataset;

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("fold_fraction must be in (0, 0.5], got {0}")]
    BadFoldFraction(f64),
    #[error("repeats must be at least 1")]
    NoRepeats,
    #[error("dataset needs at least 2 classes, got {0}")]
    TooFewClasses(usize),
    #[error("label vectors are empty")]
    EmptyLabels,
    #[error("label vectors differ in length: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("label {label} out of range for {num_labels} classes")]
    LabelOutOfRange { label: usize, num_labels: usize },
    #[error(transparent)]
    Classify(#[from] ClassifyError),
}

fn default_fraction() -> f64 {
    0.10
}
fn default_repeats() -> usize {
    5
}
fn default_stratified() -> bool {
    true
}

/// Repeated cross-validation plan.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CvPlan {
    #[serde(default = "default_fraction")]
    pub fold_fraction: f64,
    #[serde(default = "default_repeats")]
    pub repeats: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_stratified")]
    pub stratified: bool,
}

impl Default for CvPlan {
    fn default() -> Self {
        Self {
            fold_fraction: default_fraction(),
            repeats: default_repeats(),
            seed: 0,
            stratified: default_stratified(),
        }
    }
}

impl CvPlan {
    pub fn validate(&self) -> Result<(), EvalError> {
        if !(self.fold_fraction > 0.0 && self.fold_fraction <= 0.5) {
            return Err(EvalError::BadFoldFraction(self.fold_fraction));
        }
        if self.repeats == 0 {
            return Err(EvalError::NoRepeats);
        }
        Ok(())
    }

    pub fn fold_size(&self, n: usize) -> usize {
        ((n as f64 * self.fold_fraction).round() as usize).max(1)
    }

    pub fn fold_count(&self, n: usize) -> usize {
        n.div_ceil(self.fold_size(n))
    }
}

/// Concatenated truth/prediction vectors of one repeated-CV run.
#[derive(Debug, Clone)]
pub struct CvOutcome {
    pub y_true: Vec<usize>,
    pub y_pred: Vec<usize>,
    /// Number of classifier executions (repeats × folds).
    pub executions: usize,
    /// One record per execution, in concatenation order.
    pub details: Vec<ExecutionDetail>,
}

/// Selection outcome of a single classifier execution.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExecutionDetail {
    pub repeat: usize,
    pub fold: usize,
    pub test_size: usize,
    pub chosen_interval: Option<crate::persistence::PersistenceInterval>,
    pub chosen_epsilon: Option<f64>,
}

/// Deterministic fold assignment for one repeat: a partition of 0..labels.len().
pub fn make_folds(labels: &[usize], plan: &CvPlan, repeat: usize) -> Vec<Vec<usize>> {
    let n = labels.len();
    let fold_count = plan.fold_count(n);
    let mut indices: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(
        plan.seed ^ (repeat as u64 + 1).wrapping_mul(0xD1B5_4A32_D192_ED03),
    );
    indices.shuffle(&mut rng);

    let mut folds: Vec<Vec<usize>> = vec![Vec::new(); fold_count];
    if plan.stratified {
        // deal each class round-robin, advancing the starting fold between
        // classes so fold sizes stay within one of each other
        let num_labels = labels.iter().copied().max().map_or(0, |m| m + 1);
        let mut offset = 0usize;
        for class in 0..num_labels {
            let members: Vec<usize> = indices
                .iter()
                .copied()
                .filter(|&i| labels[i] == class)
                .collect();
            for (j, idx) in members.iter().enumerate() {
                folds[(offset + j) % fold_count].push(*idx);
            }
            offset = (offset + members.len()) % fold_count;
        }
    } else {
        let size = plan.fold_size(n);
        for (j, idx) in indices.into_iter().enumerate() {
            folds[j / size].push(idx);
        }
    }
    folds
}

/// Runs the classifier over every fold of every repeat and concatenates the
/// aligned truth and prediction vectors: |Y| = repeats × |dataset|.
pub fn repeated_cv(
    dataset: &LabeledDataset,
    cfg: &ClassifierConfig,
    plan: &CvPlan,
) -> Result<CvOutcome, EvalError> {
    plan.validate()?;
    if dataset.num_labels() < 2 {
        return Err(EvalError::TooFewClasses(dataset.num_labels()));
    }
    let n = dataset.len();
    let mut y_true = Vec::with_capacity(plan.repeats * n);
    let mut y_pred = Vec::with_capacity(plan.repeats * n);
    let mut executions = 0;
    let mut details = Vec::new();
    for repeat in 0..plan.repeats {
        let folds = make_folds(&dataset.labels, plan, repeat);
        for (fold_idx, fold) in folds.iter().enumerate() {
            if fold.is_empty() {
                continue;
            }
            let in_fold: Vec<bool> = {
                let mut mask = vec![false; n];
                for &i in fold {
                    mask[i] = true;
                }
                mask
            };
            let train_indices: Vec<usize> = (0..n).filter(|&i| !in_fold[i]).collect();
            let train = dataset.subset(&train_indices, dataset.name.clone());
            let missing: Vec<usize> = {
                let counts = train.class_counts();
                (0..counts.len()).filter(|&c| counts[c] == 0).collect()
            };
            if !missing.is_empty() {
                log::warn!(
                    "repeat {repeat} fold {fold_idx}: no training samples for classes {missing:?}"
                );
            }
            let test_points: Vec<Vec<f64>> =
                fold.iter().map(|&i| dataset.points[i].clone()).collect();

            let mut fold_cfg = cfg.clone();
            fold_cfg.seed = cfg
                .seed
                .wrapping_add((repeat as u64) << 32)
                .wrapping_add(fold_idx as u64 + 1)
                .wrapping_mul(0x9E37_79B9_7F4A_7C15);
            let out = predict(&train, &test_points, &fold_cfg)?;
            y_true.extend(fold.iter().map(|&i| dataset.labels[i]));
            y_pred.extend(out.predicted);
            details.push(ExecutionDetail {
                repeat,
                fold: fold_idx,
                test_size: fold.len(),
                chosen_interval: out.chosen_interval,
                chosen_epsilon: out.chosen_epsilon,
            });
            executions += 1;
        }
    }
    Ok(CvOutcome {
        y_true,
        y_pred,
        executions,
        details,
    })
}

/// One-vs-all counting scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum CountMode {
    /// Indicator sums keyed on the prediction only: TN counts every correct
    /// prediction of another label, FN every error on another label, so
    /// TP+FP+TN+FN = n for each label.
    #[default]
    Paper,
    /// Conventional one-vs-all: FN = missed true members of the label,
    /// TN = everything else.
    Standard,
}

/// Per-label one-vs-all counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelCounts {
    pub tp: usize,
    pub fp: usize,
    pub tn: usize,
    pub fn_: usize,
}

fn check_labels(y_true: &[usize], y_pred: &[usize], num_labels: usize) -> Result<(), EvalError> {
    if y_true.is_empty() {
        return Err(EvalError::EmptyLabels);
    }
    if y_true.len() != y_pred.len() {
        return Err(EvalError::LengthMismatch(y_true.len(), y_pred.len()));
    }
    for &l in y_true.iter().chain(y_pred.iter()) {
        if l >= num_labels {
            return Err(EvalError::LabelOutOfRange {
                label: l,
                num_labels,
            });
        }
    }
    Ok(())
}

/// Per-label TP/FP/TN/FN under the chosen count mode.
pub fn per_label_counts(
    y_true: &[usize],
    y_pred: &[usize],
    num_labels: usize,
    mode: CountMode,
) -> Result<Vec<LabelCounts>, EvalError> {
    check_labels(y_true, y_pred, num_labels)?;
    let n = y_true.len();
    let mut tp = vec![0usize; num_labels];
    let mut fp = vec![0usize; num_labels];
    let mut fn_std = vec![0usize; num_labels];
    let mut correct_total = 0usize;
    for (&y, &p) in y_true.iter().zip(y_pred.iter()) {
        if y == p {
            correct_total += 1;
            tp[p] += 1;
        } else {
            fp[p] += 1;
            fn_std[y] += 1;
        }
    }
    let wrong_total = n - correct_total;
    Ok((0..num_labels)
        .map(|l| match mode {
            CountMode::Paper => LabelCounts {
                tp: tp[l],
                fp: fp[l],
                tn: correct_total - tp[l],
                fn_: wrong_total - fp[l],
            },
            CountMode::Standard => LabelCounts {
                tp: tp[l],
                fp: fp[l],
                tn: n - tp[l] - fp[l] - fn_std[l],
                fn_: fn_std[l],
            },
        })
        .collect())
}

/// Per-label counts recovered from a confusion matrix (standard mode).
pub fn counts_from_confusion(matrix: &[Vec<usize>]) -> Vec<LabelCounts> {
    let num_labels = matrix.len();
    let n: usize = matrix.iter().flatten().sum();
    (0..num_labels)
        .map(|l| {
            let tp = matrix[l][l];
            let fp = (0..num_labels).map(|r| matrix[r][l]).sum::<usize>() - tp;
            let fn_ = matrix[l].iter().sum::<usize>() - tp;
            LabelCounts {
                tp,
                fp,
                tn: n - tp - fp - fn_,
                fn_,
            }
        })
        .collect()
}

/// The nine macro-averaged metrics plus the per-label counts they came from.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MetricReport {
    pub per_label: Vec<LabelCounts>,
    pub count_mode: CountMode,
    pub accuracy: f64,
    pub precision: f64,
    pub recall: f64,
    pub true_negative_rate: f64,
    pub false_positive_rate: f64,
    pub f1: f64,
    pub mcc: f64,
    pub gmean: f64,
    pub classification_error: f64,
}

pub const METRIC_NAMES: [&str; 9] = [
    "accuracy",
    "precision",
    "recall",
    "true_negative_rate",
    "false_positive_rate",
    "f1",
    "mcc",
    "gmean",
    "classification_error",
];

impl MetricReport {
    pub fn metric(&self, name: &str) -> Option<f64> {
        Some(match name {
            "accuracy" => self.accuracy,
            "precision" => self.precision,
            "recall" => self.recall,
            "true_negative_rate" => self.true_negative_rate,
            "false_positive_rate" => self.false_positive_rate,
            "f1" => self.f1,
            "mcc" => self.mcc,
            "gmean" => self.gmean,
            "classification_error" => self.classification_error,
            _ => return None,
        })
    }
}

fn ratio(num: f64, den: f64) -> f64 {
    if den == 0.0 {
        0.0
    } else {
        num / den
    }
}

fn macro_average<F: Fn(&LabelCounts) -> f64>(counts: &[LabelCounts], f: F) -> f64 {
    counts.iter().map(f).sum::<f64>() / counts.len() as f64
}

/// Macro-averaged metrics from per-label counts; the classification error is
/// computed straight from the label vectors.
pub fn compute_metrics(
    y_true: &[usize],
    y_pred: &[usize],
    num_labels: usize,
    mode: CountMode,
) -> Result<MetricReport, EvalError> {
    let counts = per_label_counts(y_true, y_pred, num_labels, mode)?;
    let n = y_true.len() as f64;
    let wrong = y_true
        .iter()
        .zip(y_pred.iter())
        .filter(|(y, p)| y != p)
        .count() as f64;
    let m = |c: &LabelCounts| (c.tp as f64, c.fp as f64, c.tn as f64, c.fn_ as f64);
    Ok(MetricReport {
        accuracy: macro_average(&counts, |c| {
            let (tp, fp, tn, fn_) = m(c);
            ratio(tp + tn, tp + tn + fp + fn_)
        }),
        precision: macro_average(&counts, |c| {
            let (tp, fp, ..) = m(c);
            ratio(tp, tp + fp)
        }),
        recall: macro_average(&counts, |c| {
            let (tp, _, _, fn_) = m(c);
            ratio(tp, tp + fn_)
        }),
        true_negative_rate: macro_average(&counts, |c| {
            let (_, fp, tn, _) = m(c);
            ratio(tn, tn + fp)
        }),
        false_positive_rate: macro_average(&counts, |c| {
            let (_, fp, tn, _) = m(c);
            ratio(fp, tn + fp)
        }),
        f1: macro_average(&counts, |c| {
            let (tp, fp, _, fn_) = m(c);
            ratio(2.0 * tp, 2.0 * tp + fp + fn_)
        }),
        mcc: macro_average(&counts, |c| {
            let (tp, fp, tn, fn_) = m(c);
            let den = ((tp + fp) * (tp + fn_) * (tn + fp) * (tn + fn_)).sqrt();
            ratio(tp * tn - fp * fn_, den)
        }),
        gmean: macro_average(&counts, |c| {
            let (tp, fp, tn, _) = m(c);
            let den = (tn + fp) * (tp + fp);
            if den == 0.0 {
                0.0
            } else {
                (tn * tp / den).sqrt()
            }
        }),
        classification_error: wrong / n,
        per_label: counts,
        count_mode: mode,
    })
}

/// Row r, column c: how many true-r samples were predicted as c.
pub fn confusion_matrix(
    y_true: &[usize],
    y_pred: &[usize],
    num_labels: usize,
) -> Result<Vec<Vec<usize>>, EvalError> {
    check_labels(y_true, y_pred, num_labels)?;
    let mut matrix = vec![vec![0usize; num_labels]; num_labels];
    for (&y, &p) in y_true.iter().zip(y_pred.iter()) {
        matrix[y][p] += 1;
    }
    Ok(matrix)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classifiers::ClassifierKind;
    use crate::dataset::gen_moons;

    #[test]
    fn cv_execution_count_matches_formula() {
        // 150 samples at 10% -> 10 folds, 5 repeats -> 50 executions, 750 labels
        let ds = gen_moons(150, 10.0, 3).unwrap();
        let cfg = ClassifierConfig::baseline(ClassifierKind::Knn, 5);
        let plan = CvPlan {
            seed: 9,
            ..CvPlan::default()
        };
        let out = repeated_cv(&ds, &cfg, &plan).unwrap();
        assert_eq!(out.executions, 50);
        assert_eq!(out.y_true.len(), 750);
        assert_eq!(out.y_pred.len(), 750);
    }

    #[test]
    fn cv_plan_guards() {
        let ds = gen_moons(20, 0.0, 1).unwrap();
        let cfg = ClassifierConfig::baseline(ClassifierKind::Knn, 3);
        for bad in [0.0, 0.6, 1.0] {
            let plan = CvPlan {
                fold_fraction: bad,
                ..CvPlan::default()
            };
            assert!(matches!(
                repeated_cv(&ds, &cfg, &plan),
                Err(EvalError::BadFoldFraction(_))
            ));
        }
        let plan = CvPlan {
            repeats: 0,
            ..CvPlan::default()
        };
        assert!(matches!(
            repeated_cv(&ds, &cfg, &plan),
            Err(EvalError::NoRepeats)
        ));
    }

    #[test]
    fn cv_single_class_rejected() {
        let ds = LabeledDataset::new(
            "one",
            vec![vec![0.0], vec![1.0], vec![2.0]],
            vec![0, 0, 0],
            None,
        )
        .unwrap();
        let cfg = ClassifierConfig::baseline(ClassifierKind::Knn, 1);
        assert!(matches!(
            repeated_cv(&ds, &cfg, &CvPlan::default()),
            Err(EvalError::TooFewClasses(1))
        ));
    }

    #[test]
    fn cv_is_seed_deterministic() {
        let ds = gen_moons(40, 10.0, 2).unwrap();
        let cfg = ClassifierConfig::baseline(ClassifierKind::Wknn, 3);
        let plan = CvPlan {
            seed: 4,
            repeats: 2,
            ..CvPlan::default()
        };
        let a = repeated_cv(&ds, &cfg, &plan).unwrap();
        let b = repeated_cv(&ds, &cfg, &plan).unwrap();
        assert_eq!(a.y_true, b.y_true);
        assert_eq!(a.y_pred, b.y_pred);
    }

    #[test]
    fn stratified_folds_balance_classes() {
        // imbalanced labels: stratification keeps per-class fold counts within 1
        let mut labels = vec![0usize; 60];
        labels.extend(vec![1usize; 25]);
        labels.extend(vec![2usize; 15]);
        let plan = CvPlan {
            seed: 7,
            ..CvPlan::default()
        };
        let folds = make_folds(&labels, &plan, 0);
        assert_eq!(folds.len(), 10);
        let mut seen = vec![false; labels.len()];
        for fold in &folds {
            for &i in fold {
                assert!(!seen[i]);
                seen[i] = true;
            }
        }
        assert!(seen.iter().all(|&s| s));
        for class in 0..3 {
            let per_fold: Vec<usize> = folds
                .iter()
                .map(|f| f.iter().filter(|&&i| labels[i] == class).count())
                .collect();
            let min = per_fold.iter().min().unwrap();
            let max = per_fold.iter().max().unwrap();
            assert!(max - min <= 1, "class {class}: {per_fold:?}");
        }
    }

    #[test]
    fn paper_count_examples() {
        let y = [0, 0, 1, 1];
        let p = [0, 1, 1, 1];
        let counts = per_label_counts(&y, &p, 2, CountMode::Paper).unwrap();
        assert_eq!(
            counts[0],
            LabelCounts {
                tp: 1,
                fp: 0,
                tn: 2,
                fn_: 1
            }
        );
        assert_eq!(
            counts[1],
            LabelCounts {
                tp: 2,
                fp: 1,
                tn: 1,
                fn_: 0
            }
        );
    }

    #[test]
    fn paper_fn_exceeds_standard_by_uninvolved_errors() {
        // exhaustive over all 3-class truth/prediction pairs on short vectors
        let labels = [0usize, 1, 2];
        let mut cases = 0;
        for y0 in labels {
            for y1 in labels {
                for p0 in labels {
                    for p1 in labels {
                        let y = [y0, y1];
                        let p = [p0, p1];
                        let paper = per_label_counts(&y, &p, 3, CountMode::Paper).unwrap();
                        let std = per_label_counts(&y, &p, 3, CountMode::Standard).unwrap();
                        for l in 0..3 {
                            let uninvolved = y
                                .iter()
                                .zip(p.iter())
                                .filter(|(&yy, &pp)| yy != pp && pp != l && yy != l)
                                .count();
                            assert_eq!(paper[l].fn_, std[l].fn_ + uninvolved);
                            assert_eq!(paper[l].tp, std[l].tp);
                            assert_eq!(paper[l].fp, std[l].fp);
                        }
                        cases += 1;
                    }
                }
            }
        }
        assert_eq!(cases, 81);
    }

    #[test]
    fn paper_counts_sum_to_n() {
        let y = [0, 1, 2, 2, 1, 0, 2];
        let p = [1, 1, 2, 0, 0, 0, 2];
        let counts = per_label_counts(&y, &p, 3, CountMode::Paper).unwrap();
        for c in counts {
            assert_eq!(c.tp + c.fp + c.tn + c.fn_, 7);
        }
    }

    #[test]
    fn metrics_perfect_prediction() {
        let y = [0, 1, 2, 0, 1, 2];
        let r = compute_metrics(&y, &y, 3, CountMode::Paper).unwrap();
        assert_eq!(r.accuracy, 1.0);
        assert_eq!(r.precision, 1.0);
        assert_eq!(r.recall, 1.0);
        assert_eq!(r.true_negative_rate, 1.0);
        assert_eq!(r.false_positive_rate, 0.0);
        assert_eq!(r.f1, 1.0);
        assert_eq!(r.mcc, 1.0);
        assert_eq!(r.gmean, 1.0);
        assert_eq!(r.classification_error, 0.0);
    }

    #[test]
    fn metrics_worked_example() {
        // Acc = (3/4 + 3/4) / 2 = 0.75, CErr = 1/4
        let y = [0, 0, 1, 1];
        let p = [0, 1, 1, 1];
        let r = compute_metrics(&y, &p, 2, CountMode::Paper).unwrap();
        assert!((r.accuracy - 0.75).abs() < 1e-15);
        assert!((r.classification_error - 0.25).abs() < 1e-15);
    }

    #[test]
    fn constant_predictor_degenerates_to_zero() {
        let y = [0, 0, 1, 1];
        let p = [0, 0, 0, 0];
        let r = compute_metrics(&y, &p, 2, CountMode::Paper).unwrap();
        assert_eq!(r.mcc, 0.0);
        assert_eq!(r.gmean, 0.0);
    }

    #[test]
    fn fpr_complements_tnr() {
        let y = [0, 1, 0, 1, 2, 2, 1, 0];
        let p = [0, 1, 1, 1, 2, 0, 2, 0];
        for mode in [CountMode::Paper, CountMode::Standard] {
            let r = compute_metrics(&y, &p, 3, mode).unwrap();
            // no label is degenerate here, so the complements are exact
            assert!((r.false_positive_rate + r.true_negative_rate - 1.0).abs() < 1e-12);
            let micro_acc = 1.0 - r.classification_error;
            let correct = y.iter().zip(p.iter()).filter(|(a, b)| a == b).count();
            assert!((micro_acc - correct as f64 / y.len() as f64).abs() < 1e-15);
        }
    }

    #[test]
    fn confusion_matrix_examples() {
        let y = [0, 0, 1, 1];
        let p = [0, 1, 1, 1];
        let m = confusion_matrix(&y, &p, 2).unwrap();
        assert_eq!(m, vec![vec![1, 1], vec![0, 2]]);
        let total: usize = m.iter().flatten().sum();
        assert_eq!(total, 4);

        let perfect = confusion_matrix(&[0, 1, 1], &[0, 1, 1], 2).unwrap();
        assert_eq!(perfect, vec![vec![1, 0], vec![0, 2]]);
    }

    #[test]
    fn confusion_counts_match_standard_mode() {
        let y = [0, 1, 2, 2, 1, 0, 2, 1];
        let p = [1, 1, 2, 0, 0, 0, 2, 2];
        let m = confusion_matrix(&y, &p, 3).unwrap();
        let from_matrix = counts_from_confusion(&m);
        let direct = per_label_counts(&y, &p, 3, CountMode::Standard).unwrap();
        assert_eq!(from_matrix, direct);
    }

    #[test]
    fn count_errors() {
        assert!(per_label_counts(&[], &[], 2, CountMode::Paper).is_err());
        assert!(per_label_counts(&[0], &[0, 1], 2, CountMode::Paper).is_err());
        assert!(per_label_counts(&[0, 5], &[0, 1], 2, CountMode::Paper).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn label_pairs() -> impl Strategy<Value = (Vec<usize>, Vec<usize>)> {
            (1usize..60).prop_flat_map(|n| {
                (
                    proptest::collection::vec(0usize..4, n),
                    proptest::collection::vec(0usize..4, n),
                )
            })
        }

        proptest! {
            #[test]
            fn metric_ranges_hold((y, p) in label_pairs()) {
                for mode in [CountMode::Paper, CountMode::Standard] {
                    let r = compute_metrics(&y, &p, 4, mode).unwrap();
                    for name in ["accuracy", "precision", "recall", "true_negative_rate",
                                 "false_positive_rate", "f1", "gmean", "classification_error"] {
                        let v = r.metric(name).unwrap();
                        prop_assert!((0.0..=1.0).contains(&v), "{name} = {v}");
                    }
                    prop_assert!((-1.0..=1.0).contains(&r.mcc));
                    if mode == CountMode::Paper {
                        for c in &r.per_label {
                            prop_assert_eq!(c.tp + c.fp + c.tn + c.fn_, y.len());
                        }
                    }
                    let correct = y.iter().zip(p.iter()).filter(|(a, b)| a == b).count();
                    let micro = correct as f64 / y.len() as f64;
                    prop_assert!((r.classification_error + micro - 1.0).abs() < 1e-12);
                }
            }

            #[test]
            fn confusion_row_sums_are_class_counts((y, p) in label_pairs()) {
                let m = confusion_matrix(&y, &p, 4).unwrap();
                for (r, row) in m.iter().enumerate() {
                    let want = y.iter().filter(|&&l| l == r).count();
                    prop_assert_eq!(row.iter().sum::<usize>(), want);
                }
            }
        }
    }
}
