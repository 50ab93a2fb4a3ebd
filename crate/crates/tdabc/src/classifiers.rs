//! Classifiers: the three persistence-guided label-propagation variants and
//! the k-NN / weighted k-NN baselines, all behind one prediction interface.
//!
//! The propagation variants are transductive: one filtered complex is built
//! over train and test points together, persistence picks a sub-level, and
//! every test vertex is labeled through its link there. With edge collapse
//! enabled (the default) the complex is the clique expansion of the collapsed
//! 1-skeleton, which keeps high expansion dimensions tractable.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::{
    build_rips_from_distances, CollapseRounds, ComplexError, DistanceMatrix, FilteredComplex,
    Threshold, VertexId,
};
use crate::dataset::LabeledDataset;
use crate::persistence::{
    compute_persistence, select_interval, DiagramSet, PersistenceError, PersistenceInterval,
    Strategy,
};
use crate::propagation::{
    Fallback, LabelAssignment, LabelVector, LabelingContext, PropagationError, TrainLabels,
};

#[derive(Debug, Error)]
pub enum ClassifyError {
    #[error("training set is empty")]
    EmptyTrain,
    #[error("test set is empty")]
    EmptyTest,
    #[error("test point {index} has dimension {found}, train has {expected}")]
    DimensionMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("k = {k} exceeds the training size {train}")]
    KTooLarge { k: usize, train: usize },
    #[error("k must be at least 1")]
    KZero,
    #[error("configured kind {0:?} does not match this entry point")]
    WrongKind(ClassifierKind),
    #[error("no usable persistence interval in any dimension")]
    NoUsableInterval,
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Persistence(#[from] PersistenceError),
    #[error(transparent)]
    Propagation(#[from] PropagationError),
}

/// Classifier family selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClassifierKind {
    /// Persistence-guided propagation, random interval.
    TdabcR,
    /// Persistence-guided propagation, longest interval.
    TdabcM,
    /// Persistence-guided propagation, interval closest to the average life.
    TdabcA,
    Knn,
    Wknn,
}

impl ClassifierKind {
    pub fn strategy(&self) -> Option<Strategy> {
        match self {
            ClassifierKind::TdabcR => Some(Strategy::RandInt),
            ClassifierKind::TdabcM => Some(Strategy::MaxInt),
            ClassifierKind::TdabcA => Some(Strategy::AvgInt),
            _ => None,
        }
    }

    pub fn is_tdabc(&self) -> bool {
        self.strategy().is_some()
    }

    pub fn display_name(&self) -> &'static str {
        match self {
            ClassifierKind::TdabcR => "TDABC-R",
            ClassifierKind::TdabcM => "TDABC-M",
            ClassifierKind::TdabcA => "TDABC-A",
            ClassifierKind::Knn => "k-NN",
            ClassifierKind::Wknn => "wk-NN",
        }
    }
}

/// Which endpoint of the selected persistence interval picks the sub-level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum SublevelChoice {
    Birth,
    Middle,
    #[default]
    Death,
}

fn default_q() -> usize {
    3
}
fn default_k() -> usize {
    15
}
fn default_collapse() -> bool {
    true
}
fn default_threshold() -> Threshold {
    Threshold::Auto
}

/// Full configuration of one classifier run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClassifierConfig {
    pub kind: ClassifierKind,
    /// Maximal simplex dimension of the filtered complex.
    #[serde(default = "default_q")]
    pub q: usize,
    #[serde(default)]
    pub sublevel_choice: SublevelChoice,
    /// Neighbor count for the baselines.
    #[serde(default = "default_k")]
    pub k: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_collapse")]
    pub use_edge_collapse: bool,
    #[serde(default = "default_threshold")]
    pub max_filtration: Threshold,
}

impl ClassifierConfig {
    pub fn tdabc(kind: ClassifierKind, q: usize) -> Self {
        debug_assert!(kind.is_tdabc());
        Self {
            kind,
            q,
            sublevel_choice: SublevelChoice::default(),
            k: default_k(),
            seed: 0,
            use_edge_collapse: true,
            max_filtration: Threshold::Auto,
        }
    }

    pub fn baseline(kind: ClassifierKind, k: usize) -> Self {
        Self {
            kind,
            q: default_q(),
            sublevel_choice: SublevelChoice::default(),
            k,
            seed: 0,
            use_edge_collapse: true,
            max_filtration: Threshold::Auto,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

/// Predicted labels for one test set, aligned with its point order.
#[derive(Debug, Clone)]
pub struct PredictionResult {
    pub predicted: Vec<usize>,
    pub assignments: Vec<LabelAssignment>,
    pub chosen_interval: Option<PersistenceInterval>,
    pub chosen_epsilon: Option<f64>,
}

impl PredictionResult {
    /// CSV rows "index,true,predicted" against a matching truth vector.
    pub fn to_csv(&self, truth: &[usize]) -> String {
        let mut out = String::from("index,true,predicted\n");
        for (i, &p) in self.predicted.iter().enumerate() {
            let t = truth
                .get(i)
                .map(|t| t.to_string())
                .unwrap_or_else(|| "?".into());
            out.push_str(&format!("{i},{t},{p}\n"));
        }
        out
    }
}

/// Dispatches on the configured kind.
pub fn predict(
    train: &LabeledDataset,
    test: &[Vec<f64>],
    cfg: &ClassifierConfig,
) -> Result<PredictionResult, ClassifyError> {
    match cfg.kind {
        ClassifierKind::Knn => knn_predict(train, test, cfg.k),
        ClassifierKind::Wknn => wknn_predict(train, test, cfg.k),
        _ => tdabc_predict(train, test, cfg),
    }
}

fn validate_points(train: &LabeledDataset, test: &[Vec<f64>]) -> Result<(), ClassifyError> {
    if test.is_empty() {
        return Err(ClassifyError::EmptyTest);
    }
    let dims = train.dims();
    for (index, p) in test.iter().enumerate() {
        if p.len() != dims {
            return Err(ClassifyError::DimensionMismatch {
                index,
                expected: dims,
                found: p.len(),
            });
        }
    }
    Ok(())
}

/// Builds the transductive complex, computes persistence, selects an interval
/// by the configured strategy, and labels every test vertex in the resulting
/// sub-level.
pub fn tdabc_predict(
    train: &LabeledDataset,
    test: &[Vec<f64>],
    cfg: &ClassifierConfig,
) -> Result<PredictionResult, ClassifyError> {
    let Some(strategy) = cfg.kind.strategy() else {
        return Err(ClassifyError::WrongKind(cfg.kind));
    };
    if train.is_empty() {
        return Err(ClassifyError::EmptyTrain);
    }
    validate_points(train, test)?;

    let mut all_points = train.points.clone();
    all_points.extend(test.iter().cloned());
    let dm = DistanceMatrix::from_points(&all_points)?;
    if cfg.q >= all_points.len() {
        return Err(ClassifyError::Complex(ComplexError::MaxDimTooLarge {
            max_dim: cfg.q,
            points: all_points.len(),
        }));
    }

    let complex = build_complex(&dm, cfg)?;
    let mut diagrams = compute_persistence(&complex);
    // theta against the top of the uncollapsed filtration, so that collapsing
    // (which may drop the longest edges) does not move the transformation
    let threshold = cfg.max_filtration.resolve(&dm)?;
    diagrams.max_eps = dm.max_distance().min(threshold);

    let mut selection_rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let interval = choose_interval(&diagrams, strategy, &mut selection_rng)?;
    let eps = match cfg.sublevel_choice {
        SublevelChoice::Birth => interval.birth,
        SublevelChoice::Middle => (interval.birth + interval.death) / 2.0,
        SublevelChoice::Death => interval.death,
    };

    let labels = train_labels(train);
    let ctx = LabelingContext {
        complex: &complex,
        labels: &labels,
        distances: Some(&dm),
    };
    let mut predicted = Vec::with_capacity(test.len());
    let mut assignments = Vec::with_capacity(test.len());
    for i in 0..test.len() {
        let v = (train.len() + i) as VertexId;
        let mut rng = vertex_rng(cfg.seed, v);
        let a = ctx.label(v, eps, &mut rng)?;
        predicted.push(a.label);
        assignments.push(a);
    }
    Ok(PredictionResult {
        predicted,
        assignments,
        chosen_interval: Some(interval),
        chosen_epsilon: Some(eps),
    })
}

fn train_labels(train: &LabeledDataset) -> TrainLabels {
    TrainLabels::from_pairs(
        &train
            .labels
            .iter()
            .enumerate()
            .map(|(i, &l)| (i as VertexId, l))
            .collect::<Vec<_>>(),
        train.num_labels(),
    )
}

fn vertex_rng(seed: u64, v: VertexId) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ (u64::from(v) + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// 1-skeleton (optionally collapsed) expanded to dimension q.
fn build_complex(
    dm: &DistanceMatrix,
    cfg: &ClassifierConfig,
) -> Result<FilteredComplex, ClassifyError> {
    if cfg.use_edge_collapse {
        let skeleton = build_rips_from_distances(dm, 1, cfg.max_filtration, None)?;
        let rounds = CollapseRounds::Rounds(cfg.q.div_ceil(3));
        let collapsed = skeleton.one_skeleton().collapse_edges(rounds)?;
        Ok(collapsed.expansion(cfg.q)?)
    } else {
        Ok(build_rips_from_distances(
            dm,
            cfg.q,
            cfg.max_filtration,
            None,
        )?)
    }
}

/// Persistence diagrams of a full point set under a classifier's complex
/// settings (collapse path, dimension cap, theta anchor), for dumps and
/// barcode rendering.
pub fn dataset_diagrams(
    points: &[Vec<f64>],
    cfg: &ClassifierConfig,
) -> Result<DiagramSet, ClassifyError> {
    let dm = DistanceMatrix::from_points(points)?;
    if cfg.q >= points.len() {
        return Err(ClassifyError::Complex(ComplexError::MaxDimTooLarge {
            max_dim: cfg.q,
            points: points.len(),
        }));
    }
    let complex = build_complex(&dm, cfg)?;
    let mut diagrams = compute_persistence(&complex);
    let threshold = cfg.max_filtration.resolve(&dm)?;
    diagrams.max_eps = dm.max_distance().min(threshold);
    Ok(diagrams)
}

/// Walks diagram dimensions from the top until a strategy finds a positive
/// interval; zero-life-only dimensions are skipped.
fn choose_interval(
    diagrams: &DiagramSet,
    strategy: Strategy,
    rng: &mut ChaCha8Rng,
) -> Result<PersistenceInterval, ClassifyError> {
    let mut dims: Vec<usize> = (1..diagrams.dimensions()).rev().collect();
    dims.push(0);
    for dim in dims {
        let diagram = diagrams.diagram(dim);
        if diagram.is_empty() {
            continue;
        }
        match select_interval(diagram, strategy, diagrams.max_eps, rng) {
            Ok(d) => return Ok(d),
            Err(PersistenceError::EmptySelection) => continue,
            Err(e) => return Err(e.into()),
        }
    }
    Err(ClassifyError::NoUsableInterval)
}

/// Neighbor indices of one test point among the training points, sorted by
/// (distance, index); ties in distance resolve to the smaller index.
fn nearest_neighbors(train: &LabeledDataset, point: &[f64], k: usize) -> Vec<(usize, f64)> {
    let mut dist: Vec<(usize, f64)> = train
        .points
        .iter()
        .enumerate()
        .map(|(i, p)| (i, crate::complex::euclidean(p, point)))
        .collect();
    dist.sort_by(|a, b| a.1.partial_cmp(&b.1).expect("finite").then(a.0.cmp(&b.0)));
    dist.truncate(k);
    dist
}

fn vote_result(scores: LabelVector, k: usize) -> LabelAssignment {
    let argmax = scores.argmax_set();
    let was_tie = argmax.len() > 1;
    let label = argmax[0];
    let probabilities = scores.normalized();
    LabelAssignment {
        label,
        scores,
        probabilities,
        was_tie,
        fallback_used: Fallback::None,
        link_size: k,
    }
}

/// Majority vote over the k nearest training points; vote ties go to the
/// smallest label id.
pub fn knn_predict(
    train: &LabeledDataset,
    test: &[Vec<f64>],
    k: usize,
) -> Result<PredictionResult, ClassifyError> {
    if train.is_empty() {
        return Err(ClassifyError::EmptyTrain);
    }
    validate_points(train, test)?;
    if k == 0 {
        return Err(ClassifyError::KZero);
    }
    if k > train.len() {
        return Err(ClassifyError::KTooLarge {
            k,
            train: train.len(),
        });
    }
    let mut predicted = Vec::with_capacity(test.len());
    let mut assignments = Vec::with_capacity(test.len());
    for point in test {
        let mut scores = LabelVector::zero(train.num_labels());
        for (i, _) in nearest_neighbors(train, point, k) {
            scores.bump(train.labels[i], 1.0);
        }
        let a = vote_result(scores, k);
        predicted.push(a.label);
        assignments.push(a);
    }
    Ok(PredictionResult {
        predicted,
        assignments,
        chosen_interval: None,
        chosen_epsilon: None,
    })
}

/// Distance-weighted k-NN: each neighbor votes with 1/distance; an exact
/// coincidence dominates the vote outright.
pub fn wknn_predict(
    train: &LabeledDataset,
    test: &[Vec<f64>],
    k: usize,
) -> Result<PredictionResult, ClassifyError> {
    if train.is_empty() {
        return Err(ClassifyError::EmptyTrain);
    }
    validate_points(train, test)?;
    if k == 0 {
        return Err(ClassifyError::KZero);
    }
    if k > train.len() {
        return Err(ClassifyError::KTooLarge {
            k,
            train: train.len(),
        });
    }
    let mut predicted = Vec::with_capacity(test.len());
    let mut assignments = Vec::with_capacity(test.len());
    for point in test {
        let neighbors = nearest_neighbors(train, point, k);
        let coincident: Vec<usize> = neighbors
            .iter()
            .filter(|(_, d)| *d == 0.0)
            .map(|(i, _)| *i)
            .collect();
        let mut scores = LabelVector::zero(train.num_labels());
        if coincident.is_empty() {
            for (i, d) in neighbors {
                scores.bump(train.labels[i], 1.0 / d);
            }
        } else {
            for i in coincident {
                scores.bump(train.labels[i], 1.0);
            }
        }
        let a = vote_result(scores, k);
        predicted.push(a.label);
        assignments.push(a);
    }
    Ok(PredictionResult {
        predicted,
        assignments,
        chosen_interval: None,
        chosen_epsilon: None,
    })
}
