//! Labeled point-cloud datasets: synthetic generators, CSV ingestion, manifests.
//!
//! Generators are pure functions of (parameters, seed); the same pair always
//! reproduces the same dataset bit for bit. Noise factors are scale-relative:
//! circles and moons (unit extent) add per-coordinate Gaussian noise with
//! standard deviation `noise / 10`, the swiss roll uses `noise / 100` of its
//! outer roll radius. Raw-stdev entry points bypass the factor convention.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("need at least {need} samples, got {got}")]
    TooFewSamples { need: usize, got: usize },
    #[error("{what} must be positive")]
    NotPositive { what: &'static str },
    #[error("sample count {n} not divisible by class count {classes}")]
    NotDivisible { n: usize, classes: usize },
    #[error("invalid mixture spec: {0}")]
    InvalidSpec(String),
    #[error("dataset is empty")]
    Empty,
    #[error("point {index} has dimension {found}, expected {expected}")]
    DimensionMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("label {label} out of range for {num_labels} classes")]
    LabelOutOfRange { label: usize, num_labels: usize },
    #[error("points and labels differ in length: {points} vs {labels}")]
    LengthMismatch { points: usize, labels: usize },
    #[error("row {row}: {message}")]
    MalformedRow { row: usize, message: String },
    #[error("row {row}, column {column}: cannot parse feature value {value:?}")]
    NonNumericFeature {
        row: usize,
        column: String,
        value: String,
    },
    #[error("label column {0:?} not found")]
    LabelColumnNotFound(String),
    #[error("file has no data rows")]
    EmptyFile,
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

/// Points in R^n with one dense label id per point.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LabeledDataset {
    pub name: String,
    pub points: Vec<Vec<f64>>,
    pub labels: Vec<usize>,
    num_labels: usize,
    pub label_names: Option<Vec<String>>,
}

impl LabeledDataset {
    pub fn new(
        name: impl Into<String>,
        points: Vec<Vec<f64>>,
        labels: Vec<usize>,
        label_names: Option<Vec<String>>,
    ) -> Result<Self, DatasetError> {
        let num_labels = labels.iter().copied().max().map_or(0, |m| m + 1);
        Self::with_declared_labels(name, points, labels, num_labels, label_names)
    }

    /// Like [`LabeledDataset::new`] but with an explicit class count, so a
    /// slice missing some class keeps the full label space.
    pub fn with_declared_labels(
        name: impl Into<String>,
        points: Vec<Vec<f64>>,
        labels: Vec<usize>,
        num_labels: usize,
        label_names: Option<Vec<String>>,
    ) -> Result<Self, DatasetError> {
        if points.is_empty() {
            return Err(DatasetError::Empty);
        }
        if points.len() != labels.len() {
            return Err(DatasetError::LengthMismatch {
                points: points.len(),
                labels: labels.len(),
            });
        }
        let dims = points[0].len();
        if dims == 0 {
            return Err(DatasetError::NotPositive { what: "dimension" });
        }
        for (index, p) in points.iter().enumerate() {
            if p.len() != dims {
                return Err(DatasetError::DimensionMismatch {
                    index,
                    expected: dims,
                    found: p.len(),
                });
            }
        }
        for &l in &labels {
            if l >= num_labels {
                return Err(DatasetError::LabelOutOfRange {
                    label: l,
                    num_labels,
                });
            }
        }
        Ok(Self {
            name: name.into(),
            points,
            labels,
            num_labels,
            label_names,
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dims(&self) -> usize {
        self.points[0].len()
    }

    pub fn num_labels(&self) -> usize {
        self.num_labels
    }

    pub fn class_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.num_labels];
        for &l in &self.labels {
            counts[l] += 1;
        }
        counts
    }

    /// New dataset from a subset of indices, keeping the declared label space.
    pub fn subset(&self, indices: &[usize], name: impl Into<String>) -> Self {
        let points = indices.iter().map(|&i| self.points[i].clone()).collect();
        let labels = indices.iter().map(|&i| self.labels[i]).collect();
        Self {
            name: name.into(),
            points,
            labels,
            num_labels: self.num_labels,
            label_names: self.label_names.clone(),
        }
    }
}

/// Parameters of a per-class isotropic normal mixture.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NormalMixtureSpec {
    pub dims: usize,
    pub sizes: Vec<usize>,
    pub means: Vec<f64>,
    /// One shared value or one per class.
    pub stdevs: Vec<f64>,
}

impl NormalMixtureSpec {
    pub fn shared_stdev(dims: usize, sizes: Vec<usize>, means: Vec<f64>, stdev: f64) -> Self {
        Self {
            dims,
            sizes,
            means,
            stdevs: vec![stdev],
        }
    }

    pub fn validate(&self) -> Result<(), DatasetError> {
        if self.sizes.is_empty() {
            return Err(DatasetError::InvalidSpec("no classes".into()));
        }
        if self.dims == 0 {
            return Err(DatasetError::NotPositive { what: "dims" });
        }
        if self.sizes.len() != self.means.len() {
            return Err(DatasetError::InvalidSpec(format!(
                "{} sizes vs {} means",
                self.sizes.len(),
                self.means.len()
            )));
        }
        if self.stdevs.len() != 1 && self.stdevs.len() != self.sizes.len() {
            return Err(DatasetError::InvalidSpec(format!(
                "{} stdevs for {} classes",
                self.stdevs.len(),
                self.sizes.len()
            )));
        }
        if self.sizes.contains(&0) {
            return Err(DatasetError::InvalidSpec("class size 0".into()));
        }
        if self.stdevs.iter().any(|s| !s.is_finite() || *s <= 0.0) {
            return Err(DatasetError::InvalidSpec("stdev must be positive".into()));
        }
        Ok(())
    }

    pub fn stdev_of(&self, class: usize) -> f64 {
        if self.stdevs.len() == 1 {
            self.stdevs[0]
        } else {
            self.stdevs[class]
        }
    }

    pub fn total(&self) -> usize {
        self.sizes.iter().sum()
    }
}

fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn add_noise<R: Rng>(points: &mut [Vec<f64>], stdev: f64, rng: &mut R) {
    if stdev <= 0.0 {
        return;
    }
    let normal = Normal::new(0.0, stdev).expect("finite stdev");
    for p in points {
        for x in p.iter_mut() {
            *x += normal.sample(rng);
        }
    }
}

/// Two concentric circles (radii 1 and 0.5), evenly split between labels
/// {0, 1}; `noise` is the scale-relative factor described at module level.
pub fn gen_circles(
    n_samples: usize,
    noise: f64,
    seed: u64,
) -> Result<LabeledDataset, DatasetError> {
    gen_circles_with_stdev(n_samples, noise / 10.0, seed)
}

/// Circles generator taking the raw per-coordinate noise stdev.
pub fn gen_circles_with_stdev(
    n_samples: usize,
    stdev: f64,
    seed: u64,
) -> Result<LabeledDataset, DatasetError> {
    if n_samples < 2 {
        return Err(DatasetError::TooFewSamples {
            need: 2,
            got: n_samples,
        });
    }
    if stdev < 0.0 {
        return Err(DatasetError::NotPositive { what: "noise" });
    }
    let n_outer = n_samples - n_samples / 2;
    let n_inner = n_samples / 2;
    let mut points = Vec::with_capacity(n_samples);
    let mut labels = Vec::with_capacity(n_samples);
    for (count, radius, label) in [(n_outer, 1.0, 0usize), (n_inner, 0.5, 1usize)] {
        for i in 0..count {
            let angle = 2.0 * PI * i as f64 / count as f64;
            points.push(vec![radius * angle.cos(), radius * angle.sin()]);
            labels.push(label);
        }
    }
    let mut rng = rng_for(seed);
    add_noise(&mut points, stdev, &mut rng);
    LabeledDataset::new("circles", points, labels, None)
}

/// Two interleaving half circles: the upper arc of the unit circle (label 0)
/// and the lower arc shifted by (1, 0.5) (label 1). Points sit at the
/// midpoints of equal arc segments before noise.
pub fn gen_moons(n_samples: usize, noise: f64, seed: u64) -> Result<LabeledDataset, DatasetError> {
    gen_moons_with_stdev(n_samples, noise / 10.0, seed)
}

pub fn gen_moons_with_stdev(
    n_samples: usize,
    stdev: f64,
    seed: u64,
) -> Result<LabeledDataset, DatasetError> {
    if n_samples < 2 {
        return Err(DatasetError::TooFewSamples {
            need: 2,
            got: n_samples,
        });
    }
    if stdev < 0.0 {
        return Err(DatasetError::NotPositive { what: "noise" });
    }
    let n_upper = n_samples - n_samples / 2;
    let n_lower = n_samples / 2;
    let mut points = Vec::with_capacity(n_samples);
    let mut labels = Vec::with_capacity(n_samples);
    for i in 0..n_upper {
        let t = PI * (i as f64 + 0.5) / n_upper as f64;
        points.push(vec![t.cos(), t.sin()]);
        labels.push(0);
    }
    for i in 0..n_lower {
        let t = PI * (i as f64 + 0.5) / n_lower as f64;
        points.push(vec![1.0 + t.cos(), 0.5 - t.sin()]);
        labels.push(1);
    }
    let mut rng = rng_for(seed);
    add_noise(&mut points, stdev, &mut rng);
    LabeledDataset::new("moons", points, labels, None)
}

const SWISSROLL_T_MIN: f64 = 1.5 * PI;
const SWISSROLL_T_MAX: f64 = 4.5 * PI;
const SWISSROLL_HEIGHT: f64 = 21.0;

/// A rolled 2-D sheet in R^3: (t cos t, height, t sin t) with the roll
/// parameter split into contiguous equal-size class bands.
pub fn gen_swissroll(
    n_samples: usize,
    n_classes: usize,
    noise: f64,
    seed: u64,
) -> Result<LabeledDataset, DatasetError> {
    if n_classes == 0 {
        return Err(DatasetError::NotPositive { what: "n_classes" });
    }
    if n_samples == 0 {
        return Err(DatasetError::TooFewSamples {
            need: n_classes,
            got: 0,
        });
    }
    if !n_samples.is_multiple_of(n_classes) {
        return Err(DatasetError::NotDivisible {
            n: n_samples,
            classes: n_classes,
        });
    }
    if noise < 0.0 {
        return Err(DatasetError::NotPositive { what: "noise" });
    }
    let per_class = n_samples / n_classes;
    let band = (SWISSROLL_T_MAX - SWISSROLL_T_MIN) / n_classes as f64;
    let mut rng = rng_for(seed);
    let mut points = Vec::with_capacity(n_samples);
    let mut labels = Vec::with_capacity(n_samples);
    for class in 0..n_classes {
        let lo = SWISSROLL_T_MIN + class as f64 * band;
        for _ in 0..per_class {
            let t = rng.gen_range(lo..lo + band);
            let y = rng.gen_range(0.0..SWISSROLL_HEIGHT);
            points.push(vec![t * t.cos(), y, t * t.sin()]);
            labels.push(class);
        }
    }
    let stdev = noise / 100.0 * SWISSROLL_T_MAX;
    add_noise(&mut points, stdev, &mut rng);
    LabeledDataset::new("swissroll", points, labels, None)
}

/// Per-class isotropic Gaussians: class c draws `sizes[c]` points with every
/// coordinate Normal(`means[c]`, `stdev_of(c)`).
pub fn gen_normal_mixture(
    spec: &NormalMixtureSpec,
    seed: u64,
) -> Result<LabeledDataset, DatasetError> {
    spec.validate()?;
    let mut rng = rng_for(seed);
    let mut points = Vec::with_capacity(spec.total());
    let mut labels = Vec::with_capacity(spec.total());
    for (class, &size) in spec.sizes.iter().enumerate() {
        let normal = Normal::new(spec.means[class], spec.stdev_of(class))
            .map_err(|e| DatasetError::InvalidSpec(e.to_string()))?;
        for _ in 0..size {
            points.push((0..spec.dims).map(|_| normal.sample(&mut rng)).collect());
            labels.push(class);
        }
    }
    LabeledDataset::new("normal_mixture", points, labels, None)
}

/// Evenly spread unit-sphere directions (Fibonacci lattice).
pub fn sphere_directions(n: usize) -> Vec<[f64; 3]> {
    let golden_angle = PI * (3.0 - 5.0f64.sqrt());
    (0..n)
        .map(|i| {
            let y = if n == 1 {
                0.0
            } else {
                1.0 - 2.0 * (i as f64 + 0.5) / n as f64
            };
            let r = (1.0 - y * y).max(0.0).sqrt();
            let phi = golden_angle * i as f64;
            [r * phi.cos(), y, r * phi.sin()]
        })
        .collect()
}

/// 3-D Gaussian blobs centered on sphere points: class c sits at
/// `means[c] * direction_c` with isotropic `stdev_of(c)` noise.
pub fn gen_sphere(spec: &NormalMixtureSpec, seed: u64) -> Result<LabeledDataset, DatasetError> {
    spec.validate()?;
    if spec.dims != 3 {
        return Err(DatasetError::InvalidSpec(format!(
            "sphere datasets are 3-D, got dims = {}",
            spec.dims
        )));
    }
    let directions = sphere_directions(spec.sizes.len());
    let mut rng = rng_for(seed);
    let mut points = Vec::with_capacity(spec.total());
    let mut labels = Vec::with_capacity(spec.total());
    for (class, &size) in spec.sizes.iter().enumerate() {
        let center = directions[class].map(|x| x * spec.means[class]);
        let normal = Normal::new(0.0, spec.stdev_of(class))
            .map_err(|e| DatasetError::InvalidSpec(e.to_string()))?;
        for _ in 0..size {
            points.push(
                center
                    .iter()
                    .map(|&c| c + normal.sample(&mut rng))
                    .collect(),
            );
            labels.push(class);
        }
    }
    LabeledDataset::new("sphere", points, labels, None)
}

/// Which CSV column holds the label.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum LabelColumn {
    Index(usize),
    Name(String),
    #[default]
    Last,
}

/// Loads a delimited file into a dataset. The header row is optional (it is
/// detected by non-numeric feature fields) unless the label column is given
/// by name. Labels are re-encoded to dense ids in first-appearance order,
/// keeping the original strings as label names.
pub fn load_csv(
    path: impl AsRef<Path>,
    label_column: &LabelColumn,
    delimiter: u8,
) -> Result<LabeledDataset, DatasetError> {
    let raw = std::fs::read_to_string(&path)?;
    let name = path
        .as_ref()
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "csv".into());
    parse_csv(&raw, &name, label_column, delimiter)
}

fn parse_csv(
    raw: &str,
    name: &str,
    label_column: &LabelColumn,
    delimiter: u8,
) -> Result<LabeledDataset, DatasetError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .delimiter(delimiter)
        .flexible(true)
        .from_reader(raw.as_bytes());
    let mut rows: Vec<Vec<String>> = Vec::new();
    for record in reader.records() {
        let record = record?;
        let fields: Vec<String> = record.iter().map(|f| f.trim().to_string()).collect();
        if fields.iter().all(|f| f.is_empty()) {
            continue;
        }
        rows.push(fields);
    }
    if rows.is_empty() {
        return Err(DatasetError::EmptyFile);
    }

    let arity = rows[0].len();
    if arity < 2 {
        return Err(DatasetError::MalformedRow {
            row: 1,
            message: format!("need at least 2 columns, got {arity}"),
        });
    }

    let mut header: Option<Vec<String>> = None;
    let label_idx = match label_column {
        LabelColumn::Index(i) => {
            if *i >= arity {
                return Err(DatasetError::LabelColumnNotFound(i.to_string()));
            }
            *i
        }
        LabelColumn::Last => arity - 1,
        LabelColumn::Name(n) => {
            header = Some(rows[0].clone());
            rows[0]
                .iter()
                .position(|h| h == n)
                .ok_or_else(|| DatasetError::LabelColumnNotFound(n.clone()))?
        }
    };

    // optional header: when the first row's feature fields do not all parse
    // as numbers, treat it as column names
    if header.is_none() {
        let looks_like_header = rows[0]
            .iter()
            .enumerate()
            .any(|(i, f)| i != label_idx && f.parse::<f64>().is_err());
        if looks_like_header {
            header = Some(rows[0].clone());
        }
    }
    let data_start = usize::from(header.is_some());
    if rows.len() <= data_start {
        return Err(DatasetError::EmptyFile);
    }

    let column_name = |i: usize| -> String {
        header
            .as_ref()
            .and_then(|h| h.get(i).cloned())
            .unwrap_or_else(|| format!("column {i}"))
    };

    let mut points = Vec::with_capacity(rows.len() - data_start);
    let mut labels = Vec::with_capacity(rows.len() - data_start);
    let mut label_ids: HashMap<String, usize> = HashMap::new();
    let mut label_names: Vec<String> = Vec::new();
    for (offset, fields) in rows[data_start..].iter().enumerate() {
        let row_number = data_start + offset + 1;
        if fields.len() != arity {
            return Err(DatasetError::MalformedRow {
                row: row_number,
                message: format!("expected {arity} fields, got {}", fields.len()),
            });
        }
        let mut point = Vec::with_capacity(arity - 1);
        for (i, field) in fields.iter().enumerate() {
            if i == label_idx {
                continue;
            }
            let value: f64 = field.parse().map_err(|_| DatasetError::NonNumericFeature {
                row: row_number,
                column: column_name(i),
                value: field.clone(),
            })?;
            if !value.is_finite() {
                return Err(DatasetError::NonNumericFeature {
                    row: row_number,
                    column: column_name(i),
                    value: field.clone(),
                });
            }
            point.push(value);
        }
        let raw_label = &fields[label_idx];
        let next = label_ids.len();
        let id = *label_ids.entry(raw_label.clone()).or_insert_with(|| {
            label_names.push(raw_label.clone());
            next
        });
        points.push(point);
        labels.push(id);
    }
    LabeledDataset::new(name, points, labels, Some(label_names))
}

/// Writes a dataset as delimited text: features, then the label (by name when
/// names exist), with an optional header row.
pub fn save_csv(
    ds: &LabeledDataset,
    path: impl AsRef<Path>,
    delimiter: u8,
    header: bool,
) -> Result<(), DatasetError> {
    let mut out = String::new();
    let sep = char::from(delimiter);
    if header {
        for i in 0..ds.dims() {
            out.push_str(&format!("f{i}{sep}"));
        }
        out.push_str("label\n");
    }
    for (point, &label) in ds.points.iter().zip(ds.labels.iter()) {
        for x in point {
            out.push_str(&format!("{x}{sep}"));
        }
        match &ds.label_names {
            Some(names) => out.push_str(&names[label]),
            None => out.push_str(&label.to_string()),
        }
        out.push('\n');
    }
    std::fs::write(path, out)?;
    Ok(())
}

/// Sidecar description of a generated dataset.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DatasetManifest {
    pub name: String,
    pub dims: usize,
    pub classes: usize,
    pub sizes: Vec<usize>,
    pub seed: u64,
    pub generator: String,
    pub params: serde_json::Value,
}

impl DatasetManifest {
    pub fn describe(
        ds: &LabeledDataset,
        seed: u64,
        generator: &str,
        params: serde_json::Value,
    ) -> Self {
        Self {
            name: ds.name.clone(),
            dims: ds.dims(),
            classes: ds.num_labels(),
            sizes: ds.class_counts(),
            seed,
            generator: generator.into(),
            params,
        }
    }
}

/// Serializable recipe for one synthetic dataset.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GeneratorSpec {
    Circles {
        n_samples: usize,
        noise: f64,
    },
    Moons {
        n_samples: usize,
        noise: f64,
    },
    Swissroll {
        n_samples: usize,
        n_classes: usize,
        noise: f64,
    },
    NormalMixture {
        spec: NormalMixtureSpec,
    },
    Sphere {
        sizes: Vec<usize>,
        /// Distance of the class centers from the origin.
        #[serde(default = "default_sphere_radius")]
        radius: f64,
        stdev: f64,
    },
}

fn default_sphere_radius() -> f64 {
    0.3
}

impl GeneratorSpec {
    pub fn generate(&self, seed: u64) -> Result<LabeledDataset, DatasetError> {
        match self {
            GeneratorSpec::Circles { n_samples, noise } => gen_circles(*n_samples, *noise, seed),
            GeneratorSpec::Moons { n_samples, noise } => gen_moons(*n_samples, *noise, seed),
            GeneratorSpec::Swissroll {
                n_samples,
                n_classes,
                noise,
            } => gen_swissroll(*n_samples, *n_classes, *noise, seed),
            GeneratorSpec::NormalMixture { spec } => gen_normal_mixture(spec, seed),
            GeneratorSpec::Sphere {
                sizes,
                radius,
                stdev,
            } => {
                let spec = NormalMixtureSpec::shared_stdev(
                    3,
                    sizes.clone(),
                    vec![*radius; sizes.len()],
                    *stdev,
                );
                gen_sphere(&spec, seed)
            }
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            GeneratorSpec::Circles { .. } => "circles",
            GeneratorSpec::Moons { .. } => "moons",
            GeneratorSpec::Swissroll { .. } => "swissroll",
            GeneratorSpec::NormalMixture { .. } => "normal_mixture",
            GeneratorSpec::Sphere { .. } => "sphere",
        }
    }
}
