//! Run configuration: datasets, classifiers, and the evaluation plan.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use tdabc::classifiers::ClassifierConfig;
use tdabc::dataset::{
    gen_circles, gen_moons, gen_normal_mixture, gen_sphere, gen_swissroll, load_csv, DatasetError,
    LabelColumn, LabeledDataset, NormalMixtureSpec,
};
use tdabc::evaluation::{CountMode, CvPlan};

fn default_output() -> PathBuf {
    PathBuf::from("results")
}

fn default_delimiter() -> char {
    ','
}

fn default_sphere_radius() -> f64 {
    0.3
}

/// Where one dataset comes from.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SourceSpec {
    Csv {
        path: PathBuf,
        #[serde(default)]
        label_column: LabelColumn,
        #[serde(default = "default_delimiter")]
        delimiter: char,
    },
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
        #[serde(default = "default_sphere_radius")]
        radius: f64,
        stdev: f64,
    },
}

impl SourceSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            SourceSpec::Csv { .. } => "csv",
            SourceSpec::Circles { .. } => "circles",
            SourceSpec::Moons { .. } => "moons",
            SourceSpec::Swissroll { .. } => "swissroll",
            SourceSpec::NormalMixture { .. } => "normal_mixture",
            SourceSpec::Sphere { .. } => "sphere",
        }
    }

    pub fn load(&self, seed: u64, base: &Path) -> Result<LabeledDataset, DatasetError> {
        match self {
            SourceSpec::Csv {
                path,
                label_column,
                delimiter,
            } => {
                let resolved = if path.is_absolute() {
                    path.clone()
                } else {
                    base.join(path)
                };
                load_csv(resolved, label_column, *delimiter as u8)
            }
            SourceSpec::Circles { n_samples, noise } => gen_circles(*n_samples, *noise, seed),
            SourceSpec::Moons { n_samples, noise } => gen_moons(*n_samples, *noise, seed),
            SourceSpec::Swissroll {
                n_samples,
                n_classes,
                noise,
            } => gen_swissroll(*n_samples, *n_classes, *noise, seed),
            SourceSpec::NormalMixture { spec } => gen_normal_mixture(spec, seed),
            SourceSpec::Sphere {
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
}

/// One dataset row of the run matrix.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DatasetEntry {
    #[serde(default)]
    pub name: Option<String>,
    #[serde(flatten)]
    pub source: SourceSpec,
}

impl DatasetEntry {
    pub fn display_name(&self) -> String {
        if let Some(n) = &self.name {
            return n.clone();
        }
        match &self.source {
            SourceSpec::Csv { path, .. } => path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "csv".into()),
            other => other.kind().to_string(),
        }
    }
}

/// Everything one `run` invocation needs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunConfig {
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_output")]
    pub output_dir: PathBuf,
    pub datasets: Vec<DatasetEntry>,
    pub classifiers: Vec<ClassifierConfig>,
    #[serde(default)]
    pub plan: CvPlan,
    #[serde(default)]
    pub count_mode: CountMode,
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), String> {
        if self.datasets.is_empty() {
            return Err("config field `datasets` must list at least one dataset".into());
        }
        if self.classifiers.is_empty() {
            return Err("config field `classifiers` must list at least one classifier".into());
        }
        self.plan
            .validate()
            .map_err(|e| format!("config field `plan` invalid: {e}"))
    }
}
