//! Command-line driver: generate datasets, run evaluations, render reports.

mod config;
mod report;
mod runner;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use tdabc::classifiers::{ClassifierKind, SublevelChoice};
use tdabc::dataset::{save_csv, DatasetManifest, GeneratorSpec, NormalMixtureSpec};
use tdabc::evaluation::CountMode;

use config::RunConfig;

/// A failure with the exit code it maps to: 2 for user/config problems,
/// 1 for anything internal.
#[derive(Debug)]
pub struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    pub fn user(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }

    pub fn internal(message: impl Into<String>) -> Self {
        Self {
            code: 1,
            message: message.into(),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "tdabc",
    version,
    about = "Label propagation over Vietoris-Rips filtrations guided by persistent homology, \
             with k-NN baselines, dataset generators, and a cross-validation harness"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a synthetic dataset as CSV plus a JSON manifest
    Generate(GenerateArgs),
    /// Evaluate datasets x classifiers under repeated cross-validation
    Run(RunArgs),
    /// Aggregate run results into tables and SVG figures
    Report(ReportArgs),
}

#[derive(Args)]
struct GenerateArgs {
    #[command(subcommand)]
    generator: GenCmd,
}

#[derive(Args)]
struct GenCommon {
    /// Output CSV path; the manifest lands next to it with a .json extension
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = ',')]
    delimiter: char,
    /// Omit the header row
    #[arg(long)]
    no_header: bool,
}

#[derive(Subcommand)]
enum GenCmd {
    /// Two concentric circles, labels 0 (outer) and 1 (inner)
    Circles {
        #[arg(long, default_value_t = 50)]
        samples: usize,
        #[arg(long, default_value_t = 3.0)]
        noise: f64,
        #[command(flatten)]
        common: GenCommon,
    },
    /// Two interleaving half circles
    Moons {
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 10.0)]
        noise: f64,
        #[command(flatten)]
        common: GenCommon,
    },
    /// A rolled sheet in 3-D with contiguous class bands
    Swissroll {
        #[arg(long, default_value_t = 300)]
        samples: usize,
        #[arg(long, default_value_t = 6)]
        classes: usize,
        #[arg(long, default_value_t = 10.0)]
        noise: f64,
        #[command(flatten)]
        common: GenCommon,
    },
    /// Per-class isotropic Gaussians in arbitrary dimension
    NormalMixture {
        #[arg(long, default_value_t = 350)]
        dims: usize,
        #[arg(long, value_delimiter = ',', default_value = "60,10,50,100,80")]
        sizes: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "0,0.3,0.18,0.67,0")]
        means: Vec<f64>,
        #[arg(long, default_value_t = 0.486)]
        stdev: f64,
        #[command(flatten)]
        common: GenCommon,
    },
    /// 3-D Gaussian blobs centered on evenly spread sphere points
    Sphere {
        #[arg(long, value_delimiter = ',', default_value = "500,100,25,16,12")]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 0.3)]
        radius: f64,
        #[arg(long, default_value_t = 0.147)]
        stdev: f64,
        #[command(flatten)]
        common: GenCommon,
    },
}

#[derive(Args)]
struct RunArgs {
    /// Run configuration (JSON)
    #[arg(long)]
    config: PathBuf,
    /// Override the configured output directory
    #[arg(long)]
    out: Option<PathBuf>,
    /// Parallel job cap (default: all cores)
    #[arg(long)]
    jobs: Option<usize>,
    /// Override the global seed
    #[arg(long)]
    seed: Option<u64>,
    /// Override the maximal simplex dimension of every propagation classifier
    #[arg(long)]
    q: Option<usize>,
    /// Override the neighbor count of every baseline
    #[arg(long)]
    k: Option<usize>,
    /// Force every propagation classifier onto one interval strategy
    #[arg(long, value_parser = ["R", "M", "A"])]
    strategy: Option<String>,
    /// Override the sub-level endpoint
    #[arg(long, value_parser = ["birth", "middle", "death"])]
    sublevel: Option<String>,
    #[arg(long)]
    folds_fraction: Option<f64>,
    #[arg(long)]
    repeats: Option<usize>,
    #[arg(long, value_parser = ["paper", "standard"])]
    count_mode: Option<String>,
    /// Enable or disable edge collapse for the propagation classifiers
    #[arg(long)]
    collapse: Option<bool>,
}

#[derive(Args)]
struct ReportArgs {
    /// Directory produced by `run`
    #[arg(long)]
    results: PathBuf,
    /// Where to put the aggregate tables and figures (default: <results>/report)
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Cmd::Generate(args) => cmd_generate(args),
        Cmd::Run(args) => cmd_run(args),
        Cmd::Report(args) => report::cmd_report(
            &args.results,
            &args.out.unwrap_or_else(|| args.results.join("report")),
        ),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn cmd_generate(args: GenerateArgs) -> Result<(), Failure> {
    let (spec, common) = match args.generator {
        GenCmd::Circles {
            samples,
            noise,
            common,
        } => (
            GeneratorSpec::Circles {
                n_samples: samples,
                noise,
            },
            common,
        ),
        GenCmd::Moons {
            samples,
            noise,
            common,
        } => (
            GeneratorSpec::Moons {
                n_samples: samples,
                noise,
            },
            common,
        ),
        GenCmd::Swissroll {
            samples,
            classes,
            noise,
            common,
        } => (
            GeneratorSpec::Swissroll {
                n_samples: samples,
                n_classes: classes,
                noise,
            },
            common,
        ),
        GenCmd::NormalMixture {
            dims,
            sizes,
            means,
            stdev,
            common,
        } => (
            GeneratorSpec::NormalMixture {
                spec: NormalMixtureSpec::shared_stdev(dims, sizes, means, stdev),
            },
            common,
        ),
        GenCmd::Sphere {
            sizes,
            radius,
            stdev,
            common,
        } => (
            GeneratorSpec::Sphere {
                sizes,
                radius,
                stdev,
            },
            common,
        ),
    };
    let ds = spec
        .generate(common.seed)
        .map_err(|e| Failure::user(e.to_string()))?;
    save_csv(&ds, &common.out, common.delimiter as u8, !common.no_header)
        .map_err(|e| Failure::internal(format!("writing {}: {e}", common.out.display())))?;
    let params = serde_json::to_value(&spec)
        .map_err(|e| Failure::internal(format!("manifest params: {e}")))?;
    let manifest = DatasetManifest::describe(&ds, common.seed, spec.kind(), params);
    let manifest_path = common.out.with_extension("json");
    let body = serde_json::to_string_pretty(&manifest)
        .map_err(|e| Failure::internal(format!("manifest: {e}")))?;
    std::fs::write(&manifest_path, body)
        .map_err(|e| Failure::internal(format!("writing {}: {e}", manifest_path.display())))?;
    println!(
        "wrote {} ({} rows) and {}",
        common.out.display(),
        ds.len(),
        manifest_path.display()
    );
    Ok(())
}

fn cmd_run(args: RunArgs) -> Result<(), Failure> {
    if let Some(jobs) = args.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| Failure::internal(format!("thread pool: {e}")))?;
    }
    let raw = std::fs::read_to_string(&args.config)
        .map_err(|e| Failure::user(format!("reading {}: {e}", args.config.display())))?;
    let mut config: RunConfig = serde_json::from_str(&raw)
        .map_err(|e| Failure::user(format!("parsing {}: {e}", args.config.display())))?;
    apply_overrides(&mut config, &args)?;
    let config_dir = args
        .config
        .parent()
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("."));
    runner::cmd_run(&config, &config_dir)
}

fn apply_overrides(config: &mut RunConfig, args: &RunArgs) -> Result<(), Failure> {
    if let Some(out) = &args.out {
        config.output_dir = out.clone();
    }
    if let Some(seed) = args.seed {
        config.seed = seed;
        config.plan.seed = seed;
    } else if config.plan.seed == 0 {
        config.plan.seed = config.seed;
    }
    if let Some(fraction) = args.folds_fraction {
        config.plan.fold_fraction = fraction;
    }
    if let Some(repeats) = args.repeats {
        config.plan.repeats = repeats;
    }
    if let Some(mode) = &args.count_mode {
        config.count_mode = match mode.as_str() {
            "paper" => CountMode::Paper,
            "standard" => CountMode::Standard,
            other => return Err(Failure::user(format!("unknown count mode {other:?}"))),
        };
    }
    let strategy_kind = match args.strategy.as_deref() {
        None => None,
        Some("R") => Some(ClassifierKind::TdabcR),
        Some("M") => Some(ClassifierKind::TdabcM),
        Some("A") => Some(ClassifierKind::TdabcA),
        Some(other) => return Err(Failure::user(format!("unknown strategy {other:?}"))),
    };
    let sublevel = match args.sublevel.as_deref() {
        None => None,
        Some("birth") => Some(SublevelChoice::Birth),
        Some("middle") => Some(SublevelChoice::Middle),
        Some("death") => Some(SublevelChoice::Death),
        Some(other) => return Err(Failure::user(format!("unknown sublevel {other:?}"))),
    };
    for clf in &mut config.classifiers {
        if let Some(q) = args.q {
            clf.q = q;
        }
        if let Some(k) = args.k {
            clf.k = k;
        }
        if let Some(collapse) = args.collapse {
            clf.use_edge_collapse = collapse;
        }
        if let Some(sub) = sublevel {
            clf.sublevel_choice = sub;
        }
        if clf.kind.is_tdabc() {
            if let Some(kind) = strategy_kind {
                clf.kind = kind;
            }
        }
    }
    Ok(())
}
