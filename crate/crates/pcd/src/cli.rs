//! The `pcd` command-line driver.
//!
//! Every subcommand is a thin orchestration over the library: inputs are
//! validated up front, all randomness flows from `--seed` (or the
//! `PCD_SEED` environment variable), outputs are written atomically and
//! embed the resolved configuration, the seed and the library version,
//! so re-running any output's embedded configuration reproduces it.
//!
//! Options may also come from a flat `key=value` configuration file via
//! `--config`; explicit flags win over file entries.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::classify::{self, Alternative, CoverKind, TrainParams, TrainedModel};
use crate::data::{load_csv, Dataset, LabelColumn};
use crate::domination::{composite_mds, greedy_mds, standard_mds, PrototypeSet};
use crate::error::{Error, Result};
use crate::eval::{
    self, five_by_two_cv, pca_reduce, plot_series, ClassifierKind, ClassifierSpec, SimSetting,
    SimSpec, SimTable,
};
use crate::export;
use crate::geometry::{delaunay_tessellate, TessellationParams};
use crate::proximity::build_cccd;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser, Debug)]
#[command(
    name = "pcd",
    version,
    about = "Proximity catch digraph class covers and classifiers"
)]
pub struct Cli {
    /// Flat key=value configuration file; flags override its entries.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Master seed; falls back to the PCD_SEED environment variable,
    /// then to 0.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Evaluation profile: `ci` runs short, `full` chases the tight
    /// standard-error target.
    #[arg(long, global = true)]
    pub profile: Option<String>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Delaunay-tessellate one class of points and export the geometry.
    Tessellate(TessellateArgs),
    /// Minimum dominating set of a target class against the rest.
    Mds(MdsArgs),
    /// Train class covers and write a model file.
    Train(TrainArgs),
    /// Predict labels for a CSV with a trained model.
    Predict(PredictArgs),
    /// Evaluate a trained model against labeled data.
    Evaluate(EvaluateArgs),
    /// Run a Monte Carlo simulation campaign.
    Simulate(SimulateArgs),
    /// Pilot parameter search for one classifier.
    Tune(TuneArgs),
    /// PCA-reduce a dataset.
    Pca(PcaArgs),
    /// Export trained covers as plot-ready geometry.
    ExportCover(ExportCoverArgs),
    /// 5x2 cross-validation comparison of two classifiers.
    CrossValidate(CrossValidateArgs),
}

#[derive(Args, Debug)]
pub struct TessellateArgs {
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long)]
    pub label_column: Option<String>,
    /// Tessellate only this class (default: all rows).
    #[arg(long)]
    pub class: Option<String>,
    #[arg(long)]
    pub no_header: bool,
    #[arg(long)]
    pub output: PathBuf,
}

#[derive(Args, Debug)]
pub struct MdsArgs {
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long)]
    pub label_column: Option<String>,
    /// Target class name; the remaining rows are the non-target class.
    #[arg(long)]
    pub target_class: Option<String>,
    /// Separate non-target CSV for single-class target files.
    #[arg(long)]
    pub nontarget_data: Option<PathBuf>,
    #[arg(long)]
    pub no_header: bool,
    /// standard | composite | greedy
    #[arg(long)]
    pub kind: Option<String>,
    #[arg(long)]
    pub r: Option<f64>,
    #[arg(long)]
    pub theta: Option<f64>,
    #[arg(long)]
    pub output: PathBuf,
}

#[derive(Args, Debug)]
pub struct TrainArgs {
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long)]
    pub label_column: Option<String>,
    #[arg(long)]
    pub no_header: bool,
    /// standard | composite | spherical
    #[arg(long)]
    pub cover: Option<String>,
    #[arg(long)]
    pub r: Option<f64>,
    #[arg(long)]
    pub theta: Option<f64>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub output: PathBuf,
}

#[derive(Args, Debug)]
pub struct PredictArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub data: PathBuf,
    /// Ignore this column in the feature matrix (e.g. a label column).
    #[arg(long)]
    pub label_column: Option<String>,
    #[arg(long)]
    pub no_header: bool,
    /// cover | pe-knn | pe-cccd | cccd | knn
    #[arg(long)]
    pub classifier: Option<String>,
    #[arg(long)]
    pub output: PathBuf,
}

#[derive(Args, Debug)]
pub struct EvaluateArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long)]
    pub label_column: Option<String>,
    #[arg(long)]
    pub no_header: bool,
    #[arg(long)]
    pub classifier: Option<String>,
    #[arg(long)]
    pub output: PathBuf,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    #[arg(long)]
    pub d: Option<usize>,
    /// overlap | nested | separated
    #[arg(long)]
    pub setting: Option<String>,
    #[arg(long)]
    pub zeta: Option<f64>,
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub n0: Option<usize>,
    #[arg(long)]
    pub q: Option<f64>,
    /// Expansion grid: `start:stop:step` or a comma list.
    #[arg(long)]
    pub r_grid: Option<String>,
    #[arg(long)]
    pub theta: Option<f64>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub test_per_class: Option<usize>,
    #[arg(long)]
    pub se_target: Option<f64>,
    #[arg(long)]
    pub min_replicates: Option<usize>,
    #[arg(long)]
    pub max_replicates: Option<usize>,
    /// Comma list of classifiers (default: all six).
    #[arg(long)]
    pub classifiers: Option<String>,
    /// Long-format CSV output.
    #[arg(long)]
    pub output: PathBuf,
    /// Optional NDJSON mirror of the result rows.
    #[arg(long)]
    pub ndjson: Option<PathBuf>,
    /// Optional per-figure plot series JSON.
    #[arg(long)]
    pub plot_data: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct TuneArgs {
    /// knn | cccd | standard-cover | composite-cover | pe-knn | pe-cccd
    #[arg(long)]
    pub classifier: Option<String>,
    /// Candidate grid, `start:stop:step` or comma list.
    #[arg(long)]
    pub grid: Option<String>,
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long)]
    pub setting: Option<String>,
    #[arg(long)]
    pub zeta: Option<f64>,
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub n0: Option<usize>,
    #[arg(long)]
    pub q: Option<f64>,
    #[arg(long)]
    pub theta: Option<f64>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub replicates: Option<usize>,
    #[arg(long)]
    pub output: PathBuf,
}

#[derive(Args, Debug)]
pub struct PcaArgs {
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long)]
    pub label_column: Option<String>,
    #[arg(long)]
    pub no_header: bool,
    #[arg(long)]
    pub dim: Option<usize>,
    /// Reduced CSV output.
    #[arg(long)]
    pub output: PathBuf,
    /// Optional fitted-projection JSON.
    #[arg(long)]
    pub model: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ExportCoverArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub output: PathBuf,
    /// Optional SVG rendering (two-dimensional models only).
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CrossValidateArgs {
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long)]
    pub label_column: Option<String>,
    #[arg(long)]
    pub no_header: bool,
    /// First classifier, e.g. `standard-cover`.
    #[arg(long)]
    pub classifier_a: Option<String>,
    /// Second classifier, e.g. `knn`.
    #[arg(long)]
    pub classifier_b: Option<String>,
    #[arg(long)]
    pub r: Option<f64>,
    #[arg(long)]
    pub theta: Option<f64>,
    #[arg(long)]
    pub k: Option<usize>,
    /// Fit PCA to this dimension inside each training fold.
    #[arg(long)]
    pub pca_dim: Option<usize>,
    #[arg(long)]
    pub output: PathBuf,
}

/// Flat key=value configuration file: one `key=value` per line, `#`
/// comments allowed.
#[derive(Debug, Default, Clone)]
pub struct FileConfig {
    map: BTreeMap<String, String>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let mut map = BTreeMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return Err(Error::InvalidConfig(format!(
                    "{}:{}: expected key=value",
                    path.display(),
                    lineno + 1
                )));
            };
            map.insert(k.trim().to_string(), v.trim().to_string());
        }
        Ok(FileConfig { map })
    }

    fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>> {
        match self.map.get(key) {
            None => Ok(None),
            Some(raw) => raw.parse::<T>().map(Some).map_err(|_| {
                Error::InvalidConfig(format!("config key {key}: cannot parse {raw:?}"))
            }),
        }
    }
}

/// Effective settings recorded into every artifact.
#[derive(Debug, Default)]
struct Provenance {
    entries: BTreeMap<String, String>,
}

impl Provenance {
    fn set(&mut self, key: &str, value: impl std::fmt::Display) {
        self.entries.insert(key.into(), value.to_string());
    }

    fn json(&self, seed: u64) -> serde_json::Value {
        json!({
            "version": VERSION,
            "seed": seed,
            "config": self.entries,
        })
    }

    fn csv_comments(&self, seed: u64) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# version={VERSION}");
        let _ = writeln!(out, "# seed={seed}");
        for (k, v) in &self.entries {
            let _ = writeln!(out, "# config.{k}={v}");
        }
        out
    }
}

/// Runs the CLI; the binary maps the error class to its exit code.
pub fn run(cli: Cli) -> Result<()> {
    let file_cfg = match &cli.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    let seed = match cli.seed {
        Some(s) => s,
        None => match file_cfg.get::<u64>("seed")? {
            Some(s) => s,
            None => std::env::var("PCD_SEED")
                .ok()
                .and_then(|v| v.parse().ok())
                .unwrap_or(0),
        },
    };
    let profile = resolve(cli.profile.clone(), &file_cfg, "profile", "ci".to_string())?;
    if profile != "ci" && profile != "full" {
        return Err(Error::InvalidConfig(format!(
            "profile must be ci or full, got {profile}"
        )));
    }
    match &cli.command {
        Command::Tessellate(args) => cmd_tessellate(args, &file_cfg, seed),
        Command::Mds(args) => cmd_mds(args, &file_cfg, seed),
        Command::Train(args) => cmd_train(args, &file_cfg, seed),
        Command::Predict(args) => cmd_predict(args, &file_cfg, seed),
        Command::Evaluate(args) => cmd_evaluate(args, &file_cfg, seed),
        Command::Simulate(args) => cmd_simulate(args, &file_cfg, seed, &profile),
        Command::Tune(args) => cmd_tune(args, &file_cfg, seed),
        Command::Pca(args) => cmd_pca(args, &file_cfg, seed),
        Command::ExportCover(args) => cmd_export_cover(args, seed),
        Command::CrossValidate(args) => cmd_cross_validate(args, &file_cfg, seed),
    }
}

fn resolve<T: FromStr + Clone>(
    flag: Option<T>,
    cfg: &FileConfig,
    key: &str,
    default: T,
) -> Result<T> {
    if let Some(v) = flag {
        return Ok(v);
    }
    Ok(cfg.get::<T>(key)?.unwrap_or(default))
}

fn label_column(name: &Option<String>, no_header: bool) -> LabelColumn {
    match name {
        None => LabelColumn::None,
        Some(n) => {
            if no_header {
                match n.parse::<usize>() {
                    Ok(i) => LabelColumn::Index(i),
                    Err(_) => LabelColumn::Name(n.clone()),
                }
            } else {
                LabelColumn::Name(n.clone())
            }
        }
    }
}

/// Writes atomically: a sibling temporary file is renamed over the
/// target only after the full payload is on disk.
fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let tmp = path.with_extension(format!(
        "{}tmp{}",
        path.extension()
            .map(|e| format!("{}.", e.to_string_lossy()))
            .unwrap_or_default(),
        std::process::id()
    ));
    std::fs::write(&tmp, contents)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let spec = spec.trim();
    if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').collect();
        if parts.len() != 3 {
            return Err(Error::InvalidConfig(format!(
                "grid {spec:?} must be start:stop:step"
            )));
        }
        let start: f64 = parts[0]
            .parse()
            .map_err(|_| Error::InvalidConfig(format!("bad grid start {:?}", parts[0])))?;
        let stop: f64 = parts[1]
            .parse()
            .map_err(|_| Error::InvalidConfig(format!("bad grid stop {:?}", parts[1])))?;
        let step: f64 = parts[2]
            .parse()
            .map_err(|_| Error::InvalidConfig(format!("bad grid step {:?}", parts[2])))?;
        if step <= 0.0 || stop < start {
            return Err(Error::InvalidConfig(format!("empty grid {spec:?}")));
        }
        let mut out = Vec::new();
        let mut v = start;
        while v <= stop + 1e-9 {
            out.push((v * 1e9).round() / 1e9);
            v += step;
        }
        Ok(out)
    } else {
        spec.split(',')
            .map(|s| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::InvalidConfig(format!("bad grid value {s:?}")))
            })
            .collect()
    }
}

fn load_dataset(
    data: &Path,
    label: &Option<String>,
    no_header: bool,
    min_classes: usize,
) -> Result<Dataset> {
    let ds = load_csv(data, &label_column(label, no_header), !no_header)?;
    if ds.n_classes() < min_classes {
        return Err(Error::InvalidConfig(format!(
            "need at least {min_classes} classes, found {}",
            ds.n_classes()
        )));
    }
    Ok(ds)
}

fn class_index(ds: &Dataset, name: &str) -> Result<usize> {
    ds.class_names
        .iter()
        .position(|c| c == name)
        .ok_or_else(|| Error::InvalidConfig(format!("class {name:?} not present in the data")))
}

// ---------------------------------------------------------------------
// Subcommands.
// ---------------------------------------------------------------------

fn cmd_tessellate(args: &TessellateArgs, _cfg: &FileConfig, seed: u64) -> Result<()> {
    let ds = load_dataset(&args.data, &args.label_column, args.no_header, 1)?;
    let points = match &args.class {
        Some(name) => ds.class_points(class_index(&ds, name)?),
        None => ds.points.clone(),
    };
    let params = TessellationParams {
        seed,
        ..TessellationParams::default()
    };
    let tess = delaunay_tessellate(&points, &params)?;
    let mut prov = Provenance::default();
    prov.set("command", "tessellate");
    prov.set("data", args.data.display());
    if let Some(c) = &args.class {
        prov.set("class", c);
    }
    let out = json!({
        "meta": prov.json(seed),
        "tessellation": export::tessellation_json(&tess),
        "cell_count": tess.cell_count(),
        "outer_count": tess.outer_count(),
    });
    write_atomic(&args.output, &serde_json::to_string_pretty(&out)?)
}

fn cmd_mds(args: &MdsArgs, cfg: &FileConfig, seed: u64) -> Result<()> {
    let kind = resolve(args.kind.clone(), cfg, "kind", "standard".to_string())?;
    let r = resolve(args.r, cfg, "r", 2.0)?;
    let theta = resolve(args.theta, cfg, "theta", 1.0)?;
    let ds = load_dataset(&args.data, &args.label_column, args.no_header, 1)?;
    let (targets, nontargets) = match (&args.target_class, &args.nontarget_data) {
        (Some(name), None) => {
            let ti = class_index(&ds, name)?;
            (ds.class_points(ti), ds.complement_points(ti))
        }
        (target, Some(nt_path)) => {
            let nt = load_dataset(nt_path, &args.label_column, args.no_header, 1)?;
            let targets = match target {
                Some(name) => ds.class_points(class_index(&ds, name)?),
                None => ds.points.clone(),
            };
            (targets, nt.points)
        }
        (None, None) => {
            if ds.n_classes() < 2 {
                return Err(Error::InvalidConfig(
                    "single-class data needs --nontarget-data".into(),
                ));
            }
            (ds.class_points(0), ds.complement_points(0))
        }
    };
    if nontargets.is_empty() {
        return Err(Error::EmptyNonTarget);
    }

    let mut prov = Provenance::default();
    prov.set("command", "mds");
    prov.set("data", args.data.display());
    prov.set("kind", &kind);
    prov.set("r", r);
    prov.set("theta", theta);

    let (set, n_targets): (PrototypeSet, usize) = match kind.as_str() {
        "greedy" => {
            let (digraph, radii) = build_cccd(&targets, &nontargets, theta)?;
            let selected = greedy_mds(&digraph);
            let mut set = PrototypeSet::default();
            for i in selected {
                set.prototypes.push(crate::domination::Prototype {
                    target_id: i,
                    region: crate::domination::RegionHandle::Ball(
                        crate::proximity::BallRegion {
                            center: targets[i].clone(),
                            radius: radii[i],
                            theta,
                        },
                    ),
                    provenance: crate::domination::Provenance::OuterGreedy,
                });
            }
            (set, targets.len())
        }
        "standard" | "composite" => {
            let params = TessellationParams {
                seed,
                ..TessellationParams::default()
            };
            let tess = delaunay_tessellate(&nontargets, &params)?;
            let set = if kind == "standard" {
                standard_mds(&targets, &tess, r)
            } else {
                composite_mds(&targets, &nontargets, &tess, r, theta)?
            };
            (set, targets.len())
        }
        other => {
            return Err(Error::InvalidConfig(format!(
                "kind must be standard, composite or greedy, got {other:?}"
            )))
        }
    };

    let out = json!({
        "meta": prov.json(seed),
        "prototypes": set.target_ids(),
        "per_cell_gamma": set.per_cell_gamma,
        "per_outer_gamma": set.per_outer_gamma,
        "reduction": set.reduction(n_targets),
    });
    write_atomic(&args.output, &serde_json::to_string_pretty(&out)?)
}

fn parse_cover_kind(s: &str) -> Result<CoverKind> {
    match s {
        "standard" => Ok(CoverKind::Standard),
        "composite" => Ok(CoverKind::Composite),
        "spherical" => Ok(CoverKind::Spherical),
        other => Err(Error::InvalidConfig(format!(
            "cover must be standard, composite or spherical, got {other:?}"
        ))),
    }
}

fn cmd_train(args: &TrainArgs, cfg: &FileConfig, seed: u64) -> Result<()> {
    let cover = resolve(args.cover.clone(), cfg, "cover", "standard".to_string())?;
    let r = resolve(args.r, cfg, "r", 2.0)?;
    let theta = resolve(args.theta, cfg, "theta", 1.0)?;
    let k = resolve(args.k, cfg, "k", 1)?;
    let ds = load_dataset(&args.data, &args.label_column, args.no_header, 2)?;
    let params = TrainParams {
        r,
        theta,
        k,
        cover: parse_cover_kind(&cover)?,
        tol: crate::DEFAULT_TOL,
        seed,
    };
    let model = classify::train(&ds, &params)?;
    write_atomic(&args.output, &model.to_json()?)
}

fn load_model(path: &Path) -> Result<TrainedModel> {
    TrainedModel::from_json(&std::fs::read_to_string(path)?)
}

fn model_predict(model: &TrainedModel, classifier: &str, z: &crate::geometry::Point) -> Result<usize> {
    let label = match classifier {
        "cover" => model.cover_classify(z).label,
        "pe-knn" => model.hybrid_classify(z, Alternative::Knn).label,
        "pe-cccd" => model.hybrid_classify(z, Alternative::Cccd).label,
        "cccd" => model.cccd_classify(z).label,
        "knn" => Some(classify::knn_classify(&model.train, z, model.params.k)),
        other => {
            return Err(Error::InvalidConfig(format!(
                "classifier must be cover, pe-knn, pe-cccd, cccd or knn, got {other:?}"
            )))
        }
    };
    Ok(label.expect("classifiers always decide"))
}

fn cmd_predict(args: &PredictArgs, cfg: &FileConfig, seed: u64) -> Result<()> {
    let classifier = resolve(
        args.classifier.clone(),
        cfg,
        "classifier",
        "cover".to_string(),
    )?;
    let model = load_model(&args.model)?;
    let ds = load_dataset(&args.data, &args.label_column, args.no_header, 1)?;
    let mut prov = Provenance::default();
    prov.set("command", "predict");
    prov.set("model", args.model.display());
    prov.set("data", args.data.display());
    prov.set("classifier", &classifier);

    let mut out = prov.csv_comments(seed);
    out.push_str("row,label_index,label\n");
    for (i, z) in ds.points.iter().enumerate() {
        let label = model_predict(&model, &classifier, z)?;
        let _ = writeln!(out, "{i},{label},{}", model.class_names[label]);
    }
    write_atomic(&args.output, &out)
}

fn cmd_evaluate(args: &EvaluateArgs, cfg: &FileConfig, seed: u64) -> Result<()> {
    let classifier = resolve(
        args.classifier.clone(),
        cfg,
        "classifier",
        "cover".to_string(),
    )?;
    let model = load_model(&args.model)?;
    let ds = load_dataset(&args.data, &args.label_column, args.no_header, 2)?;
    if ds.class_names != model.class_names {
        return Err(Error::InvalidConfig(format!(
            "class names {:?} do not match the model's {:?}",
            ds.class_names, model.class_names
        )));
    }
    let preds: Vec<usize> = ds
        .points
        .iter()
        .map(|z| model_predict(&model, &classifier, z))
        .collect::<Result<_>>()?;
    let metrics = eval::evaluate(&preds, &ds.labels, model.n_classes())?;
    let mut prov = Provenance::default();
    prov.set("command", "evaluate");
    prov.set("model", args.model.display());
    prov.set("data", args.data.display());
    prov.set("classifier", &classifier);
    let out = json!({
        "meta": prov.json(seed),
        "auc": metrics.auc,
        "ccr_per_class": metrics.ccr_per_class,
        "n": ds.len(),
    });
    write_atomic(&args.output, &serde_json::to_string_pretty(&out)?)
}

fn sim_setting(
    setting: &str,
    zeta: f64,
    delta: f64,
) -> Result<SimSetting> {
    match setting {
        "overlap" => Ok(SimSetting::Overlap { zeta }),
        "nested" => Ok(SimSetting::Nested),
        "separated" => Ok(SimSetting::Separated { delta }),
        other => Err(Error::InvalidConfig(format!(
            "setting must be overlap, nested or separated, got {other:?}"
        ))),
    }
}

fn cmd_simulate(args: &SimulateArgs, cfg: &FileConfig, seed: u64, profile: &str) -> Result<()> {
    let d = resolve(args.d, cfg, "d", 2)?;
    let setting_name = resolve(args.setting.clone(), cfg, "setting", "overlap".to_string())?;
    let zeta = resolve(args.zeta, cfg, "zeta", 0.5)?;
    let delta = resolve(args.delta, cfg, "delta", 0.2)?;
    let n0 = resolve(args.n0, cfg, "n0", 400)?;
    let q = resolve(args.q, cfg, "q", 1.0)?;
    let r_grid_spec = resolve(args.r_grid.clone(), cfg, "r_grid", "2.0".to_string())?;
    let theta = resolve(args.theta, cfg, "theta", 1.0)?;
    let k = resolve(args.k, cfg, "k", 1)?;
    let test_per_class = resolve(args.test_per_class, cfg, "test_per_class", 100)?;
    let (default_se, default_cap) = if profile == "full" {
        (0.0005, 10_000)
    } else {
        (0.005, 200)
    };
    let se_target = resolve(args.se_target, cfg, "se_target", default_se)?;
    let min_replicates = resolve(args.min_replicates, cfg, "min_replicates", 20)?;
    let max_replicates = resolve(args.max_replicates, cfg, "max_replicates", default_cap)?;
    let classifiers_spec = resolve(
        args.classifiers.clone(),
        cfg,
        "classifiers",
        ClassifierKind::ALL
            .iter()
            .map(|k| k.name())
            .collect::<Vec<_>>()
            .join(","),
    )?;
    let classifiers: Vec<ClassifierKind> = classifiers_spec
        .split(',')
        .map(|s| {
            ClassifierKind::parse(s.trim())
                .ok_or_else(|| Error::InvalidConfig(format!("unknown classifier {s:?}")))
        })
        .collect::<Result<_>>()?;

    let spec = SimSpec {
        d,
        setting: sim_setting(&setting_name, zeta, delta)?,
        n0,
        q,
        r_grid: parse_grid(&r_grid_spec)?,
        theta,
        k,
        test_per_class,
        se_target,
        min_replicates,
        max_replicates,
        seed,
    };
    let table = eval::run_simulation(&spec, &classifiers)?;

    let mut prov = Provenance::default();
    prov.set("command", "simulate");
    prov.set("d", d);
    prov.set("setting", &setting_name);
    prov.set("zeta", zeta);
    prov.set("delta", delta);
    prov.set("n0", n0);
    prov.set("q", q);
    prov.set("r_grid", &r_grid_spec);
    prov.set("theta", theta);
    prov.set("k", k);
    prov.set("test_per_class", test_per_class);
    prov.set("se_target", se_target);
    prov.set("min_replicates", min_replicates);
    prov.set("max_replicates", max_replicates);
    prov.set("classifiers", &classifiers_spec);
    prov.set("profile", profile);

    write_atomic(&args.output, &sim_table_csv(&table, &prov, seed))?;
    if let Some(path) = &args.ndjson {
        let mut out = serde_json::to_string(&json!({"meta": prov.json(seed)}))?;
        out.push('\n');
        for row in &table.rows {
            out.push_str(&serde_json::to_string(row)?);
            out.push('\n');
        }
        write_atomic(path, &out)?;
    }
    if let Some(path) = &args.plot_data {
        let series = plot_series(&table);
        let out = json!({"meta": prov.json(seed), "series": series});
        write_atomic(path, &serde_json::to_string_pretty(&out)?)?;
    }
    Ok(())
}

fn sim_table_csv(table: &SimTable, prov: &Provenance, seed: u64) -> String {
    let mut out = prov.csv_comments(seed);
    out.push_str("classifier,r,q,d,metric,value,se,replicates,capped\n");
    for row in &table.rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            row.classifier,
            row.r,
            row.q,
            row.d,
            row.metric,
            row.value,
            row.se,
            row.replicates,
            row.capped
        );
    }
    out
}

fn cmd_tune(args: &TuneArgs, cfg: &FileConfig, seed: u64) -> Result<()> {
    let classifier_name = resolve(args.classifier.clone(), cfg, "classifier", "cccd".to_string())?;
    let classifier = ClassifierKind::parse(&classifier_name)
        .ok_or_else(|| Error::InvalidConfig(format!("unknown classifier {classifier_name:?}")))?;
    let grid_spec = resolve(args.grid.clone(), cfg, "grid", "0:1:0.1".to_string())?;
    let d = resolve(args.d, cfg, "d", 2)?;
    let setting_name = resolve(args.setting.clone(), cfg, "setting", "overlap".to_string())?;
    let zeta = resolve(args.zeta, cfg, "zeta", 0.5)?;
    let delta = resolve(args.delta, cfg, "delta", 0.2)?;
    let n0 = resolve(args.n0, cfg, "n0", 100)?;
    let q = resolve(args.q, cfg, "q", 1.0)?;
    let theta = resolve(args.theta, cfg, "theta", 1.0)?;
    let k = resolve(args.k, cfg, "k", 1)?;
    let replicates = resolve(args.replicates, cfg, "replicates", 50)?;

    let spec = SimSpec {
        d,
        setting: sim_setting(&setting_name, zeta, delta)?,
        n0,
        q,
        theta,
        k,
        max_replicates: replicates,
        seed,
        ..SimSpec::default()
    };
    let grid = parse_grid(&grid_spec)?;
    let result = eval::tune(&spec, classifier, &grid)?;

    let mut prov = Provenance::default();
    prov.set("command", "tune");
    prov.set("classifier", &classifier_name);
    prov.set("grid", &grid_spec);
    prov.set("d", d);
    prov.set("setting", &setting_name);
    prov.set("zeta", zeta);
    prov.set("n0", n0);
    prov.set("q", q);
    prov.set("replicates", replicates);
    let out = json!({
        "meta": prov.json(seed),
        "candidates": result.candidates,
        "counts": result.counts,
        "best": result.best,
    });
    write_atomic(&args.output, &serde_json::to_string_pretty(&out)?)
}

fn cmd_pca(args: &PcaArgs, cfg: &FileConfig, seed: u64) -> Result<()> {
    let dim = resolve(args.dim, cfg, "dim", 2)?;
    let ds = load_dataset(&args.data, &args.label_column, args.no_header, 1)?;
    let (reduced, pca) = pca_reduce(&ds, dim)?;
    let mut prov = Provenance::default();
    prov.set("command", "pca");
    prov.set("data", args.data.display());
    prov.set("dim", dim);

    let mut out = prov.csv_comments(seed);
    let cols: Vec<String> = (0..reduced.dim()).map(|i| format!("pc{}", i + 1)).collect();
    let _ = writeln!(out, "{},label", cols.join(","));
    for (p, &label) in reduced.points.iter().zip(&reduced.labels) {
        let coords: Vec<String> = p.coords.iter().map(|c| c.to_string()).collect();
        let _ = writeln!(out, "{},{}", coords.join(","), reduced.class_names[label]);
    }
    write_atomic(&args.output, &out)?;
    if let Some(path) = &args.model {
        let out = json!({
            "meta": prov.json(seed),
            "mean": pca.mean,
            "components": pca.components,
            "eigenvalues": pca.eigenvalues,
            "explained_variance_ratio": pca.explained_variance_ratio(),
        });
        write_atomic(path, &serde_json::to_string_pretty(&out)?)?;
    }
    Ok(())
}

fn cmd_export_cover(args: &ExportCoverArgs, seed: u64) -> Result<()> {
    let model = load_model(&args.model)?;
    let covers = export::export_covers(&model);
    let mut prov = Provenance::default();
    prov.set("command", "export-cover");
    prov.set("model", args.model.display());
    let out = json!({"meta": prov.json(seed), "covers": covers});
    write_atomic(&args.output, &serde_json::to_string_pretty(&out)?)?;
    if let Some(path) = &args.svg {
        if model.train.dim() != 2 {
            return Err(Error::InvalidConfig(
                "SVG export is only available for two-dimensional models".into(),
            ));
        }
        write_atomic(path, &export::covers_svg(&model, 640)?)?;
    }
    Ok(())
}

fn cmd_cross_validate(args: &CrossValidateArgs, cfg: &FileConfig, seed: u64) -> Result<()> {
    let a_name = resolve(
        args.classifier_a.clone(),
        cfg,
        "classifier_a",
        "standard-cover".to_string(),
    )?;
    let b_name = resolve(args.classifier_b.clone(), cfg, "classifier_b", "knn".to_string())?;
    let r = resolve(args.r, cfg, "r", 2.0)?;
    let theta = resolve(args.theta, cfg, "theta", 1.0)?;
    let k = resolve(args.k, cfg, "k", 1)?;
    let ds = load_dataset(&args.data, &args.label_column, args.no_header, 2)?;

    let make_spec = |name: &str| -> Result<ClassifierSpec> {
        let kind = ClassifierKind::parse(name)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown classifier {name:?}")))?;
        Ok(ClassifierSpec {
            kind,
            r,
            theta,
            k,
            pca_dim: args.pca_dim,
        })
    };
    let result = five_by_two_cv(&ds, &make_spec(&a_name)?, &make_spec(&b_name)?, seed)?;

    let mut prov = Provenance::default();
    prov.set("command", "cross-validate");
    prov.set("data", args.data.display());
    prov.set("classifier_a", &a_name);
    prov.set("classifier_b", &b_name);
    prov.set("r", r);
    prov.set("theta", theta);
    prov.set("k", k);
    if let Some(dim) = args.pca_dim {
        prov.set("pca_dim", dim);
    }
    let out = json!({
        "meta": prov.json(seed),
        "auc_a": result.auc_a,
        "auc_b": result.auc_b,
        "diffs": result.diffs,
        "t_stat": result.t_stat,
        "t_p": result.t_p,
        "f_stat": result.f_stat,
        "f_p": result.f_p,
        "fold_assignments": result.fold_assignments,
    });
    write_atomic(&args.output, &serde_json::to_string_pretty(&out)?)
}

impl Error {
    /// Validation failures exit with status 2, runtime failures with 1.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::InvalidConfig(_)
                | Error::ParseError { .. }
                | Error::MissingLabel(_)
                | Error::NonNumericFeature { .. }
                | Error::NonFiniteFeature { .. }
                | Error::DimensionTooLarge(_)
                | Error::ModelFormat(_)
                | Error::Csv(_)
        )
    }
}
