// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! The `netfit` command-line tool.

use std::collections::{BTreeMap, HashSet};
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use crate::classify::{run_task, Classifier, EvalConfig, EvalReport, Task};
use crate::dataset::{DatasetRow, DatasetTable, Domain};
use crate::fitting::{fit_model, FitConfig, FitReport, ModelKind};
use crate::generators::{generate, GenerationRequest};
use crate::gof::{correlation_matrix, mean_distance_matrix, pca_project};
use crate::graph::{parse_edge_list, Graph};
use crate::metrics::feature_vector;
use crate::pipeline::{network_seed, run_pipeline, NetworkInput, PipelineConfig};
use crate::seed::derive_named;
use crate::stability::{stability_run, DEFAULT_REPLICATES};

#[derive(Debug, Parser)]
#[command(
    name = "netfit",
    version,
    about = "Fit, generate and compare network models"
)]
pub struct Cli {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Master seed; a random one is drawn and printed when omitted.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output file (measure, fit, generate) or directory (other commands).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// `key = value` file providing defaults for any flag.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Measure edge-list files into a feature CSV.
    Measure { paths: Vec<PathBuf> },
    /// Fit one model (or `all`) to an edge list and print the fit reports.
    Fit {
        path: PathBuf,
        #[arg(long)]
        model: Option<String>,
        /// Generated graphs per candidate parameter.
        #[arg(long)]
        replicates: Option<usize>,
        /// Candidate evaluations per fit.
        #[arg(long)]
        budget: Option<usize>,
    },
    /// Generate a graph from a generation request or a fit report (JSON).
    Generate { spec: PathBuf },
    /// Fit, generate and measure every network listed in a manifest CSV
    /// (`name,path,domain`).
    Pipeline {
        manifest: PathBuf,
        #[arg(long)]
        replicates: Option<usize>,
        #[arg(long)]
        budget: Option<usize>,
        #[arg(long)]
        model: Option<String>,
    },
    /// Canberra distance matrices, metric correlations and PCA of a dataset CSV.
    Gof { dataset: PathBuf },
    /// Fit the models to an edge list and summarize replicate metrics.
    Stability {
        path: PathBuf,
        #[arg(long)]
        replicates: Option<usize>,
        #[arg(long)]
        model: Option<String>,
        #[arg(long)]
        budget: Option<usize>,
    },
    /// Cross-validated classification of a dataset CSV.
    Classify {
        dataset: PathBuf,
        #[arg(long)]
        task: Option<String>,
        /// `tree`, `forest` or `both`.
        #[arg(long)]
        model: Option<String>,
        #[arg(long)]
        folds: Option<usize>,
        #[arg(long)]
        domain: Option<String>,
        #[arg(long)]
        trees: Option<usize>,
    },
}

const CONFIG_KEYS: [&str; 11] = [
    "seed",
    "out",
    "jobs",
    "replicates",
    "fit_replicates",
    "budget",
    "model",
    "task",
    "folds",
    "domain",
    "trees",
];

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_config(text: &str) -> anyhow::Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| anyhow!("config line {}: expected key = value", i + 1))?;
        let key = key.trim().replace('-', "_");
        if !CONFIG_KEYS.contains(&key.as_str()) {
            bail!("config line {}: unknown key {key:?}", i + 1);
        }
        map.insert(key, value.trim().to_string());
    }
    Ok(map)
}

struct Settings {
    file: BTreeMap<String, String>,
}

impl Settings {
    fn get<T: std::str::FromStr>(&self, flag: Option<T>, key: &str) -> anyhow::Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.file.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|e| anyhow!("config key {key}: {e}")),
        }
    }
}

fn read_graph(path: &Path) -> anyhow::Result<Graph> {
    let text = fs::read_to_string(path).with_context(|| format!("{}", path.display()))?;
    parse_edge_list(&text).with_context(|| format!("{}", path.display()))
}

fn stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

fn parse_models(spec: Option<&str>) -> anyhow::Result<Vec<ModelKind>> {
    match spec {
        None | Some("all") => Ok(ModelKind::ALL.to_vec()),
        Some(list) => list
            .split(',')
            .map(|m| m.trim().parse::<ModelKind>().map_err(Into::into))
            .collect(),
    }
}

fn write_output(out: Option<&Path>, bytes: &[u8]) -> anyhow::Result<()> {
    match out {
        Some(p) => {
            if let Some(parent) = p.parent().filter(|p| !p.as_os_str().is_empty()) {
                fs::create_dir_all(parent)?;
            }
            fs::write(p, bytes).with_context(|| format!("{}", p.display()))
        }
        None => {
            std::io::stdout().write_all(bytes)?;
            Ok(())
        }
    }
}

fn out_dir(out: Option<PathBuf>) -> anyhow::Result<PathBuf> {
    let dir = out.ok_or_else(|| anyhow!("--out <DIR> is required for this command"))?;
    fs::create_dir_all(&dir).with_context(|| format!("{}", dir.display()))?;
    Ok(dir)
}

fn json(value: &impl serde::Serialize) -> anyhow::Result<Vec<u8>> {
    let mut bytes = serde_json::to_vec_pretty(value)?;
    bytes.push(b'\n');
    Ok(bytes)
}

fn csv_bytes(write: impl FnOnce(&mut Vec<u8>) -> crate::Result<()>) -> anyhow::Result<Vec<u8>> {
    let mut buf = Vec::new();
    write(&mut buf)?;
    Ok(buf)
}

fn read_dataset(path: &Path) -> anyhow::Result<DatasetTable<f64>> {
    let file = fs::File::open(path).with_context(|| format!("{}", path.display()))?;
    DatasetTable::read_csv(file).with_context(|| format!("{}", path.display()))
}

#[derive(Debug, Deserialize)]
struct ManifestRow {
    name: String,
    path: PathBuf,
    #[serde(default)]
    domain: Option<String>,
}

/// Reads a `name,path,domain` manifest; relative paths are resolved against
/// the manifest's directory.
pub fn read_manifest(path: &Path) -> anyhow::Result<Vec<(String, PathBuf, Option<Domain>)>> {
    let base = path.parent().unwrap_or(Path::new("."));
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .with_context(|| format!("{}", path.display()))?;
    let mut seen = HashSet::new();
    let mut rows = Vec::new();
    for record in reader.deserialize() {
        let row: ManifestRow = record.with_context(|| format!("{}", path.display()))?;
        if !seen.insert(row.name.clone()) {
            bail!("{}: duplicate name {:?}", path.display(), row.name);
        }
        let domain = match row.domain.as_deref() {
            None | Some("") => None,
            Some(d) => Some(d.parse::<Domain>()?),
        };
        rows.push((row.name, base.join(row.path), domain));
    }
    Ok(rows)
}

/// Runs the command line; returns the number of per-item failures.
pub fn run(cli: Cli) -> anyhow::Result<usize> {
    let settings = Settings {
        file: match &cli.common.config {
            Some(p) => {
                parse_config(&fs::read_to_string(p).with_context(|| format!("{}", p.display()))?)?
            }
            None => BTreeMap::new(),
        },
    };
    if let Some(jobs) = settings.get(cli.common.jobs, "jobs")? {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build_global()
            .ok();
    }
    let seed = match settings.get(cli.common.seed, "seed")? {
        Some(s) => s,
        None => {
            let s = rand::random::<u64>();
            eprintln!("seed: {s}");
            s
        }
    };
    let out: Option<PathBuf> = settings.get(cli.common.out.clone(), "out")?;
    let fit_config =
        |replicates: Option<usize>, budget: Option<usize>| -> anyhow::Result<FitConfig> {
            let d = FitConfig::default();
            Ok(FitConfig {
                replicates: settings
                    .get(replicates, "fit_replicates")?
                    .unwrap_or(d.replicates),
                budget: settings.get(budget, "budget")?.unwrap_or(d.budget),
                seed,
            })
        };

    match cli.command {
        Command::Measure { paths } => {
            if paths.is_empty() {
                bail!("measure needs at least one edge-list file");
            }
            let mut table = DatasetTable::new();
            let mut failures = 0;
            for path in &paths {
                let row = read_graph(path).and_then(|g| {
                    feature_vector::<f64>(&g)
                        .map(|fv| DatasetRow::new(stem(path), fv))
                        .with_context(|| format!("{}", path.display()))
                });
                match row.and_then(|r| table.push(r).map_err(Into::into)) {
                    Ok(()) => {}
                    Err(e) => {
                        eprintln!("error: {e:#}");
                        failures += 1;
                    }
                }
            }
            write_output(out.as_deref(), &csv_bytes(|b| table.write_csv(b))?)?;
            Ok(failures)
        }
        Command::Fit {
            path,
            model,
            replicates,
            budget,
        } => {
            let g = read_graph(&path)?;
            let models = parse_models(settings.get(model, "model")?.as_deref())?;
            let config = FitConfig {
                seed: network_seed(seed, &stem(&path)),
                ..fit_config(replicates, budget)?
            };
            let mut reports = Vec::new();
            let mut failures = 0;
            for m in models {
                match fit_model(&g, m, &config) {
                    Ok(r) => reports.push(r),
                    Err(e) => {
                        eprintln!("error: {}: {m}: {e}", path.display());
                        failures += 1;
                    }
                }
            }
            write_output(out.as_deref(), &json(&reports)?)?;
            Ok(failures)
        }
        Command::Generate { spec } => {
            let text = fs::read_to_string(&spec).with_context(|| format!("{}", spec.display()))?;
            let params = if let Ok(req) = serde_json::from_str::<GenerationRequest>(&text) {
                let s = cli.common.seed.unwrap_or(req.seed);
                (req.params, s)
            } else {
                let fit: FitReport = serde_json::from_str(&text).with_context(|| {
                    format!(
                        "{}: neither a generation request nor a fit report",
                        spec.display()
                    )
                })?;
                (fit.params, seed)
            };
            let g = generate(&params.0, params.1)?;
            write_output(out.as_deref(), g.to_edge_list().as_bytes())?;
            Ok(0)
        }
        Command::Pipeline {
            manifest,
            replicates,
            budget,
            model,
        } => {
            let dir = out_dir(out)?;
            let mut failures = Vec::new();
            let mut inputs = Vec::new();
            for (name, path, domain) in read_manifest(&manifest)? {
                match read_graph(&path) {
                    Ok(graph) => inputs.push(NetworkInput {
                        name,
                        domain,
                        graph,
                    }),
                    Err(e) => failures.push(format!("{name}: {e:#}")),
                }
            }
            let config = PipelineConfig {
                fit: fit_config(replicates, budget)?,
                models: parse_models(settings.get(model, "model")?.as_deref())?,
            };
            let (table, outcomes) = run_pipeline(&inputs, &config, seed)?;
            fs::create_dir_all(dir.join("fits"))?;
            fs::create_dir_all(dir.join("graphs"))?;
            for o in &outcomes {
                failures.extend(o.failures.iter().cloned());
                fs::write(
                    dir.join("fits").join(format!("{}.json", o.name)),
                    json(&o.fits)?,
                )?;
                for (m, g) in &o.counterparts {
                    fs::write(
                        dir.join("graphs").join(format!("{}__{m}.edges", o.name)),
                        g.to_edge_list(),
                    )?;
                }
            }
            fs::write(dir.join("dataset.csv"), csv_bytes(|b| table.write_csv(b))?)?;
            let summary = serde_json::json!({
                "seed": seed,
                "networks": inputs.len(),
                "rows": table.len(),
                "fit": config.fit,
                "models": config.models,
                "failures": failures,
            });
            fs::write(dir.join("run.json"), json(&summary)?)?;
            for f in &failures {
                eprintln!("error: {f}");
            }
            Ok(failures.len())
        }
        Command::Gof { dataset } => {
            let dir = out_dir(out)?;
            let table = read_dataset(&dataset)?;
            let report = mean_distance_matrix(&table)?;
            for m in &report.matrices {
                let tag = m.domain.map_or("unlabeled".to_string(), |d| d.to_string());
                fs::write(
                    dir.join(format!("gof_{tag}.csv")),
                    csv_bytes(|b| m.write_csv(b))?,
                )?;
            }
            let mut unmatched = csv::Writer::from_writer(Vec::new());
            unmatched.write_record(["domain", "name", "missing"])?;
            for (d, name, missing) in &report.unmatched {
                let missing: Vec<String> = missing.iter().map(|s| s.to_string()).collect();
                unmatched.write_record([
                    d.map_or(String::new(), |d| d.to_string()),
                    name.clone(),
                    missing.join(";"),
                ])?;
            }
            fs::write(dir.join("gof_unmatched.csv"), unmatched.into_inner()?)?;
            let mut groups: Vec<(String, Option<Domain>)> = vec![("all".into(), None)];
            groups.extend(
                table
                    .domains()
                    .into_iter()
                    .map(|d| (d.to_string(), Some(d))),
            );
            for (tag, domain) in groups {
                match correlation_matrix(&table, domain) {
                    Ok(c) => fs::write(
                        dir.join(format!("correlation_{tag}.csv")),
                        csv_bytes(|b| c.write_csv(b))?,
                    )?,
                    Err(e) => log::warn!("correlation for {tag} skipped: {e}"),
                }
            }
            match pca_project(&table) {
                Ok(p) => fs::write(dir.join("pca.csv"), csv_bytes(|b| p.write_csv(b))?)?,
                Err(e) => log::warn!("PCA skipped: {e}"),
            }
            Ok(0)
        }
        Command::Stability {
            path,
            replicates,
            model,
            budget,
        } => {
            let dir = out_dir(out)?;
            let g = read_graph(&path)?;
            let name = stem(&path);
            let replicates = settings
                .get(replicates, "replicates")?
                .unwrap_or(DEFAULT_REPLICATES);
            let config = FitConfig {
                seed: network_seed(seed, &name),
                ..fit_config(None, budget)?
            };
            let mut fits = Vec::new();
            let mut failures = 0;
            for m in parse_models(settings.get(model, "model")?.as_deref())? {
                match fit_model(&g, m, &config) {
                    Ok(f) => fits.push(f),
                    Err(e) => {
                        eprintln!("error: {}: {m}: {e}", path.display());
                        failures += 1;
                    }
                }
            }
            let summary =
                stability_run::<f64>(&fits, replicates, derive_named(config.seed, "stability"))?;
            fs::write(
                dir.join("stability.csv"),
                csv_bytes(|b| summary.write_csv(b))?,
            )?;
            fs::write(dir.join("stability_meta.json"), json(&summary.metadata)?)?;
            fs::write(dir.join("fits.json"), json(&fits)?)?;
            Ok(failures)
        }
        Command::Classify {
            dataset,
            task,
            model,
            folds,
            domain,
            trees,
        } => {
            let dir = out_dir(out)?;
            let table = read_dataset(&dataset)?;
            let task: Task = settings
                .get(task, "task")?
                .ok_or_else(|| anyhow!("--task domain|category|subcategory is required"))?
                .parse()?;
            let classifiers = match settings.get(model, "model")?.as_deref() {
                None | Some("both") | Some("all") => vec![Classifier::Tree, Classifier::Forest],
                Some(c) => vec![c.parse::<Classifier>()?],
            };
            let domain: Option<Domain> = settings
                .get::<String>(domain, "domain")?
                .map(|d| d.parse())
                .transpose()?;
            let domains: Vec<Option<Domain>> = match (task, domain) {
                (Task::Domain, _) => vec![None],
                (_, Some(d)) => vec![Some(d)],
                (_, None) => table.domains().into_iter().map(Some).collect(),
            };
            let mut failures = 0;
            for d in domains {
                for &c in &classifiers {
                    let mut config = EvalConfig::new(task, c, seed);
                    config.domain = d;
                    if let Some(k) = settings.get(folds, "folds")? {
                        config.folds = k;
                    }
                    if let Some(t) = settings.get(trees, "trees")? {
                        config.trees = t;
                    }
                    let tag = match d {
                        Some(d) => format!("{task}_{d}_{c}"),
                        None => format!("{task}_{c}"),
                    };
                    match run_task(&table, &config) {
                        Ok(report) => write_report(&dir, &tag, &report)?,
                        Err(e) => {
                            eprintln!("error: {tag}: {e}");
                            failures += 1;
                        }
                    }
                }
            }
            Ok(failures)
        }
    }
}

fn write_report(dir: &Path, tag: &str, report: &EvalReport) -> anyhow::Result<()> {
    fs::write(dir.join(format!("classify_{tag}.json")), json(report)?)?;
    fs::write(
        dir.join(format!("classify_{tag}_confusion.csv")),
        csv_bytes(|b| report.confusion.write_csv(b))?,
    )?;
    Ok(())
}

/// Entry point for the binary: parses arguments, runs, and maps the outcome to
/// an exit code (0 only when nothing failed).
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(cli) {
        Ok(0) => 0,
        Ok(n) => {
            eprintln!("{n} item(s) failed");
            1
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            1
        }
    }
}
