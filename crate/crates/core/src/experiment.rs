//! Solver × problem experiments: run every cell under a budget, persist
//! fronts and run summaries, score the fronts against per-problem
//! reference fronts and emit performance profiles.
//!
//! Layout of an experiment directory:
//!
//! ```text
//! config.toml                 snapshot of the resolved configuration
//! fronts/<problem>__<variant>.txt
//! summaries.jsonl             one RunSummary per cell
//! metrics.jsonl               one MetricReport per cell
//! profiles/<metric>.{svg,txt}
//! ```

use std::io::Write;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{DmsError, Result};
use crate::metrics::{score_problem, Front, MetricReport, ReferenceFront};
use crate::pareto::{load_front, save_front};
use crate::problems::{catalog, find_problem, MooProblem};
use crate::profiles::emit_all_profiles;
use crate::solver::{initial_points, solve, InitMode, PruneMode, RunResult, SolverConfig, Termination};

pub const OUTPUT_ROOT_ENV: &str = "DMS_OUTPUT_ROOT";

fn default_problems() -> Vec<String> {
    vec!["all".into()]
}

fn default_variants() -> Vec<PruneMode> {
    vec![PruneMode::Classic, PruneMode::PruneAdaptive]
}

fn default_budget() -> usize {
    20_000
}

fn default_tau_max() -> f64 {
    10.0
}

fn default_init() -> String {
    "center".into()
}

/// Flat key-value experiment description, stored as TOML.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Problem ids, or `["all"]`.
    #[serde(default = "default_problems")]
    pub problems: Vec<String>,
    #[serde(default = "default_variants")]
    pub variants: Vec<PruneMode>,
    #[serde(default = "default_budget")]
    pub budget: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    /// `center`, `line:M` or `random:M`.
    #[serde(default = "default_init")]
    pub init: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta2: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial_stepsize: Option<f64>,
    #[serde(default = "default_tau_max")]
    pub tau_max: f64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            problems: default_problems(),
            variants: default_variants(),
            budget: default_budget(),
            seed: 0,
            output: None,
            init: default_init(),
            beta1: None,
            beta2: None,
            gamma: None,
            initial_stepsize: None,
            tau_max: default_tau_max(),
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| DmsError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| DmsError::io(path, e))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("experiment config is plain data")
    }

    pub fn init_mode(&self) -> Result<InitMode> {
        self.init.parse()
    }

    /// Catalog problems named by the config, in the order given.
    pub fn resolve_problems(&self) -> Result<Vec<MooProblem>> {
        if self.problems.iter().any(|p| p.eq_ignore_ascii_case("all")) {
            return Ok(catalog());
        }
        self.problems.iter().map(|id| find_problem(id)).collect()
    }

    pub fn solver_config(&self, mode: PruneMode) -> SolverConfig {
        let base = SolverConfig::default();
        SolverConfig {
            beta1: self.beta1.unwrap_or(base.beta1),
            beta2: self.beta2.unwrap_or(base.beta2),
            gamma: self.gamma.unwrap_or(base.gamma),
            initial_stepsize: self.initial_stepsize.or(base.initial_stepsize),
            max_evaluations: self.budget,
            prune_mode: mode,
            seed: self.seed,
            ..base
        }
    }

    pub fn output_dir(&self) -> PathBuf {
        self.output.clone().unwrap_or_else(|| {
            let root = std::env::var_os(OUTPUT_ROOT_ENV).map_or_else(|| PathBuf::from("dms-runs"), PathBuf::from);
            root.join("experiment")
        })
    }

    pub fn validate(&self) -> Result<()> {
        if self.budget == 0 {
            return Err(DmsError::Config("budget must be positive".into()));
        }
        if self.variants.is_empty() {
            return Err(DmsError::Config("at least one variant is required".into()));
        }
        if self.problems.is_empty() {
            return Err(DmsError::Config("at least one problem is required".into()));
        }
        if !(self.tau_max > 1.0) {
            return Err(DmsError::Config("tau_max must exceed 1".into()));
        }
        self.init_mode()?;
        self.resolve_problems()?;
        for mode in &self.variants {
            self.solver_config(*mode).validate()?;
        }
        Ok(())
    }
}

/// One line of `summaries.jsonl`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub problem: String,
    pub variant: PruneMode,
    pub evaluations: usize,
    pub iterations: usize,
    pub archive_size: usize,
    pub min_stepsize: Option<f64>,
    pub termination: Option<Termination>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl RunSummary {
    pub fn from_run(problem: &str, variant: PruneMode, run: &RunResult) -> Self {
        Self {
            problem: problem.to_string(),
            variant,
            evaluations: run.evaluations_used,
            iterations: run.iterations,
            archive_size: run.final_front.len(),
            min_stepsize: run.final_front.min_stepsize(),
            termination: Some(run.termination),
            error: None,
        }
    }

    fn failed(problem: &str, variant: PruneMode, error: &DmsError) -> Self {
        Self {
            problem: problem.to_string(),
            variant,
            evaluations: 0,
            iterations: 0,
            archive_size: 0,
            min_stepsize: None,
            termination: None,
            error: Some(error.to_string()),
        }
    }
}

/// What [`run_experiment`] produced.
#[derive(Clone, Debug)]
pub struct ExperimentOutcome {
    pub dir: PathBuf,
    pub summaries: Vec<RunSummary>,
    pub reports: Vec<MetricReport>,
    /// Cells (or stages) that failed, as human-readable messages.
    pub failures: Vec<String>,
}

impl ExperimentOutcome {
    pub fn succeeded(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn front_file_name(problem: &str, variant: PruneMode) -> String {
    format!("{problem}__{variant}.txt")
}

fn write_jsonl<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|e| DmsError::io(path, e))?;
    let mut out = std::io::BufWriter::new(file);
    for row in rows {
        let line = serde_json::to_string(row).expect("report rows serialize");
        writeln!(out, "{line}").map_err(|e| DmsError::io(path, e))?;
    }
    out.flush().map_err(|e| DmsError::io(path, e))
}

pub fn read_reports(path: &Path) -> Result<Vec<MetricReport>> {
    let text = std::fs::read_to_string(path).map_err(|e| DmsError::io(path, e))?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            serde_json::from_str(l).map_err(|e| DmsError::Parse {
                path: path.to_path_buf(),
                line: i + 1,
                message: e.to_string(),
            })
        })
        .collect()
}

pub fn write_reports(path: &Path, reports: &[MetricReport]) -> Result<()> {
    write_jsonl(path, reports)
}

/// Runs every (problem, variant) cell, then scores and profiles them.
///
/// Cells run in parallel; every output is written in cell order, so the
/// directory contents depend only on the configuration.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentOutcome> {
    config.validate()?;
    let problems = config.resolve_problems()?;
    let init = config.init_mode()?;
    let dir = config.output_dir();
    let fronts_dir = dir.join("fronts");
    std::fs::create_dir_all(&fronts_dir).map_err(|e| DmsError::io(&fronts_dir, e))?;
    let snapshot = dir.join("config.toml");
    std::fs::write(&snapshot, config.to_toml()).map_err(|e| DmsError::io(&snapshot, e))?;

    let cells: Vec<(&MooProblem, PruneMode)> = problems
        .iter()
        .flat_map(|p| config.variants.iter().map(move |v| (p, *v)))
        .collect();
    let runs: Vec<Result<RunResult>> = cells
        .par_iter()
        .map(|(problem, mode)| {
            let start = initial_points(problem.domain(), init, config.seed);
            solve(problem, &config.solver_config(*mode), &start)
        })
        .collect();

    let mut failures = Vec::new();
    let mut summaries = Vec::with_capacity(cells.len());
    let mut fronts: Vec<Front> = Vec::with_capacity(cells.len());
    for ((problem, mode), run) in cells.iter().zip(&runs) {
        match run {
            Ok(run) => {
                let objectives = run.final_front.objective_vectors();
                save_front(&fronts_dir.join(front_file_name(problem.id(), *mode)), &objectives)?;
                summaries.push(RunSummary::from_run(problem.id(), *mode, run));
                fronts.push(Front::new(objectives)?);
            }
            Err(e) => {
                failures.push(format!("{} / {mode}: {e}", problem.id()));
                summaries.push(RunSummary::failed(problem.id(), *mode, e));
                fronts.push(Front::default());
            }
        }
    }
    write_jsonl(&dir.join("summaries.jsonl"), &summaries)?;

    let mut reports = Vec::with_capacity(cells.len());
    for (k, problem) in problems.iter().enumerate() {
        let offset = k * config.variants.len();
        let named: Vec<(String, Front)> = config
            .variants
            .iter()
            .enumerate()
            .map(|(v, mode)| (mode.to_string(), fronts[offset + v].clone()))
            .collect();
        reports.extend(score_problem(problem.id(), &named, None)?);
    }
    write_jsonl(&dir.join("metrics.jsonl"), &reports)?;

    if let Err(e) = emit_all_profiles(&reports, config.tau_max, &dir.join("profiles")) {
        failures.push(format!("profiles: {e}"));
    }

    Ok(ExperimentOutcome {
        dir,
        summaries,
        reports,
        failures,
    })
}

/// Scores front files against each other, or against a supplied reference.
/// Each front is labelled with its file stem.
pub fn score_fronts(problem: &str, paths: &[PathBuf], reference: Option<&Path>) -> Result<Vec<MetricReport>> {
    if paths.is_empty() {
        return Err(DmsError::Config("no front files given".into()));
    }
    let named = paths
        .iter()
        .map(|p| {
            let name = p
                .file_stem()
                .map_or_else(|| p.display().to_string(), |s| s.to_string_lossy().into_owned());
            Ok((name, Front::new(load_front(p)?)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let reference = reference
        .map(|r| Ok::<_, DmsError>(ReferenceFront::from_front(Front::new(load_front(r)?)?)))
        .transpose()?;
    score_problem(problem, &named, reference)
}

/// `id n p box` for every catalog problem.
pub fn list_problems() -> String {
    let mut out = String::new();
    for p in catalog() {
        let d = p.domain();
        let uniform = d.lower().iter().all(|l| *l == d.lower()[0]) && d.upper().iter().all(|u| *u == d.upper()[0]);
        let bounds = if uniform {
            format!("[{}, {}]^{}", d.lower()[0], d.upper()[0], p.dim())
        } else {
            format!("{:?} {:?}", d.lower(), d.upper())
        };
        out.push_str(&format!("{} {} {} {}\n", p.id(), p.dim(), p.n_objectives(), bounds));
    }
    out
}
