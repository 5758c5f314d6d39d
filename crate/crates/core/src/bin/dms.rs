use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use dms::experiment::{list_problems, read_reports, run_experiment, score_fronts, write_reports, ExperimentConfig};
use dms::profiles::emit_all_profiles;
use dms::solver::PruneMode;

#[derive(Parser)]
#[command(name = "dms", version, about = "Direct MultiSearch experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a solver × problem experiment.
    Run {
        /// Flat TOML config; command-line flags override it.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Problem ids, or `all`.
        #[arg(long, value_delimiter = ',')]
        problems: Option<Vec<String>>,
        /// classic, prune-always, prune-adaptive.
        #[arg(long, value_delimiter = ',')]
        variants: Option<Vec<PruneMode>>,
        #[arg(long)]
        budget: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// center, line:M or random:M.
        #[arg(long)]
        init: Option<String>,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long)]
        tau_max: Option<f64>,
    },
    /// Print id, n, p and box for every catalog problem.
    ListProblems,
    /// Score front files against their joint reference front.
    Score {
        fronts: Vec<PathBuf>,
        /// Use this front as the reference instead of the union.
        #[arg(long)]
        reference: Option<PathBuf>,
        #[arg(long, default_value = "custom")]
        problem: String,
        /// Write JSON lines here instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Build performance profiles from metric reports.
    Profile {
        reports: Vec<PathBuf>,
        #[arg(long, default_value = "profiles")]
        output: PathBuf,
        #[arg(long, default_value_t = 10.0)]
        tau_max: f64,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> dms::Result<ExitCode> {
    match cli.command {
        Command::Run {
            config,
            problems,
            variants,
            budget,
            seed,
            init,
            output,
            tau_max,
        } => {
            let mut cfg = match config {
                Some(path) => ExperimentConfig::load(&path)?,
                None => ExperimentConfig::default(),
            };
            if let Some(v) = problems {
                cfg.problems = v;
            }
            if let Some(v) = variants {
                cfg.variants = v;
            }
            if let Some(v) = budget {
                cfg.budget = v;
            }
            if let Some(v) = seed {
                cfg.seed = v;
            }
            if let Some(v) = init {
                cfg.init = v;
            }
            if let Some(v) = output {
                cfg.output = Some(v);
            }
            if let Some(v) = tau_max {
                cfg.tau_max = v;
            }
            let outcome = run_experiment(&cfg)?;
            for s in &outcome.summaries {
                match &s.error {
                    None => println!(
                        "{:<10} {:<15} evals={:<6} iters={:<6} front={}",
                        s.problem, s.variant, s.evaluations, s.iterations, s.archive_size
                    ),
                    Some(e) => println!("{:<10} {:<15} FAILED: {e}", s.problem, s.variant),
                }
            }
            for f in &outcome.failures {
                eprintln!("failure: {f}");
            }
            println!("results in {}", outcome.dir.display());
            Ok(if outcome.succeeded() { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
        Command::ListProblems => {
            print!("{}", list_problems());
            Ok(ExitCode::SUCCESS)
        }
        Command::Score {
            fronts,
            reference,
            problem,
            output,
        } => {
            let reports = score_fronts(&problem, &fronts, reference.as_deref())?;
            match output {
                Some(path) => write_reports(&path, &reports)?,
                None => {
                    for r in &reports {
                        println!("{}", serde_json::to_string(r).expect("reports serialize"));
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Profile {
            reports,
            output,
            tau_max,
        } => {
            let mut all = Vec::new();
            for path in &reports {
                all.extend(read_reports(path)?);
            }
            emit_all_profiles(&all, tau_max, &output)?;
            println!("profiles in {}", output.display());
            Ok(ExitCode::SUCCESS)
        }
    }
}
