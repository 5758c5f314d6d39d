//! A small experiment: every catalog problem, all three variants, scored and
//! profiled into one directory.
//!
//!     cargo run --release --example experiment -- out-dir 1000

use std::path::PathBuf;

use dms::experiment::{run_experiment, ExperimentConfig};
use dms::solver::PruneMode;

fn main() -> dms::Result<()> {
    let mut args = std::env::args().skip(1);
    let output = args.next().map(PathBuf::from);
    let budget = args.next().map_or(1000, |s| s.parse().expect("budget must be an integer"));

    let config = ExperimentConfig {
        variants: PruneMode::ALL.to_vec(),
        budget,
        output,
        ..ExperimentConfig::default()
    };
    print!("{}", config.to_toml());
    let outcome = run_experiment(&config)?;

    println!("{:<10} {:<15} {:>6} {:>6} {:>8} {:>8}", "problem", "variant", "size", "purity", "gamma", "hv");
    for r in &outcome.reports {
        let f = |v: Option<f64>| v.map_or("-".to_string(), |v| format!("{v:.3}"));
        println!(
            "{:<10} {:<15} {:>6} {:>6} {:>8} {:>8}",
            r.problem,
            r.solver,
            r.front_size,
            f(r.purity),
            f(r.gamma),
            f(r.hypervolume)
        );
    }
    for failure in &outcome.failures {
        eprintln!("failure: {failure}");
    }
    println!("results in {}", outcome.dir.display());
    Ok(())
}
