//! Runs one solver variant on a catalog problem and prints the final front.
//!
//!     cargo run --example solve_problem -- BK1 prune-adaptive 2000 line:5

use dms::pareto::write_front;
use dms::problems::find_problem;
use dms::solver::{initial_points, solve, InitMode, PruneMode, SolverConfig};

fn main() -> dms::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let id = args.first().map_or("BK1", String::as_str);
    let mode: PruneMode = args.get(1).map_or(Ok(PruneMode::PruneAdaptive), |s| s.parse())?;
    let budget: usize = args.get(2).map_or(2000, |s| s.parse().expect("budget must be an integer"));
    let init: InitMode = args.get(3).map_or(Ok(InitMode::Center), |s| s.parse())?;

    let problem = find_problem(id)?;
    let config = SolverConfig::default().with_budget(budget).with_mode(mode);
    let start = initial_points(problem.domain(), init, config.seed);
    let run = solve(&problem, &config, &start)?;

    eprintln!(
        "{} with {}: {} points, {} evaluations, {} iterations ({} successful), smallest stepsize {:.3e}, stopped on {:?}",
        problem.id(),
        mode,
        run.final_front.len(),
        run.evaluations_used,
        run.iterations,
        run.success_history.iter().filter(|s| **s).count(),
        run.final_front.min_stepsize().unwrap_or(f64::NAN),
        run.termination,
    );
    // objective vectors on stdout, in the same format as saved fronts
    write_front(std::io::stdout().lock(), &run.final_front.objective_vectors()).expect("stdout");
    Ok(())
}
