//! Pruned polling started from a single Pareto-critical point of ZDT2.
//!
//! At a critical point the pruned directions only point towards the box
//! boundary. Always pruning can get stuck there; the adaptive variant falls
//! back to the full set after an infeasible pruned poll.
//!
//!     cargo run --example zdt2_stall -- 0.5 500

use dms::problems::zdt2;
use dms::solver::{solve, PollKind, PruneMode, SolverConfig};

fn main() {
    let mut args = std::env::args().skip(1);
    let x1: f64 = args.next().map_or(0.5, |s| s.parse().expect("x1 must be a number"));
    let budget: usize = args.next().map_or(500, |s| s.parse().expect("budget must be an integer"));

    let problem = zdt2(30);
    let mut start = vec![0.0; problem.dim()];
    start[0] = x1;

    println!("ZDT2, n = 30, start x1 = {x1}, rest 0, budget {budget}");
    for mode in PruneMode::ALL {
        let config = SolverConfig::default().with_budget(budget).with_mode(mode);
        let run = solve(&problem, &config, &[start.clone().into()]).expect("ZDT2 has gradients");
        let count = |k: PollKind| run.poll_kinds.iter().filter(|&&p| p == k).count();
        println!(
            "{:<15} archive {:>4}  evals {:>4}  iters {:>4}  pruned {:>4}  full-after-infeasible {:>3}  stop {:?}",
            mode.as_str(),
            run.final_front.len(),
            run.evaluations_used,
            run.iterations,
            count(PollKind::Pruned),
            count(PollKind::FullAfterInfeasible),
            run.termination,
        );
    }
}
