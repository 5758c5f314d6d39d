//! Defines a problem outside the catalog, checks its gradient and solves it.
//!
//! The objectives are squared distances to two anchors, so the Pareto set is
//! the segment between them.
//!
//!     cargo run --example custom_problem

use dms::pareto::BoxDomain;
use dms::problems::MooProblem;
use dms::solver::{solve, PruneMode, SolverConfig};

fn main() -> dms::Result<()> {
    let a = [1.0, 0.0, 0.0];
    let b = [0.0, 1.0, 0.5];
    let dist = move |x: &[f64], c: &[f64; 3]| x.iter().zip(c).map(|(xi, ci)| (xi - ci).powi(2)).sum::<f64>();
    let grad = move |x: &[f64], c: &[f64; 3]| x.iter().zip(c).map(|(xi, ci)| 2.0 * (xi - ci)).collect::<Vec<_>>();

    let problem = MooProblem::new("anchors", BoxDomain::uniform(3, -2.0, 2.0)?, 2, move |x| {
        vec![dist(x, &a), dist(x, &b)]
    })
    .with_gradient(move |x| vec![grad(x, &a), grad(x, &b)]);

    let err = problem.check_gradient(&[0.3, -0.7, 1.1], 1e-6)?;
    println!("gradient check: worst relative error {err:.2e}");

    for mode in [PruneMode::Classic, PruneMode::PruneAdaptive] {
        let config = SolverConfig::default().with_budget(1500).with_mode(mode);
        let run = solve(&problem, &config, &[problem.domain().center()])?;
        // distance of the archive from the segment between the anchors
        let off_segment = run
            .final_front
            .iter()
            .map(|e| {
                let d: Vec<f64> = b.iter().zip(&a).map(|(bi, ai)| bi - ai).collect();
                let len2: f64 = d.iter().map(|v| v * v).sum();
                let t = (e.point.iter().zip(&a).zip(&d).map(|((x, ai), di)| (x - ai) * di).sum::<f64>() / len2)
                    .clamp(0.0, 1.0);
                e.point
                    .iter()
                    .zip(&a)
                    .zip(&d)
                    .map(|((x, ai), di)| (x - ai - t * di).powi(2))
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(0.0, f64::max);
        println!(
            "{:<15} {} points, furthest from the Pareto segment {off_segment:.3}",
            mode.as_str(),
            run.final_front.len()
        );
    }
    Ok(())
}
