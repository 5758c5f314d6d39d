//! Performance profiles from a small hand-written table, written as SVG and
//! as a breakpoint table.
//!
//!     cargo run --example performance_profiles -- out-dir

use std::path::PathBuf;

use dms::metrics::MetricKind;
use dms::profiles::{compute_profiles, emit_profile_plot, invert_for_profile, ProfileTable};

fn main() -> dms::Result<()> {
    let dir = std::env::args().nth(1).map_or_else(|| std::env::temp_dir().join("dms-profiles"), PathBuf::from);
    std::fs::create_dir_all(&dir).expect("output directory");

    // purity of three solvers on four problems; None marks a failed run
    let table = ProfileTable::new(
        ["p1", "p2", "p3", "p4"].map(String::from).to_vec(),
        ["alpha", "beta", "gamma"].map(String::from).to_vec(),
        vec![
            vec![Some(1.0), Some(0.5), Some(0.25)],
            vec![Some(0.4), Some(0.8), None],
            vec![Some(0.9), Some(0.9), Some(0.3)],
            vec![None, Some(0.6), Some(0.6)],
        ],
    )?;
    // purity is larger-is-better, so profile 1/t
    let curves = compute_profiles(&invert_for_profile(&table, MetricKind::Purity))?;
    for c in &curves {
        let at: Vec<String> = [1.0, 2.0, 4.0].iter().map(|t| format!("rho({t}) = {:.2}", c.rho(*t))).collect();
        println!("{:<6} {}", c.solver, at.join("  "));
    }
    emit_profile_plot("purity", &curves, 5.0, &dir)?;
    println!("wrote {}", dir.join("purity.svg").display());
    Ok(())
}
