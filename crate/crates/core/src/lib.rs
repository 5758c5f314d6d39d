//! Direct MultiSearch (DMS) for box-constrained multiobjective optimization.
//!
//! The crate covers the whole experimental loop:
//!
//! * [`pareto`]: dominance, the nondominated archive and the front file format;
//! * [`solver`]: DMS with classic, gradient-pruned and adaptive polling;
//! * [`problems`]: twelve benchmark problems with analytic gradients;
//! * [`metrics`]: purity, Γ and Δ spread, and exact hypervolume;
//! * [`profiles`]: performance profiles with SVG and text output;
//! * [`experiment`]: solver × problem runs that tie everything together.
//!
//! ```
//! use dms::problems::zdt2;
//! use dms::solver::{solve, PruneMode, SolverConfig};
//!
//! let problem = zdt2(30);
//! let mut start = vec![0.0; 30];
//! start[0] = 0.5;
//! let config = SolverConfig::default()
//!     .with_budget(500)
//!     .with_mode(PruneMode::PruneAdaptive);
//! let run = solve(&problem, &config, &[start.into()]).unwrap();
//! assert!(run.evaluations_used <= 500);
//! assert!(run.final_front.is_pairwise_nondominated());
//! ```

pub mod error;
pub mod experiment;
pub mod metrics;
pub mod pareto;
pub mod problems;
pub mod profiles;
pub mod solver;

pub use error::{DmsError, Result};
pub use metrics::{Front, MetricKind, MetricReport, ReferenceFront};
pub use pareto::{Archive, ArchiveEntry, BoxDomain, DecisionPoint, ObjectiveVector};
pub use problems::MooProblem;
pub use solver::{solve, PruneMode, RunResult, SolverConfig};
