//! Direct MultiSearch with complete polling over the coordinate positive
//! spanning set, optionally pruned by first-order information.
//!
//! Each iteration selects a poll center from the archive, polls
//! `x_k + α_k d` for the chosen directions, merges the feasible poll points
//! into the archive and updates stepsizes. With `β₁ = 1/2` and `γ = 1`
//! every evaluated point lies on the lattice `x_0 + α_0 2^{-a} Z^n`.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{DmsError, Result};
use crate::pareto::{Archive, ArchiveEntry, BoxDomain, DecisionPoint};
use crate::problems::MooProblem;

/// How poll directions are chosen at each iteration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PruneMode {
    /// Always poll the full positive spanning set.
    Classic,
    /// Keep only directions that are descent for at least one objective.
    PruneAlways,
    /// Prune, but after a pruned poll whose points were all infeasible poll
    /// the full set on the next iteration.
    PruneAdaptive,
}

impl PruneMode {
    pub const ALL: [PruneMode; 3] = [PruneMode::Classic, PruneMode::PruneAlways, PruneMode::PruneAdaptive];

    pub fn as_str(self) -> &'static str {
        match self {
            PruneMode::Classic => "classic",
            PruneMode::PruneAlways => "prune-always",
            PruneMode::PruneAdaptive => "prune-adaptive",
        }
    }
}

impl fmt::Display for PruneMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PruneMode {
    type Err = DmsError;

    fn from_str(s: &str) -> Result<Self> {
        let key: String = s
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .collect::<String>()
            .to_ascii_lowercase();
        match key.as_str() {
            "classic" => Ok(PruneMode::Classic),
            "prunealways" | "prune" => Ok(PruneMode::PruneAlways),
            "pruneadaptive" | "adaptive" => Ok(PruneMode::PruneAdaptive),
            _ => Err(DmsError::Config(format!(
                "unknown variant `{s}`; expected classic, prune-always or prune-adaptive"
            ))),
        }
    }
}

/// A finite set of nonzero poll directions.
#[derive(Clone, Debug, PartialEq)]
pub struct PollDirections {
    directions: Vec<Vec<f64>>,
    positive_spanning: bool,
}

impl PollDirections {
    pub fn new(directions: Vec<Vec<f64>>) -> Result<Self> {
        let n = directions.first().map_or(0, Vec::len);
        for d in &directions {
            if d.len() != n {
                return Err(DmsError::Dimension {
                    expected: n,
                    found: d.len(),
                });
            }
            if d.iter().all(|v| *v == 0.0) {
                return Err(DmsError::Config("poll directions must be nonzero".into()));
            }
        }
        Ok(Self {
            directions,
            positive_spanning: false,
        })
    }

    pub fn len(&self) -> usize {
        self.directions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.directions.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Vec<f64>> {
        self.directions.iter()
    }

    pub fn as_slice(&self) -> &[Vec<f64>] {
        &self.directions
    }

    /// Whether the set is known to positively span its space.
    pub fn is_positive_spanning(&self) -> bool {
        self.positive_spanning
    }
}

/// The coordinate set `[e_1, ..., e_n, -e_1, ..., -e_n]`.
pub fn generate_pss(n: usize) -> Result<PollDirections> {
    if n == 0 {
        return Err(DmsError::Dimension { expected: 1, found: 0 });
    }
    let unit = |i: usize, sign: f64| {
        let mut e = vec![0.0; n];
        e[i] = sign;
        e
    };
    let directions = (0..n)
        .map(|i| unit(i, 1.0))
        .chain((0..n).map(|i| unit(i, -1.0)))
        .collect();
    Ok(PollDirections {
        directions,
        positive_spanning: true,
    })
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Keeps the directions `d` with `-∇f_i(x)ᵀd > 0` for at least one `i`, in order.
///
/// Returns an empty set when every gradient is zero.
pub fn prune(directions: &PollDirections, gradients: &[Vec<f64>]) -> Result<PollDirections> {
    let n = directions.directions.first().map_or(0, Vec::len);
    if let Some(g) = gradients.iter().find(|g| g.len() != n) {
        return Err(DmsError::Dimension {
            expected: n,
            found: g.len(),
        });
    }
    let kept = directions
        .iter()
        .filter(|d| gradients.iter().any(|g| -dot(g, d) > 0.0))
        .cloned()
        .collect();
    Ok(PollDirections {
        directions: kept,
        positive_spanning: false,
    })
}

/// Distance from each archive entry to its nearest neighbour in objective space.
///
/// A singleton archive gets an infinite gap.
pub fn nearest_neighbor_gaps(archive: &Archive) -> Vec<f64> {
    let entries = archive.entries();
    let n = entries.len();
    let mut gaps = vec![f64::INFINITY; n];
    if n < 2 {
        return gaps;
    }
    let dist = |a: usize, b: usize| -> f64 {
        entries[a]
            .objectives
            .iter()
            .zip(entries[b].objectives.iter())
            .map(|(x, y)| (x - y) * (x - y))
            .sum::<f64>()
            .sqrt()
    };
    if entries[0].objectives.len() == 2 {
        // A biobjective nondominated set sorted by f1 is sorted by f2 in
        // reverse, so each point's nearest neighbour is adjacent in that order.
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| entries[a].objectives[0].total_cmp(&entries[b].objectives[0]));
        for w in order.windows(2) {
            let d = dist(w[0], w[1]);
            gaps[w[0]] = gaps[w[0]].min(d);
            gaps[w[1]] = gaps[w[1]].min(d);
        }
    } else {
        for a in 0..n {
            for b in (a + 1)..n {
                let d = dist(a, b);
                gaps[a] = gaps[a].min(d);
                gaps[b] = gaps[b].min(d);
            }
        }
    }
    gaps
}

/// Index of the most isolated entry: the one whose nearest neighbour in
/// objective space is farthest away. Ties go to the lowest index.
pub fn select_poll_center(archive: &Archive) -> Result<usize> {
    select_poll_center_where(archive, |_| true)
        .ok_or_else(|| DmsError::State("cannot select a poll center from an empty archive".into()))
}

fn select_poll_center_where(archive: &Archive, eligible: impl Fn(&ArchiveEntry) -> bool) -> Option<usize> {
    let gaps = nearest_neighbor_gaps(archive);
    let mut best: Option<(usize, f64)> = None;
    for (i, (entry, gap)) in archive.iter().zip(gaps).enumerate() {
        if !eligible(entry) {
            continue;
        }
        match best {
            Some((_, g)) if gap <= g => {}
            _ => best = Some((i, gap)),
        }
    }
    best.map(|(i, _)| i)
}

/// What one poll step produced.
#[derive(Clone, Debug, PartialEq)]
pub struct PollOutcome {
    /// The archive changed.
    pub success: bool,
    /// Objective evaluations spent, including discarded non-finite ones.
    pub evaluations: usize,
    /// No poll point was inside the box.
    pub all_infeasible: bool,
    /// The budget ran out before every feasible poll point was evaluated.
    pub truncated: bool,
    /// Feasible poll points that were evaluated, in polling order.
    pub evaluated: Vec<DecisionPoint>,
    /// Archive indices of entries added by this poll.
    pub new_points: Vec<usize>,
    /// Archive index of the poll center after merging, if it survived.
    pub center_index: Option<usize>,
}

/// Complete polling around `center`.
///
/// Every feasible point `center + α d` is evaluated (until `budget_left` runs
/// out) and the finite results are merged into `archive` with stepsize α.
pub fn poll(
    center: &ArchiveEntry,
    directions: &PollDirections,
    problem: &MooProblem,
    archive: &mut Archive,
    budget_left: usize,
) -> PollOutcome {
    let alpha = center.stepsize;
    let domain = problem.domain();
    let mut evaluations = 0;
    let mut any_feasible = false;
    let mut truncated = false;
    let mut evaluated = Vec::new();
    let mut candidates = Vec::new();

    for d in directions.iter() {
        let x: DecisionPoint = center
            .point
            .iter()
            .zip(d)
            .map(|(xi, di)| xi + alpha * di)
            .collect();
        if !domain.contains(&x) {
            continue;
        }
        any_feasible = true;
        if evaluations == budget_left {
            truncated = true;
            break;
        }
        let f = problem.evaluate_unchecked(&x);
        evaluations += 1;
        evaluated.push(x.clone());
        if f.is_finite() {
            candidates.push(ArchiveEntry::new(x, f, alpha));
        }
    }

    let before: Vec<DecisionPoint> = archive.iter().map(|e| e.point.clone()).collect();
    let success = archive.insert(candidates);
    let new_points = archive
        .iter()
        .enumerate()
        .filter(|(_, e)| !before.contains(&e.point))
        .map(|(i, _)| i)
        .collect();
    PollOutcome {
        success,
        evaluations,
        all_infeasible: !any_feasible,
        truncated,
        evaluated,
        new_points,
        center_index: archive.position_of(&center.point),
    }
}

/// Stepsize update after a poll around the entry that had stepsize `alpha`.
///
/// On success the new entries and the surviving center get `γ α`; on failure
/// the center gets `β₁ α`. Nothing else is touched.
pub fn update_stepsize(
    archive: &mut Archive,
    center_index: Option<usize>,
    new_points: &[usize],
    alpha: f64,
    success: bool,
    config: &SolverConfig,
) {
    if success {
        let expanded = config.gamma * alpha;
        for &i in new_points.iter().chain(center_index.iter()) {
            archive.set_stepsize(i, expanded);
        }
    } else if let Some(c) = center_index {
        archive.set_stepsize(c, config.beta1 * alpha);
    }
}

/// Solver parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub beta1: f64,
    pub beta2: f64,
    pub gamma: f64,
    /// `None` means `0.1 * max_i (u_i - l_i)`.
    pub initial_stepsize: Option<f64>,
    /// Entries whose stepsize falls below this are no longer polled.
    pub min_stepsize: f64,
    pub max_evaluations: usize,
    pub prune_mode: PruneMode,
    pub seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            beta1: 0.5,
            beta2: 0.5,
            gamma: 1.0,
            initial_stepsize: None,
            min_stepsize: 1e-9,
            max_evaluations: 20_000,
            prune_mode: PruneMode::Classic,
            seed: 0,
        }
    }
}

impl SolverConfig {
    pub fn with_mode(mut self, mode: PruneMode) -> Self {
        self.prune_mode = mode;
        self
    }

    pub fn with_budget(mut self, max_evaluations: usize) -> Self {
        self.max_evaluations = max_evaluations;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |m: &str| Err(DmsError::Config(m.into()));
        if !(self.beta1 > 0.0 && self.beta1 <= self.beta2 && self.beta2 < 1.0) {
            return fail("stepsize contraction needs 0 < beta1 <= beta2 < 1");
        }
        if !(self.gamma >= 1.0 && self.gamma.is_finite()) {
            return fail("stepsize expansion needs gamma >= 1");
        }
        if let Some(a) = self.initial_stepsize {
            if !(a > 0.0 && a.is_finite()) {
                return fail("initial stepsize must be positive");
            }
        }
        if !(self.min_stepsize > 0.0) {
            return fail("minimum stepsize must be positive");
        }
        if self.max_evaluations == 0 {
            return fail("evaluation budget must be positive");
        }
        Ok(())
    }

    pub fn initial_stepsize_for(&self, domain: &BoxDomain) -> f64 {
        self.initial_stepsize.unwrap_or(0.1 * domain.max_width())
    }
}

/// Which directions an iteration polled, and why.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PollKind {
    /// Full set, as in classic mode.
    Full,
    /// The gradient-pruned subset.
    Pruned,
    /// Full set because the previous pruned poll had no feasible point.
    FullAfterInfeasible,
    /// Full set because every gradient vanished at the center.
    FullZeroGradient,
}

/// Why the iteration loop stopped.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Termination {
    Budget,
    StepsizeFloor,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunResult {
    pub final_front: Archive,
    pub evaluations_used: usize,
    pub iterations: usize,
    pub success_history: Vec<bool>,
    pub min_stepsize_history: Vec<f64>,
    pub poll_kinds: Vec<PollKind>,
    /// The last poll was cut short by the budget.
    pub truncated: bool,
    pub termination: Termination,
}

/// Snapshot handed to a [`solve_with_observer`] callback after each iteration.
#[derive(Debug)]
pub struct IterationRecord<'a> {
    pub iteration: usize,
    pub center: &'a ArchiveEntry,
    pub poll_kind: PollKind,
    pub directions: &'a PollDirections,
    pub outcome: &'a PollOutcome,
    pub archive: &'a Archive,
    pub evaluations_used: usize,
}

pub fn solve(problem: &MooProblem, config: &SolverConfig, initial_points: &[DecisionPoint]) -> Result<RunResult> {
    solve_with_observer(problem, config, initial_points, |_| {})
}

/// Runs the solver, calling `observer` after every iteration.
pub fn solve_with_observer<F>(
    problem: &MooProblem,
    config: &SolverConfig,
    initial_points: &[DecisionPoint],
    mut observer: F,
) -> Result<RunResult>
where
    F: FnMut(&IterationRecord<'_>),
{
    config.validate()?;
    if config.prune_mode != PruneMode::Classic && !problem.has_gradient() {
        return Err(DmsError::MissingGradient(problem.id().to_string()));
    }
    let domain = problem.domain();
    let alpha0 = config.initial_stepsize_for(domain);
    if !(alpha0 > 0.0) {
        return Err(DmsError::Config("initial stepsize is zero for a degenerate box".into()));
    }

    let mut evaluations = 0;
    let mut seeds = Vec::with_capacity(initial_points.len());
    for x in initial_points {
        if x.len() != problem.dim() {
            return Err(DmsError::Dimension {
                expected: problem.dim(),
                found: x.len(),
            });
        }
        if !domain.contains(x) {
            return Err(DmsError::Config("initial point outside the box".into()));
        }
        if evaluations == config.max_evaluations {
            break;
        }
        let f = problem.evaluate_unchecked(x);
        evaluations += 1;
        if f.is_finite() {
            seeds.push(ArchiveEntry::new(x.clone(), f, alpha0));
        }
    }
    let mut archive = Archive::from_entries(seeds);
    if archive.is_empty() {
        return Err(DmsError::Config(
            "no feasible initial point with finite objective values".into(),
        ));
    }

    let full = generate_pss(problem.dim())?;
    let mut success_history = Vec::new();
    let mut min_stepsize_history = Vec::new();
    let mut poll_kinds = Vec::new();
    let mut skip_pruning = false;
    let mut truncated = false;
    let mut termination = Termination::Budget;

    while evaluations < config.max_evaluations {
        let Some(center_index) = select_poll_center_where(&archive, |e| e.stepsize >= config.min_stepsize)
        else {
            termination = Termination::StepsizeFloor;
            break;
        };
        let center = archive.entries()[center_index].clone();

        let pruned;
        let (directions, kind) = match config.prune_mode {
            PruneMode::Classic => (&full, PollKind::Full),
            _ if skip_pruning => (&full, PollKind::FullAfterInfeasible),
            _ => {
                let gradients = problem.gradient(&center.point)?;
                pruned = prune(&full, &gradients)?;
                if pruned.is_empty() {
                    (&full, PollKind::FullZeroGradient)
                } else {
                    (&pruned, PollKind::Pruned)
                }
            }
        };

        let outcome = poll(
            &center,
            directions,
            problem,
            &mut archive,
            config.max_evaluations - evaluations,
        );
        evaluations += outcome.evaluations;
        update_stepsize(
            &mut archive,
            outcome.center_index,
            &outcome.new_points,
            center.stepsize,
            outcome.success,
            config,
        );
        skip_pruning =
            config.prune_mode == PruneMode::PruneAdaptive && kind == PollKind::Pruned && outcome.all_infeasible;

        success_history.push(outcome.success);
        min_stepsize_history.push(archive.min_stepsize().expect("archive is never emptied"));
        poll_kinds.push(kind);
        observer(&IterationRecord {
            iteration: success_history.len() - 1,
            center: &center,
            poll_kind: kind,
            directions,
            outcome: &outcome,
            archive: &archive,
            evaluations_used: evaluations,
        });
        if outcome.truncated {
            truncated = true;
            break;
        }
    }

    Ok(RunResult {
        final_front: archive,
        evaluations_used: evaluations,
        iterations: success_history.len(),
        success_history,
        min_stepsize_history,
        poll_kinds,
        truncated,
        termination,
    })
}

/// How the starting list is chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "points", rename_all = "kebab-case")]
pub enum InitMode {
    /// The center of the box.
    Center,
    /// `m` equally spaced points on the segment from `l` to `u`.
    Line(usize),
    /// `m` uniform random points drawn with the run seed.
    Random(usize),
}

impl fmt::Display for InitMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InitMode::Center => f.write_str("center"),
            InitMode::Line(m) => write!(f, "line:{m}"),
            InitMode::Random(m) => write!(f, "random:{m}"),
        }
    }
}

impl FromStr for InitMode {
    type Err = DmsError;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || DmsError::Config(format!("invalid init mode `{s}`; expected center, line:M or random:M"));
        let (kind, count) = match s.split_once(':') {
            Some((k, m)) => (k, Some(m.trim().parse::<usize>().map_err(|_| bad())?)),
            None => (s, None),
        };
        match (kind.trim(), count) {
            ("center", None) => Ok(InitMode::Center),
            ("line", Some(m)) if m > 0 => Ok(InitMode::Line(m)),
            ("random", Some(m)) if m > 0 => Ok(InitMode::Random(m)),
            _ => Err(bad()),
        }
    }
}

pub fn initial_points(domain: &BoxDomain, mode: InitMode, seed: u64) -> Vec<DecisionPoint> {
    match mode {
        InitMode::Center | InitMode::Line(1) => vec![domain.center()],
        InitMode::Line(m) => (0..m)
            .map(|k| {
                let t = k as f64 / (m - 1) as f64;
                domain
                    .lower()
                    .iter()
                    .zip(domain.upper())
                    .map(|(l, u)| l + t * (u - l))
                    .collect()
            })
            .collect(),
        InitMode::Random(m) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..m)
                .map(|_| {
                    domain
                        .lower()
                        .iter()
                        .zip(domain.upper())
                        .map(|(l, u)| l + rng.random::<f64>() * (u - l))
                        .collect()
                })
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pareto::ObjectiveVector;
    use crate::problems::{self, MooProblem};
    use proptest::prelude::*;

    fn entry(x: &[f64], f: &[f64], a: f64) -> ArchiveEntry {
        ArchiveEntry::new(x.into(), f.into(), a)
    }

    fn e(n: usize, i: usize, s: f64) -> Vec<f64> {
        let mut v = vec![0.0; n];
        v[i] = s;
        v
    }

    #[test]
    fn pss_small_dimensions() {
        assert_eq!(generate_pss(1).unwrap().as_slice(), &[vec![1.0], vec![-1.0]]);
        let d2 = generate_pss(2).unwrap();
        assert_eq!(
            d2.as_slice(),
            &[vec![1.0, 0.0], vec![0.0, 1.0], vec![-1.0, 0.0], vec![0.0, -1.0]]
        );
        assert!(d2.is_positive_spanning());
        assert!(generate_pss(0).is_err());
    }

    #[test]
    fn prune_examples() {
        let d = PollDirections::new(vec![e(2, 0, 1.0), e(2, 0, -1.0), e(2, 1, 1.0), e(2, 1, -1.0)]).unwrap();
        let p = prune(&d, &[vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert_eq!(p.as_slice(), &[e(2, 0, -1.0), e(2, 1, -1.0)]);
        let q = prune(&d, &[vec![1.0, 0.0], vec![-1.0, 0.0]]).unwrap();
        assert_eq!(q.as_slice(), &[e(2, 0, 1.0), e(2, 0, -1.0)]);
        let z = prune(&d, &[vec![0.0, 0.0], vec![0.0, 0.0]]).unwrap();
        assert!(z.is_empty());
        assert!(prune(&d, &[vec![1.0]]).is_err());
    }

    #[test]
    fn center_selection_examples() {
        let a = Archive::from_entries([
            entry(&[0.0], &[0.0, 1.0], 1.0),
            entry(&[1.0], &[0.1, 0.9], 1.0),
            entry(&[2.0], &[1.0, 0.0], 1.0),
        ]);
        assert_eq!(select_poll_center(&a).unwrap(), 2);
        let single = Archive::from_entries([entry(&[0.0], &[0.0, 1.0], 1.0)]);
        assert_eq!(select_poll_center(&single).unwrap(), 0);
        let pair = Archive::from_entries([entry(&[0.0], &[0.0, 1.0], 1.0), entry(&[1.0], &[1.0, 0.0], 1.0)]);
        assert_eq!(select_poll_center(&pair).unwrap(), 0);
        assert!(matches!(select_poll_center(&Archive::new()), Err(DmsError::State(_))));
    }

    #[test]
    fn poll_at_corner_with_no_feasible_points() {
        let p = problems::zdt2(3);
        let x = [0.0, 0.0, 0.0];
        let c = entry(&x, &p.evaluate(&x).unwrap(), 0.1);
        let mut a = Archive::from_entries([c.clone()]);
        let only_outward = PollDirections::new(vec![e(3, 0, -1.0), e(3, 1, -1.0), e(3, 2, -1.0)]).unwrap();
        let out = poll(&c, &only_outward, &p, &mut a, 100);
        assert!(!out.success && out.all_infeasible);
        assert_eq!(out.evaluations, 0);
        assert_eq!(a.len(), 1);
    }

    #[test]
    fn poll_sp1_first_iteration() {
        // At (0.5, 0.5): F = (0.25, 6.25). The four poll points give
        // (0.6,0.5)->(0.17,6.26), (0.5,0.6)->(0.26,5.77), (0.4,0.5)->(0.37,6.26), (0.5,0.4)->(0.26,6.77).
        // (0.6,0.5) and (0.5,0.6) are nondominated with the center; the other two are dominated.
        let p = problems::sp1();
        let x = [0.5, 0.5];
        let c = entry(&x, &p.evaluate(&x).unwrap(), 0.1);
        let mut a = Archive::from_entries([c.clone()]);
        let out = poll(&c, &generate_pss(2).unwrap(), &p, &mut a, 100);
        assert_eq!(out.evaluations, 4);
        assert!(out.success);
        assert_eq!(out.new_points.len(), 2);
        assert_eq!(out.center_index, Some(0));
        assert_eq!(a.len(), 3);
    }

    #[test]
    fn poll_with_only_dominated_outcomes() {
        let p = MooProblem::new("bowl", BoxDomain::uniform(1, -1.0, 1.0).unwrap(), 2, |x| {
            vec![x[0] * x[0], x[0] * x[0]]
        });
        let c = entry(&[0.0], &[0.0, 0.0], 0.5);
        let mut a = Archive::from_entries([c.clone()]);
        let before = a.clone();
        let out = poll(&c, &generate_pss(1).unwrap(), &p, &mut a, 100);
        assert!(!out.success && !out.all_infeasible);
        assert_eq!(out.evaluations, 2);
        assert_eq!(a, before);
    }

    #[test]
    fn poll_discards_non_finite_values_but_counts_them() {
        let p = MooProblem::new("hole", BoxDomain::uniform(1, -1.0, 1.0).unwrap(), 2, |x| {
            if x[0] > 0.0 {
                vec![f64::NAN, 0.0]
            } else {
                vec![-x[0], x[0]]
            }
        });
        let c = entry(&[0.0], &[0.0, 0.0], 0.5);
        let mut a = Archive::from_entries([c.clone()]);
        let out = poll(&c, &generate_pss(1).unwrap(), &p, &mut a, 100);
        assert_eq!(out.evaluations, 2);
        assert!(out.success);
        assert!(a.iter().all(|e| e.objectives.is_finite()));
    }

    #[test]
    fn poll_truncates_at_budget() {
        let p = problems::sp1();
        let x = [0.5, 0.5];
        let c = entry(&x, &p.evaluate(&x).unwrap(), 0.1);
        let mut a = Archive::from_entries([c.clone()]);
        let out = poll(&c, &generate_pss(2).unwrap(), &p, &mut a, 3);
        assert_eq!(out.evaluations, 3);
        assert!(out.truncated);
    }

    #[test]
    fn stepsize_updates() {
        let cfg = SolverConfig::default();
        let mut a = Archive::from_entries([entry(&[0.0], &[0.0, 1.0], 0.4), entry(&[1.0], &[1.0, 0.0], 0.4)]);
        update_stepsize(&mut a, Some(0), &[1], 0.4, true, &cfg);
        assert_eq!(a.entries()[0].stepsize, 0.4);
        assert_eq!(a.entries()[1].stepsize, 0.4);

        update_stepsize(&mut a, Some(0), &[], 0.4, false, &cfg);
        assert_eq!(a.entries()[0].stepsize, 0.2);
        assert_eq!(a.entries()[1].stepsize, 0.4);

        let mut alpha = 0.2;
        for _ in 0..5 {
            update_stepsize(&mut a, Some(0), &[], alpha, false, &cfg);
            alpha = a.entries()[0].stepsize;
        }
        assert_eq!(alpha, 0.4 * 0.5f64.powi(6));

        let grow = SolverConfig { gamma: 2.0, ..SolverConfig::default() };
        update_stepsize(&mut a, Some(1), &[0], 0.4, true, &grow);
        assert_eq!(a.entries()[0].stepsize, 0.8);
        assert_eq!(a.entries()[1].stepsize, 0.8);
    }

    #[test]
    fn config_validation() {
        assert!(SolverConfig::default().validate().is_ok());
        let bad = [
            SolverConfig { beta1: 0.0, ..Default::default() },
            SolverConfig { beta1: 0.6, beta2: 0.5, ..Default::default() },
            SolverConfig { beta2: 1.0, ..Default::default() },
            SolverConfig { gamma: 0.9, ..Default::default() },
            SolverConfig { max_evaluations: 0, ..Default::default() },
            SolverConfig { initial_stepsize: Some(-1.0), ..Default::default() },
        ];
        for cfg in bad {
            assert!(cfg.validate().is_err(), "{cfg:?}");
        }
    }

    #[test]
    fn scalar_problem_contracts_to_minimizer() {
        let p = MooProblem::new("sphere", BoxDomain::uniform(2, -2.0, 2.0).unwrap(), 1, |x| {
            vec![x[0] * x[0] + x[1] * x[1]]
        });
        let cfg = SolverConfig::default().with_budget(500);
        let r = solve(&p, &cfg, &[vec![1.0, 1.0].into()]).unwrap();
        assert_eq!(r.final_front.len(), 1);
        let x = &r.final_front.entries()[0].point;
        assert!((x[0] * x[0] + x[1] * x[1]).sqrt() <= 0.1);
        assert!(r.evaluations_used <= 500);
    }

    fn zdt2_start(x1: f64) -> Vec<DecisionPoint> {
        let mut x = vec![0.0; 30];
        x[0] = x1;
        vec![x.into()]
    }

    #[test]
    fn zdt2_pruned_polling_stalls_at_the_f1_extreme() {
        let p = problems::zdt2(30);
        let cfg = SolverConfig::default().with_budget(500).with_mode(PruneMode::PruneAlways);
        let r = solve(&p, &cfg, &zdt2_start(0.0)).unwrap();
        assert_eq!(r.final_front.len(), 1);
        assert_eq!(r.termination, Termination::StepsizeFloor);
        assert!(r.success_history.iter().all(|s| !s));

        let adaptive = cfg.with_mode(PruneMode::PruneAdaptive);
        let r = solve(&p, &adaptive, &zdt2_start(0.0)).unwrap();
        assert!(r.final_front.len() >= 10, "front size {}", r.final_front.len());
        assert!(r.poll_kinds.contains(&PollKind::FullAfterInfeasible));
    }

    #[test]
    fn zero_gradient_falls_back_to_full_set() {
        let p = MooProblem::new("flat", BoxDomain::uniform(1, -1.0, 1.0).unwrap(), 2, |x| {
            vec![x[0].powi(3), -x[0].powi(3)]
        })
        .with_gradient(|x| vec![vec![3.0 * x[0] * x[0]], vec![-3.0 * x[0] * x[0]]]);
        let cfg = SolverConfig::default().with_budget(20).with_mode(PruneMode::PruneAlways);
        let r = solve(&p, &cfg, &[vec![0.0].into()]).unwrap();
        assert_eq!(r.poll_kinds[0], PollKind::FullZeroGradient);
    }

    #[test]
    fn pruning_requires_gradients() {
        let p = MooProblem::new("plain", BoxDomain::uniform(1, 0.0, 1.0).unwrap(), 2, |x| vec![x[0], -x[0]]);
        let cfg = SolverConfig::default().with_mode(PruneMode::PruneAdaptive);
        assert!(matches!(solve(&p, &cfg, &[vec![0.5].into()]), Err(DmsError::MissingGradient(_))));
    }

    #[test]
    fn empty_initialization_is_a_config_error() {
        let p = problems::bk1();
        assert!(matches!(solve(&p, &SolverConfig::default(), &[]), Err(DmsError::Config(_))));
        let nan = MooProblem::new("nan", BoxDomain::uniform(1, 0.0, 1.0).unwrap(), 1, |_| vec![f64::NAN]);
        assert!(matches!(
            solve(&nan, &SolverConfig::default(), &[vec![0.5].into()]),
            Err(DmsError::Config(_))
        ));
    }

    #[test]
    fn evaluated_points_lie_on_the_lattice() {
        for p in [problems::sp1(), problems::mop7(), problems::jin1()] {
            for mode in PruneMode::ALL {
                let cfg = SolverConfig::default().with_budget(300).with_mode(mode);
                let x0 = p.domain().center();
                let alpha0 = cfg.initial_stepsize_for(p.domain());
                let mut offenders = 0;
                solve_with_observer(&p, &cfg, std::slice::from_ref(&x0), |rec| {
                    for x in &rec.outcome.evaluated {
                        for (xi, ci) in x.iter().zip(x0.iter()) {
                            // contractions only halve, so 2^40 (x - x0)/α0 must be an integer
                            let k = (xi - ci) / alpha0 * 2f64.powi(40);
                            if (k - k.round()).abs() > 1e-3 * k.abs().max(1.0) {
                                offenders += 1;
                            }
                        }
                    }
                })
                .unwrap();
                assert_eq!(offenders, 0, "{} {mode}", p.id());
            }
        }
    }

    #[test]
    fn unsuccessful_iterations_only_touch_the_center_stepsize() {
        let p = problems::lovison1();
        let cfg = SolverConfig::default().with_budget(400);
        let mut previous = Archive::from_entries([ArchiveEntry::new(
            p.domain().center(),
            p.evaluate(&p.domain().center()).unwrap(),
            cfg.initial_stepsize_for(p.domain()),
        )]);
        solve_with_observer(&p, &cfg, &[p.domain().center()], |rec| {
            if !rec.outcome.success {
                assert_eq!(rec.archive.len(), previous.len());
                let c = rec.outcome.center_index.unwrap();
                for (i, (a, b)) in rec.archive.iter().zip(previous.iter()).enumerate() {
                    assert_eq!(a.point, b.point);
                    assert_eq!(a.objectives, b.objectives);
                    if i != c {
                        assert_eq!(a.stepsize, b.stepsize);
                    } else {
                        assert_eq!(a.stepsize, 0.5 * b.stepsize);
                    }
                }
            }
            previous = rec.archive.clone();
        })
        .unwrap();
    }

    #[test]
    fn runs_are_deterministic() {
        let p = problems::mhhm2();
        for mode in PruneMode::ALL {
            let cfg = SolverConfig::default().with_budget(500).with_mode(mode);
            let a = solve(&p, &cfg, &[p.domain().center()]).unwrap();
            let b = solve(&p, &cfg, &[p.domain().center()]).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn min_stepsize_decreases_on_stalled_runs() {
        let p = problems::jin1();
        let cfg = SolverConfig::default().with_budget(2_000);
        let r = solve(&p, &cfg, &[p.domain().center()]).unwrap();
        let first = r.min_stepsize_history[0];
        let last = *r.min_stepsize_history.last().unwrap();
        assert!(last < first);
        assert!(r.min_stepsize_history.iter().all(|a| *a > 0.0));
    }

    #[test]
    fn init_modes() {
        let d = BoxDomain::new(vec![0.0, -1.0], vec![2.0, 1.0]).unwrap();
        assert_eq!(initial_points(&d, InitMode::Center, 0), vec![DecisionPoint::from(vec![1.0, 0.0])]);
        let line = initial_points(&d, InitMode::Line(3), 0);
        assert_eq!(line[0].as_slice(), &[0.0, -1.0]);
        assert_eq!(line[1].as_slice(), &[1.0, 0.0]);
        assert_eq!(line[2].as_slice(), &[2.0, 1.0]);
        let r1 = initial_points(&d, InitMode::Random(5), 7);
        assert_eq!(r1, initial_points(&d, InitMode::Random(5), 7));
        assert!(r1.iter().all(|x| d.contains(x)));
        assert_eq!("line:4".parse::<InitMode>().unwrap(), InitMode::Line(4));
        assert!("line".parse::<InitMode>().is_err());
        assert_eq!("Prune-Adaptive".parse::<PruneMode>().unwrap(), PruneMode::PruneAdaptive);
    }

    fn brute_gaps(points: &[ObjectiveVector]) -> Vec<f64> {
        (0..points.len())
            .map(|i| {
                (0..points.len())
                    .filter(|&j| j != i)
                    .map(|j| {
                        points[i]
                            .iter()
                            .zip(points[j].iter())
                            .map(|(a, b)| (a - b) * (a - b))
                            .sum::<f64>()
                            .sqrt()
                    })
                    .fold(f64::INFINITY, f64::min)
            })
            .collect()
    }

    proptest! {
        #[test]
        fn biobjective_gap_shortcut_matches_brute_force(
            fs in prop::collection::vec(prop::collection::vec(0.0f64..1.0, 2), 1..60)
        ) {
            let archive = Archive::from_entries(
                fs.iter().enumerate().map(|(i, f)| entry(&[i as f64], f, 1.0)),
            );
            prop_assert_eq!(nearest_neighbor_gaps(&archive), brute_gaps(&archive.objective_vectors()));
        }

        #[test]
        fn pss_has_a_positive_dot_with_every_probe(
            d in prop::collection::vec(-1.0f64..1.0, 5)
                .prop_filter("nonzero", |d| d.iter().any(|v| *v != 0.0))
        ) {
            let pss = generate_pss(5).unwrap();
            prop_assert!(pss.iter().any(|v| dot(&d, v) > 0.0));
        }

        #[test]
        fn single_objective_pruning_bound(
            g in prop::collection::vec(-1.0f64..1.0, 1..8)
                .prop_filter("nonzero", |g| g.iter().any(|v| *v != 0.0))
        ) {
            let pss = generate_pss(g.len()).unwrap();
            let kept = prune(&pss, std::slice::from_ref(&g)).unwrap();
            prop_assert!(!kept.is_empty() && kept.len() < pss.len());
        }
    }
}
