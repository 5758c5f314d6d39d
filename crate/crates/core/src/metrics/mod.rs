//! Quality metrics for Pareto front approximations: purity, the Γ and Δ
//! spread metrics, and the (scaled) hypervolume indicator.
//!
//! Metrics that are undefined for a given input return `None`, the
//! metric-failure sentinel consumed by the performance profiles.

mod hypervolume;

use serde::{Deserialize, Serialize};

use crate::error::{DmsError, Result};
use crate::pareto::{filter_nondominated, ObjectiveVector};

pub use hypervolume::hypervolume;

/// A nondominated set of objective vectors with a common length.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Front {
    points: Vec<ObjectiveVector>,
}

impl Front {
    /// Builds a front, dropping dominated and repeated vectors.
    pub fn new(points: Vec<ObjectiveVector>) -> Result<Self> {
        if let Some(first) = points.first() {
            if let Some(bad) = points.iter().find(|v| v.len() != first.len()) {
                return Err(DmsError::Dimension {
                    expected: first.len(),
                    found: bad.len(),
                });
            }
        }
        let keep = filter_nondominated(&points);
        let points = keep.into_iter().map(|i| points[i].clone()).collect();
        Ok(Self { points })
    }

    pub fn points(&self) -> &[ObjectiveVector] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Objective count, or `None` for an empty front.
    pub fn n_objectives(&self) -> Option<usize> {
        self.points.first().map(|v| v.len())
    }

    pub fn contains(&self, v: &[f64]) -> bool {
        self.points.iter().any(|p| p.as_slice() == v)
    }
}

/// The nondominated union of all fronts computed for one problem.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ReferenceFront(Front);

impl ReferenceFront {
    pub fn from_front(front: Front) -> Self {
        Self(front)
    }

    pub fn front(&self) -> &Front {
        &self.0
    }
}

impl std::ops::Deref for ReferenceFront {
    type Target = Front;

    fn deref(&self) -> &Front {
        &self.0
    }
}

fn common_objective_count<'a>(fronts: impl IntoIterator<Item = &'a Front>) -> Result<Option<usize>> {
    let mut p = None;
    for f in fronts {
        match (p, f.n_objectives()) {
            (_, None) => {}
            (None, Some(q)) => p = Some(q),
            (Some(a), Some(b)) if a != b => {
                return Err(DmsError::Dimension { expected: a, found: b });
            }
            _ => {}
        }
    }
    Ok(p)
}

pub fn build_reference_front(fronts: &[Front]) -> Result<ReferenceFront> {
    common_objective_count(fronts)?;
    let union: Vec<ObjectiveVector> = fronts.iter().flat_map(|f| f.points.iter().cloned()).collect();
    Ok(ReferenceFront(Front::new(union)?))
}

/// Fraction of `front` that survives in `reference` (exact vector equality).
pub fn purity(front: &Front, reference: &ReferenceFront) -> Option<f64> {
    if front.is_empty() {
        return None;
    }
    let hits = front.points.iter().filter(|v| reference.contains(v)).count();
    Some(hits as f64 / front.len() as f64)
}

/// Per-objective bracketing values used by the spread metrics.
#[derive(Clone, Debug, PartialEq)]
pub struct Extremes {
    pub min: Vec<f64>,
    pub max: Vec<f64>,
}

pub fn extreme_points(reference: &ReferenceFront) -> Option<Extremes> {
    let p = reference.n_objectives()?;
    let mut min = vec![f64::INFINITY; p];
    let mut max = vec![f64::NEG_INFINITY; p];
    for v in reference.points() {
        for j in 0..p {
            min[j] = min[j].min(v[j]);
            max[j] = max[j].max(v[j]);
        }
    }
    Some(Extremes { min, max })
}

/// Gaps `δ_0, ..., δ_N` between the sorted `j`-th components of `front`,
/// bracketed by the extremes.
fn gaps(front: &Front, extremes: &Extremes, j: usize) -> Vec<f64> {
    let mut values: Vec<f64> = front.points.iter().map(|v| v[j]).collect();
    values.sort_by(f64::total_cmp);
    let mut ladder = Vec::with_capacity(values.len() + 2);
    ladder.push(extremes.min[j]);
    ladder.extend(values);
    ladder.push(extremes.max[j]);
    ladder.windows(2).map(|w| w[1] - w[0]).collect()
}

/// Γ: the largest gap between consecutive points over all objectives.
pub fn gamma_spread(front: &Front, extremes: &Extremes) -> Option<f64> {
    let p = front.n_objectives()?;
    (0..p)
        .flat_map(|j| gaps(front, extremes, j))
        .reduce(f64::max)
}

/// Δ: uniformity of the gaps. Needs at least two points.
pub fn delta_spread(front: &Front, extremes: &Extremes) -> Option<f64> {
    let p = front.n_objectives()?;
    let n = front.len();
    if n < 2 {
        return None;
    }
    let mut worst = f64::NEG_INFINITY;
    for j in 0..p {
        let d = gaps(front, extremes, j);
        let (first, last) = (d[0], d[n]);
        let interior = &d[1..n];
        let mean = interior.iter().sum::<f64>() / (n - 1) as f64;
        let spread: f64 = interior.iter().map(|g| (g - mean).abs()).sum();
        let numerator = first + last + spread;
        let denominator = first + last + (n - 1) as f64 * mean;
        // all gaps zero: the points coincide in this objective and with the extremes
        let ratio = if denominator == 0.0 { 0.0 } else { numerator / denominator };
        worst = worst.max(ratio);
    }
    Some(worst)
}

/// Upper corner `U` for hypervolume: componentwise maximum over `fronts`
/// plus 1% of each objective's range (at least 1e-6).
pub fn reference_point(fronts: &[&Front]) -> Option<Vec<f64>> {
    let (lo, hi) = bounds(fronts)?;
    Some(
        lo.iter()
            .zip(&hi)
            .map(|(l, h)| h + (0.01 * (h - l)).max(1e-6))
            .collect(),
    )
}

/// Componentwise minimum over `fronts`.
pub fn ideal_point(fronts: &[&Front]) -> Option<Vec<f64>> {
    bounds(fronts).map(|(lo, _)| lo)
}

fn bounds(fronts: &[&Front]) -> Option<(Vec<f64>, Vec<f64>)> {
    let p = fronts.iter().find_map(|f| f.n_objectives())?;
    let mut lo = vec![f64::INFINITY; p];
    let mut hi = vec![f64::NEG_INFINITY; p];
    for v in fronts.iter().flat_map(|f| f.points()) {
        for j in 0..p {
            lo[j] = lo[j].min(v[j]);
            hi[j] = hi[j].max(v[j]);
        }
    }
    Some((lo, hi))
}

/// Hypervolume divided by the volume of the box `[ideal, U]`.
pub fn scaled_hypervolume(front: &Front, reference: &[f64], ideal: &[f64]) -> Result<Option<f64>> {
    if ideal.len() != reference.len() {
        return Err(DmsError::Dimension {
            expected: reference.len(),
            found: ideal.len(),
        });
    }
    let volume: f64 = reference.iter().zip(ideal).map(|(u, l)| u - l).product();
    if !(volume > 0.0) {
        return Ok(None);
    }
    Ok(Some(hypervolume(front.points(), reference)? / volume))
}

/// One row of a metric report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub problem: String,
    pub solver: String,
    pub front_size: usize,
    pub purity: Option<f64>,
    pub gamma: Option<f64>,
    pub delta: Option<f64>,
    pub hypervolume: Option<f64>,
}

/// Which column of a [`MetricReport`] a profile is built from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MetricKind {
    Purity,
    Gamma,
    Delta,
    Hypervolume,
}

impl MetricKind {
    pub const ALL: [MetricKind; 4] = [
        MetricKind::Purity,
        MetricKind::Hypervolume,
        MetricKind::Gamma,
        MetricKind::Delta,
    ];

    pub fn larger_is_better(self) -> bool {
        matches!(self, MetricKind::Purity | MetricKind::Hypervolume)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            MetricKind::Purity => "purity",
            MetricKind::Gamma => "gamma",
            MetricKind::Delta => "delta",
            MetricKind::Hypervolume => "hypervolume",
        }
    }

    pub fn value(self, report: &MetricReport) -> Option<f64> {
        match self {
            MetricKind::Purity => report.purity,
            MetricKind::Gamma => report.gamma,
            MetricKind::Delta => report.delta,
            MetricKind::Hypervolume => report.hypervolume,
        }
    }
}

impl std::fmt::Display for MetricKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Scores every named front of one problem.
///
/// The reference front is the nondominated union of `fronts` unless one is
/// supplied. `U` and the ideal point come from the union of all fronts and
/// the reference.
pub fn score_problem(
    problem: &str,
    fronts: &[(String, Front)],
    reference: Option<ReferenceFront>,
) -> Result<Vec<MetricReport>> {
    let plain: Vec<Front> = fronts.iter().map(|(_, f)| f.clone()).collect();
    let reference = match reference {
        Some(r) => {
            common_objective_count(plain.iter().chain(std::iter::once(r.front())))?;
            r
        }
        None => build_reference_front(&plain)?,
    };
    let extremes = extreme_points(&reference);
    let mut all: Vec<&Front> = plain.iter().collect();
    all.push(reference.front());
    let upper = reference_point(&all);
    let ideal = ideal_point(&all);

    fronts
        .iter()
        .map(|(solver, front)| {
            let hypervolume = match (&upper, &ideal, front.is_empty()) {
                (Some(u), Some(l), false) => scaled_hypervolume(front, u, l)?,
                _ => None,
            };
            Ok(MetricReport {
                problem: problem.to_string(),
                solver: solver.clone(),
                front_size: front.len(),
                purity: purity(front, &reference),
                gamma: extremes.as_ref().and_then(|e| gamma_spread(front, e)),
                delta: extremes.as_ref().and_then(|e| delta_spread(front, e)),
                hypervolume,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn front(pts: &[&[f64]]) -> Front {
        Front::new(pts.iter().map(|p| ObjectiveVector::from(*p)).collect()).unwrap()
    }

    fn reference(pts: &[&[f64]]) -> ReferenceFront {
        ReferenceFront::from_front(front(pts))
    }

    #[test]
    fn reference_front_examples() {
        let r = build_reference_front(&[front(&[&[0.0, 1.0]]), front(&[&[1.0, 0.0]])]).unwrap();
        assert_eq!(r.len(), 2);
        let r = build_reference_front(&[front(&[&[0.0, 1.0]]), front(&[&[0.5, 1.5]])]).unwrap();
        assert_eq!(r.points(), &[ObjectiveVector::from(vec![0.0, 1.0])]);
        assert!(build_reference_front(&[front(&[&[0.0, 1.0]]), front(&[&[0.0, 1.0, 2.0]])]).is_err());
    }

    #[test]
    fn purity_examples() {
        let r = reference(&[&[0.0, 1.0], &[1.0, 0.0]]);
        assert_eq!(purity(&front(&[&[0.0, 1.0], &[1.0, 0.0]]), &r), Some(1.0));
        assert_eq!(purity(&front(&[&[0.0, 1.0], &[0.9, 0.1]]), &r), Some(0.5));
        assert_eq!(purity(&Front::default(), &r), None);
    }

    #[test]
    fn purity_three_solvers_by_hand() {
        let a = front(&[&[0.0, 4.0], &[1.0, 2.0], &[3.0, 1.5]]);
        let b = front(&[&[0.5, 3.0], &[1.0, 2.5], &[4.0, 0.0]]);
        let c = front(&[&[2.0, 1.0], &[3.0, 0.8]]);
        let r = build_reference_front(&[a.clone(), b.clone(), c.clone()]).unwrap();
        // survivors: (0,4) (1,2) | (0.5,3) (4,0) | (2,1) (3,0.8); dropped: (3,1.5), (1,2.5)
        assert_eq!(r.len(), 6);
        assert_eq!(purity(&a, &r), Some(2.0 / 3.0));
        assert_eq!(purity(&b, &r), Some(2.0 / 3.0));
        assert_eq!(purity(&c, &r), Some(1.0));
    }

    #[test]
    fn extremes_examples() {
        let e = extreme_points(&reference(&[&[0.0, 1.0], &[1.0, 0.0]])).unwrap();
        assert_eq!(e.min, vec![0.0, 0.0]);
        assert_eq!(e.max, vec![1.0, 1.0]);
        let s = extreme_points(&reference(&[&[0.3, 0.7]])).unwrap();
        assert_eq!(s.min, s.max);
        assert!(extreme_points(&ReferenceFront::default()).is_none());
    }

    #[test]
    fn gamma_two_point_example() {
        let e = extreme_points(&reference(&[&[0.0, 1.0], &[1.0, 0.0]])).unwrap();
        let f = front(&[&[0.2, 0.8], &[0.5, 0.5]]);
        assert!((gamma_spread(&f, &e).unwrap() - 0.5).abs() <= 1e-12);
        assert!((delta_spread(&f, &e).unwrap() - 0.7).abs() <= 1e-12);
    }

    #[test]
    fn gamma_extremes_only_and_uniform() {
        let e = extreme_points(&reference(&[&[0.0, 1.0], &[1.0, 0.0]])).unwrap();
        assert_eq!(gamma_spread(&front(&[&[0.0, 1.0], &[1.0, 0.0]]), &e), Some(1.0));
        let k = 4;
        let pts: Vec<Vec<f64>> = (1..=k)
            .map(|i| {
                let t = i as f64 / (k + 1) as f64;
                vec![t, 1.0 - t]
            })
            .collect();
        let refs: Vec<&[f64]> = pts.iter().map(|v| v.as_slice()).collect();
        let g = gamma_spread(&front(&refs), &e).unwrap();
        assert!((g - 1.0 / (k + 1) as f64).abs() < 1e-12);
    }

    #[test]
    fn delta_uniform_gaps() {
        // N points at i/(N+1): every gap equals 1/(N+1), so Δ = 2/(N+1)
        for n in 2..8 {
            let pts: Vec<Vec<f64>> = (1..=n)
                .map(|i| {
                    let t = i as f64 / (n + 1) as f64;
                    vec![t, 1.0 - t]
                })
                .collect();
            let refs: Vec<&[f64]> = pts.iter().map(|v| v.as_slice()).collect();
            let e = Extremes { min: vec![0.0, 0.0], max: vec![1.0, 1.0] };
            let d = delta_spread(&front(&refs), &e).unwrap();
            assert!((d - 2.0 / (n + 1) as f64).abs() < 1e-12, "n={n}: {d}");
        }
    }

    #[test]
    fn delta_three_point_hand_value() {
        // j=1 values 0.1, 0.2, 0.4 in [0,1]: gaps 0.1 | 0.1, 0.2 | 0.6,
        // mean 0.15, Σ|δ-mean| = 0.1, Δ_1 = (0.7 + 0.1) / (0.7 + 0.3) = 0.8.
        // j=2 values 0.6, 0.8, 0.9: gaps 0.6 | 0.2, 0.1 | 0.1, same ratio 0.8.
        let e = Extremes { min: vec![0.0, 0.0], max: vec![1.0, 1.0] };
        let f = front(&[&[0.1, 0.9], &[0.2, 0.8], &[0.4, 0.6]]);
        assert!((delta_spread(&f, &e).unwrap() - 0.8).abs() <= 1e-12);
        let g = gamma_spread(&f, &e).unwrap();
        assert!((g - 0.6).abs() <= 1e-12);
    }

    #[test]
    fn delta_prefers_full_uniform_front() {
        let e = Extremes { min: vec![0.0, 0.0], max: vec![1.0, 1.0] };
        let full = front(&[&[0.0, 1.0], &[0.25, 0.75], &[0.5, 0.5], &[0.75, 0.25], &[1.0, 0.0]]);
        let holed = front(&[&[0.0, 1.0], &[0.25, 0.75], &[0.75, 0.25], &[1.0, 0.0]]);
        assert!(delta_spread(&full, &e).unwrap() < delta_spread(&holed, &e).unwrap());
    }

    #[test]
    fn delta_needs_two_points() {
        let e = Extremes { min: vec![0.0, 0.0], max: vec![1.0, 1.0] };
        assert_eq!(delta_spread(&front(&[&[0.5, 0.5]]), &e), None);
        assert_eq!(gamma_spread(&Front::default(), &e), None);
    }

    #[test]
    fn scaled_hypervolume_examples() {
        let u = [2.0, 3.0];
        let ideal = [0.0, 1.0];
        let at_ideal = front(&[&ideal]);
        assert_eq!(scaled_hypervolume(&at_ideal, &u, &ideal).unwrap(), Some(1.0));
        let on_edge = front(&[&[2.0, 1.0]]);
        assert_eq!(scaled_hypervolume(&on_edge, &u, &ideal).unwrap(), Some(0.0));
        assert_eq!(scaled_hypervolume(&at_ideal, &[0.0, 3.0], &ideal).unwrap(), None);
    }

    #[test]
    fn reference_point_margin() {
        let a = front(&[&[0.0, 10.0], &[5.0, 0.0]]);
        assert_eq!(reference_point(&[&a]).unwrap(), vec![5.05, 10.1]);
        let b = front(&[&[1.0, 1.0]]);
        assert_eq!(reference_point(&[&b]).unwrap(), vec![1.0 + 1e-6, 1.0 + 1e-6]);
        assert_eq!(ideal_point(&[&a, &b]).unwrap(), vec![0.0, 0.0]);
    }

    #[test]
    fn score_two_hand_fronts() {
        let a = front(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let b = front(&[&[0.2, 0.8], &[0.5, 0.5]]);
        let reports = score_problem("toy", &[("a".into(), a), ("b".into(), b)], None).unwrap();
        // every point is mutually nondominated
        assert_eq!(reports[0].purity, Some(1.0));
        assert_eq!(reports[1].purity, Some(1.0));
        // extremes (0,0)-(1,1): a has a single interior gap of 1; b as in the worked example
        assert_eq!(reports[0].gamma, Some(1.0));
        assert!((reports[1].gamma.unwrap() - 0.5).abs() < 1e-12);
        // a: gaps 0 | 1 | 0 -> Δ = (0 + 0 + 0) / (0 + 0 + 1) = 0
        assert_eq!(reports[0].delta, Some(0.0));
        assert!((reports[1].delta.unwrap() - 0.7).abs() < 1e-12);
        // U = (1.01, 1.01), ideal = (0, 0)
        let vol = 1.01 * 1.01;
        let hv_a = (1.01 * 1.01 - 1.0 * 1.0) / vol;
        assert!((reports[0].hypervolume.unwrap() - hv_a).abs() < 1e-12);
        let hv_b = (0.81 * 0.21 + 0.51 * 0.3) / vol;
        assert!((reports[1].hypervolume.unwrap() - hv_b).abs() < 1e-12);
    }

    #[test]
    fn score_with_empty_front() {
        let a = front(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let reports = score_problem("toy", &[("a".into(), a), ("empty".into(), Front::default())], None).unwrap();
        let e = &reports[1];
        assert_eq!(e.front_size, 0);
        assert_eq!((e.purity, e.gamma, e.delta, e.hypervolume), (None, None, None, None));
    }

    fn arb_front(p: usize) -> impl Strategy<Value = Front> {
        prop::collection::vec(prop::collection::vec(0.0f64..1.0, p), 1..20)
            .prop_map(|v| Front::new(v.into_iter().map(ObjectiveVector::from).collect()).unwrap())
    }

    proptest! {
        #[test]
        fn hypervolume_is_monotone(f in arb_front(3), extra in prop::collection::vec(0.0f64..1.0, 3)) {
            let u = [1.0; 3];
            let base = hypervolume(f.points(), &u).unwrap();
            let mut pts = f.points().to_vec();
            pts.push(extra.into());
            let grown = Front::new(pts).unwrap();
            prop_assert!(hypervolume(grown.points(), &u).unwrap() >= base - 1e-15);
            let mut fewer = f.points().to_vec();
            fewer.pop();
            prop_assert!(hypervolume(&fewer, &u).unwrap() <= base + 1e-15);
        }

        #[test]
        fn hypervolume_translation_invariant(f in arb_front(2), shift in prop::collection::vec(-5.0f64..5.0, 2)) {
            let u = [1.0, 1.0];
            let hv = hypervolume(f.points(), &u).unwrap();
            let moved: Vec<Vec<f64>> = f.points().iter().map(|v| v.iter().zip(&shift).map(|(a, s)| a + s).collect()).collect();
            let mu: Vec<f64> = u.iter().zip(&shift).map(|(a, s)| a + s).collect();
            let hv2 = hypervolume(&moved, &mu).unwrap();
            prop_assert!((hv - hv2).abs() <= 1e-12 * hv.max(1.0) + 1e-14);
        }

        #[test]
        fn spreads_ignore_point_order(f in arb_front(2)) {
            let r = ReferenceFront::from_front(f.clone());
            let e = extreme_points(&r).unwrap();
            let mut rev = f.points().to_vec();
            rev.reverse();
            let g = Front::new(rev).unwrap();
            prop_assert_eq!(gamma_spread(&f, &e), gamma_spread(&g, &e));
            prop_assert_eq!(delta_spread(&f, &e), delta_spread(&g, &e));
        }

        #[test]
        fn self_reference_is_pure(f in arb_front(3)) {
            let r = build_reference_front(std::slice::from_ref(&f)).unwrap();
            prop_assert_eq!(purity(&f, &r), Some(1.0));
        }
    }
}
