//! Pareto dominance, the nondominated archive, and the plain-text front format.
//!
//! Dominance is the strict partial order induced by the nonnegative orthant:
//! `a` dominates `b` when `b - a` is componentwise nonnegative and nonzero.
//! Comparisons are exact; no tolerance is applied anywhere in this module.

use std::fmt;
use std::io::{BufRead, Write};
use std::ops::Deref;
use std::path::Path;

use crate::error::{DmsError, Result};

/// Box-shaped feasible region `{x : lower <= x <= upper}`.
#[derive(Clone, Debug, PartialEq)]
pub struct BoxDomain {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl BoxDomain {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(DmsError::Dimension {
                expected: lower.len(),
                found: upper.len(),
            });
        }
        if lower.is_empty() {
            return Err(DmsError::Config("box must have at least one dimension".into()));
        }
        for (i, (l, u)) in lower.iter().zip(&upper).enumerate() {
            if !l.is_finite() || !u.is_finite() || l > u {
                return Err(DmsError::Config(format!(
                    "invalid bounds [{l}, {u}] in coordinate {i}"
                )));
            }
        }
        Ok(Self { lower, upper })
    }

    /// The box `[lower, upper]^n`.
    pub fn uniform(n: usize, lower: f64, upper: f64) -> Result<Self> {
        Self::new(vec![lower; n], vec![upper; n])
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim()
            && x
                .iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(v, (l, u))| *l <= *v && *v <= *u)
    }

    pub fn center(&self) -> DecisionPoint {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(l, u)| 0.5 * (l + u))
            .collect()
    }

    /// Largest side length, `max_i (u_i - l_i)`.
    pub fn max_width(&self) -> f64 {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(l, u)| u - l)
            .fold(0.0, f64::max)
    }
}

macro_rules! real_vector_newtype {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Clone, Debug, PartialEq, Default)]
        pub struct $name(Vec<f64>);

        impl $name {
            pub fn new(values: Vec<f64>) -> Self {
                Self(values)
            }

            pub fn as_slice(&self) -> &[f64] {
                &self.0
            }

            pub fn into_inner(self) -> Vec<f64> {
                self.0
            }
        }

        impl Deref for $name {
            type Target = [f64];

            fn deref(&self) -> &[f64] {
                &self.0
            }
        }

        impl AsRef<[f64]> for $name {
            fn as_ref(&self) -> &[f64] {
                &self.0
            }
        }

        impl From<Vec<f64>> for $name {
            fn from(values: Vec<f64>) -> Self {
                Self(values)
            }
        }

        impl From<&[f64]> for $name {
            fn from(values: &[f64]) -> Self {
                Self(values.to_vec())
            }
        }

        impl FromIterator<f64> for $name {
            fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
                Self(iter.into_iter().collect())
            }
        }
    };
}

real_vector_newtype!(
    /// A point in decision space.
    DecisionPoint
);

real_vector_newtype!(
    /// The objective values `(f_1(x), ..., f_p(x))` of some decision point.
    ObjectiveVector
);

impl ObjectiveVector {
    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }
}

/// Returns `true` iff `a` dominates `b`.
pub fn dominates(a: &[f64], b: &[f64]) -> Result<bool> {
    if a.len() != b.len() {
        return Err(DmsError::Dimension {
            expected: a.len(),
            found: b.len(),
        });
    }
    Ok(dominates_unchecked(a, b))
}

#[inline]
pub(crate) fn dominates_unchecked(a: &[f64], b: &[f64]) -> bool {
    debug_assert_eq!(a.len(), b.len());
    let mut strictly_better = false;
    for (x, y) in a.iter().zip(b) {
        if x > y {
            return false;
        }
        if x < y {
            strictly_better = true;
        }
    }
    strictly_better
}

/// Indices of the nondominated members of `points`, in input order.
///
/// A vector equal to one that was already kept is dropped, so the result
/// holds each nondominated objective vector once.
pub fn filter_nondominated<V: AsRef<[f64]>>(points: &[V]) -> Vec<usize> {
    let mut kept: Vec<usize> = Vec::new();
    'outer: for (i, p) in points.iter().enumerate() {
        let p = p.as_ref();
        for (j, q) in points.iter().enumerate() {
            if i != j && dominates_unchecked(q.as_ref(), p) {
                continue 'outer;
            }
        }
        if kept.iter().any(|&k| points[k].as_ref() == p) {
            continue;
        }
        kept.push(i);
    }
    kept
}

/// A feasible nondominated point paired with its stepsize parameter.
#[derive(Clone, Debug, PartialEq)]
pub struct ArchiveEntry {
    pub point: DecisionPoint,
    pub objectives: ObjectiveVector,
    pub stepsize: f64,
}

impl ArchiveEntry {
    pub fn new(point: DecisionPoint, objectives: ObjectiveVector, stepsize: f64) -> Self {
        Self {
            point,
            objectives,
            stepsize,
        }
    }
}

/// The evolving list of nondominated points.
///
/// Entries are kept in insertion order. No entry dominates another and no two
/// entries share a decision point. Entries with equal objective vectors at
/// distinct decision points are both kept.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Archive {
    entries: Vec<ArchiveEntry>,
}

impl Archive {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds an archive from arbitrary entries, dropping dominated ones.
    pub fn from_entries(entries: impl IntoIterator<Item = ArchiveEntry>) -> Self {
        let mut archive = Self::new();
        archive.insert(entries);
        archive
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[ArchiveEntry] {
        &self.entries
    }

    pub fn iter(&self) -> std::slice::Iter<'_, ArchiveEntry> {
        self.entries.iter()
    }

    pub fn get(&self, index: usize) -> Option<&ArchiveEntry> {
        self.entries.get(index)
    }

    pub fn position_of(&self, point: &[f64]) -> Option<usize> {
        self.entries.iter().position(|e| e.point.as_slice() == point)
    }

    pub fn set_stepsize(&mut self, index: usize, stepsize: f64) {
        assert!(stepsize > 0.0, "stepsize must stay positive");
        self.entries[index].stepsize = stepsize;
    }

    pub fn min_stepsize(&self) -> Option<f64> {
        self.entries.iter().map(|e| e.stepsize).reduce(f64::min)
    }

    pub fn objective_vectors(&self) -> Vec<ObjectiveVector> {
        self.entries.iter().map(|e| e.objectives.clone()).collect()
    }

    /// Merges `candidates` into the archive, keeping only nondominated entries.
    ///
    /// Returns `true` iff the set of entries changed. A candidate whose decision
    /// point is already stored is ignored.
    pub fn insert(&mut self, candidates: impl IntoIterator<Item = ArchiveEntry>) -> bool {
        let mut changed = false;
        for candidate in candidates {
            if let Some(first) = self.entries.first() {
                assert_eq!(
                    first.objectives.len(),
                    candidate.objectives.len(),
                    "objective count mismatch in archive insertion"
                );
            }
            if self.position_of(&candidate.point).is_some() {
                continue;
            }
            if self
                .entries
                .iter()
                .any(|e| dominates_unchecked(&e.objectives, &candidate.objectives))
            {
                continue;
            }
            self.entries
                .retain(|e| !dominates_unchecked(&candidate.objectives, &e.objectives));
            self.entries.push(candidate);
            changed = true;
        }
        debug_assert!(self.is_pairwise_nondominated());
        changed
    }

    pub fn is_pairwise_nondominated(&self) -> bool {
        self.entries.iter().enumerate().all(|(i, a)| {
            self.entries.iter().enumerate().all(|(j, b)| {
                i == j || (!dominates_unchecked(&a.objectives, &b.objectives) && a.point != b.point)
            })
        })
    }
}

impl<'a> IntoIterator for &'a Archive {
    type Item = &'a ArchiveEntry;
    type IntoIter = std::slice::Iter<'a, ArchiveEntry>;

    fn into_iter(self) -> Self::IntoIter {
        self.entries.iter()
    }
}

/// Pure form of [`Archive::insert`]: returns the merged archive and whether it changed.
pub fn archive_insert(archive: &Archive, candidates: Vec<ArchiveEntry>) -> (Archive, bool) {
    let mut next = archive.clone();
    let changed = next.insert(candidates);
    (next, changed)
}

/// One objective vector rendered as a front-file line (17 significant digits).
pub fn format_vector(values: &[f64]) -> String {
    struct Line<'a>(&'a [f64]);
    impl fmt::Display for Line<'_> {
        fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            for (i, v) in self.0.iter().enumerate() {
                if i > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{v:.16e}")?;
            }
            Ok(())
        }
    }
    Line(values).to_string()
}

pub fn write_front<W: Write>(mut out: W, front: &[ObjectiveVector]) -> std::io::Result<()> {
    for v in front {
        writeln!(out, "{}", format_vector(v))?;
    }
    Ok(())
}

pub fn save_front(path: &Path, front: &[ObjectiveVector]) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|e| DmsError::io(path, e))?;
    let mut out = std::io::BufWriter::new(file);
    write_front(&mut out, front).map_err(|e| DmsError::io(path, e))?;
    out.flush().map_err(|e| DmsError::io(path, e))
}

/// Parses a front file. Blank lines and lines starting with `#` are skipped.
/// Every data line must carry the same number of values.
pub fn read_front<R: BufRead>(input: R, origin: &Path) -> Result<Vec<ObjectiveVector>> {
    let mut front: Vec<ObjectiveVector> = Vec::new();
    for (idx, line) in input.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|e| DmsError::io(origin, e))?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let parse_err = |message: String| DmsError::Parse {
            path: origin.to_path_buf(),
            line: line_no,
            message,
        };
        let values = trimmed
            .split_whitespace()
            .map(|tok| {
                tok.parse::<f64>()
                    .map_err(|_| parse_err(format!("not a number: `{tok}`")))
            })
            .collect::<Result<Vec<f64>>>()?;
        if let Some(first) = front.first() {
            if first.len() != values.len() {
                return Err(parse_err(format!(
                    "expected {} values, found {}",
                    first.len(),
                    values.len()
                )));
            }
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(parse_err("non-finite objective value".into()));
        }
        front.push(values.into());
    }
    Ok(front)
}

pub fn load_front(path: &Path) -> Result<Vec<ObjectiveVector>> {
    let file = std::fs::File::open(path).map_err(|e| DmsError::io(path, e))?;
    read_front(std::io::BufReader::new(file), path)
}
