//! Steady and ranging persistence functions over tame filtrations.
//!
//! For a feature 𝓕 and levels u ≤ v:
//!
//! * the *steady* sets at (u ≤ v) are the 𝓕-sets at u whose push-forward is
//!   an 𝓕-set at every level of [u, v];
//! * the *ranging* sets at (u ≤ v) are the tracked sets at u that are the
//!   image of an 𝓕-set from some level x ≤ u and whose push-forward is an
//!   𝓕-set at some level y ≥ v.
//!
//! Counting either family over all pairs yields a persistence function. Both
//! families are constant when u and v move within the same critical interval,
//! so a [`PersistenceFunction`] stores one exact count per pair of intervals
//! and answers queries at arbitrary reals from that table; nothing is ever
//! interpolated. The three defining axioms are verified on the whole grid
//! before a function is returned, and a violation is surfaced as an internal
//! error rather than ignored.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::feature::Feature;
use crate::filtration::{TameFiltration, TrackedSet};
use crate::hypergraph::ElementSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Steady,
    Ranging,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Steady => f.write_str("steady"),
            Mode::Ranging => f.write_str("ranging"),
        }
    }
}

#[derive(Clone, Debug, Error, PartialEq)]
pub enum QueryError {
    #[error("persistence queries need u ≤ v, got u = {u}, v = {v}")]
    InvalidPair { u: f64, v: f64 },
}

/// A violated persistence-function axiom. This is an internal-error report:
/// the counting construction guarantees the axioms, so a violation indicates
/// an implementation bug.
#[derive(Clone, Debug, Error, PartialEq)]
#[error("persistence axiom {axiom} violated at u1={u1} u2={u2} v1={v1} v2={v2}")]
pub struct AxiomViolation {
    pub axiom: u8,
    pub u1: f64,
    pub u2: f64,
    pub v1: f64,
    pub v2: f64,
}

/// The steady set S(u ≤ v): 𝓕-sets at u whose push-forwards stay 𝓕-sets at
/// every representative level of [u, v] (the critical values inside plus u
/// and v themselves; the filtration is constant in between).
pub fn steady_set(
    feature: &dyn Feature,
    flt: &TameFiltration,
    u: f64,
    v: f64,
) -> Result<Vec<TrackedSet>, QueryError> {
    if u > v {
        return Err(QueryError::InvalidPair { u, v });
    }
    let i = flt.interval_index(u);
    let j = flt.interval_index(v);
    let mut out = Vec::new();
    'candidates: for a in feature.enumerate(&flt.objects()[i]) {
        let mut current = a.clone();
        for k in i..=j {
            if k > i {
                current = flt.transfer_set(&current, k - 1, k);
            }
            if !feature.holds(&current, &flt.objects()[k]) {
                continue 'candidates;
            }
        }
        out.push(TrackedSet { base_level: u, elements: a });
    }
    Ok(out)
}

/// The ranging set R(u ≤ v): tracked sets at u reachable from an 𝓕-set at
/// some representative level x ≤ u, whose push-forward is an 𝓕-set at some
/// representative level y ≥ v. Representatives cover every critical interval
/// intersecting the constraint, including the interval below the first
/// critical value and the stable tail.
pub fn ranging_set(
    feature: &dyn Feature,
    flt: &TameFiltration,
    u: f64,
    v: f64,
) -> Result<Vec<TrackedSet>, QueryError> {
    if u > v {
        return Err(QueryError::InvalidPair { u, v });
    }
    let i = flt.interval_index(u);
    let j = flt.interval_index(v);
    let n = flt.interval_count() - 1;

    let mut born: BTreeSet<ElementSet> = BTreeSet::new();
    for x in 0..=i {
        for a in feature.enumerate(&flt.objects()[x]) {
            born.insert(flt.transfer_set(&a, x, i));
        }
    }
    let mut out = Vec::new();
    for a in born {
        let mut current = flt.transfer_set(&a, i, j);
        let mut ok = false;
        for y in j..=n {
            if y > j {
                current = flt.transfer_set(&current, y - 1, y);
            }
            if feature.holds(&current, &flt.objects()[y]) {
                ok = true;
                break;
            }
        }
        if ok {
            out.push(TrackedSet { base_level: u, elements: a });
        }
    }
    Ok(out)
}

/// A steady or ranging persistence function: exact counts on the triangular
/// grid of critical intervals, plus the data needed to answer arbitrary
/// queries.
pub struct PersistenceFunction {
    feature: Arc<dyn Feature>,
    filtration: Arc<TameFiltration>,
    mode: Mode,
    samples: Vec<f64>,
    /// counts[i][j - i] = p(u ≤ v) for u in interval i, v in interval j.
    counts: Vec<Vec<u64>>,
}

impl PersistenceFunction {
    /// Counts steady or ranging sets over every pair of critical intervals
    /// and verifies the persistence-function axioms on the full grid.
    pub fn compute(
        feature: Arc<dyn Feature>,
        filtration: Arc<TameFiltration>,
        mode: Mode,
    ) -> Result<Self, AxiomViolation> {
        let n1 = filtration.interval_count();
        let fsets: Vec<BTreeSet<ElementSet>> = filtration
            .objects()
            .iter()
            .map(|h| feature.enumerate(h).into_iter().collect())
            .collect();

        let mut counts: Vec<Vec<u64>> = Vec::with_capacity(n1);
        match mode {
            Mode::Steady => {
                for i in 0..n1 {
                    let mut row = Vec::with_capacity(n1 - i);
                    let mut live: Vec<ElementSet> = fsets[i].iter().cloned().collect();
                    row.push(live.len() as u64);
                    for j in i + 1..n1 {
                        live = live
                            .into_iter()
                            .map(|a| filtration.transfer_set(&a, j - 1, j))
                            .filter(|a| fsets[j].contains(a))
                            .collect();
                        row.push(live.len() as u64);
                    }
                    counts.push(row);
                }
            }
            Mode::Ranging => {
                // born[i]: images at interval i of 𝓕-sets from intervals ≤ i.
                let mut born: Vec<BTreeSet<ElementSet>> = Vec::with_capacity(n1);
                for i in 0..n1 {
                    let mut sets: BTreeSet<ElementSet> = if i == 0 {
                        BTreeSet::new()
                    } else {
                        born[i - 1]
                            .iter()
                            .map(|a| filtration.transfer_set(a, i - 1, i))
                            .collect()
                    };
                    sets.extend(fsets[i].iter().cloned());
                    born.push(sets);
                }
                let future_ok = |a: &ElementSet, j: usize| -> bool {
                    let mut current = a.clone();
                    for y in j..n1 {
                        if y > j {
                            current = filtration.transfer_set(&current, y - 1, y);
                        }
                        if fsets[y].contains(&current) {
                            return true;
                        }
                    }
                    false
                };
                for i in 0..n1 {
                    let mut row = Vec::with_capacity(n1 - i);
                    let mut tracked: Vec<ElementSet> = born[i].iter().cloned().collect();
                    for j in i..n1 {
                        if j > i {
                            tracked = tracked
                                .into_iter()
                                .map(|a| filtration.transfer_set(&a, j - 1, j))
                                .collect();
                        }
                        row.push(tracked.iter().filter(|a| future_ok(a, j)).count() as u64);
                    }
                    counts.push(row);
                }
            }
        }

        let samples = filtration.sample_points();
        let function = PersistenceFunction { feature, filtration, mode, samples, counts };
        function.verify_axioms()?;
        Ok(function)
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn feature(&self) -> &Arc<dyn Feature> {
        &self.feature
    }

    pub fn filtration(&self) -> &Arc<TameFiltration> {
        &self.filtration
    }

    /// Canonical sample points of the underlying filtration.
    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub(crate) fn count_at_intervals(&self, i: usize, j: usize) -> u64 {
        self.counts[i][j - i]
    }

    pub(crate) fn interval_count(&self) -> usize {
        self.counts.len()
    }

    /// p(u ≤ v) at arbitrary reals. The value is looked up at the pair of
    /// critical intervals containing u and v, where the counting functions
    /// are constant, so this is the exact re-evaluated value.
    pub fn value_at(&self, u: f64, v: f64) -> Result<u64, QueryError> {
        if u > v {
            return Err(QueryError::InvalidPair { u, v });
        }
        let i = self.filtration.interval_index(u);
        let j = self.filtration.interval_index(v);
        Ok(self.count_at_intervals(i, j))
    }

    /// p(u ≤ +∞): the count at the stable tail beyond the last critical
    /// value.
    pub fn essential_value(&self, u: f64) -> u64 {
        let i = self.filtration.interval_index(u);
        self.count_at_intervals(i, self.counts.len() - 1)
    }

    /// A representative sample point of a critical interval.
    fn interval_sample(&self, i: usize) -> f64 {
        if i == 0 {
            self.samples[0]
        } else {
            self.filtration.critical_values()[i - 1]
        }
    }

    /// Checks the three persistence-function axioms over all grid 4-tuples
    /// u₁ ≤ u₂ ≤ v₁ ≤ v₂.
    pub fn verify_axioms(&self) -> Result<(), AxiomViolation> {
        let n1 = self.counts.len();
        let p = |i: usize, j: usize| self.count_at_intervals(i, j) as i64;
        for i1 in 0..n1 {
            for i2 in i1..n1 {
                for j1 in i2..n1 {
                    for j2 in j1..n1 {
                        let violated = if p(i1, j1) > p(i2, j1) {
                            Some(1)
                        } else if p(i2, j2) > p(i2, j1) {
                            Some(2)
                        } else if p(i2, j1) - p(i1, j1) < p(i2, j2) - p(i1, j2) {
                            Some(3)
                        } else {
                            None
                        };
                        if let Some(axiom) = violated {
                            return Err(AxiomViolation {
                                axiom,
                                u1: self.interval_sample(i1),
                                u2: self.interval_sample(i2),
                                v1: self.interval_sample(j1),
                                v2: self.interval_sample(j2),
                            });
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// The outcome of an ε-compatibility check between two persistence functions.
#[derive(Clone, Debug, PartialEq)]
pub enum Compatibility {
    Compatible,
    Violated(CompatibilityViolation),
}

impl Compatibility {
    pub fn is_compatible(&self) -> bool {
        matches!(self, Compatibility::Compatible)
    }
}

/// The first grid pair at which one of the two ε-compatibility inequalities
/// fails: `shifted_count` = p(u−ε ≤ v+ε) exceeded `direct_count` = p′(u ≤ v).
#[derive(Clone, Debug, PartialEq)]
pub struct CompatibilityViolation {
    pub u: f64,
    pub v: f64,
    /// Which function's shifted query exceeded the other: 0 for the first
    /// argument, 1 for the second.
    pub exceeding: usize,
    pub shifted_count: u64,
    pub direct_count: u64,
}

/// Checks p(u−ε ≤ v+ε) ≤ p′(u ≤ v) and symmetrically for every pair of the
/// merged sample grid of both filtrations plus the ε-shifted images of those
/// samples.
///
/// Both functions are right-continuous step functions, so every constancy
/// cell of the two inequalities contains one of these finitely many grid
/// points; the finite check decides the universal statement exactly. Shifted
/// queries are re-evaluated on the underlying counts, never interpolated.
pub fn epsilon_compatible(
    p: &PersistenceFunction,
    p_prime: &PersistenceFunction,
    epsilon: f64,
) -> Compatibility {
    assert!(epsilon >= 0.0, "ε must be nonnegative");
    let mut grid: Vec<f64> = Vec::new();
    for f in [p, p_prime] {
        for a in f.filtration().critical_values() {
            grid.extend([*a, *a - epsilon, *a + epsilon]);
        }
    }
    if grid.is_empty() {
        grid.push(0.0);
    }
    let lo = grid.iter().cloned().fold(f64::INFINITY, f64::min) - 1.0;
    let hi = grid.iter().cloned().fold(f64::NEG_INFINITY, f64::max) + 1.0;
    grid.extend([lo, hi]);
    grid.sort_by(|a, b| a.partial_cmp(b).unwrap());
    grid.dedup();

    for (ui, u) in grid.iter().enumerate() {
        for v in &grid[ui..] {
            for (exceeding, (a, b)) in [(p, p_prime), (p_prime, p)].into_iter().enumerate() {
                let shifted = a.value_at(u - epsilon, v + epsilon).expect("u ≤ v");
                let direct = b.value_at(*u, *v).expect("u ≤ v");
                if shifted > direct {
                    return Compatibility::Violated(CompatibilityViolation {
                        u: *u,
                        v: *v,
                        exceeding,
                        shifted_count: shifted,
                        direct_count: direct,
                    });
                }
            }
        }
    }
    Compatibility::Compatible
}
