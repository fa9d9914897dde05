//! Exact bottleneck distance between persistence diagrams.
//!
//! Finite points may be matched to each other or projected to the diagonal;
//! essential points (death = +∞, and likewise birth = −∞) can only be
//! matched to essential points of the same kind, so mismatched essential
//! counts give +∞. The distance over finite points is computed exactly:
//! the answer is one of the finitely many pairwise L∞ distances or
//! distances-to-diagonal, found by binary search with a perfect-matching
//! feasibility test on the diagonal-augmented bipartite graph.

use crate::diagram::{Level, PersistenceDiagram};

#[derive(Clone, Copy, Debug, PartialEq)]
struct FinitePoint {
    birth: f64,
    death: f64,
}

impl FinitePoint {
    fn linf(&self, other: &FinitePoint) -> f64 {
        (self.birth - other.birth).abs().max((self.death - other.death).abs())
    }

    fn diagonal_cost(&self) -> f64 {
        (self.death - self.birth) / 2.0
    }
}

/// Points expanded by multiplicity and split by essential kind.
#[derive(Default)]
struct Classified {
    finite: Vec<FinitePoint>,
    /// births of points with death = +∞
    essential_births: Vec<f64>,
    /// deaths of points with birth = −∞
    essential_deaths: Vec<f64>,
    everlasting: usize,
}

fn classify(d: &PersistenceDiagram) -> Classified {
    let mut out = Classified::default();
    for p in &d.points {
        for _ in 0..p.mult {
            match (p.birth, p.death) {
                (Level::Finite(b), Level::Finite(dd)) => {
                    out.finite.push(FinitePoint { birth: b, death: dd })
                }
                (Level::Finite(b), Level::PosInf) => out.essential_births.push(b),
                (Level::NegInf, Level::Finite(dd)) => out.essential_deaths.push(dd),
                (Level::NegInf, Level::PosInf) => out.everlasting += 1,
                _ => unreachable!("diagram points have birth < death"),
            }
        }
    }
    out.essential_births.sort_by(|a, b| a.partial_cmp(b).unwrap());
    out.essential_deaths.sort_by(|a, b| a.partial_cmp(b).unwrap());
    out
}

/// Minimal max-displacement between two equal-length sorted coordinate lists.
/// The sorted pairing is optimal for the sup norm on a line.
fn sorted_matching_cost(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Whether the finite points admit a matching with every cost ≤ c, allowing
/// diagonal projections. Tests a perfect matching on the augmented graph
/// where each side is padded with the other side's diagonal projections.
fn feasible(left: &[FinitePoint], right: &[FinitePoint], c: f64) -> bool {
    let n1 = left.len();
    let n2 = right.len();
    let total = n1 + n2;
    let edge = |u: usize, v: usize| -> bool {
        match (u < n1, v < n2) {
            (true, true) => left[u].linf(&right[v]) <= c,
            (true, false) => left[u].diagonal_cost() <= c,
            (false, true) => right[v].diagonal_cost() <= c,
            (false, false) => true,
        }
    };

    // Kuhn's augmenting-path matching; sizes here are tiny.
    fn try_augment(
        u: usize,
        total: usize,
        edge: &dyn Fn(usize, usize) -> bool,
        seen: &mut [bool],
        matched_to: &mut [Option<usize>],
    ) -> bool {
        for v in 0..total {
            if !seen[v] && edge(u, v) {
                seen[v] = true;
                let free = match matched_to[v] {
                    None => true,
                    Some(prev) => try_augment(prev, total, edge, seen, matched_to),
                };
                if free {
                    matched_to[v] = Some(u);
                    return true;
                }
            }
        }
        false
    }

    let mut matched_to: Vec<Option<usize>> = vec![None; total];
    for u in 0..total {
        let mut seen = vec![false; total];
        if !try_augment(u, total, &edge, &mut seen, &mut matched_to) {
            return false;
        }
    }
    true
}

/// The exact bottleneck distance between two diagrams in the L∞ ground
/// metric with diagonal augmentation. Returns +∞ when essential points
/// cannot be matched one-to-one.
pub fn bottleneck(d1: &PersistenceDiagram, d2: &PersistenceDiagram) -> f64 {
    let a = classify(d1);
    let b = classify(d2);
    if a.essential_births.len() != b.essential_births.len()
        || a.essential_deaths.len() != b.essential_deaths.len()
        || a.everlasting != b.everlasting
    {
        return f64::INFINITY;
    }
    let essential = sorted_matching_cost(&a.essential_births, &b.essential_births)
        .max(sorted_matching_cost(&a.essential_deaths, &b.essential_deaths));

    let mut candidates: Vec<f64> = vec![0.0];
    for p in &a.finite {
        candidates.push(p.diagonal_cost());
        for q in &b.finite {
            candidates.push(p.linf(q));
        }
    }
    candidates.extend(b.finite.iter().map(FinitePoint::diagonal_cost));
    candidates.sort_by(|x, y| x.partial_cmp(y).unwrap());
    candidates.dedup();

    // Smallest feasible candidate; feasibility is monotone in c.
    let mut lo = 0;
    let mut hi = candidates.len() - 1;
    debug_assert!(feasible(&a.finite, &b.finite, candidates[hi]));
    while lo < hi {
        let mid = (lo + hi) / 2;
        if feasible(&a.finite, &b.finite, candidates[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    essential.max(candidates[lo])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::DiagramPoint;
    use crate::persistence::Mode;

    fn dgm(points: &[(Level, Level, u64)]) -> PersistenceDiagram {
        PersistenceDiagram::new(
            Mode::Steady,
            points.iter().map(|(birth, death, mult)| DiagramPoint {
                birth: *birth,
                death: *death,
                mult: *mult,
            }),
        )
    }

    fn fin(b: f64, d: f64, m: u64) -> (Level, Level, u64) {
        (Level::Finite(b), Level::Finite(d), m)
    }

    #[test]
    fn distance_to_self_is_zero() {
        let d = dgm(&[fin(0.0, 2.0, 1), (Level::Finite(1.0), Level::PosInf, 2)]);
        assert_eq!(bottleneck(&d, &d), 0.0);
    }

    #[test]
    fn direct_match_beats_the_diagonal() {
        // Matching (0,2)↦(0,3) costs 1; sending both to the diagonal costs
        // max(1, 1.5) = 1.5.
        let d1 = dgm(&[fin(0.0, 2.0, 1)]);
        let d2 = dgm(&[fin(0.0, 3.0, 1)]);
        assert_eq!(bottleneck(&d1, &d2), 1.0);
    }

    #[test]
    fn far_points_go_to_the_diagonal() {
        let d1 = dgm(&[fin(0.0, 1.0, 1)]);
        let d2 = dgm(&[fin(100.0, 101.0, 1)]);
        assert_eq!(bottleneck(&d1, &d2), 0.5);
    }

    #[test]
    fn unmatched_essential_point_gives_infinity() {
        let d1 = dgm(&[(Level::Finite(0.0), Level::PosInf, 1)]);
        let d2 = dgm(&[]);
        assert_eq!(bottleneck(&d1, &d2), f64::INFINITY);
    }

    #[test]
    fn essential_births_match_in_sorted_order() {
        let d1 = dgm(&[(Level::Finite(0.0), Level::PosInf, 1), (Level::Finite(5.0), Level::PosInf, 1)]);
        let d2 = dgm(&[(Level::Finite(1.0), Level::PosInf, 1), (Level::Finite(5.0), Level::PosInf, 1)]);
        assert_eq!(bottleneck(&d1, &d2), 1.0);
    }

    #[test]
    fn multiplicities_are_expanded() {
        let d1 = dgm(&[fin(0.0, 4.0, 2)]);
        let d2 = dgm(&[fin(0.0, 4.0, 1), fin(1.0, 4.0, 1)]);
        assert_eq!(bottleneck(&d1, &d2), 1.0);
    }

    #[test]
    fn everlasting_counts_must_agree() {
        let d1 = dgm(&[(Level::NegInf, Level::PosInf, 1)]);
        let d2 = dgm(&[]);
        assert_eq!(bottleneck(&d1, &d2), f64::INFINITY);
        assert_eq!(bottleneck(&d1, &d1), 0.0);
    }
}
