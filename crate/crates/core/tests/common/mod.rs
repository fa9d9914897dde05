//! Brute-force oracles and shared fixtures for the integration suites.
//!
//! Every oracle here recomputes its answer straight from the definitions
//! (exhaustive walks, all-bijections enumerations) and stays independent of
//! the implementation paths it checks.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use srp_core::diagram::{DiagramPoint, Level, PersistenceDiagram};
use srp_core::{
    Element, ElementSet, Feature, Hypergraph, Mode, MonoClass, TameFiltration, TrackedSet,
    WeightedHypergraph,
};

/// Fixture FX1: ({a,b,c}, {e1↦{a,b}, e2↦{b,c}, e3↦{c}}).
pub fn fx1() -> Hypergraph {
    Hypergraph::new(
        ["a", "b", "c"],
        [("e1", vec!["a", "b"]), ("e2", vec!["b", "c"]), ("e3", vec!["c"])],
    )
}

/// Fixture FXHUB: e0 = {a,b} is a hub at level 0, loses the property when
/// e3 = {c,d} arrives at level 1, regains it when e4 = {a,e}, e5 = {b,f}
/// arrive at level 2.
pub fn fxhub_weighted() -> WeightedHypergraph {
    let h = Hypergraph::new(
        ["a", "b", "c", "d", "e", "f"],
        [
            ("e0", vec!["a", "b"]),
            ("e1", vec!["a", "c"]),
            ("e2", vec!["b", "d"]),
            ("e3", vec!["c", "d"]),
            ("e4", vec!["a", "e"]),
            ("e5", vec!["b", "f"]),
        ],
    );
    let weights: BTreeMap<Element, f64> = [
        (Element::vertex("a"), 0.0),
        (Element::vertex("b"), 0.0),
        (Element::vertex("c"), 0.0),
        (Element::vertex("d"), 0.0),
        (Element::vertex("e"), 2.0),
        (Element::vertex("f"), 2.0),
        (Element::edge("e0"), 0.0),
        (Element::edge("e1"), 0.0),
        (Element::edge("e2"), 0.0),
        (Element::edge("e3"), 1.0),
        (Element::edge("e4"), 2.0),
        (Element::edge("e5"), 2.0),
    ]
    .into();
    WeightedHypergraph::new(h, weights).unwrap()
}

pub fn fxhub() -> TameFiltration {
    fxhub_weighted().sublevel_filtration(MonoClass::SizePreserving).unwrap()
}

fn push_to(flt: &TameFiltration, set: &ElementSet, from: f64, to: f64) -> ElementSet {
    flt.push_forward(&TrackedSet { base_level: from, elements: set.clone() }, to)
        .unwrap()
        .elements
}

/// Steady count at (u ≤ v) straight from the definition: every singleton
/// edge tracked from u, pushed through every representative level of [u, v].
pub fn oracle_steady_count(feature: &dyn Feature, flt: &TameFiltration, u: f64, v: f64) -> u64 {
    let mut levels: Vec<f64> = vec![u];
    levels.extend(flt.critical_values().iter().copied().filter(|a| *a > u && *a <= v));
    levels.push(v);

    let (at_u, _) = flt.evaluate(u);
    let mut count = 0;
    for e in at_u.edges() {
        let a = ElementSet::from([Element::edge(e)]);
        let steady = levels.iter().all(|w| {
            let pushed = push_to(flt, &a, u, *w);
            feature.holds(&pushed, flt.evaluate(*w).0)
        });
        if steady {
            count += 1;
        }
    }
    count
}

/// Ranging count at (u ≤ v) straight from the definition: singleton edges
/// that appear as 𝓕-sets at some representative level x ≤ u and whose image
/// is an 𝓕-set at some representative level y ≥ v.
pub fn oracle_ranging_count(feature: &dyn Feature, flt: &TameFiltration, u: f64, v: f64) -> u64 {
    let crits = flt.critical_values();
    let below = crits.first().map(|a| a - 1.0).unwrap_or(0.0);
    let above = crits.last().map(|a| a + 1.0).unwrap_or(0.0);

    let mut xs: Vec<f64> = vec![below.min(u), u];
    xs.extend(crits.iter().copied().filter(|a| *a <= u));
    let mut ys: Vec<f64> = vec![v, above.max(v)];
    ys.extend(crits.iter().copied().filter(|a| *a >= v));

    let mut reachable: BTreeSet<ElementSet> = BTreeSet::new();
    for x in &xs {
        let (hx, _) = flt.evaluate(*x);
        for e in hx.edges() {
            let a = ElementSet::from([Element::edge(e)]);
            if feature.holds(&a, hx) {
                reachable.insert(push_to(flt, &a, *x, u));
            }
        }
    }
    reachable
        .into_iter()
        .filter(|a| {
            ys.iter().any(|y| {
                let pushed = push_to(flt, a, u, *y);
                feature.holds(&pushed, flt.evaluate(*y).0)
            })
        })
        .count() as u64
}

pub fn oracle_count(feature: &dyn Feature, flt: &TameFiltration, mode: Mode, u: f64, v: f64) -> u64 {
    match mode {
        Mode::Steady => oracle_steady_count(feature, flt, u, v),
        Mode::Ranging => oracle_ranging_count(feature, flt, u, v),
    }
}

/// Builds the diagram from oracle counts alone: evaluates the counts on the
/// canonical sample points and differences them across each critical value.
pub fn oracle_diagram(feature: &dyn Feature, flt: &TameFiltration, mode: Mode) -> Vec<DiagramPoint> {
    let crits = flt.critical_values();
    let n = crits.len();
    let samples = flt.sample_points();
    // p at interval pair (i, j), evaluated at representative samples.
    let rep = |i: usize| if i == 0 { samples[0] } else { crits[i - 1] };
    let p = |i: usize, j: usize| oracle_count(feature, flt, mode, rep(i), rep(j)) as i64;

    let mut points = Vec::new();
    for k in 1..=n {
        for l in k + 1..=n {
            let mult = p(k, l - 1) - p(k - 1, l - 1) - p(k, l) + p(k - 1, l);
            if mult > 0 {
                points.push(DiagramPoint {
                    birth: Level::Finite(crits[k - 1]),
                    death: Level::Finite(crits[l - 1]),
                    mult: mult as u64,
                });
            }
        }
    }
    for k in 1..=n {
        let mult = p(k, n) - p(k - 1, n);
        if mult > 0 {
            points.push(DiagramPoint {
                birth: Level::Finite(crits[k - 1]),
                death: Level::PosInf,
                mult: mult as u64,
            });
        }
    }
    for l in 1..=n {
        let mult = p(0, l - 1) - p(0, l);
        if mult > 0 {
            points.push(DiagramPoint {
                birth: Level::NegInf,
                death: Level::Finite(crits[l - 1]),
                mult: mult as u64,
            });
        }
    }
    let everlasting = p(0, n);
    if everlasting > 0 {
        points.push(DiagramPoint {
            birth: Level::NegInf,
            death: Level::PosInf,
            mult: everlasting as u64,
        });
    }
    PersistenceDiagram::new(mode, points).points
}

fn level_diff(a: Level, b: Level) -> f64 {
    match (a, b) {
        (Level::Finite(x), Level::Finite(y)) => (x - y).abs(),
        (Level::PosInf, Level::PosInf) | (Level::NegInf, Level::NegInf) => 0.0,
        _ => f64::INFINITY,
    }
}

fn point_distance(p: &(Level, Level), q: &(Level, Level)) -> f64 {
    level_diff(p.0, q.0).max(level_diff(p.1, q.1))
}

fn diagonal_cost(p: &(Level, Level)) -> f64 {
    match (p.0, p.1) {
        (Level::Finite(b), Level::Finite(d)) => (d - b) / 2.0,
        _ => f64::INFINITY,
    }
}

fn expand(d: &PersistenceDiagram) -> Vec<(Level, Level)> {
    let mut out = Vec::new();
    for p in &d.points {
        for _ in 0..p.mult {
            out.push((p.birth, p.death));
        }
    }
    out
}

/// Bottleneck distance by enumerating every injective partial matching
/// between the two point multisets, sending everything unmatched to the
/// diagonal. Exponential; intended for diagrams with at most ~6 points.
pub fn oracle_bottleneck(d1: &PersistenceDiagram, d2: &PersistenceDiagram) -> f64 {
    let a = expand(d1);
    let b = expand(d2);

    fn go(a: &[(Level, Level)], idx: usize, used: &mut Vec<bool>, b: &[(Level, Level)]) -> f64 {
        if idx == a.len() {
            let mut worst: f64 = 0.0;
            for (j, q) in b.iter().enumerate() {
                if !used[j] {
                    worst = worst.max(diagonal_cost(q));
                }
            }
            return worst;
        }
        let p = &a[idx];
        // send p to the diagonal
        let mut best = diagonal_cost(p).max(go(a, idx + 1, used, b));
        // or match p with an unused point of b
        for j in 0..b.len() {
            if used[j] {
                continue;
            }
            used[j] = true;
            let cost = point_distance(p, &b[j]).max(go(a, idx + 1, used, b));
            used[j] = false;
            best = best.min(cost);
        }
        best
    }

    let mut used = vec![false; b.len()];
    go(&a, 0, &mut used, &b)
}

/// Minimum over all carrier bijections that preserve incidence both ways of
/// the sup-difference of filtering functions, by enumerating every vertex
/// and edge permutation. Exponential; small final objects only.
pub fn oracle_min_iso_sup_diff(f: &TameFiltration, g: &TameFiltration) -> f64 {
    let hf = f.final_object();
    let hg = g.final_object();
    if hf.vertex_count() != hg.vertex_count() || hf.edge_count() != hg.edge_count() {
        return f64::INFINITY;
    }
    let fv: Vec<&str> = hf.vertices().collect();
    let gv: Vec<&str> = hg.vertices().collect();
    let fe: Vec<&str> = hf.edges().collect();
    let ge: Vec<&str> = hg.edges().collect();
    let ff = f.filtering_function();
    let fg = g.filtering_function();

    fn permutations(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![Vec::new()];
        }
        let mut out = Vec::new();
        for rest in permutations(n - 1) {
            for pos in 0..=rest.len() {
                let mut p = rest.clone();
                p.insert(pos, n - 1);
                out.push(p);
            }
        }
        out
    }

    let mut best = f64::INFINITY;
    for vperm in permutations(fv.len()) {
        for eperm in permutations(fe.len()) {
            let incidence_ok = fe.iter().enumerate().all(|(i, e)| {
                let image = hg.edge_vertices(ge[eperm[i]]).unwrap();
                fv.iter().enumerate().all(|(j, v)| {
                    hf.edge_vertices(e).unwrap().contains(*v) == image.contains(gv[vperm[j]])
                })
            });
            if !incidence_ok {
                continue;
            }
            let mut worst: f64 = 0.0;
            for (j, v) in fv.iter().enumerate() {
                let a = ff.value(&Element::vertex(*v)).unwrap();
                let b = fg.value(&Element::vertex(gv[vperm[j]])).unwrap();
                worst = worst.max(filtering_diff(a, b));
            }
            for (i, e) in fe.iter().enumerate() {
                let a = ff.value(&Element::edge(*e)).unwrap();
                let b = fg.value(&Element::edge(ge[eperm[i]])).unwrap();
                worst = worst.max(filtering_diff(a, b));
            }
            best = best.min(worst);
        }
    }
    best
}

fn filtering_diff(a: f64, b: f64) -> f64 {
    match (a.is_finite(), b.is_finite()) {
        (true, true) => (a - b).abs(),
        (false, false) => 0.0,
        _ => f64::INFINITY,
    }
}
