//! Property-based invariants over randomly generated hypergraphs,
//! morphisms and filtrations.

use std::collections::BTreeMap;
use std::sync::Arc;

use proptest::prelude::*;
use srp_core::diagram::{diagram, representation_identity_check};
use srp_core::{
    classify_morphism, isomorphisms, maximal_version, Element, ElementSet, Exclusivity, Feature,
    Hub, Hypergraph, MaxOriginality, Mode, MonoClass, PersistenceFunction, TrackedSet,
    WeightedHypergraph,
};

/// A small random hypergraph: 1..=5 vertices, 1..=5 nonempty edges.
fn hypergraph_strategy() -> impl Strategy<Value = Hypergraph> {
    (1usize..=5).prop_flat_map(|nv| {
        let edge = prop::collection::btree_set(0..nv, 1..=nv);
        prop::collection::vec(edge, 1..=5).prop_map(move |edges| {
            Hypergraph::new(
                (0..nv).map(|i| format!("v{i}")),
                edges
                    .into_iter()
                    .enumerate()
                    .map(|(i, vs)| (format!("e{i}"), vs.into_iter().map(|v| format!("v{v}")))),
            )
        })
    })
}

/// A random valid weighted hypergraph with integer weights below 4.
fn weighted_strategy() -> impl Strategy<Value = WeightedHypergraph> {
    (hypergraph_strategy(), any::<u64>()).prop_map(|(h, seed)| {
        let mut state = seed;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 33) % 4
        };
        let mut weights: BTreeMap<Element, f64> = BTreeMap::new();
        for e in h.edges() {
            weights.insert(Element::edge(e), next() as f64);
        }
        for v in h.vertices() {
            let ceiling = h
                .edges()
                .filter(|e| h.edge_vertices(e).unwrap().contains(v))
                .map(|e| weights[&Element::edge(e)])
                .fold(f64::INFINITY, f64::min);
            let wanted = next() as f64;
            weights.insert(Element::vertex(v), wanted.min(ceiling));
        }
        WeightedHypergraph::new(h, weights).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn neighbors_relation_is_symmetric(h in hypergraph_strategy()) {
        let edges: Vec<String> = h.edges().map(str::to_string).collect();
        for e in &edges {
            for other in h.neighbors(e).unwrap() {
                prop_assert!(h.neighbors(&other).unwrap().contains(e));
            }
        }
    }

    #[test]
    fn dual_is_an_involution_up_to_isomorphism(h in hypergraph_strategy()) {
        // Restrict to covered vertices so the dual exists.
        let covered: std::collections::BTreeSet<String> = h
            .edges()
            .flat_map(|e| h.edge_vertices(e).unwrap().iter().cloned())
            .collect();
        let edges: std::collections::BTreeSet<String> = h.edges().map(str::to_string).collect();
        let h = h.restrict_full(&covered, &edges);
        let dd = h.dual().unwrap().dual().unwrap();
        prop_assert!(!isomorphisms(&dd, &h, 16).unwrap().is_empty());
    }

    #[test]
    fn every_enumerated_isomorphism_is_invertible(h in hypergraph_strategy()) {
        for iso in isomorphisms(&h, &h, 16).unwrap() {
            let inv = iso.inverse();
            prop_assert!(inv.is_ok());
            prop_assert!(classify_morphism(
                iso.vertex_map(), iso.edge_map(), iso.source(), iso.target()).is_ok());
        }
    }

    #[test]
    fn size_preserving_classification_implies_membership_reflection(
        w in weighted_strategy()
    ) {
        let flt = w.sublevel_filtration(MonoClass::General).unwrap();
        for step in flt.steps() {
            prop_assert_eq!(step.mono_class(), MonoClass::SizePreserving);
            // Exhaustive scan of the ≤ condition.
            for e in step.source().edges() {
                let image = step.target().edge_vertices(step.apply_edge(e).unwrap()).unwrap();
                for u in step.source().vertices() {
                    if image.contains(step.apply_vertex(u).unwrap()) {
                        prop_assert!(step.source().edge_vertices(e).unwrap().contains(u));
                    }
                }
            }
        }
    }

    #[test]
    fn features_are_invariant_under_relabeling(h in hypergraph_strategy()) {
        // Relabel by reversing id strings (injective on the generated names).
        let relabel = |s: &str| -> String { s.chars().rev().collect() };
        let h2 = Hypergraph::new(
            h.vertices().map(relabel),
            h.edges().map(|e| {
                (relabel(e), h.edge_vertices(e).unwrap().iter().map(|v| relabel(v)))
            }),
        );
        let features: Vec<Arc<dyn Feature>> =
            vec![Arc::new(Hub), Arc::new(Exclusivity), Arc::new(MaxOriginality)];
        for feature in features {
            for e in h.edges() {
                let a = ElementSet::from([Element::edge(e)]);
                let b = ElementSet::from([Element::edge(relabel(e))]);
                prop_assert_eq!(feature.holds(&a, &h), feature.holds(&b, &h2));
            }
        }
    }

    #[test]
    fn push_forward_composes_along_levels(w in weighted_strategy(), e in 0usize..5) {
        let flt = w.sublevel_filtration(MonoClass::SizePreserving).unwrap();
        let crits = flt.critical_values();
        let (u, v, z) = (crits[0], crits[crits.len() / 2], crits[crits.len() - 1]);
        let (h, _) = flt.evaluate(u);
        let Some(edge) = h.edges().nth(e % h.edge_count().max(1)) else { return Ok(()) };
        let a = TrackedSet {
            base_level: u,
            elements: ElementSet::from([Element::edge(edge)]),
        };
        let via = flt.push_forward(&flt.push_forward(&a, v).unwrap(), z).unwrap();
        let direct = flt.push_forward(&a, z).unwrap();
        prop_assert_eq!(via, direct);
    }

    #[test]
    fn steady_counts_never_exceed_ranging_counts(w in weighted_strategy()) {
        let flt = Arc::new(w.sublevel_filtration(MonoClass::SizePreserving).unwrap());
        let features: Vec<Arc<dyn Feature>> =
            vec![Arc::new(Hub), Arc::new(Exclusivity), Arc::new(MaxOriginality)];
        for feature in features {
            let s = PersistenceFunction::compute(feature.clone(), flt.clone(), Mode::Steady)
                .unwrap();
            let r = PersistenceFunction::compute(feature, flt.clone(), Mode::Ranging).unwrap();
            let samples = flt.sample_points();
            for (i, u) in samples.iter().enumerate() {
                for v in &samples[i..] {
                    prop_assert!(s.value_at(*u, *v).unwrap() <= r.value_at(*u, *v).unwrap());
                }
            }
        }
    }

    #[test]
    fn representation_identity_holds_for_computed_diagrams(w in weighted_strategy()) {
        let flt = Arc::new(w.sublevel_filtration(MonoClass::SizePreserving).unwrap());
        for mode in [Mode::Steady, Mode::Ranging] {
            let p = PersistenceFunction::compute(Arc::new(Hub), flt.clone(), mode).unwrap();
            let d = diagram(&p);
            prop_assert!(representation_identity_check(&p, &d));
        }
    }

    #[test]
    fn maximal_version_is_idempotent_and_contained(h in hypergraph_strategy()) {
        let base: Arc<dyn Feature> = Arc::new(Hub);
        let m1 = Arc::new(maximal_version(base.clone()));
        let m2 = maximal_version(m1.clone() as Arc<dyn Feature>);
        prop_assert_eq!(m1.enumerate(&h), m2.enumerate(&h));
        for a in m1.enumerate(&h) {
            prop_assert!(base.holds(&a, &h));
        }
    }
}
