//! Shared fixtures for in-crate unit tests.

use std::collections::BTreeMap;

use crate::filtration::{TameFiltration, WeightedHypergraph};
use crate::hypergraph::{Element, Hypergraph};
use crate::morphism::MonoClass;

/// Fixture FX1: ({a,b,c}, {e1↦{a,b}, e2↦{b,c}, e3↦{c}}).
pub(crate) fn fx1() -> Hypergraph {
    Hypergraph::new(
        ["a", "b", "c"],
        [("e1", vec!["a", "b"]), ("e2", vec!["b", "c"]), ("e3", vec!["c"])],
    )
}

/// Fixture FXHUB as a weighted hypergraph: e0 = {a,b} is a hub at level 0,
/// loses the property when e3 = {c,d} arrives at level 1, and regains it when
/// e4 = {a,e} and e5 = {b,f} arrive at level 2.
pub(crate) fn fxhub_weighted() -> WeightedHypergraph {
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
    let weights = BTreeMap::from([
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
    ]);
    WeightedHypergraph::new(h, weights).expect("FXHUB is a valid weighted hypergraph")
}

/// The FXHUB sublevel filtration with critical values {0, 1, 2}.
pub(crate) fn fxhub() -> TameFiltration {
    fxhub_weighted()
        .sublevel_filtration(MonoClass::SizePreserving)
        .expect("FXHUB steps are size-preserving inclusions")
}
