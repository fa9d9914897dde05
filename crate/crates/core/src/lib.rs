//! Steady and ranging persistence for features on tame hypergraph
//! filtrations.
//!
//! The crate builds persistence diagrams that track how a hypergraph feature
//! (hubs, exclusivities, max-original hyperedges, or any user-supplied
//! predicate) evolves along a filtration, in two flavors: *steady* (the
//! feature holds throughout an interval) and *ranging* (it holds before and
//! after). It also measures diagram stability — bottleneck distance against
//! exact interleaving distance — and provides the machinery to exercise the
//! characterization that a feature's steady and ranging persistence agree
//! and behave stably exactly when the feature is convex: a witness search
//! for non-convexity and two counterexample constructions turning any such
//! witness into 1-interleaved filtration pairs with incompatible
//! persistence.

pub mod bottleneck;
pub mod corpus;
pub mod diagram;
pub mod feature;
pub mod filtration;
pub mod hypergraph;
pub mod ingest;
pub mod interleaving;
mod jsonutil;
pub mod morphism;
pub mod persistence;

#[cfg(test)]
mod testutil;

pub use bottleneck::bottleneck;
pub use diagram::{diagram, representation_identity_check, render_svg, DiagramPoint, Level, PersistenceDiagram};
pub use feature::{
    continued_check, convexity_witness_search, feature_by_name, maximal_version, minimal_version,
    Direction, Exclusivity, Feature, Hub, MaxOriginality, SearchConfig, SearchOutcome, Witness,
};
pub use filtration::{FilteringFunction, TameFiltration, TrackedSet, WeightedHypergraph};
pub use hypergraph::{Element, ElementSet, Hypergraph};
pub use interleaving::{
    build_ranging_counterexample, build_steady_counterexample, interleaving_distance_exact,
    CounterexampleKind, CounterexamplePair, InterleavingDistance,
};
pub use morphism::{
    classify_morphism, compose, isomorphisms, HypergraphMorphism, MonoClass, DEFAULT_SIZE_CAP,
};
pub use persistence::{
    epsilon_compatible, ranging_set, steady_set, Compatibility, Mode, PersistenceFunction,
};
