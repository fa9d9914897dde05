//! Features on hypergraphs and the search for convexity counterexamples.
//!
//! A feature is an isomorphism-invariant set of pairs (A, H) with A a subset
//! of H's carrier, given here as a predicate plus an enumerator of its
//! 𝓕-sets. The three built-in features (hub, exclusivity, max-originality)
//! are all supported on singleton edge sets, so their enumerators scan edges
//! rather than the carrier power set; generic subset features are available
//! behind an explicit exponential-enumeration constructor.
//!
//! A feature is *convex* when membership cannot be lost and then regained
//! along a composable pair of monomorphisms. [`convexity_witness_search`]
//! looks for a [`Witness`] refuting convexity: it never proves convexity,
//! it only refutes it.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_rational::Ratio;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hypergraph::{Element, ElementSet, Hypergraph, HypergraphError};
use crate::morphism::{HypergraphMorphism, MonoClass, MorphismJson, MorphismViolation};

/// An isomorphism-invariant feature 𝓕, with an enumerator of its 𝓕-sets.
pub trait Feature: Send + Sync {
    fn name(&self) -> &str;

    /// The morphism class in which this feature's convexity claim applies.
    fn class_requirement(&self) -> MonoClass;

    /// Whether (A, H) ∈ 𝓕.
    fn holds(&self, a: &ElementSet, h: &Hypergraph) -> bool;

    /// All 𝓕-sets of H within the feature's support shape. The default
    /// covers features supported on singleton edge sets.
    fn enumerate(&self, h: &Hypergraph) -> Vec<ElementSet> {
        h.edges()
            .map(|e| ElementSet::from([Element::edge(e)]))
            .filter(|a| self.holds(a, h))
            .collect()
    }
}

fn singleton_edge<'a>(a: &'a ElementSet, h: &Hypergraph) -> Option<&'a str> {
    if a.len() != 1 {
        return None;
    }
    match a.iter().next() {
        Some(Element::Edge(e)) if h.has_edge(e) => Some(e),
        _ => None,
    }
}

/// Whether {e} is a hub of H: e has neighbors and strictly more of them than
/// any of its neighbors.
pub fn hub_holds(a: &ElementSet, h: &Hypergraph) -> bool {
    let Some(e) = singleton_edge(a, h) else { return false };
    let n = h.neighbors(e).expect("edge exists");
    if n.is_empty() {
        return false;
    }
    let own = n.len();
    n.iter().all(|other| h.neighbors(other).expect("edge exists").len() < own)
}

/// Whether {e} has an exclusivity in H: some vertex of e belongs to no other
/// hyperedge.
pub fn exclusivity_holds(a: &ElementSet, h: &Hypergraph) -> bool {
    let Some(e) = singleton_edge(a, h) else { return false };
    let verts = h.edge_vertices(e).expect("edge exists");
    verts.iter().any(|v| {
        h.edges().all(|other| other == e || !h.edge_vertices(other).unwrap().contains(v))
    })
}

/// The max-originality O_H(e) = 1 − (1/|e|)·max over neighbors of |e ∩ e′|,
/// or 1 when e has no neighbors. Exact rational arithmetic, because feature
/// membership is the exact comparison O_H(e) > 1/2.
pub fn max_originality_value(h: &Hypergraph, e: &str) -> Result<Ratio<i64>, HypergraphError> {
    let verts = h.edge_vertices(e)?;
    let overlap = h
        .neighbors(e)?
        .iter()
        .map(|other| verts.intersection(h.edge_vertices(other).unwrap()).count())
        .max();
    Ok(match overlap {
        None => Ratio::from_integer(1),
        Some(m) => Ratio::from_integer(1) - Ratio::new(m as i64, verts.len() as i64),
    })
}

pub fn max_originality_holds(a: &ElementSet, h: &Hypergraph) -> bool {
    let Some(e) = singleton_edge(a, h) else { return false };
    max_originality_value(h, e).expect("edge exists") > Ratio::new(1, 2)
}

/// The hub feature. Not convex in any of the three classes.
#[derive(Clone, Copy, Debug, Default)]
pub struct Hub;

/// The exclusivity feature. Left-continued, hence convex, on size-preserving
/// morphisms.
#[derive(Clone, Copy, Debug, Default)]
pub struct Exclusivity;

/// The max-originality feature with threshold O > 1/2. Left-continued, hence
/// convex, on size-preserving morphisms.
#[derive(Clone, Copy, Debug, Default)]
pub struct MaxOriginality;

impl Feature for Hub {
    fn name(&self) -> &str {
        "hub"
    }
    fn class_requirement(&self) -> MonoClass {
        MonoClass::General
    }
    fn holds(&self, a: &ElementSet, h: &Hypergraph) -> bool {
        hub_holds(a, h)
    }
}

impl Feature for Exclusivity {
    fn name(&self) -> &str {
        "exclusivity"
    }
    fn class_requirement(&self) -> MonoClass {
        MonoClass::SizePreserving
    }
    fn holds(&self, a: &ElementSet, h: &Hypergraph) -> bool {
        exclusivity_holds(a, h)
    }
}

impl Feature for MaxOriginality {
    fn name(&self) -> &str {
        "max-originality"
    }
    fn class_requirement(&self) -> MonoClass {
        MonoClass::SizePreserving
    }
    fn holds(&self, a: &ElementSet, h: &Hypergraph) -> bool {
        max_originality_holds(a, h)
    }
}

/// Looks up a built-in feature by its CLI name.
pub fn feature_by_name(name: &str) -> Option<Arc<dyn Feature>> {
    match name {
        "hub" => Some(Arc::new(Hub)),
        "exclusivity" => Some(Arc::new(Exclusivity)),
        "max-originality" => Some(Arc::new(MaxOriginality)),
        _ => None,
    }
}

/// A feature defined by an arbitrary predicate.
///
/// With [`Support::SingletonEdge`] the enumerator scans edges; the
/// exponential full-subset enumerator must be requested explicitly.
pub struct PredicateFeature {
    name: String,
    class_requirement: MonoClass,
    support: Support,
    pred: Box<dyn Fn(&ElementSet, &Hypergraph) -> bool + Send + Sync>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Support {
    SingletonEdge,
    /// Enumerate all 2^|carrier| subsets. Opt-in.
    FullSubsets,
}

impl PredicateFeature {
    pub fn new(
        name: impl Into<String>,
        class_requirement: MonoClass,
        pred: impl Fn(&ElementSet, &Hypergraph) -> bool + Send + Sync + 'static,
    ) -> Self {
        PredicateFeature {
            name: name.into(),
            class_requirement,
            support: Support::SingletonEdge,
            pred: Box::new(pred),
        }
    }

    /// Same, but with the exponential full-subset enumerator enabled.
    pub fn with_exponential_enumeration(
        name: impl Into<String>,
        class_requirement: MonoClass,
        pred: impl Fn(&ElementSet, &Hypergraph) -> bool + Send + Sync + 'static,
    ) -> Self {
        PredicateFeature {
            name: name.into(),
            class_requirement,
            support: Support::FullSubsets,
            pred: Box::new(pred),
        }
    }
}

impl Feature for PredicateFeature {
    fn name(&self) -> &str {
        &self.name
    }
    fn class_requirement(&self) -> MonoClass {
        self.class_requirement
    }
    fn holds(&self, a: &ElementSet, h: &Hypergraph) -> bool {
        (self.pred)(a, h)
    }
    fn enumerate(&self, h: &Hypergraph) -> Vec<ElementSet> {
        match self.support {
            Support::SingletonEdge => h
                .edges()
                .map(|e| ElementSet::from([Element::edge(e)]))
                .filter(|a| self.holds(a, h))
                .collect(),
            Support::FullSubsets => {
                let carrier: Vec<Element> = h.carrier().into_iter().collect();
                assert!(carrier.len() <= 20, "full-subset enumeration limited to 2^20 candidates");
                (0u32..1 << carrier.len())
                    .map(|mask| {
                        carrier
                            .iter()
                            .enumerate()
                            .filter(|(i, _)| mask & (1 << i) != 0)
                            .map(|(_, x)| x.clone())
                            .collect::<ElementSet>()
                    })
                    .filter(|a| self.holds(a, h))
                    .collect()
            }
        }
    }
}

/// M𝓕: the 𝓕-sets with no strict 𝓕-superset in the same object.
///
/// The superset scan runs over the base feature's enumerator, so it is exact
/// whenever that enumerator is complete for the base's support.
pub struct MaximalVersion {
    base: Arc<dyn Feature>,
    name: String,
}

/// m𝓕: the 𝓕-sets with no strict 𝓕-subset in the same object.
pub struct MinimalVersion {
    base: Arc<dyn Feature>,
    name: String,
}

pub fn maximal_version(base: Arc<dyn Feature>) -> MaximalVersion {
    let name = format!("maximal({})", base.name());
    MaximalVersion { base, name }
}

pub fn minimal_version(base: Arc<dyn Feature>) -> MinimalVersion {
    let name = format!("minimal({})", base.name());
    MinimalVersion { base, name }
}

impl Feature for MaximalVersion {
    fn name(&self) -> &str {
        &self.name
    }
    fn class_requirement(&self) -> MonoClass {
        self.base.class_requirement()
    }
    fn holds(&self, a: &ElementSet, h: &Hypergraph) -> bool {
        self.base.holds(a, h)
            && !self.base.enumerate(h).iter().any(|b| a.is_subset(b) && a != b)
    }
    fn enumerate(&self, h: &Hypergraph) -> Vec<ElementSet> {
        let all = self.base.enumerate(h);
        all.iter()
            .filter(|a| !all.iter().any(|b| a.is_subset(b) && *a != b))
            .cloned()
            .collect()
    }
}

impl Feature for MinimalVersion {
    fn name(&self) -> &str {
        &self.name
    }
    fn class_requirement(&self) -> MonoClass {
        self.base.class_requirement()
    }
    fn holds(&self, a: &ElementSet, h: &Hypergraph) -> bool {
        self.base.holds(a, h)
            && !self.base.enumerate(h).iter().any(|b| b.is_subset(a) && a != b)
    }
    fn enumerate(&self, h: &Hypergraph) -> Vec<ElementSet> {
        let all = self.base.enumerate(h);
        all.iter()
            .filter(|a| !all.iter().any(|b| b.is_subset(a) && *a != b))
            .cloned()
            .collect()
    }
}

// --- Convexity witnesses -----------------------------------------------------

/// A refutation of convexity: (A, X) ∈ 𝓕 and ι′ι(A, X) ∈ 𝓕 but
/// ι(A, X) ∉ 𝓕 along the chain X ↪ X′ ↪ X″.
#[derive(Clone, Debug)]
pub struct Witness {
    pub a: ElementSet,
    pub iota: HypergraphMorphism,
    pub iota_prime: HypergraphMorphism,
}

#[derive(Clone, Debug, Error, PartialEq)]
pub enum WitnessError {
    #[error("chain does not compose: target of ι differs from source of ι′")]
    ChainMismatch,
    #[error("witness set is empty")]
    EmptySet,
    #[error("witness set is not inside the carrier of X")]
    OutsideCarrier,
    #[error("morphism {which} is in class {found}, which is weaker than requested {required}")]
    ClassTooWeak { which: &'static str, found: MonoClass, required: MonoClass },
    #[error("holds(A, X) is false: the witness set is not an 𝓕-set at the start")]
    NotFSetAtStart,
    #[error("holds(ι(A), X′) is true: membership survives the middle object")]
    MiddleStillHolds,
    #[error("holds(ι′ι(A), X″) is false: membership is not regained at the end")]
    NotFSetAtEnd,
    #[error("malformed witness: {0}")]
    Malformed(String),
}

impl Witness {
    /// Re-verifies the defining triple of holds calls and the chain shape.
    pub fn verify(&self, feature: &dyn Feature, class: MonoClass) -> Result<(), WitnessError> {
        if self.iota.target() != self.iota_prime.source() {
            return Err(WitnessError::ChainMismatch);
        }
        for (which, m) in [("ι", &self.iota), ("ι′", &self.iota_prime)] {
            if m.mono_class() < class {
                return Err(WitnessError::ClassTooWeak {
                    which,
                    found: m.mono_class(),
                    required: class,
                });
            }
        }
        let mid = self.iota.apply_set(&self.a).ok_or(WitnessError::OutsideCarrier)?;
        let end = self.iota_prime.apply_set(&mid).ok_or(WitnessError::OutsideCarrier)?;
        if !feature.holds(&self.a, self.iota.source()) {
            return Err(WitnessError::NotFSetAtStart);
        }
        if feature.holds(&mid, self.iota.target()) {
            return Err(WitnessError::MiddleStillHolds);
        }
        if !feature.holds(&end, self.iota_prime.target()) {
            return Err(WitnessError::NotFSetAtEnd);
        }
        Ok(())
    }
}

// --- Witness wire format ------------------------------------------------------
//
// Witness reports carry the full chain: the tracked set, the three objects,
// and both morphisms' raw maps.

#[derive(Serialize, Deserialize, Default)]
pub struct ElementSetJson {
    pub vertices: Vec<String>,
    pub edges: Vec<String>,
}

impl From<&ElementSet> for ElementSetJson {
    fn from(set: &ElementSet) -> Self {
        let mut out = ElementSetJson::default();
        for x in set {
            match x {
                Element::Vertex(v) => out.vertices.push(v.clone()),
                Element::Edge(e) => out.edges.push(e.clone()),
            }
        }
        out
    }
}

impl ElementSetJson {
    pub fn to_element_set(&self) -> ElementSet {
        self.vertices
            .iter()
            .map(|v| Element::Vertex(v.clone()))
            .chain(self.edges.iter().map(|e| Element::Edge(e.clone())))
            .collect()
    }
}

#[derive(Serialize, Deserialize)]
pub struct WitnessJson {
    pub a: ElementSetJson,
    /// The chain objects X, X′, X″.
    pub objects: Vec<Hypergraph>,
    pub iota: MorphismJson,
    pub iota_prime: MorphismJson,
}

impl From<&Witness> for WitnessJson {
    fn from(w: &Witness) -> Self {
        WitnessJson {
            a: (&w.a).into(),
            objects: vec![
                w.iota.source().clone(),
                w.iota.target().clone(),
                w.iota_prime.target().clone(),
            ],
            iota: (&w.iota).into(),
            iota_prime: (&w.iota_prime).into(),
        }
    }
}

impl WitnessJson {
    /// Re-validates both morphisms against the stored chain objects.
    pub fn into_witness(self) -> Result<Witness, WitnessError> {
        let [x, x1, x2]: [Hypergraph; 3] = self
            .objects
            .try_into()
            .map_err(|_| WitnessError::Malformed("chain needs exactly three objects".into()))?;
        let malformed = |e: MorphismViolation| WitnessError::Malformed(e.to_string());
        Ok(Witness {
            a: self.a.to_element_set(),
            iota: self.iota.into_morphism(x, x1.clone()).map_err(malformed)?,
            iota_prime: self.iota_prime.into_morphism(x1, x2).map_err(malformed)?,
        })
    }
}

/// Bounds and budget for the witness search.
#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub class: MonoClass,
    pub max_vertices: usize,
    pub max_edges: usize,
    /// Maximum number of candidate chains to examine across both phases.
    pub budget: u64,
    pub seed: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            class: MonoClass::SizePreserving,
            max_vertices: 6,
            max_edges: 6,
            budget: 10_000_000,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum SearchConfigError {
    #[error("size caps must be positive")]
    ZeroCap,
    #[error("budget must be positive")]
    ZeroBudget,
}

impl SearchConfig {
    fn validate(&self) -> Result<(), SearchConfigError> {
        if self.max_vertices == 0 || self.max_edges == 0 {
            return Err(SearchConfigError::ZeroCap);
        }
        if self.budget == 0 {
            return Err(SearchConfigError::ZeroBudget);
        }
        Ok(())
    }
}

/// Result of a witness search. `NoneFound` reports the consumed budget and is
/// never a proof of convexity.
#[derive(Clone, Debug)]
pub enum SearchOutcome {
    Found(Witness),
    NoneFound { chains_checked: u64, budget: u64 },
}

/// Searches for a convexity witness of the feature within the requested
/// morphism class.
///
/// An exhaustive pass over small canonical chains comes first (the known
/// counterexamples are tiny, so this phase finds them deterministically),
/// followed by a seeded randomized pass until the budget runs out. Results
/// are deterministic given the configuration, and every returned witness has
/// been re-verified by the defining triple of holds calls.
pub fn convexity_witness_search(
    feature: &dyn Feature,
    config: &SearchConfig,
) -> Result<SearchOutcome, SearchConfigError> {
    config.validate()?;
    let mut checked: u64 = 0;

    if let Some(w) = exhaustive_phase(feature, config, &mut checked) {
        return Ok(SearchOutcome::Found(w));
    }
    if let Some(w) = randomized_phase(feature, config, &mut checked) {
        return Ok(SearchOutcome::Found(w));
    }
    Ok(SearchOutcome::NoneFound { chains_checked: checked, budget: config.budget })
}

/// Examines one chain X ↪ X′ ↪ X″ of id-on-ids inclusions; returns a verified
/// witness if some 𝓕-set of X dies in X′ and revives in X″. Because the
/// inclusions are the identity on ids, the holds triple is evaluated on the
/// raw set before any morphism is materialized.
fn check_chain(
    feature: &dyn Feature,
    class: MonoClass,
    x: &Hypergraph,
    x1: &Hypergraph,
    x2: &Hypergraph,
) -> Option<Witness> {
    let a = feature
        .enumerate(x)
        .into_iter()
        .find(|a| !feature.holds(a, x1) && feature.holds(a, x2))?;
    let iota = HypergraphMorphism::inclusion(x.clone(), x1.clone()).ok()?;
    let iota_prime = HypergraphMorphism::inclusion(x1.clone(), x2.clone()).ok()?;
    if iota.mono_class() < class || iota_prime.mono_class() < class {
        return None;
    }
    let w = Witness { a, iota, iota_prime };
    w.verify(feature, class).expect("search candidates verify");
    Some(w)
}

/// All nonempty subsets of `pool` with at most `max_size` elements, in
/// lexicographic order of their sorted index lists.
fn subset_pool(pool: &[String], max_size: usize) -> Vec<BTreeSet<String>> {
    let mut out = Vec::new();
    let n = pool.len();
    for mask in 1u32..(1 << n) {
        if (mask.count_ones() as usize) <= max_size {
            out.push(
                (0..n).filter(|i| mask & (1 << i) != 0).map(|i| pool[i].clone()).collect(),
            );
        }
    }
    out
}

/// Visits combinations of `k` indices out of `n` in lexicographic order.
fn for_each_combination(n: usize, k: usize, mut f: impl FnMut(&[usize]) -> bool) {
    let mut idx: Vec<usize> = (0..k).collect();
    if k > n {
        return;
    }
    loop {
        if f(&idx) {
            return;
        }
        // advance
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn exhaustive_phase(
    feature: &dyn Feature,
    config: &SearchConfig,
    checked: &mut u64,
) -> Option<Witness> {
    match config.class {
        MonoClass::SizePreserving => exhaustive_size_preserving(feature, config, checked),
        MonoClass::MembershipReflecting | MonoClass::General => {
            exhaustive_induced(feature, config, checked)
        }
    }
}

/// Canonical size-preserving chains: ambient hypergraphs over ≤5 vertices
/// with ≤5 full edges of size ≤3, with X′ and X obtained by deleting one and
/// then another edge.
fn exhaustive_size_preserving(
    feature: &dyn Feature,
    config: &SearchConfig,
    checked: &mut u64,
) -> Option<Witness> {
    let nv = config.max_vertices.min(5);
    let pool: Vec<String> = (0..nv).map(|i| format!("v{i}")).collect();
    let candidates = subset_pool(&pool, 3);
    let max_edges = config.max_edges.min(5);

    let mut found = None;
    for ne in 2..=max_edges {
        for_each_combination(candidates.len(), ne, |combo| {
            let edges: Vec<(String, Vec<String>)> = combo
                .iter()
                .enumerate()
                .map(|(i, c)| (format!("e{i}"), candidates[*c].iter().cloned().collect()))
                .collect();
            let vertices: BTreeSet<String> =
                edges.iter().flat_map(|(_, vs)| vs.iter().cloned()).collect();
            let ambient = Hypergraph::new(
                vertices.iter().cloned(),
                edges.iter().map(|(id, vs)| (id.clone(), vs.clone())),
            );
            // No 𝓕-set in the ambient means no chain over it can revive one.
            if feature.enumerate(&ambient).is_empty() {
                return false;
            }
            let all_edges: BTreeSet<String> = ambient.edges().map(str::to_string).collect();
            for last_removed in &all_edges {
                let mid_edges: BTreeSet<String> =
                    all_edges.iter().filter(|e| *e != last_removed).cloned().collect();
                let mid = ambient.restrict_full(&vertices, &mid_edges);
                for first_removed in &mid_edges {
                    let start_edges: BTreeSet<String> =
                        mid_edges.iter().filter(|e| *e != first_removed).cloned().collect();
                    let start = ambient.restrict_full(&vertices, &start_edges);
                    *checked += 1;
                    if let Some(w) = check_chain(feature, config.class, &start, &mid, &ambient) {
                        found = Some(w);
                        return true;
                    }
                    if *checked >= config.budget {
                        return true;
                    }
                }
            }
            false
        });
        if found.is_some() || *checked >= config.budget {
            break;
        }
    }
    found
}

/// Canonical induced chains for the membership-reflecting (and general)
/// classes: ambients over ≤4 vertices with ≤3 arbitrary edges, chains given
/// by nested vertex and edge subsets with induced incidence.
fn exhaustive_induced(
    feature: &dyn Feature,
    config: &SearchConfig,
    checked: &mut u64,
) -> Option<Witness> {
    let nv = config.max_vertices.min(4);
    let pool: Vec<String> = (0..nv).map(|i| format!("v{i}")).collect();
    let candidates = subset_pool(&pool, nv);
    let max_edges = config.max_edges.min(3);

    // Nested subset pairs (S0 ⊆ S1 ⊆ S): every item takes one of 3 states.
    fn nested_pairs(items: &[String]) -> Vec<(BTreeSet<String>, BTreeSet<String>)> {
        let mut out = Vec::new();
        let n = items.len();
        let mut state = vec![0u8; n];
        loop {
            let s0: BTreeSet<String> = (0..n)
                .filter(|i| state[*i] == 2)
                .map(|i| items[i].clone())
                .collect();
            let s1: BTreeSet<String> = (0..n)
                .filter(|i| state[*i] >= 1)
                .map(|i| items[i].clone())
                .collect();
            out.push((s0, s1));
            let mut i = 0;
            while i < n && state[i] == 2 {
                state[i] = 0;
                i += 1;
            }
            if i == n {
                break;
            }
            state[i] += 1;
        }
        out
    }

    let mut found = None;
    for ne in 1..=max_edges {
        for_each_combination(candidates.len(), ne, |combo| {
            let edges: Vec<(String, Vec<String>)> = combo
                .iter()
                .enumerate()
                .map(|(i, c)| (format!("e{i}"), candidates[*c].iter().cloned().collect()))
                .collect();
            let ambient = Hypergraph::new(
                pool.iter().cloned(),
                edges.iter().map(|(id, vs)| (id.clone(), vs.clone())),
            );
            if feature.enumerate(&ambient).is_empty() {
                return false;
            }
            let edge_ids: Vec<String> = ambient.edges().map(str::to_string).collect();
            let vertex_pairs = nested_pairs(&pool);
            let edge_pairs = nested_pairs(&edge_ids);
            for (v0, v1) in &vertex_pairs {
                for (e0, e1) in &edge_pairs {
                    let mid = ambient.restrict_induced(v1, e1);
                    let start = mid.restrict_induced(v0, e0);
                    *checked += 1;
                    if let Some(w) = check_chain(feature, config.class, &start, &mid, &ambient) {
                        found = Some(w);
                        return true;
                    }
                    if *checked >= config.budget {
                        return true;
                    }
                }
            }
            false
        });
        if found.is_some() || *checked >= config.budget {
            break;
        }
    }
    found
}

fn random_nonempty_subset(rng: &mut ChaCha8Rng, pool: &[String]) -> BTreeSet<String> {
    loop {
        let s: BTreeSet<String> =
            pool.iter().filter(|_| rng.gen_bool(0.5)).cloned().collect();
        if !s.is_empty() {
            return s;
        }
    }
}

/// Seeded random chains within the configured bounds, including (for the
/// general class) chains whose incidences shrink along the way.
fn randomized_phase(
    feature: &dyn Feature,
    config: &SearchConfig,
    checked: &mut u64,
) -> Option<Witness> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    while *checked < config.budget {
        *checked += 1;
        let nv = rng.gen_range(1..=config.max_vertices);
        let ne = rng.gen_range(1..=config.max_edges);
        let pool: Vec<String> = (0..nv).map(|i| format!("v{i}")).collect();
        let ambient = Hypergraph::new(
            pool.iter().cloned(),
            (0..ne).map(|i| {
                (format!("e{i}"), random_nonempty_subset(&mut rng, &pool).into_iter().collect::<Vec<_>>())
            }),
        );

        let (start, mid) = match config.class {
            MonoClass::SizePreserving => {
                let edges: Vec<String> = ambient.edges().map(str::to_string).collect();
                let verts: BTreeSet<String> = pool.iter().cloned().collect();
                let e1: BTreeSet<String> =
                    edges.iter().filter(|_| rng.gen_bool(0.7)).cloned().collect();
                let e0: BTreeSet<String> =
                    e1.iter().filter(|_| rng.gen_bool(0.7)).cloned().collect();
                (ambient.restrict_full(&verts, &e0), ambient.restrict_full(&verts, &e1))
            }
            MonoClass::MembershipReflecting | MonoClass::General => {
                let edges: Vec<String> = ambient.edges().map(str::to_string).collect();
                let v1: BTreeSet<String> =
                    pool.iter().filter(|_| rng.gen_bool(0.8)).cloned().collect();
                let v0: BTreeSet<String> =
                    v1.iter().filter(|_| rng.gen_bool(0.8)).cloned().collect();
                let e1: BTreeSet<String> =
                    edges.iter().filter(|_| rng.gen_bool(0.8)).cloned().collect();
                let e0: BTreeSet<String> =
                    e1.iter().filter(|_| rng.gen_bool(0.8)).cloned().collect();
                let mid = ambient.restrict_induced(&v1, &e1);
                let start = mid.restrict_induced(&v0, &e0);
                (start, mid)
            }
        };
        if let Some(w) = check_chain(feature, config.class, &start, &mid, &ambient) {
            return Some(w);
        }
    }
    None
}

// --- Continued-feature refutation ---------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// (A,X) ∈ 𝓕 ⟹ ι(A,X) ∈ 𝓕
    Right,
    /// ι(A,X) ∈ 𝓕 ⟹ (A,X) ∈ 𝓕
    Left,
}

/// A sampled refutation of the continued property: a morphism and a set on
/// which the implication fails.
#[derive(Clone, Debug)]
pub struct ContinuedCounterexample {
    pub a: ElementSet,
    pub morphism: HypergraphMorphism,
}

#[derive(Clone, Debug)]
pub enum ContinuedOutcome {
    Counterexample(ContinuedCounterexample),
    NoneFound { morphisms_checked: u64, budget: u64 },
}

/// Sampling-based refutation of the right- or left-continued property over
/// the same chain generators as the witness search. `NoneFound` is not a
/// proof.
pub fn continued_check(
    feature: &dyn Feature,
    direction: Direction,
    config: &SearchConfig,
) -> Result<ContinuedOutcome, SearchConfigError> {
    config.validate()?;
    let mut checked: u64 = 0;
    let mut result = None;

    let mut try_morphism = |m: &HypergraphMorphism, checked: &mut u64| -> bool {
        *checked += 1;
        let candidates = match direction {
            Direction::Right => feature.enumerate(m.source()),
            Direction::Left => {
                // Pull 𝓕-sets of the target back through the injective maps.
                let inv_v: std::collections::BTreeMap<&String, &String> =
                    m.vertex_map().iter().map(|(a, b)| (b, a)).collect();
                let inv_e: std::collections::BTreeMap<&String, &String> =
                    m.edge_map().iter().map(|(a, b)| (b, a)).collect();
                feature
                    .enumerate(m.target())
                    .into_iter()
                    .filter_map(|b| {
                        b.iter()
                            .map(|x| match x {
                                Element::Vertex(v) => {
                                    inv_v.get(v).map(|p| Element::Vertex((*p).clone()))
                                }
                                Element::Edge(e) => {
                                    inv_e.get(e).map(|p| Element::Edge((*p).clone()))
                                }
                            })
                            .collect::<Option<ElementSet>>()
                    })
                    .collect()
            }
        };
        for a in candidates {
            let image = m.apply_set(&a).expect("candidate inside source carrier");
            let before = feature.holds(&a, m.source());
            let after = feature.holds(&image, m.target());
            let violated = match direction {
                Direction::Right => before && !after,
                Direction::Left => after && !before,
            };
            if violated {
                result = Some(ContinuedCounterexample { a, morphism: m.clone() });
                return true;
            }
        }
        false
    };

    // Reuse the chain generators and test each leg as a single morphism.
    let probe = |x: &Hypergraph, x1: &Hypergraph, checked: &mut u64,
                 try_morphism: &mut dyn FnMut(&HypergraphMorphism, &mut u64) -> bool|
     -> bool {
        match HypergraphMorphism::inclusion(x.clone(), x1.clone()) {
            Ok(m) if m.mono_class() >= config.class => try_morphism(&m, checked),
            _ => false,
        }
    };

    match config.class {
        MonoClass::SizePreserving => {
            let nv = config.max_vertices.min(5);
            let pool: Vec<String> = (0..nv).map(|i| format!("v{i}")).collect();
            let candidates = subset_pool(&pool, 3);
            let max_edges = config.max_edges.min(5);
            'outer: for ne in 1..=max_edges {
                let mut stop = false;
                for_each_combination(candidates.len(), ne, |combo| {
                    let ambient = Hypergraph::new(
                        pool.iter().cloned(),
                        combo.iter().enumerate().map(|(i, c)| {
                            (format!("e{i}"), candidates[*c].iter().cloned().collect::<Vec<_>>())
                        }),
                    );
                    let verts: BTreeSet<String> = pool.iter().cloned().collect();
                    let all_edges: BTreeSet<String> =
                        ambient.edges().map(str::to_string).collect();
                    for removed in &all_edges {
                        let sub_edges: BTreeSet<String> =
                            all_edges.iter().filter(|e| *e != removed).cloned().collect();
                        let sub = ambient.restrict_full(&verts, &sub_edges);
                        if probe(&sub, &ambient, &mut checked, &mut try_morphism)
                            || checked >= config.budget
                        {
                            stop = true;
                            return true;
                        }
                    }
                    false
                });
                if stop {
                    break 'outer;
                }
            }
        }
        MonoClass::MembershipReflecting | MonoClass::General => {
            let nv = config.max_vertices.min(4);
            let pool: Vec<String> = (0..nv).map(|i| format!("v{i}")).collect();
            let candidates = subset_pool(&pool, nv);
            let max_edges = config.max_edges.min(3);
            'outer2: for ne in 1..=max_edges {
                let mut stop = false;
                for_each_combination(candidates.len(), ne, |combo| {
                    let ambient = Hypergraph::new(
                        pool.iter().cloned(),
                        combo.iter().enumerate().map(|(i, c)| {
                            (format!("e{i}"), candidates[*c].iter().cloned().collect::<Vec<_>>())
                        }),
                    );
                    let edge_ids: Vec<String> = ambient.edges().map(str::to_string).collect();
                    for vmask in 0u32..(1 << nv) {
                        let v0: BTreeSet<String> = (0..nv)
                            .filter(|i| vmask & (1 << i) != 0)
                            .map(|i| pool[i].clone())
                            .collect();
                        for emask in 0u32..(1 << edge_ids.len()) {
                            let e0: BTreeSet<String> = (0..edge_ids.len())
                                .filter(|i| emask & (1 << i) != 0)
                                .map(|i| edge_ids[i].clone())
                                .collect();
                            let sub = ambient.restrict_induced(&v0, &e0);
                            if probe(&sub, &ambient, &mut checked, &mut try_morphism)
                                || checked >= config.budget
                            {
                                stop = true;
                                return true;
                            }
                        }
                    }
                    false
                });
                if stop {
                    break 'outer2;
                }
            }
        }
    }

    Ok(match result {
        Some(c) => ContinuedOutcome::Counterexample(c),
        None => ContinuedOutcome::NoneFound { morphisms_checked: checked, budget: config.budget },
    })
}
