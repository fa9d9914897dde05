//! Hypergraph morphisms, their classification, and brute-force isomorphism
//! enumeration.
//!
//! A morphism maps vertices to vertices and edges to edges so that incidence
//! is preserved: v ∈ h(e) implies f(v) ∈ h′(f(e)). Only monomorphisms are
//! represented, so both maps must be injective. Morphisms are classified into
//! three nested classes:
//!
//! * `SizePreserving` ("="): |h(e)| = |h′(f(e))| for every edge;
//! * `MembershipReflecting` ("≤"): f(u) ∈ h′(f(e)) implies u ∈ h(e);
//! * `General` ("any"): only the morphism conditions above.
//!
//! Every size-preserving morphism is membership-reflecting, and a morphism's
//! stored class is always re-derived from its maps, never trusted from input.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hypergraph::{Element, ElementSet, Hypergraph};

/// Default cap on |V| + |E| for the exhaustive isomorphism search.
pub const DEFAULT_SIZE_CAP: usize = 12;

/// The three morphism classes, ordered from weakest to strongest.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MonoClass {
    General,
    MembershipReflecting,
    SizePreserving,
}

impl MonoClass {
    pub fn as_str(self) -> &'static str {
        match self {
            MonoClass::General => "any",
            MonoClass::MembershipReflecting => "<=",
            MonoClass::SizePreserving => "=",
        }
    }

    pub fn from_str_token(s: &str) -> Option<MonoClass> {
        match s {
            "any" => Some(MonoClass::General),
            "<=" => Some(MonoClass::MembershipReflecting),
            "=" => Some(MonoClass::SizePreserving),
            _ => None,
        }
    }
}

impl fmt::Display for MonoClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for MonoClass {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for MonoClass {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = String::deserialize(d)?;
        MonoClass::from_str_token(&raw)
            .ok_or_else(|| serde::de::Error::custom(format!("unknown morphism class {raw:?}")))
    }
}

/// Why a pair of maps fails to be a hypergraph monomorphism.
#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum MorphismViolation {
    #[error("vertex map is not total: missing vertex {0}")]
    MissingVertex(String),
    #[error("edge map is not total: missing edge {0}")]
    MissingEdge(String),
    #[error("vertex map sends {vertex} outside the target vertex set")]
    VertexOutsideTarget { vertex: String },
    #[error("edge map sends {edge} outside the target edge set")]
    EdgeOutsideTarget { edge: String },
    #[error("not injective on vertices: {a} and {b} share an image")]
    NotInjectiveVertices { a: String, b: String },
    #[error("not injective on edges: {a} and {b} share an image")]
    NotInjectiveEdges { a: String, b: String },
    #[error("incidence not preserved: {vertex} ∈ {edge} but the images are not incident")]
    IncidenceNotPreserved { vertex: String, edge: String },
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum MorphismError {
    #[error("invalid morphism: {0}")]
    Invalid(#[from] MorphismViolation),
    #[error("source/target mismatch in composition")]
    SourceTargetMismatch,
    #[error("instance too large for isomorphism search: size {size} exceeds cap {cap}")]
    SizeCapExceeded { size: usize, cap: usize },
}

/// A verified hypergraph monomorphism together with its strongest class.
#[derive(Clone, Debug, PartialEq)]
pub struct HypergraphMorphism {
    source: Hypergraph,
    target: Hypergraph,
    vertex_map: BTreeMap<String, String>,
    edge_map: BTreeMap<String, String>,
    mono_class: MonoClass,
}

/// Classifies a candidate pair of maps between two hypergraphs.
///
/// Returns the strongest class whose defining condition holds, or the first
/// violated monomorphism clause.
pub fn classify_morphism(
    vertex_map: &BTreeMap<String, String>,
    edge_map: &BTreeMap<String, String>,
    source: &Hypergraph,
    target: &Hypergraph,
) -> Result<MonoClass, MorphismViolation> {
    for v in source.vertices() {
        let img = vertex_map
            .get(v)
            .ok_or_else(|| MorphismViolation::MissingVertex(v.to_string()))?;
        if !target.has_vertex(img) {
            return Err(MorphismViolation::VertexOutsideTarget { vertex: v.to_string() });
        }
    }
    for e in source.edges() {
        let img = edge_map.get(e).ok_or_else(|| MorphismViolation::MissingEdge(e.to_string()))?;
        if !target.has_edge(img) {
            return Err(MorphismViolation::EdgeOutsideTarget { edge: e.to_string() });
        }
    }
    let mut seen: BTreeMap<&String, &str> = BTreeMap::new();
    for v in source.vertices() {
        if let Some(prev) = seen.insert(&vertex_map[v], v) {
            return Err(MorphismViolation::NotInjectiveVertices {
                a: prev.to_string(),
                b: v.to_string(),
            });
        }
    }
    let mut seen: BTreeMap<&String, &str> = BTreeMap::new();
    for e in source.edges() {
        if let Some(prev) = seen.insert(&edge_map[e], e) {
            return Err(MorphismViolation::NotInjectiveEdges {
                a: prev.to_string(),
                b: e.to_string(),
            });
        }
    }
    for e in source.edges() {
        let image_edge = target.edge_vertices(&edge_map[e]).expect("image edge exists");
        for v in source.edge_vertices(e).expect("source edge exists") {
            if !image_edge.contains(&vertex_map[v]) {
                return Err(MorphismViolation::IncidenceNotPreserved {
                    vertex: v.clone(),
                    edge: e.to_string(),
                });
            }
        }
    }

    let size_preserving = source.edges().all(|e| {
        source.edge_vertices(e).unwrap().len()
            == target.edge_vertices(&edge_map[e]).unwrap().len()
    });
    if size_preserving {
        return Ok(MonoClass::SizePreserving);
    }
    // f(u) ∈ h′(f(e)) ⟹ u ∈ h(e), over every vertex/edge pair of the source.
    let membership_reflecting = source.edges().all(|e| {
        let image_edge = target.edge_vertices(&edge_map[e]).unwrap();
        source
            .vertices()
            .all(|u| !image_edge.contains(&vertex_map[u]) || source.edge_vertices(e).unwrap().contains(u))
    });
    if membership_reflecting {
        Ok(MonoClass::MembershipReflecting)
    } else {
        Ok(MonoClass::General)
    }
}

impl HypergraphMorphism {
    /// Validates the maps against both endpoints, classifies them, and wraps
    /// everything up.
    pub fn new(
        source: Hypergraph,
        target: Hypergraph,
        vertex_map: BTreeMap<String, String>,
        edge_map: BTreeMap<String, String>,
    ) -> Result<Self, MorphismViolation> {
        let mono_class = classify_morphism(&vertex_map, &edge_map, &source, &target)?;
        Ok(HypergraphMorphism { source, target, vertex_map, edge_map, mono_class })
    }

    /// The identity morphism on a hypergraph.
    pub fn identity(h: &Hypergraph) -> Self {
        let vertex_map = h.vertices().map(|v| (v.to_string(), v.to_string())).collect();
        let edge_map = h.edges().map(|e| (e.to_string(), e.to_string())).collect();
        HypergraphMorphism {
            source: h.clone(),
            target: h.clone(),
            vertex_map,
            edge_map,
            mono_class: MonoClass::SizePreserving,
        }
    }

    /// The id-on-ids morphism between two hypergraphs where the target
    /// contains (and possibly extends) the source.
    pub fn inclusion(source: Hypergraph, target: Hypergraph) -> Result<Self, MorphismViolation> {
        let vertex_map = source.vertices().map(|v| (v.to_string(), v.to_string())).collect();
        let edge_map = source.edges().map(|e| (e.to_string(), e.to_string())).collect();
        HypergraphMorphism::new(source, target, vertex_map, edge_map)
    }

    /// The unique morphism out of the empty hypergraph.
    pub fn from_empty(target: Hypergraph) -> Self {
        HypergraphMorphism {
            source: Hypergraph::empty(),
            target,
            vertex_map: BTreeMap::new(),
            edge_map: BTreeMap::new(),
            mono_class: MonoClass::SizePreserving,
        }
    }

    pub fn source(&self) -> &Hypergraph {
        &self.source
    }

    pub fn target(&self) -> &Hypergraph {
        &self.target
    }

    pub fn vertex_map(&self) -> &BTreeMap<String, String> {
        &self.vertex_map
    }

    pub fn edge_map(&self) -> &BTreeMap<String, String> {
        &self.edge_map
    }

    pub fn mono_class(&self) -> MonoClass {
        self.mono_class
    }

    pub fn apply_vertex(&self, v: &str) -> Option<&str> {
        self.vertex_map.get(v).map(String::as_str)
    }

    pub fn apply_edge(&self, e: &str) -> Option<&str> {
        self.edge_map.get(e).map(String::as_str)
    }

    /// Image of a carrier element under Φf.
    pub fn apply_element(&self, x: &Element) -> Option<Element> {
        match x {
            Element::Vertex(v) => self.vertex_map.get(v).cloned().map(Element::Vertex),
            Element::Edge(e) => self.edge_map.get(e).cloned().map(Element::Edge),
        }
    }

    /// Image of a carrier subset under Φf. Fails if some element is outside
    /// the source carrier.
    pub fn apply_set(&self, set: &ElementSet) -> Option<ElementSet> {
        set.iter().map(|x| self.apply_element(x)).collect()
    }

    /// The inverse of a bijective morphism, when the inverse maps form a
    /// morphism as well.
    pub fn inverse(&self) -> Result<Self, MorphismViolation> {
        let vertex_map = self.vertex_map.iter().map(|(a, b)| (b.clone(), a.clone())).collect();
        let edge_map = self.edge_map.iter().map(|(a, b)| (b.clone(), a.clone())).collect();
        HypergraphMorphism::new(self.target.clone(), self.source.clone(), vertex_map, edge_map)
    }
}

/// g ∘ f, with the class of the composite re-derived from its maps.
pub fn compose(
    g: &HypergraphMorphism,
    f: &HypergraphMorphism,
) -> Result<HypergraphMorphism, MorphismError> {
    if f.target != g.source {
        return Err(MorphismError::SourceTargetMismatch);
    }
    let vertex_map = f
        .vertex_map
        .iter()
        .map(|(a, b)| (a.clone(), g.vertex_map[b].clone()))
        .collect();
    let edge_map = f.edge_map.iter().map(|(a, b)| (a.clone(), g.edge_map[b].clone())).collect();
    HypergraphMorphism::new(f.source.clone(), g.target.clone(), vertex_map, edge_map)
        .map_err(MorphismError::Invalid)
}

/// Visits every isomorphism between two hypergraphs, by exhaustive
/// backtracking, as raw vertex/edge maps in lexicographic order. The visitor
/// returns true to stop the search early.
///
/// An isomorphism is a bijective morphism whose inverse is also a morphism,
/// i.e. v ∈ h(e) ⟺ f(v) ∈ h′(f(e)). The search errors out when either
/// carrier exceeds `cap`.
pub fn visit_isomorphisms(
    h: &Hypergraph,
    h2: &Hypergraph,
    cap: usize,
    visit: &mut dyn FnMut(&BTreeMap<String, String>, &BTreeMap<String, String>) -> bool,
) -> Result<(), MorphismError> {
    let size = h.carrier_size().max(h2.carrier_size());
    if size > cap {
        return Err(MorphismError::SizeCapExceeded { size, cap });
    }
    if h.vertex_count() != h2.vertex_count() || h.edge_count() != h2.edge_count() {
        return Ok(());
    }

    let vertices: Vec<String> = h.vertices().map(str::to_string).collect();
    let vertices2: Vec<String> = h2.vertices().map(str::to_string).collect();
    let edges: Vec<String> = h.edges().map(str::to_string).collect();
    let edges2: Vec<String> = h2.edges().map(str::to_string).collect();

    struct Search<'a> {
        h: &'a Hypergraph,
        h2: &'a Hypergraph,
        vertices: &'a [String],
        vertices2: &'a [String],
        edges: &'a [String],
        edges2: &'a [String],
        vertex_map: BTreeMap<String, String>,
        edge_map: BTreeMap<String, String>,
        used_vertices: BTreeSet<String>,
        used_edges: BTreeSet<String>,
        visit: &'a mut dyn FnMut(&BTreeMap<String, String>, &BTreeMap<String, String>) -> bool,
    }

    impl Search<'_> {
        // Vertices are assigned after all edges, pruned by the exact
        // incidence pattern over the assigned edges; the two-sided pattern
        // equality enforces both directions of the isomorphism condition.
        fn assign_vertex(&mut self, idx: usize) -> bool {
            if idx == self.vertices.len() {
                return (self.visit)(&self.vertex_map, &self.edge_map);
            }
            let v = self.vertices[idx].clone();
            let pattern: BTreeSet<String> = self
                .edge_map
                .iter()
                .filter(|(e, _)| self.h.edge_vertices(e).unwrap().contains(&v))
                .map(|(_, e2)| e2.clone())
                .collect();
            for v2 in self.vertices2 {
                if self.used_vertices.contains(v2) {
                    continue;
                }
                let pattern2: BTreeSet<String> = self
                    .edge_map
                    .values()
                    .filter(|e2| self.h2.edge_vertices(e2).unwrap().contains(v2))
                    .cloned()
                    .collect();
                if pattern != pattern2 {
                    continue;
                }
                self.vertex_map.insert(v.clone(), v2.clone());
                self.used_vertices.insert(v2.clone());
                let stop = self.assign_vertex(idx + 1);
                self.vertex_map.remove(&v);
                self.used_vertices.remove(v2);
                if stop {
                    return true;
                }
            }
            false
        }

        fn assign_edge(&mut self, idx: usize) -> bool {
            if idx == self.edges.len() {
                return self.assign_vertex(0);
            }
            let e = self.edges[idx].clone();
            let size = self.h.edge_vertices(&e).unwrap().len();
            for e2 in self.edges2 {
                if self.used_edges.contains(e2)
                    || self.h2.edge_vertices(e2).unwrap().len() != size
                {
                    continue;
                }
                self.edge_map.insert(e.clone(), e2.clone());
                self.used_edges.insert(e2.clone());
                let stop = self.assign_edge(idx + 1);
                self.edge_map.remove(&e);
                self.used_edges.remove(e2);
                if stop {
                    return true;
                }
            }
            false
        }
    }

    Search {
        h,
        h2,
        vertices: &vertices,
        vertices2: &vertices2,
        edges: &edges,
        edges2: &edges2,
        vertex_map: BTreeMap::new(),
        edge_map: BTreeMap::new(),
        used_vertices: BTreeSet::new(),
        used_edges: BTreeSet::new(),
        visit,
    }
    .assign_edge(0);
    Ok(())
}

/// All isomorphisms between two hypergraphs, materialized as verified
/// morphisms in lexicographic order of their maps; empty if none exist.
pub fn isomorphisms(
    h: &Hypergraph,
    h2: &Hypergraph,
    cap: usize,
) -> Result<Vec<HypergraphMorphism>, MorphismError> {
    let mut found = Vec::new();
    visit_isomorphisms(h, h2, cap, &mut |vm, em| {
        let m = HypergraphMorphism::new(h.clone(), h2.clone(), vm.clone(), em.clone())
            .expect("backtracking candidates satisfy the morphism conditions");
        debug_assert!(m.inverse().is_ok());
        found.push(m);
        false
    })?;
    Ok(found)
}

// --- JSON wire format -------------------------------------------------------
//
// `{"vertex_map":{"a":"a"},"edge_map":{"e1":"e1"},"class":"="}`. The class is
// informational on output; on input the maps are always re-classified against
// the surrounding objects.

#[derive(Serialize, Deserialize)]
pub struct MorphismJson {
    pub vertex_map: BTreeMap<String, String>,
    pub edge_map: BTreeMap<String, String>,
    pub class: MonoClass,
}

impl From<&HypergraphMorphism> for MorphismJson {
    fn from(m: &HypergraphMorphism) -> Self {
        MorphismJson {
            vertex_map: m.vertex_map.clone(),
            edge_map: m.edge_map.clone(),
            class: m.mono_class,
        }
    }
}

impl MorphismJson {
    /// Re-validates the raw maps between explicit endpoints.
    pub fn into_morphism(
        self,
        source: Hypergraph,
        target: Hypergraph,
    ) -> Result<HypergraphMorphism, MorphismViolation> {
        HypergraphMorphism::new(source, target, self.vertex_map, self.edge_map)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fx1() -> Hypergraph {
        Hypergraph::new(
            ["a", "b", "c"],
            [("e1", vec!["a", "b"]), ("e2", vec!["b", "c"]), ("e3", vec!["c"])],
        )
    }

    fn id_maps(h: &Hypergraph) -> (BTreeMap<String, String>, BTreeMap<String, String>) {
        (
            h.vertices().map(|v| (v.to_string(), v.to_string())).collect(),
            h.edges().map(|e| (e.to_string(), e.to_string())).collect(),
        )
    }

    #[test]
    fn identity_is_size_preserving() {
        let h = fx1();
        let (vm, em) = id_maps(&h);
        assert_eq!(classify_morphism(&vm, &em, &h, &h), Ok(MonoClass::SizePreserving));
    }

    #[test]
    fn enlarging_an_edge_with_a_fresh_vertex_reflects_membership() {
        // e3 = {c} maps into the enlarged edge {c,d}; everything else fixed.
        // No source vertex lands inside an image edge it did not come from,
        // so the ≤ condition survives while size preservation fails.
        let h = fx1();
        let h2 = Hypergraph::new(
            ["a", "b", "c", "d"],
            [("e1", vec!["a", "b"]), ("e2", vec!["b", "c"]), ("e3", vec!["c", "d"])],
        );
        let (vm, em) = id_maps(&h);
        // Independent oracle: exhaustive scan of both defining conditions.
        let size_ok = h
            .edges()
            .all(|e| h.edge_vertices(e).unwrap().len() == h2.edge_vertices(&em[e]).unwrap().len());
        let reflect_ok = h.edges().all(|e| {
            h.vertices().all(|u| {
                !h2.edge_vertices(&em[e]).unwrap().contains(&vm[u])
                    || h.edge_vertices(e).unwrap().contains(u)
            })
        });
        assert!(!size_ok);
        assert!(reflect_ok);
        assert_eq!(classify_morphism(&vm, &em, &h, &h2), Ok(MonoClass::MembershipReflecting));
    }

    #[test]
    fn membership_reflection_fails_when_a_foreign_vertex_lands_in_an_image() {
        // b maps into the enlarged image of e3 without being in e3.
        let h = fx1();
        let h2 = Hypergraph::new(
            ["a", "b", "c"],
            [("e1", vec!["a", "b"]), ("e2", vec!["b", "c"]), ("e3", vec!["b", "c"])],
        );
        let (vm, em) = id_maps(&h);
        assert_eq!(classify_morphism(&vm, &em, &h, &h2), Ok(MonoClass::General));
    }

    #[test]
    fn collapsing_vertices_is_invalid() {
        let h = Hypergraph::new(["a", "b"], [("e", vec!["a", "b"])]);
        let mut vm: BTreeMap<String, String> = BTreeMap::new();
        vm.insert("a".into(), "a".into());
        vm.insert("b".into(), "a".into());
        let em: BTreeMap<String, String> = [("e".to_string(), "e".to_string())].into();
        let h2 = Hypergraph::new(["a"], [("e", vec!["a"])]);
        assert_eq!(
            classify_morphism(&vm, &em, &h, &h2),
            Err(MorphismViolation::NotInjectiveVertices { a: "a".into(), b: "b".into() })
        );
    }

    #[test]
    fn compose_with_identity_is_identity_law() {
        let h = fx1();
        let id = HypergraphMorphism::identity(&h);
        let f = HypergraphMorphism::inclusion(
            Hypergraph::new(["a", "b"], [("e1", vec!["a", "b"])]),
            h.clone(),
        )
        .unwrap();
        let composed = compose(&id, &f).unwrap();
        assert_eq!(composed.vertex_map(), f.vertex_map());
        assert_eq!(composed.edge_map(), f.edge_map());
    }

    #[test]
    fn composing_size_preserving_stays_size_preserving() {
        let a = Hypergraph::new(["a"], [("e1", vec!["a"])]);
        let b = Hypergraph::new(["a", "b"], [("e1", vec!["a"]), ("e2", vec!["a", "b"])]);
        let c = Hypergraph::new(
            ["a", "b", "c"],
            [("e1", vec!["a"]), ("e2", vec!["a", "b"]), ("e3", vec!["c"])],
        );
        let f = HypergraphMorphism::inclusion(a, b.clone()).unwrap();
        let g = HypergraphMorphism::inclusion(b, c).unwrap();
        assert_eq!(f.mono_class(), MonoClass::SizePreserving);
        assert_eq!(g.mono_class(), MonoClass::SizePreserving);
        assert_eq!(compose(&g, &f).unwrap().mono_class(), MonoClass::SizePreserving);
    }

    #[test]
    fn composing_mismatched_morphisms_errors() {
        let h = fx1();
        let other = Hypergraph::new(["z"], [("e", vec!["z"])]);
        let f = HypergraphMorphism::identity(&h);
        let g = HypergraphMorphism::identity(&other);
        assert_eq!(compose(&g, &f), Err(MorphismError::SourceTargetMismatch));
    }

    #[test]
    fn isomorphisms_of_fx1_with_itself_contains_identity() {
        let h = fx1();
        let isos = isomorphisms(&h, &h, DEFAULT_SIZE_CAP).unwrap();
        assert!(!isos.is_empty());
        let id = HypergraphMorphism::identity(&h);
        assert!(isos.iter().any(|m| m.vertex_map() == id.vertex_map() && m.edge_map() == id.edge_map()));
    }

    #[test]
    fn isomorphisms_find_exactly_the_relabelings() {
        let h = fx1();
        let h2 = Hypergraph::new(
            ["x", "y", "z"],
            [("f1", vec!["x", "y"]), ("f2", vec!["y", "z"]), ("f3", vec!["z"])],
        );
        let isos = isomorphisms(&h, &h2, DEFAULT_SIZE_CAP).unwrap();
        // FX1 is rigid: e3 is the unique singleton, e1/e2 are separated by
        // their intersection with e3's vertex. Exactly one relabeling exists.
        assert_eq!(isos.len(), 1);
        let m = &isos[0];
        assert_eq!(m.apply_vertex("a"), Some("x"));
        assert_eq!(m.apply_vertex("b"), Some("y"));
        assert_eq!(m.apply_vertex("c"), Some("z"));
        assert_eq!(m.apply_edge("e1"), Some("f1"));
        assert!(m.inverse().is_ok());
    }

    #[test]
    fn isomorphisms_between_different_sizes_is_empty() {
        let h = fx1();
        let single = Hypergraph::new(["a"], [("e", vec!["a"])]);
        assert!(isomorphisms(&h, &single, DEFAULT_SIZE_CAP).unwrap().is_empty());
    }

    #[test]
    fn isomorphism_search_respects_the_size_cap() {
        let h = fx1();
        match isomorphisms(&h, &h, 3) {
            Err(MorphismError::SizeCapExceeded { size: 6, cap: 3 }) => {}
            other => panic!("expected size-cap error, got {other:?}"),
        }
    }

    #[test]
    fn double_dual_is_isomorphic_to_the_original() {
        let h = fx1();
        let dd = h.dual().unwrap().dual().unwrap();
        assert!(!isomorphisms(&dd, &h, DEFAULT_SIZE_CAP).unwrap().is_empty());
    }

    #[test]
    fn automorphism_count_matches_symmetric_instance() {
        // Two indistinguishable singleton edges on one vertex: the only
        // degrees of freedom are the two edge orderings.
        let h = Hypergraph::new(["a"], [("e1", vec!["a"]), ("e2", vec!["a"])]);
        let isos = isomorphisms(&h, &h, DEFAULT_SIZE_CAP).unwrap();
        assert_eq!(isos.len(), 2);
    }
}
