//! Finite hypergraphs with identified hyperedges.
//!
//! A hypergraph is a finite vertex set, a finite set of hyperedge ids and an
//! incidence function sending every hyperedge to a nonempty set of vertices.
//! Edge identity is by id, not by underlying vertex set, so two distinct
//! hyperedges may share the same vertices. Vertex ids and edge ids live in
//! disjoint namespaces: the carrier of a hypergraph is the disjoint union
//! V ⊔ E.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// One element of the carrier V ⊔ E of a hypergraph.
///
/// The same string may name both a vertex and an edge; the two are distinct
/// carrier elements.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Element {
    Vertex(String),
    Edge(String),
}

impl Element {
    pub fn vertex(id: impl Into<String>) -> Self {
        Element::Vertex(id.into())
    }

    pub fn edge(id: impl Into<String>) -> Self {
        Element::Edge(id.into())
    }

    pub fn id(&self) -> &str {
        match self {
            Element::Vertex(id) | Element::Edge(id) => id,
        }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Vertex(id) => write!(f, "vertex {id}"),
            Element::Edge(id) => write!(f, "edge {id}"),
        }
    }
}

/// A subset of the carrier of some hypergraph.
pub type ElementSet = BTreeSet<Element>;

/// A finite hypergraph (V, E, h) with h : E → 𝒫(V)∖∅.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hypergraph {
    vertices: BTreeSet<String>,
    incidence: BTreeMap<String, BTreeSet<String>>,
}

/// A broken hypergraph invariant, reported as data rather than a failure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// incidence(e) is empty.
    EmptyHyperedge { edge: String },
    /// incidence(e) mentions a vertex id outside the vertex set.
    UnknownVertex { edge: String, vertex: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EmptyHyperedge { edge } => write!(f, "empty hyperedge {edge}"),
            Violation::UnknownVertex { edge, vertex } => {
                write!(f, "unknown vertex {vertex} in hyperedge {edge}")
            }
        }
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum HypergraphError {
    #[error("unknown edge {0}")]
    UnknownEdge(String),
    #[error("vertex {0} has empty dual edge")]
    EmptyDualEdge(String),
    #[error("invalid hypergraph: {0}")]
    Invalid(Violation),
}

impl fmt::Display for Hypergraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} vertices, {} edges)", self.vertices.len(), self.incidence.len())
    }
}

impl Hypergraph {
    /// Builds a hypergraph from explicit vertex and edge data.
    ///
    /// The result is not validated; call [`Hypergraph::validate`] to obtain
    /// the list of broken invariants, if any.
    pub fn new<V, E, I, W>(vertices: V, edges: E) -> Self
    where
        V: IntoIterator<Item = I>,
        E: IntoIterator<Item = (I, W)>,
        I: Into<String>,
        W: IntoIterator<Item = I>,
    {
        Hypergraph {
            vertices: vertices.into_iter().map(Into::into).collect(),
            incidence: edges
                .into_iter()
                .map(|(id, vs)| (id.into(), vs.into_iter().map(Into::into).collect()))
                .collect(),
        }
    }

    /// The hypergraph with no vertices and no edges.
    pub fn empty() -> Self {
        Hypergraph { vertices: BTreeSet::new(), incidence: BTreeMap::new() }
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty() && self.incidence.is_empty()
    }

    pub fn vertices(&self) -> impl Iterator<Item = &str> {
        self.vertices.iter().map(String::as_str)
    }

    pub fn edges(&self) -> impl Iterator<Item = &str> {
        self.incidence.keys().map(String::as_str)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.incidence.len()
    }

    /// |V| + |E|, the size used by the isomorphism-search cap.
    pub fn carrier_size(&self) -> usize {
        self.vertices.len() + self.incidence.len()
    }

    pub fn has_vertex(&self, id: &str) -> bool {
        self.vertices.contains(id)
    }

    pub fn has_edge(&self, id: &str) -> bool {
        self.incidence.contains_key(id)
    }

    /// The vertex set of an edge.
    pub fn edge_vertices(&self, edge: &str) -> Result<&BTreeSet<String>, HypergraphError> {
        self.incidence.get(edge).ok_or_else(|| HypergraphError::UnknownEdge(edge.into()))
    }

    /// The carrier V ⊔ E as a set of [`Element`]s.
    pub fn carrier(&self) -> ElementSet {
        self.vertices
            .iter()
            .map(|v| Element::Vertex(v.clone()))
            .chain(self.incidence.keys().map(|e| Element::Edge(e.clone())))
            .collect()
    }

    /// Checks every hypergraph invariant, returning each violation found.
    ///
    /// An empty result means the hypergraph is well formed.
    pub fn validate(&self) -> Vec<Violation> {
        let mut violations = Vec::new();
        for (edge, verts) in &self.incidence {
            if verts.is_empty() {
                violations.push(Violation::EmptyHyperedge { edge: edge.clone() });
            }
            for v in verts {
                if !self.vertices.contains(v) {
                    violations
                        .push(Violation::UnknownVertex { edge: edge.clone(), vertex: v.clone() });
                }
            }
        }
        violations
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    /// N(e): the set of other hyperedges sharing at least one vertex with e.
    pub fn neighbors(&self, edge: &str) -> Result<BTreeSet<String>, HypergraphError> {
        let verts = self.edge_vertices(edge)?;
        Ok(self
            .incidence
            .iter()
            .filter(|(other, ovs)| other.as_str() != edge && !verts.is_disjoint(ovs))
            .map(|(other, _)| other.clone())
            .collect())
    }

    /// The dual hypergraph: vertices become edges and edges become vertices,
    /// with the transposed incidence.
    ///
    /// Every vertex must belong to at least one edge, otherwise its dual edge
    /// would be empty.
    pub fn dual(&self) -> Result<Hypergraph, HypergraphError> {
        let mut incidence: BTreeMap<String, BTreeSet<String>> =
            self.vertices.iter().map(|v| (v.clone(), BTreeSet::new())).collect();
        for (edge, verts) in &self.incidence {
            for v in verts {
                incidence.entry(v.clone()).or_default().insert(edge.clone());
            }
        }
        for (v, dual_edge) in &incidence {
            if dual_edge.is_empty() {
                return Err(HypergraphError::EmptyDualEdge(v.clone()));
            }
        }
        Ok(Hypergraph { vertices: self.incidence.keys().cloned().collect(), incidence })
    }

    /// The sub-hypergraph on the given vertex and edge subsets, keeping each
    /// retained edge's incidence intact. Callers must ensure the retained
    /// edges only mention retained vertices.
    pub fn restrict_full(&self, vertices: &BTreeSet<String>, edges: &BTreeSet<String>) -> Hypergraph {
        Hypergraph {
            vertices: self.vertices.intersection(vertices).cloned().collect(),
            incidence: self
                .incidence
                .iter()
                .filter(|(e, _)| edges.contains(*e))
                .map(|(e, vs)| (e.clone(), vs.clone()))
                .collect(),
        }
    }

    /// The induced sub-hypergraph: retained edges are cut down to the
    /// retained vertices. Edges whose cut incidence is empty are dropped.
    pub fn restrict_induced(
        &self,
        vertices: &BTreeSet<String>,
        edges: &BTreeSet<String>,
    ) -> Hypergraph {
        let vertices: BTreeSet<String> = self.vertices.intersection(vertices).cloned().collect();
        let incidence: BTreeMap<String, BTreeSet<String>> = self
            .incidence
            .iter()
            .filter(|(e, _)| edges.contains(*e))
            .map(|(e, vs)| (e.clone(), vs.intersection(&vertices).cloned().collect::<BTreeSet<_>>()))
            .filter(|(_, vs): &(String, BTreeSet<String>)| !vs.is_empty())
            .collect();
        Hypergraph { vertices, incidence }
    }
}

// --- JSON wire format -------------------------------------------------------
//
// `{"vertices":["a","b"],"edges":[{"id":"e1","vertices":["a","b"]}]}`
// Keys and list entries are emitted in lexicographic order.

#[derive(Serialize, Deserialize)]
struct EdgeJson {
    id: String,
    vertices: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct HypergraphJson {
    vertices: Vec<String>,
    edges: Vec<EdgeJson>,
}

impl Serialize for Hypergraph {
    fn serialize<S>(&self, serializer: S) -> Result<S::Ok, S::Error>
    where
        S: serde::Serializer,
    {
        HypergraphJson {
            vertices: self.vertices.iter().cloned().collect(),
            edges: self
                .incidence
                .iter()
                .map(|(id, vs)| EdgeJson { id: id.clone(), vertices: vs.iter().cloned().collect() })
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Hypergraph {
    fn deserialize<D>(deserializer: D) -> Result<Self, D::Error>
    where
        D: serde::Deserializer<'de>,
    {
        let raw = HypergraphJson::deserialize(deserializer)?;
        Ok(Hypergraph {
            vertices: raw.vertices.into_iter().collect(),
            incidence: raw
                .edges
                .into_iter()
                .map(|e| (e.id, e.vertices.into_iter().collect()))
                .collect(),
        })
    }
}
