//! Tame filtrations of hypergraphs as finite data.
//!
//! A tame filtration is stored as its strictly increasing critical values
//! a₁ < … < aₙ, the n+1 objects it takes on the intervals (−∞,a₁), [a₁,a₂),
//! …, [aₙ,∞), and the n connecting monomorphisms between consecutive objects.
//! The filtration is right-continuous by convention: it is constant on
//! [aᵢ, aᵢ₊₁), which makes sublevel filtrations (where weight-a elements
//! appear at a) and explicitly constructed filtrations agree.
//!
//! [`WeightedHypergraph`] provides the sublevel construction, and
//! [`FilteringFunction`] recovers, for every carrier element of the final
//! object, the first level at which it is present.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hypergraph::{Element, ElementSet, Hypergraph, Violation};
use crate::jsonutil::Num;
use crate::morphism::{HypergraphMorphism, MonoClass, MorphismViolation};

#[derive(Clone, Debug, Error, PartialEq)]
pub enum FiltrationError {
    #[error("invalid hypergraph: {0}")]
    InvalidHypergraph(Violation),
    #[error("missing weight for {0}")]
    MissingWeight(Element),
    #[error("weight of {0} is not a finite number")]
    NonFiniteWeight(Element),
    #[error("weight({vertex}) > weight({edge}) although the vertex belongs to the edge")]
    WeightViolation { vertex: String, edge: String },
    #[error("critical values must be strictly increasing")]
    CriticalValuesNotIncreasing,
    #[error("expected {expected_objects} objects and {expected_steps} steps for {critical} critical values")]
    ShapeMismatch { critical: usize, expected_objects: usize, expected_steps: usize },
    #[error("step {index} does not connect consecutive objects")]
    StepEndpointMismatch { index: usize },
    #[error("step at a{index} is not in requested class: found {found}, required {required}")]
    StepClassTooWeak { index: usize, found: MonoClass, required: MonoClass },
    #[error("invalid step morphism: {0}")]
    InvalidStep(MorphismViolation),
    #[error("cannot push a tracked set backwards: base level {base} > target {target}")]
    PushBackward { base: f64, target: f64 },
    #[error("tracked set mentions elements outside the carrier at its base level")]
    ElementsOutsideCarrier,
}

/// A hypergraph whose carrier elements carry real weights, with
/// weight(v) ≤ weight(e) whenever v belongs to e.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedHypergraph {
    hypergraph: Hypergraph,
    weight: BTreeMap<Element, f64>,
}

impl WeightedHypergraph {
    /// Validates the hypergraph, totality and finiteness of the weights, and
    /// the vertex-below-edge condition.
    pub fn new(
        hypergraph: Hypergraph,
        weight: BTreeMap<Element, f64>,
    ) -> Result<Self, FiltrationError> {
        if let Some(v) = hypergraph.validate().into_iter().next() {
            return Err(FiltrationError::InvalidHypergraph(v));
        }
        for x in hypergraph.carrier() {
            match weight.get(&x) {
                None => return Err(FiltrationError::MissingWeight(x)),
                Some(w) if !w.is_finite() => return Err(FiltrationError::NonFiniteWeight(x)),
                Some(_) => {}
            }
        }
        for e in hypergraph.edges() {
            let we = weight[&Element::edge(e)];
            for v in hypergraph.edge_vertices(e).unwrap() {
                if weight[&Element::vertex(v.clone())] > we {
                    return Err(FiltrationError::WeightViolation {
                        vertex: v.clone(),
                        edge: e.to_string(),
                    });
                }
            }
        }
        Ok(WeightedHypergraph { hypergraph, weight })
    }

    pub fn hypergraph(&self) -> &Hypergraph {
        &self.hypergraph
    }

    pub fn weight(&self, x: &Element) -> f64 {
        self.weight[x]
    }

    pub fn weights(&self) -> &BTreeMap<Element, f64> {
        &self.weight
    }

    /// The sublevel filtration: at level u the object consists of every
    /// vertex and edge of weight ≤ u, connected by inclusions.
    ///
    /// Inclusions between sublevel objects always preserve edge sizes, but
    /// every step is still re-classified and checked against the requested
    /// category class.
    pub fn sublevel_filtration(
        &self,
        category_class: MonoClass,
    ) -> Result<TameFiltration, FiltrationError> {
        let mut critical_values: Vec<f64> = self.weight.values().copied().collect();
        critical_values.sort_by(|a, b| a.partial_cmp(b).unwrap());
        critical_values.dedup();

        let mut objects = vec![Hypergraph::empty()];
        for a in &critical_values {
            let vertices = self
                .hypergraph
                .vertices()
                .filter(|v| self.weight[&Element::vertex(*v)] <= *a)
                .map(str::to_string)
                .collect();
            let edges = self
                .hypergraph
                .edges()
                .filter(|e| self.weight[&Element::edge(*e)] <= *a)
                .map(str::to_string)
                .collect();
            objects.push(self.hypergraph.restrict_full(&vertices, &edges));
        }
        let steps = objects
            .windows(2)
            .map(|w| HypergraphMorphism::inclusion(w[0].clone(), w[1].clone()))
            .collect::<Result<Vec<_>, _>>()
            .map_err(FiltrationError::InvalidStep)?;
        TameFiltration::new(critical_values, objects, steps, category_class)
    }
}

/// A pair (A, F_u): a carrier subset tracked at a specific level.
#[derive(Clone, Debug, PartialEq)]
pub struct TrackedSet {
    pub base_level: f64,
    pub elements: ElementSet,
}

/// The level at which a carrier element of the final object first appears:
/// a critical value, or −∞ for elements already present before the first one.
#[derive(Clone, Debug, PartialEq)]
pub struct FilteringFunction {
    values: BTreeMap<Element, f64>,
}

impl FilteringFunction {
    pub fn value(&self, x: &Element) -> Option<f64> {
        self.values.get(x).copied()
    }

    pub fn values(&self) -> &BTreeMap<Element, f64> {
        &self.values
    }
}

/// A tame filtration F: one hypergraph per critical interval, connected by
/// monomorphisms of at least the declared category class.
#[derive(Clone, Debug, PartialEq)]
pub struct TameFiltration {
    critical_values: Vec<f64>,
    objects: Vec<Hypergraph>,
    steps: Vec<HypergraphMorphism>,
    category_class: MonoClass,
}

impl TameFiltration {
    pub fn new(
        critical_values: Vec<f64>,
        objects: Vec<Hypergraph>,
        steps: Vec<HypergraphMorphism>,
        category_class: MonoClass,
    ) -> Result<Self, FiltrationError> {
        let n = critical_values.len();
        if critical_values.iter().any(|a| !a.is_finite())
            || critical_values.windows(2).any(|w| w[0] >= w[1])
        {
            return Err(FiltrationError::CriticalValuesNotIncreasing);
        }
        if objects.len() != n + 1 || steps.len() != n {
            return Err(FiltrationError::ShapeMismatch {
                critical: n,
                expected_objects: n + 1,
                expected_steps: n,
            });
        }
        for (k, step) in steps.iter().enumerate() {
            if step.source() != &objects[k] || step.target() != &objects[k + 1] {
                return Err(FiltrationError::StepEndpointMismatch { index: k });
            }
            if step.mono_class() < category_class {
                return Err(FiltrationError::StepClassTooWeak {
                    index: k + 1,
                    found: step.mono_class(),
                    required: category_class,
                });
            }
        }
        Ok(TameFiltration { critical_values, objects, steps, category_class })
    }

    /// The filtration that is constantly `h`, with no critical values.
    pub fn constant(h: Hypergraph) -> Self {
        TameFiltration {
            critical_values: Vec::new(),
            objects: vec![h],
            steps: Vec::new(),
            category_class: MonoClass::SizePreserving,
        }
    }

    pub fn critical_values(&self) -> &[f64] {
        &self.critical_values
    }

    pub fn category_class(&self) -> MonoClass {
        self.category_class
    }

    /// The strongest class every step actually satisfies, re-derived from
    /// the maps. At least as strong as the declared category class.
    pub fn effective_class(&self) -> MonoClass {
        self.steps
            .iter()
            .map(HypergraphMorphism::mono_class)
            .min()
            .unwrap_or(MonoClass::SizePreserving)
    }

    pub fn objects(&self) -> &[Hypergraph] {
        &self.objects
    }

    pub fn steps(&self) -> &[HypergraphMorphism] {
        &self.steps
    }

    /// Number of constancy intervals, i.e. critical values + 1.
    pub fn interval_count(&self) -> usize {
        self.objects.len()
    }

    /// Index of the interval containing u: the number of critical values ≤ u.
    pub fn interval_index(&self, u: f64) -> usize {
        self.critical_values.iter().take_while(|a| **a <= u).count()
    }

    /// The object at level u together with its interval index. Constant on
    /// [aᵢ, aᵢ₊₁); levels below a₁ give the initial object.
    pub fn evaluate(&self, u: f64) -> (&Hypergraph, usize) {
        let i = self.interval_index(u);
        (&self.objects[i], i)
    }

    /// The final object F∞ = Hₙ.
    pub fn final_object(&self) -> &Hypergraph {
        self.objects.last().expect("at least one object")
    }

    /// Pushes a carrier subset from interval i to interval j ≥ i through the
    /// composite of the step maps.
    pub fn transfer_set(&self, set: &ElementSet, i: usize, j: usize) -> ElementSet {
        debug_assert!(i <= j && j < self.objects.len());
        let mut current = set.clone();
        for k in i..j {
            current = self.steps[k]
                .apply_set(&current)
                .expect("tracked elements stay inside the carrier");
        }
        current
    }

    /// Pushes a tracked set forward to level v ≥ its base level. Injectivity
    /// of the steps guarantees the image has the same cardinality.
    pub fn push_forward(&self, a: &TrackedSet, v: f64) -> Result<TrackedSet, FiltrationError> {
        if v < a.base_level {
            return Err(FiltrationError::PushBackward { base: a.base_level, target: v });
        }
        let i = self.interval_index(a.base_level);
        let j = self.interval_index(v);
        if !a.elements.is_subset(&self.objects[i].carrier()) {
            return Err(FiltrationError::ElementsOutsideCarrier);
        }
        let elements = self.transfer_set(&a.elements, i, j);
        debug_assert_eq!(elements.len(), a.elements.len());
        Ok(TrackedSet { base_level: v, elements })
    }

    /// The filtering function of the final object: x ↦ the first critical
    /// value whose object's image contains x, or −∞ when x is already in the
    /// image of the initial object.
    pub fn filtering_function(&self) -> FilteringFunction {
        let n = self.objects.len() - 1;
        let mut values = BTreeMap::new();
        for (i, object) in self.objects.iter().enumerate() {
            let level = if i == 0 { f64::NEG_INFINITY } else { self.critical_values[i - 1] };
            let image = self.transfer_set(&object.carrier(), i, n);
            for x in image {
                values.entry(x).or_insert(level);
            }
        }
        FilteringFunction { values }
    }

    /// Canonical sample points s₀ < a₁ < s₁ < … < aₙ < sₙ: the critical
    /// values interleaved with interval midpoints, with sentinels a₁−1 and
    /// aₙ+1. The filtration (and every persistence query on it) is constant
    /// between consecutive critical values, so any interior point is exact.
    pub fn sample_points(&self) -> Vec<f64> {
        let n = self.critical_values.len();
        if n == 0 {
            return vec![0.0];
        }
        let mut samples = Vec::with_capacity(2 * n + 1);
        samples.push(self.critical_values[0] - 1.0);
        for i in 0..n {
            samples.push(self.critical_values[i]);
            if i + 1 < n {
                samples.push((self.critical_values[i] + self.critical_values[i + 1]) / 2.0);
            }
        }
        samples.push(self.critical_values[n - 1] + 1.0);
        samples
    }

    /// The composed vertex/edge maps from interval i to interval j ≥ i.
    pub fn composed_maps(
        &self,
        i: usize,
        j: usize,
    ) -> (BTreeMap<String, String>, BTreeMap<String, String>) {
        let mut vm: BTreeMap<String, String> =
            self.objects[i].vertices().map(|v| (v.to_string(), v.to_string())).collect();
        let mut em: BTreeMap<String, String> =
            self.objects[i].edges().map(|e| (e.to_string(), e.to_string())).collect();
        for k in i..j {
            for img in vm.values_mut() {
                *img = self.steps[k].apply_vertex(img).expect("total step map").to_string();
            }
            for img in em.values_mut() {
                *img = self.steps[k].apply_edge(img).expect("total step map").to_string();
            }
        }
        (vm, em)
    }

    /// The composed morphism F from interval i to interval j ≥ i.
    pub fn composed_morphism(&self, i: usize, j: usize) -> HypergraphMorphism {
        let (vm, em) = self.composed_maps(i, j);
        HypergraphMorphism::new(self.objects[i].clone(), self.objects[j].clone(), vm, em)
            .expect("composite of valid steps is valid")
    }
}

// --- JSON wire format -------------------------------------------------------
//
// `{"class":"=","critical_values":[0,1,2],"objects":[H0,...,Hn],"steps":[m1,...,mn]}`

#[derive(Serialize, Deserialize)]
struct FiltrationJson {
    class: MonoClass,
    critical_values: Vec<Num>,
    objects: Vec<Hypergraph>,
    steps: Vec<crate::morphism::MorphismJson>,
}

impl Serialize for TameFiltration {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        FiltrationJson {
            class: self.category_class,
            critical_values: self.critical_values.iter().map(|a| Num(*a)).collect(),
            objects: self.objects.clone(),
            steps: self.steps.iter().map(Into::into).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for TameFiltration {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let raw = FiltrationJson::deserialize(d)?;
        if raw.steps.len() + 1 != raw.objects.len() {
            return Err(D::Error::custom("filtration needs one step between consecutive objects"));
        }
        let mut steps = Vec::with_capacity(raw.steps.len());
        for (k, step) in raw.steps.into_iter().enumerate() {
            steps.push(
                step.into_morphism(raw.objects[k].clone(), raw.objects[k + 1].clone())
                    .map_err(D::Error::custom)?,
            );
        }
        TameFiltration::new(
            raw.critical_values.into_iter().map(|n| n.0).collect(),
            raw.objects,
            steps,
            raw.class,
        )
        .map_err(D::Error::custom)
    }
}

// WeightedHypergraph JSON: the hypergraph fields plus `"weights":{"a":0}`.
// An id naming both a vertex and an edge weights both carrier elements.

#[derive(Serialize, Deserialize)]
struct WeightedHypergraphJson {
    vertices: Vec<String>,
    edges: Vec<EdgeJson>,
    weights: BTreeMap<String, Num>,
}

#[derive(Serialize, Deserialize)]
struct EdgeJson {
    id: String,
    vertices: Vec<String>,
}

impl Serialize for WeightedHypergraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        WeightedHypergraphJson {
            vertices: self.hypergraph.vertices().map(str::to_string).collect(),
            edges: self
                .hypergraph
                .edges()
                .map(|e| EdgeJson {
                    id: e.to_string(),
                    vertices: self.hypergraph.edge_vertices(e).unwrap().iter().cloned().collect(),
                })
                .collect(),
            weights: self.weight.iter().map(|(x, w)| (x.id().to_string(), Num(*w))).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for WeightedHypergraph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let raw = WeightedHypergraphJson::deserialize(d)?;
        let hypergraph = Hypergraph::new(
            raw.vertices,
            raw.edges.into_iter().map(|e| (e.id, e.vertices)),
        );
        let mut weight = BTreeMap::new();
        for x in hypergraph.carrier() {
            if let Some(w) = raw.weights.get(x.id()) {
                weight.insert(x, w.0);
            }
        }
        WeightedHypergraph::new(hypergraph, weight).map_err(D::Error::custom)
    }
}
