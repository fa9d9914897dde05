//! Seeded random instances for property sweeps.
//!
//! All generators draw integer weights so that every downstream comparison
//! (critical values, midpoint samples, shifted queries) stays exact in
//! floating point. Instances are valid by construction: vertex weights are
//! clamped below the weights of their edges.

use std::collections::BTreeMap;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::diagram::{DiagramPoint, Level, PersistenceDiagram};
use crate::filtration::WeightedHypergraph;
use crate::hypergraph::{Element, Hypergraph};
use crate::persistence::Mode;

/// Size bounds for random weighted hypergraphs.
#[derive(Clone, Copy, Debug)]
pub struct CorpusBounds {
    pub max_vertices: usize,
    pub max_edges: usize,
    /// Weights are drawn from {0, …, weight_levels − 1}, so filtrations have
    /// at most `weight_levels` critical values.
    pub weight_levels: u64,
}

impl Default for CorpusBounds {
    fn default() -> Self {
        CorpusBounds { max_vertices: 6, max_edges: 6, weight_levels: 4 }
    }
}

pub fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random valid weighted hypergraph within the bounds.
pub fn random_weighted_hypergraph(
    rng: &mut ChaCha8Rng,
    bounds: &CorpusBounds,
) -> WeightedHypergraph {
    let nv = rng.gen_range(1..=bounds.max_vertices);
    let ne = rng.gen_range(1..=bounds.max_edges);
    let vertex_ids: Vec<String> = (0..nv).map(|i| format!("v{i}")).collect();
    let mut edges = Vec::with_capacity(ne);
    for i in 0..ne {
        let mut members: Vec<String> =
            vertex_ids.iter().filter(|_| rng.gen_bool(0.4)).cloned().collect();
        if members.is_empty() {
            members.push(vertex_ids[rng.gen_range(0..nv)].clone());
        }
        edges.push((format!("e{i}"), members));
    }
    let h = Hypergraph::new(vertex_ids.clone(), edges);

    let mut weights: BTreeMap<Element, f64> = BTreeMap::new();
    for e in h.edges() {
        weights.insert(Element::edge(e), rng.gen_range(0..bounds.weight_levels) as f64);
    }
    for v in h.vertices() {
        let ceiling = h
            .edges()
            .filter(|e| h.edge_vertices(e).unwrap().contains(v))
            .map(|e| weights[&Element::edge(e)])
            .fold(f64::INFINITY, f64::min);
        let cap = if ceiling.is_finite() { ceiling as u64 } else { bounds.weight_levels - 1 };
        weights.insert(Element::vertex(v), rng.gen_range(0..=cap) as f64);
    }
    WeightedHypergraph::new(h, weights).expect("generated weights respect the edge condition")
}

/// A weight perturbation of the same hypergraph: every edge weight moves by
/// at most `max_shift` integer steps (staying nonnegative) and vertex weights
/// are re-clamped, so both filtrations share their final object.
pub fn perturbed_weights(
    rng: &mut ChaCha8Rng,
    base: &WeightedHypergraph,
    max_shift: i64,
) -> WeightedHypergraph {
    let h = base.hypergraph().clone();
    let mut weights: BTreeMap<Element, f64> = BTreeMap::new();
    for e in h.edges() {
        let shift = rng.gen_range(-max_shift..=max_shift) as f64;
        weights.insert(Element::edge(e), (base.weight(&Element::edge(e)) + shift).max(0.0));
    }
    for v in h.vertices() {
        let ceiling = h
            .edges()
            .filter(|e| h.edge_vertices(e).unwrap().contains(v))
            .map(|e| weights[&Element::edge(e)])
            .fold(f64::INFINITY, f64::min);
        let shift = rng.gen_range(-max_shift..=max_shift) as f64;
        let wanted = (base.weight(&Element::vertex(v)) + shift).max(0.0);
        weights.insert(Element::vertex(v), wanted.min(ceiling));
    }
    WeightedHypergraph::new(h, weights).expect("perturbed weights stay valid")
}

/// A random diagram with at most `max_points` points (counted with
/// multiplicity), small integer coordinates, and occasional essential points.
pub fn random_diagram(rng: &mut ChaCha8Rng, max_points: usize, mode: Mode) -> PersistenceDiagram {
    let count = rng.gen_range(0..=max_points);
    let mut points = Vec::with_capacity(count);
    for _ in 0..count {
        let birth = rng.gen_range(0..8) as f64;
        if rng.gen_bool(0.25) {
            points.push(DiagramPoint {
                birth: Level::Finite(birth),
                death: Level::PosInf,
                mult: 1,
            });
        } else {
            let death = birth + rng.gen_range(1..6) as f64;
            points.push(DiagramPoint {
                birth: Level::Finite(birth),
                death: Level::Finite(death),
                mult: 1,
            });
        }
    }
    PersistenceDiagram::new(mode, points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::morphism::MonoClass;

    #[test]
    fn generated_instances_are_valid_and_deterministic() {
        let bounds = CorpusBounds::default();
        let mut a = rng_for(7);
        let mut b = rng_for(7);
        for _ in 0..50 {
            let wa = random_weighted_hypergraph(&mut a, &bounds);
            let wb = random_weighted_hypergraph(&mut b, &bounds);
            assert_eq!(wa, wb);
            let flt = wa.sublevel_filtration(MonoClass::SizePreserving).unwrap();
            assert!(flt.critical_values().len() <= bounds.weight_levels as usize);
        }
    }

    #[test]
    fn perturbation_keeps_the_final_object() {
        let bounds = CorpusBounds::default();
        let mut rng = rng_for(11);
        for _ in 0..50 {
            let base = random_weighted_hypergraph(&mut rng, &bounds);
            let other = perturbed_weights(&mut rng, &base, 1);
            let f = base.sublevel_filtration(MonoClass::SizePreserving).unwrap();
            let g = other.sublevel_filtration(MonoClass::SizePreserving).unwrap();
            assert_eq!(f.final_object(), g.final_object());
        }
    }
}
