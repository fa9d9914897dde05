//! Interleaving distance between tame filtrations, and the two hard-coded
//! counterexample constructions that turn a convexity witness into a pair of
//! 1-interleaved filtrations with incompatible persistence.
//!
//! For filtrations whose steps at least reflect membership, the interleaving
//! distance equals the minimum over isomorphisms φ of the final objects of
//! ‖f_F − f_G ∘ Φφ‖∞, where f is the filtering function. In the general
//! morphism class that equality is not established, so the computed value is
//! returned flagged as an upper bound only.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::feature::{Feature, Witness};
use crate::filtration::{FiltrationError, TameFiltration};
use crate::hypergraph::Hypergraph;
use crate::morphism::{compose, HypergraphMorphism, MonoClass, MorphismError};
use crate::persistence::{ranging_set, steady_set};

/// An interleaving distance value. `exact` is false in the general morphism
/// class, where the min-over-isomorphisms formula is not known to coincide
/// with the interleaving distance.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InterleavingDistance {
    pub value: f64,
    pub exact: bool,
}

/// The minimum over isomorphisms φ : F∞ → G∞ of the sup-difference of the
/// filtering functions; +∞ when the final objects are not isomorphic.
///
/// Elements present from −∞ in both filtrations contribute no difference;
/// an element at −∞ on one side only forces +∞ for that isomorphism.
pub fn interleaving_distance_exact(
    f: &TameFiltration,
    g: &TameFiltration,
    cap: usize,
) -> Result<InterleavingDistance, MorphismError> {
    let exact = f.effective_class() >= MonoClass::MembershipReflecting
        && g.effective_class() >= MonoClass::MembershipReflecting;
    let ff = f.filtering_function();
    let fg = g.filtering_function();

    let mut best = f64::INFINITY;
    crate::morphism::visit_isomorphisms(f.final_object(), g.final_object(), cap, &mut |vm, em| {
        let mut worst: f64 = 0.0;
        for (x, fx) in ff.values() {
            let image = match x {
                crate::hypergraph::Element::Vertex(v) => {
                    crate::hypergraph::Element::Vertex(vm[v].clone())
                }
                crate::hypergraph::Element::Edge(e) => {
                    crate::hypergraph::Element::Edge(em[e].clone())
                }
            };
            let gx = fg.value(&image).expect("image lies in the target carrier");
            let diff = match (fx.is_finite(), gx.is_finite()) {
                (true, true) => (fx - gx).abs(),
                (false, false) => 0.0,
                _ => f64::INFINITY,
            };
            worst = worst.max(diff);
            if worst >= best {
                break;
            }
        }
        best = best.min(worst);
        best == 0.0
    })?;
    Ok(InterleavingDistance { value: best, exact })
}

#[derive(Clone, Debug, Error, PartialEq)]
pub enum BuildError {
    #[error("witness chain does not compose: target of ι differs from source of ι′")]
    InvalidComposition,
    #[error("witness set is empty")]
    EmptyWitnessSet,
    #[error("witness set lies outside the carrier of the first object")]
    SetOutsideCarrier,
    #[error("constructed filtration is malformed: {0}")]
    Filtration(#[from] FiltrationError),
    #[error("composite morphism is malformed: {0}")]
    Morphism(#[from] MorphismError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CounterexampleKind {
    Steady,
    Ranging,
}

/// A pair of 1-interleaved filtrations built from a convexity witness, with
/// the probe pair at which compatibility fails and which side's shifted count
/// strictly exceeds the other.
#[derive(Clone, Debug)]
pub struct CounterexamplePair {
    pub kind: CounterexampleKind,
    pub f: TameFiltration,
    pub g: TameFiltration,
    pub epsilon: f64,
    pub probe: (f64, f64),
}

/// The counts realizing the strict inequality at the probe pair.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbeReport {
    pub probe: (f64, f64),
    pub epsilon: f64,
    /// Name of the filtration whose ε-shifted count exceeds the other.
    pub shifted_side: &'static str,
    pub shifted_count: u64,
    pub direct_count: u64,
}

impl ProbeReport {
    pub fn strict_violation(&self) -> bool {
        self.shifted_count > self.direct_count
    }
}

fn check_chain_shape(w: &Witness) -> Result<(), BuildError> {
    if w.iota.target() != w.iota_prime.source() {
        return Err(BuildError::InvalidComposition);
    }
    if !w.a.is_subset(&w.iota.source().carrier()) {
        return Err(BuildError::SetOutsideCarrier);
    }
    Ok(())
}

fn chain_class(w: &Witness) -> MonoClass {
    w.iota.mono_class().min(w.iota_prime.mono_class())
}

/// F = X on u<3, X′ on [3,5), X″ on u≥5 versus G = X on u<4, X″ on u≥4,
/// 1-interleaved by construction; the steady counts fail 1-compatibility at
/// the probe (1, 5), where |S_F(1≤5)| < |S_G(0≤6)| whenever the witness
/// chain refutes convexity.
pub fn build_steady_counterexample(w: &Witness) -> Result<CounterexamplePair, BuildError> {
    check_chain_shape(w)?;
    let x = w.iota.source().clone();
    let x2 = w.iota_prime.target().clone();
    let class = chain_class(w);
    let f = TameFiltration::new(
        vec![3.0, 5.0],
        vec![x.clone(), w.iota.target().clone(), x2.clone()],
        vec![w.iota.clone(), w.iota_prime.clone()],
        class,
    )?;
    let composite = compose(&w.iota_prime, &w.iota)?;
    let g = TameFiltration::new(vec![4.0], vec![x, x2], vec![composite], class)?;
    Ok(CounterexamplePair {
        kind: CounterexampleKind::Steady,
        f,
        g,
        epsilon: 1.0,
        probe: (1.0, 5.0),
    })
}

/// F = ∅̂, X, X′, X″ at breakpoints 1, 3, 5 versus G = ∅̂, X′, X″ at
/// breakpoints 2, 6, 1-interleaved by construction; the ranging counts fail
/// 1-compatibility at the probe (4, 6), where |R_G(4≤6)| < |R_F(3≤7)|.
pub fn build_ranging_counterexample(w: &Witness) -> Result<CounterexamplePair, BuildError> {
    check_chain_shape(w)?;
    if w.a.is_empty() {
        return Err(BuildError::EmptyWitnessSet);
    }
    let x = w.iota.source().clone();
    let x1 = w.iota.target().clone();
    let x2 = w.iota_prime.target().clone();
    let class = chain_class(w);
    let f = TameFiltration::new(
        vec![1.0, 3.0, 5.0],
        vec![Hypergraph::empty(), x.clone(), x1.clone(), x2.clone()],
        vec![
            HypergraphMorphism::from_empty(x),
            w.iota.clone(),
            w.iota_prime.clone(),
        ],
        class,
    )?;
    let g = TameFiltration::new(
        vec![2.0, 6.0],
        vec![Hypergraph::empty(), x1.clone(), x2],
        vec![HypergraphMorphism::from_empty(x1), w.iota_prime.clone()],
        class,
    )?;
    Ok(CounterexamplePair {
        kind: CounterexampleKind::Ranging,
        f,
        g,
        epsilon: 1.0,
        probe: (4.0, 6.0),
    })
}

/// Plain vertex/edge maps, used to compare composites of interleaving
/// morphisms with the filtrations' own connecting maps.
#[derive(Clone, Debug, PartialEq)]
struct CarrierMap {
    v: BTreeMap<String, String>,
    e: BTreeMap<String, String>,
}

impl CarrierMap {
    fn of(m: &HypergraphMorphism) -> Self {
        CarrierMap { v: m.vertex_map().clone(), e: m.edge_map().clone() }
    }

    fn of_filtration(flt: &TameFiltration, u: f64, v: f64) -> Self {
        let (vm, em) = flt.composed_maps(flt.interval_index(u), flt.interval_index(v));
        CarrierMap { v: vm, e: em }
    }

    /// outer ∘ inner
    fn after(outer: &CarrierMap, inner: &CarrierMap) -> Self {
        CarrierMap {
            v: inner.v.iter().map(|(a, b)| (a.clone(), outer.v[b].clone())).collect(),
            e: inner.e.iter().map(|(a, b)| (a.clone(), outer.e[b].clone())).collect(),
        }
    }
}

impl CounterexamplePair {
    /// The interleaving family φ_w : F_w → G_{w+1} from the construction.
    fn phi(&self, w: f64) -> HypergraphMorphism {
        let steps_f = self.f.steps();
        match self.kind {
            CounterexampleKind::Steady => {
                // id on X below 3, ι′ on [3,5), id on X″ from 5.
                if w < 3.0 {
                    HypergraphMorphism::identity(&self.f.objects()[0])
                } else if w < 5.0 {
                    steps_f[1].clone()
                } else {
                    HypergraphMorphism::identity(&self.f.objects()[2])
                }
            }
            CounterexampleKind::Ranging => {
                // empty map below 1, ι on [1,3), id on X′ on [3,5), id on X″.
                if w < 1.0 {
                    HypergraphMorphism::from_empty(Hypergraph::empty())
                } else if w < 3.0 {
                    steps_f[1].clone()
                } else if w < 5.0 {
                    HypergraphMorphism::identity(&self.f.objects()[2])
                } else {
                    HypergraphMorphism::identity(&self.f.objects()[3])
                }
            }
        }
        .clone_with_target_check(&self.g, w + self.epsilon)
    }

    /// The interleaving family ψ_w : G_w → F_{w+1} from the construction.
    fn psi(&self, w: f64) -> HypergraphMorphism {
        let steps_f = self.f.steps();
        match self.kind {
            CounterexampleKind::Steady => {
                // id on X below 2, ι on [2,4), id on X″ from 4.
                if w < 2.0 {
                    HypergraphMorphism::identity(&self.g.objects()[0])
                } else if w < 4.0 {
                    steps_f[0].clone()
                } else {
                    HypergraphMorphism::identity(&self.g.objects()[1])
                }
            }
            CounterexampleKind::Ranging => {
                // empty map below 2, id on X′ on [2,4), ι′ on [4,6), id on X″.
                if w < 2.0 {
                    HypergraphMorphism::from_empty(self.f.evaluate(w + 1.0).0.clone())
                } else if w < 4.0 {
                    HypergraphMorphism::identity(&self.g.objects()[1])
                } else if w < 6.0 {
                    steps_f[2].clone()
                } else {
                    HypergraphMorphism::identity(&self.g.objects()[2])
                }
            }
        }
        .clone_with_source_check(&self.g, w)
    }

    /// Sample levels covering every constancy cell of the construction: all
    /// breakpoints, their ε-shifts, midpoints, and sentinels.
    fn sample_levels(&self) -> Vec<f64> {
        let mut pts: Vec<f64> = Vec::new();
        for a in self.f.critical_values().iter().chain(self.g.critical_values()) {
            pts.extend([*a - self.epsilon, *a, *a + self.epsilon]);
        }
        pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        pts.dedup();
        let mut samples = vec![pts[0] - 1.0];
        for k in 0..pts.len() {
            samples.push(pts[k]);
            if k + 1 < pts.len() {
                samples.push((pts[k] + pts[k + 1]) / 2.0);
            }
        }
        samples.push(pts[pts.len() - 1] + 1.0);
        samples
    }

    /// Verifies that the hard-coded φ/ψ families are well-typed monomorphism
    /// families making all four diagram shapes of the ε-interleaving
    /// definition commute, at one sample point per constancy interval.
    pub fn verify_one_interleaving(&self) -> Result<(), String> {
        let eps = self.epsilon;
        let samples = self.sample_levels();
        for &w in &samples {
            let phi_low = self.phi(w - eps);
            let psi_w = self.psi(w);
            // F_{w-ε} → G_w → F_{w+ε} must equal F's own connecting map.
            let lhs = CarrierMap::after(&CarrierMap::of(&psi_w), &CarrierMap::of(&phi_low));
            let rhs = CarrierMap::of_filtration(&self.f, w - eps, w + eps);
            if lhs != rhs {
                return Err(format!("triangle through G does not commute at w = {w}"));
            }
            let psi_low = self.psi(w - eps);
            let phi_w = self.phi(w);
            let lhs = CarrierMap::after(&CarrierMap::of(&phi_w), &CarrierMap::of(&psi_low));
            let rhs = CarrierMap::of_filtration(&self.g, w - eps, w + eps);
            if lhs != rhs {
                return Err(format!("triangle through F does not commute at w = {w}"));
            }
        }
        for (i, &u) in samples.iter().enumerate() {
            for &v in &samples[i..] {
                let lhs = CarrierMap::after(
                    &CarrierMap::of(&self.phi(v)),
                    &CarrierMap::of_filtration(&self.f, u, v),
                );
                let rhs = CarrierMap::after(
                    &CarrierMap::of_filtration(&self.g, u + eps, v + eps),
                    &CarrierMap::of(&self.phi(u)),
                );
                if lhs != rhs {
                    return Err(format!("φ square does not commute at ({u}, {v})"));
                }
                let lhs = CarrierMap::after(
                    &CarrierMap::of(&self.psi(v)),
                    &CarrierMap::of_filtration(&self.g, u, v),
                );
                let rhs = CarrierMap::after(
                    &CarrierMap::of_filtration(&self.f, u + eps, v + eps),
                    &CarrierMap::of(&self.psi(u)),
                );
                if lhs != rhs {
                    return Err(format!("ψ square does not commute at ({u}, {v})"));
                }
            }
        }
        Ok(())
    }

    /// Evaluates the strict count inequality asserted by the construction at
    /// its probe pair.
    pub fn probe_report(&self, feature: &dyn Feature) -> ProbeReport {
        let (u, v) = self.probe;
        let eps = self.epsilon;
        match self.kind {
            // σ_G(u−ε ≤ v+ε) must exceed σ_F(u ≤ v).
            CounterexampleKind::Steady => ProbeReport {
                probe: self.probe,
                epsilon: eps,
                shifted_side: "G",
                shifted_count: steady_set(feature, &self.g, u - eps, v + eps).unwrap().len()
                    as u64,
                direct_count: steady_set(feature, &self.f, u, v).unwrap().len() as u64,
            },
            // ρ_F(u−ε ≤ v+ε) must exceed ρ_G(u ≤ v).
            CounterexampleKind::Ranging => ProbeReport {
                probe: self.probe,
                epsilon: eps,
                shifted_side: "F",
                shifted_count: ranging_set(feature, &self.f, u - eps, v + eps).unwrap().len()
                    as u64,
                direct_count: ranging_set(feature, &self.g, u, v).unwrap().len() as u64,
            },
        }
    }
}

trait EndpointCheck {
    fn clone_with_target_check(self, g: &TameFiltration, level: f64) -> HypergraphMorphism;
    fn clone_with_source_check(self, g: &TameFiltration, level: f64) -> HypergraphMorphism;
}

impl EndpointCheck for HypergraphMorphism {
    fn clone_with_target_check(self, g: &TameFiltration, level: f64) -> HypergraphMorphism {
        debug_assert_eq!(self.target(), g.evaluate(level).0, "φ must land in G at {level}");
        self
    }

    fn clone_with_source_check(self, g: &TameFiltration, level: f64) -> HypergraphMorphism {
        debug_assert_eq!(self.source(), g.evaluate(level).0, "ψ must start from G at {level}");
        self
    }
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;
    use crate::feature::Hub;
    use crate::hypergraph::{Element, ElementSet};
    use crate::testutil::{fxhub, fxhub_weighted};

    fn hub_witness() -> Witness {
        let flt = fxhub();
        Witness {
            a: ElementSet::from([Element::edge("e0")]),
            iota: flt.steps()[1].clone(),
            iota_prime: flt.steps()[2].clone(),
        }
    }

    #[test]
    fn distance_to_itself_is_zero() {
        let flt = fxhub();
        let d = interleaving_distance_exact(&flt, &flt, 16).unwrap();
        assert_eq!(d, InterleavingDistance { value: 0.0, exact: true });
    }

    #[test]
    fn shifting_all_weights_shifts_the_distance() {
        let w = fxhub_weighted();
        let shifted = crate::filtration::WeightedHypergraph::new(
            w.hypergraph().clone(),
            w.weights().iter().map(|(x, wt)| (x.clone(), wt + 0.5)).collect::<BTreeMap<_, _>>(),
        )
        .unwrap();
        let f = w.sublevel_filtration(MonoClass::SizePreserving).unwrap();
        let g = shifted.sublevel_filtration(MonoClass::SizePreserving).unwrap();
        let d = interleaving_distance_exact(&f, &g, 16).unwrap();
        assert_eq!(d.value, 0.5);
        assert!(d.exact);
    }

    #[test]
    fn non_isomorphic_final_objects_are_infinitely_far() {
        let flt = fxhub();
        let single = TameFiltration::constant(crate::hypergraph::Hypergraph::new(
            ["a"],
            [("e", vec!["a"])],
        ));
        let d = interleaving_distance_exact(&flt, &single, 16).unwrap();
        assert_eq!(d.value, f64::INFINITY);
    }

    #[test]
    fn steady_counterexample_layout() {
        let pair = build_steady_counterexample(&hub_witness()).unwrap();
        assert_eq!(pair.f.critical_values(), &[3.0, 5.0]);
        assert_eq!(pair.g.critical_values(), &[4.0]);
        assert_eq!(pair.probe, (1.0, 5.0));
        pair.verify_one_interleaving().unwrap();
    }

    #[test]
    fn ranging_counterexample_layout() {
        let pair = build_ranging_counterexample(&hub_witness()).unwrap();
        assert_eq!(pair.f.critical_values(), &[1.0, 3.0, 5.0]);
        assert_eq!(pair.g.critical_values(), &[2.0, 6.0]);
        assert_eq!(pair.probe, (4.0, 6.0));
        pair.verify_one_interleaving().unwrap();
    }

    #[test]
    fn steady_probe_counts_are_strictly_unbalanced() {
        let pair = build_steady_counterexample(&hub_witness()).unwrap();
        let report = pair.probe_report(&Hub);
        assert_eq!(report.shifted_count, 1); // |S_G(0 ≤ 6)|
        assert_eq!(report.direct_count, 0); // |S_F(1 ≤ 5)|
        assert!(report.strict_violation());
    }

    #[test]
    fn ranging_probe_counts_are_strictly_unbalanced() {
        let pair = build_ranging_counterexample(&hub_witness()).unwrap();
        let report = pair.probe_report(&Hub);
        assert_eq!(report.shifted_count, 1); // |R_F(3 ≤ 7)|
        assert_eq!(report.direct_count, 0); // |R_G(4 ≤ 6)|
        assert!(report.strict_violation());
    }

    #[test]
    fn interleaving_verifier_rejects_a_twisted_pair() {
        // Replace G's connecting map by its composition with a nontrivial
        // automorphism of X″ (FXHUB's final object has the a↔b symmetry).
        // The twisted pair is still a valid filtration pair, but the
        // hard-coded φ/ψ families no longer commute with it.
        let w = hub_witness();
        let pair = build_steady_counterexample(&w).unwrap();
        let x2 = w.iota_prime.target().clone();
        let swap: std::collections::BTreeMap<String, String> = [
            ("a", "b"), ("b", "a"), ("c", "d"), ("d", "c"), ("e", "f"), ("f", "e"),
        ]
        .into_iter()
        .map(|(x, y)| (x.to_string(), y.to_string()))
        .collect();
        let eswap: std::collections::BTreeMap<String, String> = [
            ("e0", "e0"), ("e1", "e2"), ("e2", "e1"), ("e3", "e3"), ("e4", "e5"), ("e5", "e4"),
        ]
        .into_iter()
        .map(|(x, y)| (x.to_string(), y.to_string()))
        .collect();
        let sigma =
            crate::morphism::HypergraphMorphism::new(x2.clone(), x2.clone(), swap, eswap)
                .unwrap();
        let twisted_step = crate::morphism::compose(
            &sigma,
            &crate::morphism::compose(&w.iota_prime, &w.iota).unwrap(),
        )
        .unwrap();
        let twisted_g = TameFiltration::new(
            vec![4.0],
            vec![w.iota.source().clone(), x2],
            vec![twisted_step],
            MonoClass::SizePreserving,
        )
        .unwrap();
        let twisted = CounterexamplePair { g: twisted_g, ..pair };
        assert!(twisted.verify_one_interleaving().is_err());
    }

    #[test]
    fn mismatched_chain_is_rejected() {
        let flt = fxhub();
        let w = Witness {
            a: ElementSet::from([Element::edge("e0")]),
            iota: flt.steps()[1].clone(),
            iota_prime: flt.steps()[1].clone(),
        };
        assert_eq!(
            build_steady_counterexample(&w).unwrap_err(),
            BuildError::InvalidComposition
        );
    }

    #[test]
    fn empty_witness_set_is_rejected_for_ranging() {
        let mut w = hub_witness();
        w.a.clear();
        assert_eq!(build_ranging_counterexample(&w).unwrap_err(), BuildError::EmptyWitnessSet);
    }

    #[test]
    fn identity_witness_still_builds() {
        // A chain on which the feature never dies: construction is valid and
        // downstream compatibility holds.
        let flt = fxhub();
        let id = crate::morphism::HypergraphMorphism::identity(&flt.objects()[1]);
        let w = Witness {
            a: ElementSet::from([Element::edge("e0")]),
            iota: id.clone(),
            iota_prime: id,
        };
        let pair = build_steady_counterexample(&w).unwrap();
        pair.verify_one_interleaving().unwrap();
        let report = pair.probe_report(&Hub);
        assert!(!report.strict_violation());
    }
}
