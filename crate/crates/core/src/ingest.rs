//! Ingestion of play-style incidence data.
//!
//! Input is a flat CSV with one row per scene: `index,charA;charB;charC`,
//! UTF-8, LF line endings, scene indices contiguous from 0. Character names
//! are taken verbatim (trimmed, case-sensitive).
//!
//! Two chronological filtrations are derived. In the *scene* filtration the
//! vertices are characters and the hyperedges are scenes: scene i appears at
//! t = i with its full cast, and a character appears with the first scene
//! they are in, so every step preserves edge sizes. In the *character*
//! filtration the roles are dualized: vertices are scenes, hyperedges are
//! characters, and a character's edge grows as new scenes arrive, so steps
//! reflect membership but do not preserve sizes.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::filtration::{FiltrationError, TameFiltration, WeightedHypergraph};
use crate::hypergraph::{Element, Hypergraph};
use crate::morphism::{HypergraphMorphism, MonoClass};

/// An ordered list of scenes, each a nonempty set of character names.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlayRecord {
    pub title: String,
    pub scenes: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Error, PartialEq)]
pub enum PlayParseError {
    #[error("line {line}: malformed row, expected `index,charA;charB`")]
    MalformedRow { line: usize },
    #[error("line {line}: empty character list")]
    EmptyScene { line: usize },
    #[error("line {line}: non-contiguous scene indices (expected {expected}, got {got})")]
    NonContiguousIndex { line: usize, expected: usize, got: usize },
    #[error("play has no scenes")]
    Empty,
    #[error("scene filtration construction failed: {0}")]
    Filtration(#[from] FiltrationError),
}

/// Parses the documented CSV format into a [`PlayRecord`].
pub fn parse_play(input: &str, title: impl Into<String>) -> Result<PlayRecord, PlayParseError> {
    let mut scenes = Vec::new();
    for (lineno, raw) in input.lines().enumerate() {
        let line = lineno + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            continue;
        }
        let (index, cast) =
            trimmed.split_once(',').ok_or(PlayParseError::MalformedRow { line })?;
        let got: usize = index
            .trim()
            .parse()
            .map_err(|_| PlayParseError::MalformedRow { line })?;
        if got != scenes.len() {
            return Err(PlayParseError::NonContiguousIndex {
                line,
                expected: scenes.len(),
                got,
            });
        }
        let mut characters: Vec<String> =
            cast.split(';').map(str::trim).filter(|c| !c.is_empty()).map(str::to_string).collect();
        characters.sort();
        characters.dedup();
        if characters.is_empty() {
            return Err(PlayParseError::EmptyScene { line });
        }
        scenes.push(characters);
    }
    if scenes.is_empty() {
        return Err(PlayParseError::Empty);
    }
    Ok(PlayRecord { title: title.into(), scenes })
}

impl PlayRecord {
    /// First scene index of each character.
    fn first_appearance(&self) -> BTreeMap<&str, usize> {
        let mut first = BTreeMap::new();
        for (i, scene) in self.scenes.iter().enumerate() {
            for c in scene {
                first.entry(c.as_str()).or_insert(i);
            }
        }
        first
    }

    /// The final scene-hypergraph: characters as vertices, scenes as edges
    /// named by their index.
    pub fn scene_hypergraph(&self) -> Hypergraph {
        Hypergraph::new(
            self.first_appearance().into_keys().map(str::to_string),
            self.scenes
                .iter()
                .enumerate()
                .map(|(i, cast)| (i.to_string(), cast.clone())),
        )
    }

    /// The chronological scene filtration, a sublevel filtration in the
    /// size-preserving class: scene i weighs i, a character weighs the index
    /// of their first scene.
    pub fn scene_filtration(&self) -> Result<TameFiltration, PlayParseError> {
        let mut weights: BTreeMap<Element, f64> = BTreeMap::new();
        for (c, i) in self.first_appearance() {
            weights.insert(Element::vertex(c), i as f64);
        }
        for i in 0..self.scenes.len() {
            weights.insert(Element::edge(i.to_string()), i as f64);
        }
        let w = WeightedHypergraph::new(self.scene_hypergraph(), weights)?;
        Ok(w.sublevel_filtration(MonoClass::SizePreserving)?)
    }

    /// The chronological character filtration: the dual incidence under the
    /// same chronological weights, built explicitly because character edges
    /// grow along the way. Every step is verified membership-reflecting.
    pub fn character_filtration(&self) -> Result<TameFiltration, PlayParseError> {
        let n = self.scenes.len();
        let first = self.first_appearance();
        let mut objects = vec![Hypergraph::empty()];
        for t in 0..n {
            let vertices: Vec<String> = (0..=t).map(|i| i.to_string()).collect();
            let edges = first
                .iter()
                .filter(|(_, f)| **f <= t)
                .map(|(c, _)| {
                    (
                        c.to_string(),
                        (0..=t)
                            .filter(|i| self.scenes[*i].iter().any(|x| x == c))
                            .map(|i| i.to_string())
                            .collect::<Vec<_>>(),
                    )
                });
            objects.push(Hypergraph::new(vertices, edges));
        }
        let steps = objects
            .windows(2)
            .map(|w| HypergraphMorphism::inclusion(w[0].clone(), w[1].clone()))
            .collect::<Result<Vec<_>, _>>()
            .map_err(FiltrationError::InvalidStep)?;
        Ok(TameFiltration::new(
            (0..n).map(|i| i as f64).collect(),
            objects,
            steps,
            MonoClass::MembershipReflecting,
        )?)
    }
}
