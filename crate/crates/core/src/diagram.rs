//! Persistence diagrams: cornerpoints with multiplicities.
//!
//! Multiplicities come from the finite difference of grid values across a
//! critical value. Under the right-continuity convention the persistence
//! function takes its value at aᵢ on the whole interval [aᵢ, aᵢ₊₁), so the
//! neighborhood minimum of the multiplicity definition equals the finite
//! formula on adjacent sample points. Essential cornerpoints (death = +∞)
//! read the stable tail beyond the last critical value; filtrations whose
//! initial object already carries 𝓕-sets produce cornerpoints born at −∞.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::persistence::{Mode, PersistenceFunction};

/// A birth or death coordinate: a real, −∞ or +∞.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Level {
    NegInf,
    Finite(f64),
    PosInf,
}

impl Level {
    pub fn finite(self) -> Option<f64> {
        match self {
            Level::Finite(x) => Some(x),
            _ => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Level::Finite(_))
    }

    /// Total order; finite levels must not be NaN.
    pub fn total_cmp(&self, other: &Level) -> Ordering {
        match (self, other) {
            (Level::NegInf, Level::NegInf) | (Level::PosInf, Level::PosInf) => Ordering::Equal,
            (Level::NegInf, _) | (_, Level::PosInf) => Ordering::Less,
            (_, Level::NegInf) | (Level::PosInf, _) => Ordering::Greater,
            (Level::Finite(a), Level::Finite(b)) => {
                a.partial_cmp(b).expect("diagram levels are never NaN")
            }
        }
    }

    fn le_f64(&self, x: f64) -> bool {
        match self {
            Level::NegInf => true,
            Level::Finite(a) => *a <= x,
            Level::PosInf => false,
        }
    }

    fn gt_f64(&self, x: f64) -> bool {
        !self.le_f64(x)
    }
}

impl Eq for Level {}

impl PartialOrd for Level {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Level {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_cmp(other)
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Level::NegInf => f.write_str("-inf"),
            Level::PosInf => f.write_str("inf"),
            Level::Finite(x) => write!(f, "{x}"),
        }
    }
}

impl Serialize for Level {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Level::NegInf => s.serialize_str("-inf"),
            Level::PosInf => s.serialize_str("inf"),
            Level::Finite(x) => crate::jsonutil::Num(*x).serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for Level {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(x) => Ok(Level::Finite(x)),
            Raw::Str(s) => match s.as_str() {
                "inf" => Ok(Level::PosInf),
                "-inf" => Ok(Level::NegInf),
                other => Err(serde::de::Error::custom(format!("unknown level {other:?}"))),
            },
        }
    }
}

/// A cornerpoint with its multiplicity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagramPoint {
    pub birth: Level,
    pub death: Level,
    pub mult: u64,
}

/// A persistence diagram: the multiset of cornerpoints of a persistence
/// function, stored sorted by (birth, death) with merged multiplicities.
/// Diagonal points are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PersistenceDiagram {
    pub mode: Mode,
    pub points: Vec<DiagramPoint>,
}

impl PersistenceDiagram {
    pub fn new(mode: Mode, points: impl IntoIterator<Item = DiagramPoint>) -> Self {
        let mut merged: BTreeMap<(Level, Level), u64> = BTreeMap::new();
        for p in points {
            if p.mult > 0 {
                *merged.entry((p.birth, p.death)).or_default() += p.mult;
            }
        }
        PersistenceDiagram {
            mode,
            points: merged
                .into_iter()
                .map(|((birth, death), mult)| DiagramPoint { birth, death, mult })
                .collect(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Total number of points counted with multiplicity.
    pub fn total_multiplicity(&self) -> u64 {
        self.points.iter().map(|p| p.mult).sum()
    }

    /// Whether two diagrams carry exactly the same cornerpoint multiset,
    /// regardless of mode.
    pub fn same_points(&self, other: &PersistenceDiagram) -> bool {
        self.points == other.points
    }

    /// The cornerpoints present in exactly one of the two diagrams.
    pub fn symmetric_difference(&self, other: &PersistenceDiagram) -> Vec<DiagramPoint> {
        let mut counts: BTreeMap<(Level, Level), i64> = BTreeMap::new();
        for p in &self.points {
            *counts.entry((p.birth, p.death)).or_default() += p.mult as i64;
        }
        for p in &other.points {
            *counts.entry((p.birth, p.death)).or_default() -= p.mult as i64;
        }
        counts
            .into_iter()
            .filter(|(_, d)| *d != 0)
            .map(|((birth, death), d)| DiagramPoint { birth, death, mult: d.unsigned_abs() })
            .collect()
    }
}

/// Extracts the persistence diagram of a grid by the multiplicity formula.
///
/// For critical values aᵢ < aⱼ, with sᵢ the sample just past aᵢ and sᵢ₋₁ the
/// sample just before it:
/// μ = p(sᵢ ≤ sⱼ₋₁) − p(sᵢ₋₁ ≤ sⱼ₋₁) − p(sᵢ ≤ sⱼ) + p(sᵢ₋₁ ≤ sⱼ);
/// essential points use the tail column, and points born at −∞ difference the
/// initial row.
pub fn diagram(p: &PersistenceFunction) -> PersistenceDiagram {
    let n1 = p.interval_count();
    let n = n1 - 1;
    let crits = p.filtration().critical_values();
    let grid = |i: usize, j: usize| p.count_at_intervals(i, j) as i64;
    let mut points = Vec::new();

    // Finite cornerpoints (a_k, a_l), with interval indices k < l.
    for k in 1..=n {
        for l in k + 1..=n {
            let mult = grid(k, l - 1) - grid(k - 1, l - 1) - grid(k, l) + grid(k - 1, l);
            debug_assert!(mult >= 0, "superadditivity bounds the multiplicity below");
            if mult > 0 {
                points.push(DiagramPoint {
                    birth: Level::Finite(crits[k - 1]),
                    death: Level::Finite(crits[l - 1]),
                    mult: mult as u64,
                });
            }
        }
    }
    // Essential cornerpoints (a_k, +∞) against the stable tail.
    for k in 1..=n {
        let mult = grid(k, n) - grid(k - 1, n);
        debug_assert!(mult >= 0);
        if mult > 0 {
            points.push(DiagramPoint {
                birth: Level::Finite(crits[k - 1]),
                death: Level::PosInf,
                mult: mult as u64,
            });
        }
    }
    // Cornerpoints born at −∞, for filtrations whose initial object already
    // carries 𝓕-sets.
    for l in 1..=n {
        let mult = grid(0, l - 1) - grid(0, l);
        debug_assert!(mult >= 0);
        if mult > 0 {
            points.push(DiagramPoint {
                birth: Level::NegInf,
                death: Level::Finite(crits[l - 1]),
                mult: mult as u64,
            });
        }
    }
    let everlasting = grid(0, n);
    if everlasting > 0 {
        points.push(DiagramPoint {
            birth: Level::NegInf,
            death: Level::PosInf,
            mult: everlasting as u64,
        });
    }
    PersistenceDiagram::new(p.mode(), points)
}

/// Checks the representation identity p(ū ≤ v̄) = Σ_{birth ≤ ū, death > v̄} μ
/// at every pair of grid sample points, exactly.
pub fn representation_identity_check(p: &PersistenceFunction, d: &PersistenceDiagram) -> bool {
    let samples = p.samples();
    for (i, u) in samples.iter().enumerate() {
        for v in &samples[i..] {
            let direct = p.value_at(*u, *v).expect("u ≤ v");
            let quadrant: u64 = d
                .points
                .iter()
                .filter(|pt| pt.birth.le_f64(*u) && pt.death.gt_f64(*v))
                .map(|pt| pt.mult)
                .sum();
            if direct != quadrant {
                return false;
            }
        }
    }
    true
}

/// Renders a diagram as a minimal SVG scatter plot: axes, the diagonal, one
/// labeled point per cornerpoint, and a dashed horizontal line for deaths at
/// +∞. Output is deterministic.
pub fn render_svg(d: &PersistenceDiagram, title: &str) -> String {
    let finite: Vec<f64> = d
        .points
        .iter()
        .flat_map(|p| [p.birth, p.death])
        .filter_map(Level::finite)
        .collect();
    let lo = finite.iter().cloned().fold(0.0_f64, f64::min);
    let hi = finite.iter().cloned().fold(1.0_f64, f64::max);
    let span = (hi - lo).max(1.0);
    let (w, h, margin) = (420.0, 420.0, 50.0);
    let scale = (w - 2.0 * margin) / (span * 1.2);
    let x = |value: f64| margin + (value - lo + 0.1 * span) * scale;
    let y = |value: f64| h - margin - (value - lo + 0.1 * span) * scale;
    let inf_y = y(lo + 1.1 * span);

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n"
    ));
    svg.push_str(&format!(
        "  <text x=\"{}\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">{}</text>\n",
        w / 2.0,
        title
    ));
    // axes
    svg.push_str(&format!(
        "  <line x1=\"{m}\" y1=\"{ya}\" x2=\"{xb}\" y2=\"{ya}\" stroke=\"black\"/>\n  <line x1=\"{m}\" y1=\"{ya}\" x2=\"{m}\" y2=\"{yt}\" stroke=\"black\"/>\n",
        m = margin,
        ya = h - margin,
        xb = w - margin,
        yt = margin
    ));
    // diagonal
    svg.push_str(&format!(
        "  <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"gray\"/>\n",
        x(lo - 0.1 * span),
        y(lo - 0.1 * span),
        x(lo + 1.1 * span),
        y(lo + 1.1 * span)
    ));
    if d.points.iter().any(|p| p.death == Level::PosInf) {
        svg.push_str(&format!(
            "  <line x1=\"{m}\" y1=\"{iy}\" x2=\"{xb}\" y2=\"{iy}\" stroke=\"gray\" stroke-dasharray=\"4\"/>\n  <text x=\"{xl}\" y=\"{ty}\" font-size=\"12\">∞</text>\n",
            m = margin,
            iy = inf_y,
            xb = w - margin,
            xl = w - margin + 6.0,
            ty = inf_y + 4.0
        ));
    }
    for p in &d.points {
        let px = match p.birth {
            Level::NegInf => x(lo - 0.1 * span),
            Level::Finite(b) => x(b),
            Level::PosInf => unreachable!("births are never +∞"),
        };
        let py = match p.death {
            Level::PosInf => inf_y,
            Level::Finite(dth) => y(dth),
            Level::NegInf => unreachable!("deaths are never −∞"),
        };
        svg.push_str(&format!(
            "  <circle cx=\"{px}\" cy=\"{py}\" r=\"4\" fill=\"steelblue\"/>\n  <text x=\"{px}\" y=\"{ty}\" text-anchor=\"middle\" font-size=\"11\">{mult}</text>\n",
            ty = py - 8.0,
            mult = p.mult
        ));
    }
    svg.push_str("</svg>\n");
    svg
}
