use serde::{Deserialize, Serialize};

use crate::exact::Rational;
use crate::polygon::Polygon;

fn one_stage() -> usize {
    1
}

/// The builtin adversaries. Each is an oblivious polygon-sequence
/// generator, except the follower, which replays the construction's own
/// history.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "adversary", rename_all = "kebab-case")]
pub enum AdversaryKind {
    /// The same polygon at every emission (default: zero).
    Constant {
        #[serde(default = "Polygon::zero")]
        polygon: Polygon,
    },
    /// At stage `s`, emits `f_0, ..., f_{s+1-delay}`.
    Follower {
        #[serde(default = "one_stage")]
        delay: usize,
    },
    /// Constant polygons alternating between `0` and `amplitude`, switching
    /// every `period` emissions.
    Oscillator {
        amplitude: Rational,
        #[serde(default = "one_stage")]
        period: usize,
    },
    /// Emission `i` is the constant `1 - 2^{-i}`: total variation tends to 1.
    BudgetBurner,
    /// The listed polygons, one per stage, then nothing new.
    Literal { polygons: Vec<Polygon> },
}

/// An adversary and the index of its witness `x_e = 2^{-e}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Adversary {
    pub e: usize,
    #[serde(flatten)]
    pub kind: AdversaryKind,
}

/// Adversary file entry; `e` defaults to the position in the list.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdversarySpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e: Option<usize>,
    #[serde(flatten)]
    pub kind: AdversaryKind,
}

impl AdversarySpec {
    pub fn resolve(specs: Vec<AdversarySpec>) -> Vec<Adversary> {
        specs.into_iter().enumerate().map(|(i, s)| Adversary { e: s.e.unwrap_or(i), kind: s.kind }).collect()
    }
}

impl Adversary {
    pub fn new(e: usize, kind: AdversaryKind) -> Self {
        Adversary { e, kind }
    }

    /// `x_e = 2^{-e}`.
    pub fn witness(&self) -> Rational {
        Rational::pow2(-(self.e as i64))
    }

    pub fn label(&self) -> String {
        match &self.kind {
            AdversaryKind::Constant { .. } => "constant".into(),
            AdversaryKind::Follower { delay } => format!("follower(delay={delay})"),
            AdversaryKind::Oscillator { amplitude, period } => {
                format!("oscillator(amplitude={amplitude}, period={period})")
            }
            AdversaryKind::BudgetBurner => "budget-burner".into(),
            AdversaryKind::Literal { polygons } => format!("literal({} polygons)", polygons.len()),
        }
    }

    /// Everything emitted by stage `s`, given the construction's history
    /// `f_0, ..., f_s`. Later stages extend earlier ones.
    pub fn emitted(&self, s: usize, history: &[Polygon]) -> Vec<Polygon> {
        match &self.kind {
            AdversaryKind::Constant { polygon } => vec![polygon.clone(); s + 1],
            AdversaryKind::Follower { delay } => {
                let n = (s + 2).saturating_sub((*delay).max(1)).min(history.len());
                history[..n].to_vec()
            }
            AdversaryKind::Oscillator { amplitude, period } => (0..=s)
                .map(|i| {
                    if (i / (*period).max(1)) % 2 == 0 {
                        Polygon::zero()
                    } else {
                        Polygon::constant(amplitude.clone())
                    }
                })
                .collect(),
            AdversaryKind::BudgetBurner => {
                (0..=s).map(|i| Polygon::constant(Rational::one() - Rational::pow2(-(i as i64)))).collect()
            }
            AdversaryKind::Literal { polygons } => polygons[..polygons.len().min(s + 1)].to_vec(),
        }
    }
}
