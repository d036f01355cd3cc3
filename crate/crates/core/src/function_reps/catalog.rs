//! Builtin polygon sequences, and the file format that names them.

use serde::{Deserialize, Serialize};

use crate::exact::Rational;
use crate::polygon::Polygon;

use super::{PolygonSequence, SequenceMode};

fn growth(s: usize) -> Rational {
    Rational::one() - Rational::pow2(-(s as i64))
}

pub fn constant(pg: Polygon, mode: SequenceMode) -> PolygonSequence {
    PolygonSequence::literal(vec![pg], mode)
}

/// `gen(s) = c (1 - 2^{-s}) x`, increasing to `c x` for `c >= 0`, with
/// `d(gen(s+1), gen(s)) = |c| 2^{-(s+1)}`.
pub fn scaled_identity(c: Rational) -> PolygonSequence {
    PolygonSequence::from_fn(move |s| Polygon::identity().scale(&(&c * growth(s))), SequenceMode::Increasing)
}

/// Tent on `[0, 1]` peaking at `1/2` with height `c (1 - 2^{-s})`.
pub fn tent_growth(c: Rational) -> PolygonSequence {
    PolygonSequence::from_fn(
        move |s| Polygon::tent(Rational::zero(), Rational::new(1, 2), Rational::one(), &c * growth(s)),
        SequenceMode::Increasing,
    )
}

fn one() -> Rational {
    Rational::one()
}

/// A builtin generator, tagged by `"generator"`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "generator", rename_all = "kebab-case")]
pub enum BuiltinPolySeq {
    /// One polygon forever (default: zero), declared increasing.
    Constant {
        #[serde(default = "Polygon::zero")]
        polygon: Polygon,
    },
    ScaledIdentity {
        #[serde(default = "one")]
        c: Rational,
    },
    TentGrowth {
        #[serde(default = "one")]
        c: Rational,
    },
}

/// Polygons listed in the file, the last one repeating.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiteralPolySeq {
    #[serde(flatten)]
    pub mode: SequenceMode,
    pub polygons: Vec<Polygon>,
}

/// Contents of a polygon-sequence file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PolySeqSpec {
    Builtin(BuiltinPolySeq),
    Literal(LiteralPolySeq),
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SpecError {
    #[error("a literal polygon sequence needs at least one polygon")]
    EmptyLiteral,
}

impl PolySeqSpec {
    pub fn build(&self) -> Result<PolygonSequence, SpecError> {
        Ok(match self {
            PolySeqSpec::Builtin(BuiltinPolySeq::Constant { polygon }) => {
                constant(polygon.clone(), SequenceMode::Increasing)
            }
            PolySeqSpec::Builtin(BuiltinPolySeq::ScaledIdentity { c }) => scaled_identity(c.clone()),
            PolySeqSpec::Builtin(BuiltinPolySeq::TentGrowth { c }) => tent_growth(c.clone()),
            PolySeqSpec::Literal(l) => {
                if l.polygons.is_empty() {
                    return Err(SpecError::EmptyLiteral);
                }
                PolygonSequence::literal(l.polygons.clone(), l.mode.clone())
            }
        })
    }
}
