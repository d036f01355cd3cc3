use serde::{Deserialize, Serialize};

use crate::exact::{LazySequence, Rational};
use crate::polygon::Polygon;

/// How a polygon sequence claims to converge.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum SequenceMode {
    Increasing,
    Decreasing,
    /// `d(gen(n), lim) <= 2^{-n}`.
    UniformlyEffective,
    /// `sum_s d(gen(s+1), gen(s)) <= budget`.
    UniformWeaklyEffective {
        budget: Rational,
    },
    Pointwise,
}

impl SequenceMode {
    pub fn name(&self) -> &'static str {
        match self {
            SequenceMode::Increasing => "increasing",
            SequenceMode::Decreasing => "decreasing",
            SequenceMode::UniformlyEffective => "uniformly_effective",
            SequenceMode::UniformWeaklyEffective { .. } => "uniform_weakly_effective",
            SequenceMode::Pointwise => "pointwise",
        }
    }
}

#[derive(Clone, Debug)]
pub struct PolygonSequence {
    pub gen: LazySequence<Polygon>,
    pub mode: SequenceMode,
}

impl PolygonSequence {
    pub fn new(gen: LazySequence<Polygon>, mode: SequenceMode) -> Self {
        PolygonSequence { gen, mode }
    }

    pub fn from_fn(f: impl Fn(usize) -> Polygon + Send + Sync + 'static, mode: SequenceMode) -> Self {
        Self::new(LazySequence::from_fn(f), mode)
    }

    /// The given polygons, then the last one forever.
    pub fn literal(polygons: Vec<Polygon>, mode: SequenceMode) -> Self {
        Self::new(LazySequence::eventually_constant(polygons), mode)
    }

    pub fn at(&self, n: usize) -> Polygon {
        self.gen.at(n)
    }

    /// `sum_{s+1 < depth} d(gen(s+1), gen(s))`.
    pub fn sup_variation(&self, depth: usize) -> Rational {
        self.gen.with_prefix(depth, |p| p.windows(2).map(|w| w[1].sup_distance(&w[0])).sum())
    }

    /// Pointwise negation; swaps increasing and decreasing.
    pub fn negated(&self) -> PolygonSequence {
        let mode = match &self.mode {
            SequenceMode::Increasing => SequenceMode::Decreasing,
            SequenceMode::Decreasing => SequenceMode::Increasing,
            m => m.clone(),
        };
        PolygonSequence::new(self.gen.map(|p| p.neg()), mode)
    }

    /// Checks the mode on the first `depth` polygons and returns the
    /// smallest index `j` such that `gen(0..=j)` contradicts it.
    pub fn audit(&self, depth: usize) -> Option<usize> {
        self.gen.with_prefix(depth, |p| match &self.mode {
            SequenceMode::Increasing => p.windows(2).position(|w| !w[0].is_below(&w[1])).map(|i| i + 1),
            SequenceMode::Decreasing => p.windows(2).position(|w| !w[1].is_below(&w[0])).map(|i| i + 1),
            SequenceMode::UniformlyEffective => (1..p.len()).find(|&m| {
                (0..m).any(|n| {
                    p[n].sup_distance(&p[m]) > Rational::pow2(-(n as i64)) + Rational::pow2(-(m as i64))
                })
            }),
            SequenceMode::UniformWeaklyEffective { budget } => {
                let mut total = Rational::zero();
                for (i, w) in p.windows(2).enumerate() {
                    total += w[1].sup_distance(&w[0]);
                    if &total > budget {
                        return Some(i + 1);
                    }
                }
                None
            }
            SequenceMode::Pointwise => None,
        })
    }
}
