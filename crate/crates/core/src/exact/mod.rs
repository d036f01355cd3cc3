//! Exact rational arithmetic and lazily memoized sequences.

mod rational;
mod sequence;

pub use rational::{dotminus, ParseRationalError, Rational};
pub use sequence::{constant_name, IndexedSequence, LazySequence, Name};
