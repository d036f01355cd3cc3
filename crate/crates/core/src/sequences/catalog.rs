//! Builtin rational sequences, and the file format that names them.

use serde::{Deserialize, Serialize};

use crate::exact::{IndexedSequence, Rational};

use super::SequenceError;

fn one() -> Rational {
    Rational::one()
}

/// A builtin generator, tagged by `"generator"`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "generator", rename_all = "kebab-case")]
pub enum BuiltinSequence {
    /// `2^{-s}`.
    Geometric,
    Constant {
        value: Rational,
    },
    /// `amplitude (-1)^s`.
    Alternating {
        #[serde(default = "one")]
        amplitude: Rational,
    },
}

/// Contents of a sequence file: a builtin, or `{"literal": [...]}` whose last
/// term repeats.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SequenceSpec {
    Builtin(BuiltinSequence),
    Literal { literal: Vec<Rational> },
}

impl SequenceSpec {
    pub fn build(&self) -> Result<IndexedSequence, SequenceError> {
        Ok(match self {
            SequenceSpec::Builtin(BuiltinSequence::Geometric) => IndexedSequence::geometric(),
            SequenceSpec::Builtin(BuiltinSequence::Constant { value }) => {
                IndexedSequence::constant(value.clone())
            }
            SequenceSpec::Builtin(BuiltinSequence::Alternating { amplitude }) => {
                let a = amplitude.clone();
                IndexedSequence::from_fn(move |s| if s % 2 == 0 { a.clone() } else { -&a })
            }
            SequenceSpec::Literal { literal } => {
                if literal.is_empty() {
                    return Err(SequenceError::EmptyLiteral);
                }
                IndexedSequence::literal(literal.clone())
            }
        })
    }
}
