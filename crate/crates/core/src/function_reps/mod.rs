//! Continuous functions on `[0, 1]` as polygon sequences and as stream
//! transformers, with the conversions between the two.

pub mod catalog;
pub mod cover;
mod lsc;
mod machine;
mod polyseq;
mod uwc;
mod wc;

use serde::{Deserialize, Serialize};

use crate::exact::Rational;
use crate::sequences::{CertifiedSequence, ConvergenceCertificate};

pub use lsc::{
    lsc_to_machine, machine_to_lsc, machine_to_lsc_stages, machine_to_lsc_with, usc_to_machine, LOOKAHEAD,
};
pub use machine::{Machine, StreamTransformer};
pub use polyseq::{PolygonSequence, SequenceMode};
pub use uwc::{machine_to_uwc_polyseq, machine_to_uwc_stage, uwc_input_budget, uwc_polyseq_to_machine};
pub use wc::{wc_from_difference, wc_machine_to_difference};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FunctionError {
    #[error("expected a polygon sequence of mode {expected}, got {found}")]
    WrongMode { expected: &'static str, found: &'static str },
    #[error("dyadic probes up to level {grid_limit} do not cover [0, 1] for output {output}")]
    CoverNotFound { output: usize, grid_limit: u32 },
    #[error("audited sup-distance variation {total} exceeds the budget {budget}")]
    BudgetViolation { total: Box<Rational>, budget: Box<Rational> },
}

/// Function classes, ordered by inclusion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FunctionClassTag {
    #[serde(rename = "computable")]
    Computable,
    #[serde(rename = "LSC")]
    Lsc,
    #[serde(rename = "USC")]
    Usc,
    #[serde(rename = "SC")]
    Sc,
    #[serde(rename = "WC")]
    Wc,
    #[serde(rename = "UWC")]
    Uwc,
}

impl FunctionClassTag {
    pub fn name(self) -> &'static str {
        match self {
            FunctionClassTag::Computable => "computable",
            FunctionClassTag::Lsc => "LSC",
            FunctionClassTag::Usc => "USC",
            FunctionClassTag::Sc => "SC",
            FunctionClassTag::Wc => "WC",
            FunctionClassTag::Uwc => "UWC",
        }
    }

    /// Inclusion of classes (reflexive).
    pub fn is_subclass_of(self, other: FunctionClassTag) -> bool {
        use FunctionClassTag::*;
        self == other
            || matches!((self, other), (Computable, _) | (Lsc | Usc, Sc) | (Lsc | Usc | Sc | Uwc, Wc))
    }
}

/// Class of the constant function `x -> lim c`, read off the certificate.
/// Plain and h-bounded certificates name no function class.
pub fn classify_constant(c: &CertifiedSequence) -> Option<FunctionClassTag> {
    match c.cert {
        ConvergenceCertificate::Effective => Some(FunctionClassTag::Computable),
        ConvergenceCertificate::Increasing => Some(FunctionClassTag::Lsc),
        ConvergenceCertificate::Decreasing => Some(FunctionClassTag::Usc),
        ConvergenceCertificate::WeaklyEffective { .. } => Some(FunctionClassTag::Wc),
        ConvergenceCertificate::HBounded { .. } | ConvergenceCertificate::Plain => None,
    }
}

/// `m_n = max_x gen(n)(x)`, increasing to `max f`.
pub fn max_of_lsc(ps: &PolygonSequence) -> Result<CertifiedSequence, FunctionError> {
    if ps.mode != SequenceMode::Increasing {
        return Err(FunctionError::WrongMode { expected: "increasing", found: ps.mode.name() });
    }
    Ok(CertifiedSequence { seq: ps.gen.map(|p| p.max_value().1), cert: ConvergenceCertificate::Increasing })
}
