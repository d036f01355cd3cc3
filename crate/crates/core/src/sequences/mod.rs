//! Convergence certificates for rational sequences, their prefix audits,
//! and the sequence transforms the conversion theorems rely on.

mod algebra;
mod audit;
pub mod catalog;
mod certificate;
mod transforms;

pub use algebra::{certified_add, certified_mul};
pub use audit::{audit, audit_terms, AuditReport, Witness};
pub use certificate::{CertifiedSequence, ConvergenceCertificate, HBound};
pub use transforms::{
    divergence_closes, divergence_count, monotone_envelope, tail_drop, variation_prefix, variation_split,
    TailDrop,
};

use crate::exact::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SequenceError {
    #[error("variation budget must be non-negative, got {0}")]
    NegativeBudget(Rational),
    #[error("h-bound table is empty")]
    EmptyHBound,
    #[error("h-bound table decreases at index {index}")]
    HBoundNotMonotone { index: usize },
    #[error("operation needs a weakly effective (or effective) certificate")]
    NotWeaklyEffective,
    #[error("target budget must be positive, got {0}")]
    NonPositiveTarget(Rational),
    #[error("no admissible tail within audit depth {depth} meets the target budget")]
    BudgetNotReached { depth: usize },
    #[error("operand {operand} exceeds its declared bound at index {index}")]
    BoundViolation { operand: &'static str, index: usize },
    #[error("a literal sequence needs at least one term")]
    EmptyLiteral,
}
