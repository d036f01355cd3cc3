use serde::{Deserialize, Serialize};

use crate::exact::Rational;

use super::transforms::divergence_closes;
use super::{CertifiedSequence, ConvergenceCertificate, HBound};

/// What a failed audit saw.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// `|x_{index} - x_{index-1}|` exceeded `2^{-(index-1)}`.
    Step { gap: Rational, allowed: Rational },
    /// The sequence moved the wrong way.
    Monotone { previous: Rational, current: Rational },
    /// Prefix variation went over budget.
    Variation { total: Rational, budget: Rational },
    /// Too many non-overlapping jumps of size `>= 2^{-n}`.
    Divergence { n: usize, count: usize, allowed: u64 },
}

/// Result of checking a certificate on a finite prefix.
///
/// `violation_index` is the smallest `j` such that the prefix `[0, j]`
/// already contradicts the certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditReport {
    pub pass: bool,
    pub violation_index: Option<usize>,
    pub witness: Option<Witness>,
}

impl AuditReport {
    pub fn passed() -> Self {
        AuditReport { pass: true, violation_index: None, witness: None }
    }

    fn failed(index: usize, witness: Witness) -> Self {
        AuditReport { pass: false, violation_index: Some(index), witness: Some(witness) }
    }
}

/// Checks `cs.cert` against `cs.seq` on the first `depth` terms. A pass
/// only means no counterexample was found; a depth of 0 passes vacuously.
pub fn audit(cs: &CertifiedSequence, depth: usize) -> AuditReport {
    cs.seq.with_prefix(depth, |terms| audit_terms(terms, &cs.cert))
}

pub fn audit_terms(terms: &[Rational], cert: &ConvergenceCertificate) -> AuditReport {
    match cert {
        ConvergenceCertificate::Effective => audit_effective(terms),
        ConvergenceCertificate::Increasing => audit_monotone(terms, true),
        ConvergenceCertificate::Decreasing => audit_monotone(terms, false),
        ConvergenceCertificate::WeaklyEffective { budget } => audit_variation(terms, budget),
        ConvergenceCertificate::HBounded { h } => audit_h_bounded(terms, h),
        ConvergenceCertificate::Plain => AuditReport::passed(),
    }
}

fn audit_effective(terms: &[Rational]) -> AuditReport {
    for (n, w) in terms.windows(2).enumerate() {
        let gap = (&w[1] - &w[0]).abs();
        let allowed = Rational::pow2(-(n as i64));
        if gap > allowed {
            return AuditReport::failed(n + 1, Witness::Step { gap, allowed });
        }
    }
    AuditReport::passed()
}

fn audit_monotone(terms: &[Rational], increasing: bool) -> AuditReport {
    for (n, w) in terms.windows(2).enumerate() {
        let bad = if increasing { w[1] < w[0] } else { w[1] > w[0] };
        if bad {
            return AuditReport::failed(
                n + 1,
                Witness::Monotone { previous: w[0].clone(), current: w[1].clone() },
            );
        }
    }
    AuditReport::passed()
}

fn audit_variation(terms: &[Rational], budget: &Rational) -> AuditReport {
    let mut total = Rational::zero();
    for (n, w) in terms.windows(2).enumerate() {
        total += (&w[1] - &w[0]).abs();
        if &total > budget {
            return AuditReport::failed(n + 1, Witness::Variation { total, budget: budget.clone() });
        }
    }
    AuditReport::passed()
}

/// Smallest positive gap between distinct values, if any two differ.
fn min_positive_gap(terms: &[Rational]) -> Option<Rational> {
    let mut sorted: Vec<&Rational> = terms.iter().collect();
    sorted.sort();
    sorted.dedup();
    sorted.windows(2).map(|w| w[1] - w[0]).min()
}

fn audit_h_bounded(terms: &[Rational], h: &HBound) -> AuditReport {
    let Some(gap) = min_positive_gap(terms) else {
        return AuditReport::passed();
    };
    // Past level `top` every positive jump already counts, and h only grows.
    let top = (-gap.ceil_log2()).max(0) as usize + 1;
    let mut worst: Option<(usize, Witness)> = None;
    for n in 0..=top {
        let allowed = h.eval(n);
        let closes = divergence_closes(terms, &Rational::pow2(-(n as i64)));
        if closes.len() as u64 > allowed {
            // the greedy scan is online, so its count on [0, j] is the number of closes <= j
            let j = closes[allowed as usize];
            if worst.as_ref().is_none_or(|(w, _)| j < *w) {
                worst = Some((j, Witness::Divergence { n, count: closes.len(), allowed }));
            }
        }
    }
    match worst {
        Some((j, w)) => AuditReport::failed(j, w),
        None => AuditReport::passed(),
    }
}
