use crate::exact::{IndexedSequence, Rational};

use super::{CertifiedSequence, ConvergenceCertificate as Cert, SequenceError};

/// Pointwise sum with the certificate the algebra can justify.
///
/// | a            | b           | result                                   |
/// |--------------|-------------|------------------------------------------|
/// | Increasing   | Increasing  | Increasing                               |
/// | Decreasing   | Decreasing  | Decreasing                               |
/// | Increasing   | Effective   | Increasing, on `a + b - 2^{-s+1}`        |
/// | Decreasing   | Effective   | Decreasing, on `a + b + 2^{-s+1}`        |
/// | budgeted     | budgeted    | WeaklyEffective(c1 + c2)                 |
/// | anything else               || Plain                                    |
///
/// "Budgeted" is WeaklyEffective(c) or Effective, which counts as budget 2.
pub fn certified_add(a: &CertifiedSequence, b: &CertifiedSequence) -> CertifiedSequence {
    use Cert::*;
    let raw = || IndexedSequence::pointwise(&a.seq, &b.seq, |x, y| x + y);
    let slack = |sign: i64| {
        let (a, b) = (a.seq.clone(), b.seq.clone());
        IndexedSequence::from_fn(move |s| {
            let shift = Rational::pow2(1 - s as i64);
            let sum = a.at(s) + b.at(s);
            if sign < 0 {
                sum - shift
            } else {
                sum + shift
            }
        })
    };
    let (seq, cert) = match (&a.cert, &b.cert) {
        (Increasing, Increasing) => (raw(), Increasing),
        (Decreasing, Decreasing) => (raw(), Decreasing),
        (Increasing, Effective) | (Effective, Increasing) => (slack(-1), Increasing),
        (Decreasing, Effective) | (Effective, Decreasing) => (slack(1), Decreasing),
        (ca, cb) => match (ca.variation_budget(), cb.variation_budget()) {
            (Some(x), Some(y)) => (raw(), WeaklyEffective { budget: x + y }),
            _ => (raw(), Plain),
        },
    };
    CertifiedSequence { seq, cert }
}

/// Pointwise product of two budgeted sequences with `|a(s)| <= bound_a`
/// and `|b(s)| <= bound_b`. The bounds are checked on the first
/// `audit_depth` terms.
///
/// Budget: `bound_b * c_a + bound_a * c_b`, from
/// `|a'b' - ab| <= |b'||a' - a| + |a||b' - b|`.
pub fn certified_mul(
    a: &CertifiedSequence,
    b: &CertifiedSequence,
    bound_a: &Rational,
    bound_b: &Rational,
    audit_depth: usize,
) -> Result<CertifiedSequence, SequenceError> {
    let ca = a.cert.variation_budget().ok_or(SequenceError::NotWeaklyEffective)?;
    let cb = b.cert.variation_budget().ok_or(SequenceError::NotWeaklyEffective)?;
    for (which, cs, bound) in [("a", a, bound_a), ("b", b, bound_b)] {
        let bad = cs.seq.with_prefix(audit_depth, |t| t.iter().position(|x| x.abs() > *bound));
        if let Some(index) = bad {
            return Err(SequenceError::BoundViolation { operand: which, index });
        }
    }
    let budget = bound_b * &ca + bound_a * &cb;
    Ok(CertifiedSequence {
        seq: IndexedSequence::pointwise(&a.seq, &b.seq, |x, y| x * y),
        cert: Cert::weakly_effective(budget)?,
    })
}
