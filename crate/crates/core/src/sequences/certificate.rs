use serde::{Deserialize, Serialize};

use crate::exact::{IndexedSequence, Rational};

use super::SequenceError;

/// A total non-decreasing map `n -> h(n)`, stored as a table whose last
/// entry repeats forever.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct HBound(Vec<u64>);

impl HBound {
    pub fn new(table: Vec<u64>) -> Result<Self, SequenceError> {
        if table.is_empty() {
            return Err(SequenceError::EmptyHBound);
        }
        if let Some(i) = table.windows(2).position(|w| w[1] < w[0]) {
            return Err(SequenceError::HBoundNotMonotone { index: i + 1 });
        }
        Ok(HBound(table))
    }

    pub fn constant(v: u64) -> Self {
        HBound(vec![v])
    }

    pub fn eval(&self, n: usize) -> u64 {
        self.0[n.min(self.0.len() - 1)]
    }
}

impl TryFrom<Vec<u64>> for HBound {
    type Error = SequenceError;
    fn try_from(v: Vec<u64>) -> Result<Self, Self::Error> {
        HBound::new(v)
    }
}

impl From<HBound> for Vec<u64> {
    fn from(h: HBound) -> Self {
        h.0
    }
}

/// A claim about how a rational sequence converges. Audits can refute it on
/// a prefix; nothing here proves it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum ConvergenceCertificate {
    /// `|x_n - x_{n+1}| <= 2^{-n}` for all `n`.
    Effective,
    Increasing,
    Decreasing,
    /// Total variation `sum |x_{n+1} - x_n| <= budget`.
    WeaklyEffective {
        budget: Rational,
    },
    /// At most `h(n)` non-overlapping index pairs jump by `>= 2^{-n}`.
    HBounded {
        h: HBound,
    },
    Plain,
}

impl ConvergenceCertificate {
    pub fn weakly_effective(budget: Rational) -> Result<Self, SequenceError> {
        if budget.is_negative() {
            return Err(SequenceError::NegativeBudget(budget));
        }
        Ok(ConvergenceCertificate::WeaklyEffective { budget })
    }

    /// The variation budget implied by this certificate, if any. An
    /// effective sequence moves by at most `sum 2^{-n} = 2`.
    pub fn variation_budget(&self) -> Option<Rational> {
        match self {
            ConvergenceCertificate::Effective => Some(Rational::from(2)),
            ConvergenceCertificate::WeaklyEffective { budget } => Some(budget.clone()),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<(), SequenceError> {
        match self {
            ConvergenceCertificate::WeaklyEffective { budget } if budget.is_negative() => {
                Err(SequenceError::NegativeBudget(budget.clone()))
            }
            _ => Ok(()),
        }
    }

    /// Certificate of the negated sequence.
    pub fn negated(&self) -> Self {
        match self {
            ConvergenceCertificate::Increasing => ConvergenceCertificate::Decreasing,
            ConvergenceCertificate::Decreasing => ConvergenceCertificate::Increasing,
            other => other.clone(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct CertifiedSequence {
    pub seq: IndexedSequence,
    pub cert: ConvergenceCertificate,
}

impl CertifiedSequence {
    pub fn new(seq: IndexedSequence, cert: ConvergenceCertificate) -> Result<Self, SequenceError> {
        cert.validate()?;
        Ok(CertifiedSequence { seq, cert })
    }

    pub fn negated(&self) -> CertifiedSequence {
        CertifiedSequence { seq: self.seq.map(|x| -x), cert: self.cert.negated() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hbound_validation() {
        assert!(HBound::new(vec![]).is_err());
        assert_eq!(HBound::new(vec![1, 3, 2]), Err(SequenceError::HBoundNotMonotone { index: 2 }));
        let h = HBound::new(vec![1, 2, 4]).unwrap();
        assert_eq!(h.eval(0), 1);
        assert_eq!(h.eval(2), 4);
        assert_eq!(h.eval(100), 4);
    }

    #[test]
    fn json_shapes() {
        let c = ConvergenceCertificate::weakly_effective(Rational::new(3, 2)).unwrap();
        let js = serde_json::to_string(&c).unwrap();
        assert_eq!(js, r#"{"variant":"weakly_effective","budget":[3,2]}"#);
        let back: ConvergenceCertificate = serde_json::from_str(&js).unwrap();
        assert_eq!(back, c);
        let e: ConvergenceCertificate = serde_json::from_str(r#"{"variant":"effective"}"#).unwrap();
        assert_eq!(e, ConvergenceCertificate::Effective);
        let h: ConvergenceCertificate =
            serde_json::from_str(r#"{"variant":"h_bounded","h":[0,1,1]}"#).unwrap();
        assert!(matches!(h, ConvergenceCertificate::HBounded { .. }));
        assert!(
            serde_json::from_str::<ConvergenceCertificate>(r#"{"variant":"h_bounded","h":[3,1]}"#).is_err()
        );
    }

    #[test]
    fn negative_budget_rejected() {
        assert!(ConvergenceCertificate::weakly_effective(Rational::from(-1)).is_err());
        let seq = IndexedSequence::constant(Rational::zero());
        let cert = ConvergenceCertificate::WeaklyEffective { budget: Rational::from(-1) };
        assert!(CertifiedSequence::new(seq, cert).is_err());
    }
}
