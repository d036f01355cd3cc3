use std::ops::Sub;

use crate::exact::{dotminus, IndexedSequence, Rational};

use super::{CertifiedSequence, ConvergenceCertificate, SequenceError};

/// `sum_{s=0}^{depth-2} |seq(s+1) - seq(s)|`.
pub fn variation_prefix(seq: &IndexedSequence, depth: usize) -> Rational {
    seq.with_prefix(depth, variation_of)
}

pub(crate) fn variation_of(terms: &[Rational]) -> Rational {
    terms.windows(2).map(|w| (&w[1] - &w[0]).abs()).sum()
}

/// Running maximum: `out(s) = max_{t <= s} seq(t)`.
pub fn monotone_envelope(seq: &IndexedSequence) -> IndexedSequence {
    let src = seq.clone();
    IndexedSequence::scan(move |s, prev| {
        let x = src.at(s);
        match prev.last() {
            Some(m) if *m > x => m.clone(),
            _ => x,
        }
    })
}

/// Splits `u` into its rising and falling parts:
///
/// `y(s) = u(0) + sum_{i<=s} (u(i+1) ∸ u(i))`, `z(s) = sum_{i<=s} (u(i) ∸ u(i+1))`,
///
/// so that `y(s) - z(s) = u(s+1)` and both are non-decreasing.
pub fn variation_split(seq: &IndexedSequence) -> (IndexedSequence, IndexedSequence) {
    let up_src = seq.clone();
    let rising = IndexedSequence::scan(move |s, prev| {
        let base = match prev.last() {
            Some(y) => y.clone(),
            None => up_src.at(0),
        };
        base + dotminus(&up_src.at(s + 1), &up_src.at(s))
    });
    let down_src = seq.clone();
    let falling = IndexedSequence::scan(move |s, prev| {
        let base = prev.last().cloned().unwrap_or_else(Rational::zero);
        base + dotminus(&down_src.at(s), &down_src.at(s + 1))
    });
    (rising, falling)
}

/// Largest number of pairwise disjoint index pairs `i < j < depth` (closed
/// intervals `[i, j]` do not share indices) with `|seq(i) - seq(j)| >= 2^{-n}`.
///
/// Greedy earliest-finishing scan: keep the min and max since the last
/// closed pair and close at the first `j` that jumps far enough from either.
pub fn divergence_count(seq: &IndexedSequence, n: usize, depth: usize) -> usize {
    seq.with_prefix(depth, |terms| divergence_count_of(terms, &Rational::pow2(-(n as i64))))
}

pub(crate) fn divergence_count_of(terms: &[Rational], threshold: &Rational) -> usize {
    divergence_closes(terms, threshold).len()
}

/// Indices `j` at which the greedy scan closes a pair, for terms in any
/// ordered group (scaled integers work as well as rationals). The scan is
/// online: its count on `terms[..=j]` is the number of closes `<= j`.
pub fn divergence_closes<T>(terms: &[T], threshold: &T) -> Vec<usize>
where
    T: Ord + Clone,
    for<'a> &'a T: Sub<&'a T, Output = T>,
{
    let mut closes = Vec::new();
    let mut window: Option<(T, T)> = None;
    for (j, x) in terms.iter().enumerate() {
        match &mut window {
            None => window = Some((x.clone(), x.clone())),
            Some((lo, hi)) => {
                if &(x - &*lo) >= threshold || &(&*hi - x) >= threshold {
                    closes.push(j);
                    window = None;
                } else if x < lo {
                    *lo = x.clone();
                } else if x > hi {
                    *hi = x.clone();
                }
            }
        }
    }
    closes
}

#[derive(Clone, Debug)]
pub struct TailDrop {
    /// Number of initial terms removed.
    pub dropped: usize,
    /// Variation of the kept window up to the audit depth.
    pub remaining_variation: Rational,
    pub sequence: CertifiedSequence,
}

/// Drops the fewest initial terms so that the rest of the audited prefix
/// has variation at most `target_budget`.
///
/// Only drops that keep at least half of the audited prefix are considered;
/// otherwise a one-element window would always qualify.
pub fn tail_drop(
    cs: &CertifiedSequence,
    target_budget: &Rational,
    audit_depth: usize,
) -> Result<TailDrop, SequenceError> {
    if !matches!(cs.cert, ConvergenceCertificate::WeaklyEffective { .. }) {
        return Err(SequenceError::NotWeaklyEffective);
    }
    if !target_budget.is_positive() {
        return Err(SequenceError::NonPositiveTarget(target_budget.clone()));
    }
    let found = cs.seq.with_prefix(audit_depth, |terms| {
        // suffix_var[k] = variation of terms[k..]
        let mut suffix_var = vec![Rational::zero(); terms.len() + 1];
        for k in (0..terms.len().saturating_sub(1)).rev() {
            suffix_var[k] = &suffix_var[k + 1] + (&terms[k + 1] - &terms[k]).abs();
        }
        (0..=audit_depth / 2).find(|&k| suffix_var[k] <= *target_budget).map(|k| (k, suffix_var[k].clone()))
    });
    let (dropped, remaining_variation) =
        found.ok_or(SequenceError::BudgetNotReached { depth: audit_depth })?;
    Ok(TailDrop {
        dropped,
        remaining_variation,
        sequence: CertifiedSequence {
            seq: cs.seq.shifted(dropped),
            cert: ConvergenceCertificate::WeaklyEffective { budget: target_budget.clone() },
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn lit(v: &[(i64, i64)]) -> IndexedSequence {
        IndexedSequence::literal(v.iter().map(|&(n, d)| r(n, d)).collect())
    }

    #[test]
    fn variation_examples() {
        assert_eq!(variation_prefix(&lit(&[(1, 1), (0, 1), (1, 1), (0, 1)]), 4), r(3, 1));
        assert_eq!(variation_prefix(&IndexedSequence::constant(r(2, 3)), 17), r(0, 1));
        // 1/2 + 1/4 + 1/8
        assert_eq!(variation_prefix(&lit(&[(0, 1), (1, 2), (3, 4), (7, 8)]), 4), r(7, 8));
        assert_eq!(variation_prefix(&lit(&[(5, 1)]), 1), r(0, 1));
    }

    #[test]
    fn envelope_examples() {
        let env = monotone_envelope(&lit(&[(3, 1), (1, 1), (4, 1), (1, 1), (5, 1)]));
        assert_eq!(env.prefix(5), [3, 3, 4, 4, 5].iter().map(|&v| r(v, 1)).collect::<Vec<_>>());
        let inc = lit(&[(0, 1), (1, 3), (1, 2), (2, 1)]);
        assert_eq!(monotone_envelope(&inc).prefix(6), inc.prefix(6));
        let env = monotone_envelope(&lit(&[(0, 1), (-1, 1), (1, 2)]));
        assert_eq!(env.prefix(3), vec![r(0, 1), r(0, 1), r(1, 2)]);
    }

    #[test]
    fn split_examples() {
        let (y, z) = variation_split(&lit(&[(1, 1), (0, 1), (1, 1)]));
        assert_eq!(y.prefix(2), vec![r(1, 1), r(2, 1)]);
        assert_eq!(z.prefix(2), vec![r(1, 1), r(1, 1)]);

        let (y, z) = variation_split(&IndexedSequence::constant(r(3, 4)));
        assert_eq!(y.prefix(4), vec![r(3, 4); 4]);
        assert_eq!(z.prefix(4), vec![r(0, 1); 4]);

        let inc = IndexedSequence::from_fn(|s| Rational::one() - Rational::pow2(-(s as i64)));
        let (y, z) = variation_split(&inc);
        assert!(z.prefix(10).iter().all(Rational::is_zero));
        assert_eq!(y.prefix(10), inc.shifted(1).prefix(10));
    }

    #[test]
    fn divergence_examples() {
        let alt = lit(&[(0, 1), (1, 1), (0, 1), (1, 1), (0, 1)]);
        assert_eq!(divergence_count(&alt, 0, 5), 2);
        assert_eq!(divergence_count(&IndexedSequence::constant(r(1, 1)), 3, 20), 0);
        assert_eq!(divergence_count(&lit(&[(0, 1), (1, 4)]), 1, 2), 0);
        // the pair need not start at the current anchor
        assert_eq!(divergence_count(&lit(&[(1, 2), (0, 1), (1, 1)]), 0, 3), 1);
    }

    #[test]
    fn tail_drop_examples() {
        let we = |seq| CertifiedSequence {
            seq,
            cert: ConvergenceCertificate::WeaklyEffective { budget: r(2, 1) },
        };
        let cs = we(lit(&[(1, 1), (0, 1), (1, 2)]));
        let td = tail_drop(&cs, &r(1, 2), 10).unwrap();
        assert_eq!(td.dropped, 1);
        assert_eq!(td.remaining_variation, r(1, 2));
        assert_eq!(td.sequence.seq.prefix(3), vec![r(0, 1), r(1, 2), r(1, 2)]);

        let td = tail_drop(&we(IndexedSequence::constant(r(1, 3))), &r(1, 100), 10).unwrap();
        assert_eq!(td.dropped, 0);

        let alt = we(IndexedSequence::from_fn(|s| Rational::from((s % 2) as i64)));
        assert_eq!(tail_drop(&alt, &r(1, 2), 10).unwrap_err(), SequenceError::BudgetNotReached { depth: 10 });
    }

    #[test]
    fn tail_drop_preconditions() {
        let plain = CertifiedSequence {
            seq: IndexedSequence::constant(r(0, 1)),
            cert: ConvergenceCertificate::Plain,
        };
        assert_eq!(tail_drop(&plain, &r(1, 2), 4).unwrap_err(), SequenceError::NotWeaklyEffective);
        let we = CertifiedSequence {
            seq: IndexedSequence::constant(r(0, 1)),
            cert: ConvergenceCertificate::WeaklyEffective { budget: r(1, 1) },
        };
        assert!(matches!(tail_drop(&we, &r(0, 1), 4), Err(SequenceError::NonPositiveTarget(_))));
    }
}
