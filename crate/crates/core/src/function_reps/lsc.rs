use crate::exact::{LazySequence, Rational};
use crate::exec::Exec;
use crate::polygon::Polygon;

use super::cover::{lower_polygon, probe_cover};
use super::{FunctionError, Machine, PolygonSequence, SequenceMode, StreamTransformer};

/// Stage `s` of [`machine_to_lsc`] reads machine output `s + LOOKAHEAD`, so
/// the stage-`s` polygon is within `2^{-s}`-ish of the limit rather than
/// `2^{1-s}`.
pub const LOOKAHEAD: usize = 2;

pub(crate) fn unit_clamp(x: &Rational) -> Rational {
    x.clone().clamp(&Rational::zero(), &Rational::one())
}

/// Running maximum of `f(0), ..., f(n-1)` plus one; 0 for `n = 0`.
pub(crate) fn usage_table(f: LazySequence<usize>) -> LazySequence<usize> {
    LazySequence::scan(move |n, prev: &[usize]| {
        if n == 0 {
            0
        } else {
            let before = prev[n - 1];
            before.max(f.at(n - 1) + 1)
        }
    })
}

struct LscMachine {
    gen: LazySequence<Polygon>,
    modulus: LazySequence<usize>,
    usage: LazySequence<usize>,
}

impl Machine for LscMachine {
    fn usage(&self, n: usize) -> usize {
        self.usage.at(n)
    }

    fn step(&self, input: &[Rational], n: usize) -> Vec<Rational> {
        let mut out: Vec<Rational> = Vec::with_capacity(n);
        for t in 0..n {
            let u = unit_clamp(&input[self.modulus.at(t)]);
            let y = self.gen.at(t).eval_in_domain(&u) - Rational::pow2(-(t as i64));
            let z = match out.last() {
                Some(prev) if *prev > y => prev.clone(),
                _ => y,
            };
            out.push(z);
        }
        out
    }
}

/// The machine of the forward direction for lower semi-computable functions:
/// `u_t = x_{m_t}` with `m_t = modulus_index(pg_t, t)`,
/// `y_t = pg_t(u_t) - 2^{-t}` and `z_s = max_{t <= s} y_t`.
///
/// Input terms are clamped into `[0, 1]`, which keeps a name of a point of
/// `[0, 1]` a name of the same point. `usage(n) = max_{t < n} m_t + 1`.
pub fn lsc_to_machine(ps: &PolygonSequence) -> Result<StreamTransformer, FunctionError> {
    if ps.mode != SequenceMode::Increasing {
        return Err(FunctionError::WrongMode { expected: "increasing", found: ps.mode.name() });
    }
    let gen = ps.gen.clone();
    let g = gen.clone();
    let modulus = LazySequence::from_fn(move |t| g.at(t).modulus_index(t));
    let usage = usage_table(modulus.clone());
    Ok(StreamTransformer::new(LscMachine { gen, modulus, usage }))
}

/// Upper semi-computable counterpart by negation: the outputs decrease to `f(x)`.
pub fn usc_to_machine(ps: &PolygonSequence) -> Result<StreamTransformer, FunctionError> {
    if ps.mode != SequenceMode::Decreasing {
        return Err(FunctionError::WrongMode { expected: "decreasing", found: ps.mode.name() });
    }
    let lower = lsc_to_machine(&ps.negated())?;
    let l = lower.clone();
    Ok(StreamTransformer::from_fns(
        move |n| l.usage(n),
        move |p, n| lower.step(p, n).into_iter().map(|v| -v).collect(),
    ))
}

/// Polygons `pg'_0, ..., pg'_stages` from a machine whose outputs increase to
/// `f(x)`: each raw stage is built from a dyadic probe cover and lies below
/// `f`, and `pg'_s` is the pointwise maximum of the raw stages up to `s`.
pub fn machine_to_lsc_stages(
    m: &StreamTransformer,
    stages: usize,
    grid_limit: u32,
    exec: Exec,
) -> Result<Vec<Polygon>, FunctionError> {
    let mut out: Vec<Polygon> = Vec::with_capacity(stages + 1);
    for s in 0..=stages {
        let (probes, _) = probe_cover(m, s + LOOKAHEAD, grid_limit, exec)?;
        let raw = lower_polygon(&probes);
        let next = match out.last() {
            Some(prev) => prev.pointwise_max(&raw),
            None => raw,
        };
        out.push(next);
    }
    Ok(out)
}

/// The stage-`stage` polygon of [`machine_to_lsc_stages`].
pub fn machine_to_lsc(
    m: &StreamTransformer,
    stage: usize,
    grid_limit: u32,
) -> Result<Polygon, FunctionError> {
    machine_to_lsc_with(m, stage, grid_limit, Exec::default())
}

pub fn machine_to_lsc_with(
    m: &StreamTransformer,
    stage: usize,
    grid_limit: u32,
    exec: Exec,
) -> Result<Polygon, FunctionError> {
    Ok(machine_to_lsc_stages(m, stage, grid_limit, exec)?.pop().expect("at least stage 0"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{constant_name, Name};
    use crate::function_reps::catalog;
    use crate::polygon::dyadic_grid;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn scaled_identity_at_half() {
        let m = lsc_to_machine(&catalog::scaled_identity(r(1, 1))).unwrap();
        let out = m.run(&constant_name(r(1, 2)).seq, 12);
        for (s, z) in out.iter().enumerate() {
            let y = (Rational::one() - Rational::pow2(-(s as i64))) / Rational::from(2)
                - Rational::pow2(-(s as i64));
            assert_eq!(y, r(1, 2) - Rational::from(3) * Rational::pow2(-(s as i64) - 1));
            // y is already increasing, so the envelope is y itself
            assert_eq!(z, &y);
        }
    }

    #[test]
    fn zero_sequence() {
        let m = lsc_to_machine(&catalog::constant(Polygon::zero(), SequenceMode::Increasing)).unwrap();
        let out = m.run(&Name::alternating(r(1, 3)).seq, 10);
        for (s, z) in out.iter().enumerate() {
            assert_eq!(z, &-Rational::pow2(-(s as i64)));
        }
    }

    #[test]
    fn usage_is_running_max() {
        let m = lsc_to_machine(&catalog::tent_growth(r(1, 1))).unwrap();
        assert_eq!(m.usage(0), 0);
        // slopes 0, 1, 3/2, 7/4, ... give m_t = 1, 2, 4, 5, 6
        assert_eq!(m.usage(1), 2);
        assert_eq!(m.usage(2), 3);
        assert_eq!(m.usage(3), 5);
        assert_eq!(m.usage(5), 7);
    }

    #[test]
    fn wrong_mode() {
        let ps = catalog::constant(Polygon::zero(), SequenceMode::Pointwise);
        assert_eq!(
            lsc_to_machine(&ps).unwrap_err(),
            FunctionError::WrongMode { expected: "increasing", found: "pointwise" }
        );
    }

    #[test]
    fn usc_by_negation() {
        let ps = catalog::scaled_identity(r(1, 1)).negated();
        let m = usc_to_machine(&ps).unwrap();
        let out = m.run(&constant_name(r(1, 2)).seq, 10);
        assert!(out.windows(2).all(|w| w[1] <= w[0]));
        assert!(out.iter().all(|v| v >= &r(-1, 2)));
    }

    #[test]
    fn zero_round_trip_stage_three() {
        let m = lsc_to_machine(&catalog::constant(Polygon::zero(), SequenceMode::Increasing)).unwrap();
        let pg = machine_to_lsc(&m, 3, 12).unwrap();
        for x in dyadic_grid(8) {
            let v = pg.eval(&x).unwrap();
            assert!(v <= Rational::zero() && v >= -Rational::pow2(-3));
        }
    }

    #[test]
    fn instant_machine_recovers_quickly() {
        let m = StreamTransformer::from_fns(|n| n.min(1), |_, n| vec![r(1, 4); n]);
        let pg = machine_to_lsc(&m, 4, 2).unwrap();
        assert_eq!(pg, Polygon::constant(r(1, 4)));
    }

    #[test]
    fn identity_round_trip_is_below_limit() {
        let m = lsc_to_machine(&catalog::scaled_identity(r(1, 1))).unwrap();
        let stages = machine_to_lsc_stages(&m, 3, 14, Exec::Sequential).unwrap();
        for w in stages.windows(2) {
            assert!(w[0].is_below(&w[1]));
        }
        for x in dyadic_grid(5) {
            assert!(stages[3].eval(&x).unwrap() <= x);
        }
        let par = machine_to_lsc_with(&m, 3, 14, Exec::Parallel).unwrap();
        assert_eq!(par, stages[3]);
    }
}
