use crate::exact::{LazySequence, Rational};
use crate::exec::Exec;
use crate::polygon::Polygon;

use super::cover::{interpolating_polygon, probe_cover};
use super::lsc::unit_clamp;
use super::{FunctionError, Machine, PolygonSequence, SequenceMode, StreamTransformer};

/// Budget a polygon sequence must meet before it is turned into a machine.
pub fn uwc_input_budget() -> Rational {
    Rational::new(1, 2)
}

struct UwcMachine {
    gen: LazySequence<Polygon>,
    /// `m(s, s)`
    diag: LazySequence<usize>,
}

impl Machine for UwcMachine {
    fn usage(&self, n: usize) -> usize {
        match n {
            0 => 0,
            n => self.diag.at(n - 1) + 1,
        }
    }

    fn step(&self, input: &[Rational], n: usize) -> Vec<Rational> {
        (0..n).map(|s| self.gen.at(s).eval_in_domain(&unit_clamp(&input[self.diag.at(s)]))).collect()
    }
}

/// The machine `y_s = pg_s(x_{m(s,s)})` for a polygon sequence with
/// `sum d(pg_{s+1}, pg_s) <= 1/2`, checked on the first `audit_depth`
/// polygons. On every name, `sum |y_{s+1} - y_s| <= 1`.
///
/// `m(i, s) = max_{i' <= i} modulus_index(pg_{i'}, s + 3)`, so
/// `|x - y| <= 2^{-m(i,s)}` gives `|pg_i(x) - pg_i(y)| <= 2^{-(s+3)}` and `m`
/// increases in both arguments.
pub fn uwc_polyseq_to_machine(
    ps: &PolygonSequence,
    audit_depth: usize,
) -> Result<StreamTransformer, FunctionError> {
    let budget = uwc_input_budget();
    let total = ps.sup_variation(audit_depth);
    if total > budget {
        return Err(FunctionError::BudgetViolation { total: Box::new(total), budget: Box::new(budget) });
    }
    let g = ps.gen.clone();
    // modulus_index(pg, s) = s + lift(pg) + 1, so the maximum over i' <= i
    // only needs the running maximum of the lifts
    let lift = LazySequence::scan(move |i, prev: &[usize]| {
        let l = g.at(i).modulus_index(0) - 1;
        prev.last().map_or(l, |&p| p.max(l))
    });
    let diag = LazySequence::from_fn(move |s| s + 3 + lift.at(s) + 1);
    Ok(StreamTransformer::new(UwcMachine { gen: ps.gen.clone(), diag }))
}

/// The stage-`s` polygon of the converse construction: probe `y_s` on a dyadic
/// cover and interpolate. Returns the polygon and the probe level used.
pub fn machine_to_uwc_stage(
    m: &StreamTransformer,
    s: usize,
    grid_limit: u32,
    exec: Exec,
) -> Result<(Polygon, u32), FunctionError> {
    let (probes, level) = probe_cover(m, s, grid_limit, exec)?;
    Ok((interpolating_polygon(&probes), level))
}

/// Stages `0..=stages` of the converse construction, as a sequence of mode
/// `UniformWeaklyEffective(4)` that repeats its last computed stage.
pub fn machine_to_uwc_polyseq(
    m: &StreamTransformer,
    stages: usize,
    grid_limit: u32,
    exec: Exec,
) -> Result<PolygonSequence, FunctionError> {
    let polygons = (0..=stages)
        .map(|s| machine_to_uwc_stage(m, s, grid_limit, exec).map(|(p, _)| p))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(PolygonSequence::literal(polygons, SequenceMode::UniformWeaklyEffective { budget: Rational::from(4) }))
}
