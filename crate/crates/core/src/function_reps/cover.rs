//! Finite subcovers of `[0, 1]` from probing a machine on constant names.

use crate::exact::Rational;
use crate::exec::Exec;
use crate::polygon::Polygon;

use super::{FunctionError, StreamTransformer};

/// The machine's output at index `idx` on the constant name of `r`, valid
/// on every name that agrees with it on the inputs read: those of all reals
/// in the open interval `(lo, hi)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Probe {
    pub r: Rational,
    pub lo: Rational,
    pub hi: Rational,
    pub value: Rational,
}

pub fn probe(m: &StreamTransformer, r: &Rational, idx: usize) -> Probe {
    let k = m.usage(idx + 1);
    let input = vec![r.clone(); k];
    let value = m.step(&input, idx + 1).swap_remove(idx);
    let (lo, hi) = if k == 0 {
        // nothing read: valid everywhere
        (Rational::from(-1), Rational::from(2))
    } else {
        // inputs 0..k-1 read; a name of x matches them when |x - r| < 2^{-(k-1)}
        let radius = Rational::pow2(1 - k as i64);
        (r - &radius, r + &radius)
    };
    Probe { r: r.clone(), lo, hi, value }
}

/// New dyadic points at a level: `{0, 1}` at level 0, odd multiples of
/// `2^{-level}` afterwards.
pub fn dyadic_level(level: u32) -> Vec<Rational> {
    if level == 0 {
        return vec![Rational::zero(), Rational::one()];
    }
    let n = 1i64 << level;
    (1..n).step_by(2).map(|i| Rational::new(i, n)).collect()
}

/// Whether the open intervals cover `[0, 1]`.
pub fn covers(probes: &[Probe]) -> bool {
    let mut iv: Vec<(&Rational, &Rational)> = probes.iter().map(|p| (&p.lo, &p.hi)).collect();
    iv.sort();
    let one = Rational::one();
    // everything in [0, p) is covered; p itself still needs an interval
    let mut p = Rational::zero();
    let mut reach: Option<&Rational> = None;
    let mut i = 0;
    loop {
        while i < iv.len() && iv[i].0 < &p {
            if reach.is_none_or(|b| iv[i].1 > b) {
                reach = Some(iv[i].1);
            }
            i += 1;
        }
        match reach {
            Some(b) if b > &p => {
                p = b.clone();
                if p > one {
                    return true;
                }
            }
            _ => return false,
        }
    }
}

/// Probes dyadics level by level until the intervals cover `[0, 1]`.
/// Returns the probes sorted by `r` and the level reached.
pub fn probe_cover(
    m: &StreamTransformer,
    idx: usize,
    grid_limit: u32,
    exec: Exec,
) -> Result<(Vec<Probe>, u32), FunctionError> {
    let mut probes = Vec::new();
    for level in 0..=grid_limit {
        let points = dyadic_level(level);
        probes.extend(exec.map(&points, |r| probe(m, r, idx)));
        if covers(&probes) {
            probes.sort_by(|a, b| a.r.cmp(&b.r));
            return Ok((probes, level));
        }
    }
    Err(FunctionError::CoverNotFound { output: idx, grid_limit })
}

/// A polygon `P` with `P(x) <= max {value : x in (lo, hi)}` everywhere, and
/// equal to that maximum on the middle third of every gap between interval
/// endpoints. Requires a cover.
pub fn lower_polygon(probes: &[Probe]) -> Polygon {
    let (zero, one) = (Rational::zero(), Rational::one());
    let mut cuts: Vec<Rational> = vec![zero.clone(), one.clone()];
    for p in probes {
        for e in [&p.lo, &p.hi] {
            if e > &zero && e < &one {
                cuts.push(e.clone());
            }
        }
    }
    cuts.sort();
    cuts.dedup();

    let best = |pred: &dyn Fn(&Probe) -> bool| {
        probes.iter().filter(|p| pred(p)).map(|p| &p.value).max().cloned().expect("probes cover [0, 1]")
    };
    let at_cut: Vec<Rational> = cuts.iter().map(|c| best(&|p| &p.lo < c && c < &p.hi)).collect();

    let three = Rational::from(3);
    let mut pts = vec![(cuts[0].clone(), at_cut[0].clone())];
    for j in 0..cuts.len() - 1 {
        let (a, b) = (&cuts[j], &cuts[j + 1]);
        // no endpoint lies strictly inside (a, b), so an interval meeting it contains all of it
        let inside = best(&|p| &p.lo <= a && b <= &p.hi);
        let third = (b - a) / &three;
        pts.push((a + &third, inside.clone()));
        pts.push((b - &third, inside));
        pts.push((b.clone(), at_cut[j + 1].clone()));
    }
    Polygon::new(pts).expect("cuts increase from 0 to 1")
}

/// The polygon through `(r, value)` for probes sorted by `r` with `0` and `1`
/// among them.
pub fn interpolating_polygon(probes: &[Probe]) -> Polygon {
    Polygon::new(probes.iter().map(|p| (p.r.clone(), p.value.clone())).collect())
        .expect("probes include 0 and 1 and are sorted")
}
