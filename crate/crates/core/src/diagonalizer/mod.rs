//! Stage construction of a weakly computable `f = g - h` that differs, at the
//! witness `x_e = 2^{-e}`, from the limit of every adversary whose polygon
//! sequence stays within sup-distance variation 1.
//!
//! Each bump at `x_e` adds `2^{-e}` times the hat function that peaks at
//! `x_e` and vanishes outside `(x_{e+1}, x_{e-1})`, so bumps at different
//! witnesses never interact and `g`, `h` only grow.

mod adversary;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::exact::Rational;
use crate::exec::Exec;
use crate::polygon::Polygon;

pub use adversary::{Adversary, AdversaryKind, AdversarySpec};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DiagError {
    #[error("two adversaries share the witness index {0}")]
    DuplicateWitness(usize),
    #[error("the construction needs at least one stage")]
    NoStages,
}

/// Maximum number of bumps at `x_e`: `2^e`.
pub fn bump_cap(e: usize) -> u64 {
    1u64.checked_shl(e as u32).unwrap_or(u64::MAX)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionState {
    pub stage: usize,
    pub g: Polygon,
    pub h: Polygon,
    pub f: Polygon,
    /// Bumps of `g` at each witness.
    pub raised: BTreeMap<usize, u64>,
    /// Bumps of `h` at each witness.
    pub lowered: BTreeMap<usize, u64>,
    /// Number of emissions already examined per adversary.
    pub examined: BTreeMap<usize, usize>,
    /// `sum_i |pg_{i+1}(x_e) - pg_i(x_e)|` over the examined emissions.
    pub spent: BTreeMap<usize, Rational>,
    pub last_bump: BTreeMap<usize, usize>,
    /// `f_0, ..., f_stage`.
    pub history: Vec<Polygon>,
}

impl Default for ConstructionState {
    fn default() -> Self {
        Self::initial()
    }
}

/// `sum_e counts[e] 2^{-e} hat_e`: the polygon through `(x_e, counts[e] 2^{-e})`
/// that is zero left of the smallest bumped witness.
fn witness_polygon(counts: &BTreeMap<usize, u64>) -> Polygon {
    let Some(&top) = counts.keys().next_back() else {
        return Polygon::zero();
    };
    let mut pts = vec![(Rational::zero(), Rational::zero())];
    pts.push((Rational::pow2(-(top as i64) - 1), Rational::zero()));
    for e in (0..=top).rev() {
        let x = Rational::pow2(-(e as i64));
        let c = counts.get(&e).copied().unwrap_or(0);
        let y = Rational::from(c as i64) * &x;
        pts.push((x, y));
    }
    Polygon::new(pts).expect("witnesses increase to 1")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Direction {
    Raise,
    Lower,
}

struct Decision {
    e: usize,
    seen: usize,
    spent: Rational,
    action: Option<Direction>,
}

fn values_at(emitted: &[Polygon], x: &Rational) -> Vec<Rational> {
    emitted.iter().map(|p| p.eval_in_domain(x)).collect()
}

fn variation(vals: &[Rational]) -> Rational {
    vals.windows(2).map(|w| (&w[1] - &w[0]).abs()).sum()
}

fn sup_variation(emitted: &[Polygon]) -> Rational {
    emitted.windows(2).map(|w| w[1].sup_distance(&w[0])).sum()
}

impl ConstructionState {
    /// Stage 0: `f = g = h = 0`.
    pub fn initial() -> Self {
        ConstructionState {
            stage: 0,
            g: Polygon::zero(),
            h: Polygon::zero(),
            f: Polygon::zero(),
            raised: BTreeMap::new(),
            lowered: BTreeMap::new(),
            examined: BTreeMap::new(),
            spent: BTreeMap::new(),
            last_bump: BTreeMap::new(),
            history: vec![Polygon::zero()],
        }
    }

    pub fn bump_count(&self, e: usize) -> u64 {
        self.raised.get(&e).copied().unwrap_or(0) + self.lowered.get(&e).copied().unwrap_or(0)
    }

    fn decide(&self, adv: &Adversary) -> Option<Decision> {
        let s = self.stage;
        if adv.e > s + 1 {
            return None;
        }
        let emitted = adv.emitted(s, &self.history);
        if emitted.len() <= self.examined.get(&adv.e).copied().unwrap_or(0) {
            return None;
        }
        let x = adv.witness();
        let vals = values_at(&emitted, &x);
        let spent = variation(&vals);
        let last = vals.last().expect("something was emitted");
        let fx = self.f.eval_in_domain(&x);
        let sep = (&fx - last).abs();
        let action = if spent > Rational::one() || sep > x || self.bump_count(adv.e) >= bump_cap(adv.e) {
            None
        } else if &fx >= last {
            Some(Direction::Raise)
        } else {
            Some(Direction::Lower)
        };
        Some(Decision { e: adv.e, seen: emitted.len(), spent, action })
    }
}

/// One stage: every adversary with `e <= s + 1` that emitted something new
/// is examined against `f_s`, then all bumps are applied together.
///
/// A bump at `x_e` happens when the adversary's variation at `x_e` is still
/// at most 1, it is within `2^{-e}` of `f_s(x_e)`, and fewer than `2^e`
/// bumps were made there. It moves `f(x_e)` by `2^{-e}` away from the
/// adversary's last value: up through `g` when `f_s(x_e)` is at or above it,
/// down through `h` otherwise.
pub fn run_stage(state: &ConstructionState, adversaries: &[Adversary], exec: Exec) -> ConstructionState {
    let decisions = exec.map(adversaries, |a| state.decide(a));
    let mut next = state.clone();
    let mut changed = false;
    for d in decisions.into_iter().flatten() {
        next.examined.insert(d.e, d.seen);
        next.spent.insert(d.e, d.spent);
        if let Some(dir) = d.action {
            let table = match dir {
                Direction::Raise => &mut next.raised,
                Direction::Lower => &mut next.lowered,
            };
            *table.entry(d.e).or_insert(0) += 1;
            next.last_bump.insert(d.e, state.stage + 1);
            changed = true;
        }
    }
    if changed {
        next.g = witness_polygon(&next.raised);
        next.h = witness_polygon(&next.lowered);
        next.f = next.g.sub(&next.h);
    }
    next.stage += 1;
    next.history.push(next.f.clone());
    next
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageTrace {
    pub stage: usize,
    pub f: Polygon,
    pub g: Polygon,
    pub h: Polygon,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdversaryReport {
    pub e: usize,
    pub label: String,
    pub witness: Rational,
    pub emitted: usize,
    /// `|f_S(x_e) - pg_last(x_e)|`, if anything was emitted.
    pub separation: Option<Rational>,
    /// Variation of the emissions at `x_e`.
    pub spent_at_witness: Rational,
    /// `sum d(pg_{i+1}, pg_i)` over the emissions.
    pub spent_sup: Rational,
    pub bump_count: u64,
    pub last_bump_stage: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunReport {
    pub stages: usize,
    pub adversaries: Vec<AdversaryReport>,
    pub trace: Vec<StageTrace>,
}

/// Runs `stages` stages from the initial state, checking after each one that
/// `g` and `h` did not decrease, `f = g - h`, and no witness exceeded `2^e`
/// bumps.
pub fn run(
    adversaries: &[Adversary],
    stages: usize,
    exec: Exec,
) -> Result<(ConstructionState, RunReport), DiagError> {
    if stages == 0 {
        return Err(DiagError::NoStages);
    }
    let mut ids = BTreeSet::new();
    for a in adversaries {
        if !ids.insert(a.e) {
            return Err(DiagError::DuplicateWitness(a.e));
        }
    }
    let mut state = ConstructionState::initial();
    let mut trace = vec![StageTrace { stage: 0, f: state.f.clone(), g: state.g.clone(), h: state.h.clone() }];
    for _ in 0..stages {
        let next = run_stage(&state, adversaries, exec);
        assert!(state.g.is_below(&next.g) && state.h.is_below(&next.h), "g or h decreased");
        assert_eq!(next.f, next.g.sub(&next.h), "f drifted from g - h");
        for a in adversaries {
            assert!(next.bump_count(a.e) <= bump_cap(a.e), "bump cap exceeded");
        }
        trace.push(StageTrace { stage: next.stage, f: next.f.clone(), g: next.g.clone(), h: next.h.clone() });
        state = next;
    }
    let reports = exec.map(adversaries, |a| {
        let emitted = a.emitted(state.stage, &state.history);
        let x = a.witness();
        let vals = values_at(&emitted, &x);
        AdversaryReport {
            e: a.e,
            label: a.label(),
            witness: x.clone(),
            emitted: emitted.len(),
            separation: vals.last().map(|v| (state.f.eval_in_domain(&x) - v).abs()),
            spent_at_witness: variation(&vals),
            spent_sup: sup_variation(&emitted),
            bump_count: state.bump_count(a.e),
            last_bump_stage: state.last_bump.get(&a.e).copied(),
        }
    });
    Ok((state, RunReport { stages, adversaries: reports, trace }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    /// Within budget and separated by more than `2^{-(e+1)}`.
    Defeated,
    /// Sup-distance variation above 1: the requirement holds vacuously.
    BudgetExceeded,
    /// Nothing emitted yet, or still too close at the horizon.
    Undetermined,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictEntry {
    pub e: usize,
    pub verdict: Verdict,
}

pub fn verdict_for(r: &AdversaryReport) -> Verdict {
    if r.spent_sup > Rational::one() {
        return Verdict::BudgetExceeded;
    }
    match &r.separation {
        Some(sep) if sep > &Rational::pow2(-(r.e as i64) - 1) => Verdict::Defeated,
        _ => Verdict::Undetermined,
    }
}

pub fn verify_report(report: &RunReport) -> Vec<VerdictEntry> {
    report.adversaries.iter().map(|r| VerdictEntry { e: r.e, verdict: verdict_for(r) }).collect()
}

/// The four-adversary catalog: a constant zero polygon, a one-stage
/// follower, a slow small oscillator and the budget burner, at `e = 0..=3`.
pub fn default_catalog() -> Vec<Adversary> {
    vec![
        Adversary::new(0, AdversaryKind::Constant { polygon: Polygon::zero() }),
        Adversary::new(1, AdversaryKind::Follower { delay: 1 }),
        Adversary::new(2, AdversaryKind::Oscillator { amplitude: Rational::new(1, 64), period: 8 }),
        Adversary::new(3, AdversaryKind::BudgetBurner),
    ]
}
