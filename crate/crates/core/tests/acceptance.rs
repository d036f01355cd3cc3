//! Acceptance run: each criterion prints one PASS/FAIL line; the process
//! exits non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use wcf_core::diagonalizer::{self, bump_cap, verify_report, Verdict};
use wcf_core::exact::{constant_name, IndexedSequence, Name, Rational};
use wcf_core::exec::Exec;
use wcf_core::function_reps::{
    catalog, lsc_to_machine, machine_to_lsc_stages, machine_to_uwc_stage, max_of_lsc, uwc_polyseq_to_machine,
    wc_from_difference, PolygonSequence, SequenceMode,
};
use wcf_core::polygon::{dyadic_grid, sampled_max_abs_diff, Polygon};
use wcf_core::sequences::{
    audit, divergence_closes, divergence_count, variation_prefix, variation_split, CertifiedSequence,
    ConvergenceCertificate,
};

type Outcome = Result<String, String>;
type Limit = Box<dyn Fn(&Rational) -> Rational>;
type Criterion = (&'static str, Duration, fn() -> Outcome);

fn r(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

fn pow2(k: i64) -> Rational {
    Rational::pow2(k)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn random_rational(rng: &mut StdRng, max_num: i64, max_den: i64) -> Rational {
    r(rng.gen_range(-max_num..=max_num), rng.gen_range(1..=max_den))
}

fn names() -> Vec<Name> {
    vec![
        constant_name(r(1, 3)),
        Name::alternating(r(1, 2)),
        Name::dyadic_truncations(r(2, 7)),
        constant_name(r(0, 1)),
        Name::alternating(r(1, 1)),
    ]
}

// 1. y(s) - z(s) = u(s+1) and both parts increase.
fn variation_split_identity() -> Outcome {
    let mut rng = StdRng::seed_from_u64(1);
    for case in 0..1000 {
        let len = rng.gen_range(1..=20);
        let terms: Vec<Rational> = (0..len).map(|_| random_rational(&mut rng, 20, 16)).collect();
        let u = IndexedSequence::literal(terms.clone());
        let (y, z) = variation_split(&u);
        let at = |s: usize| terms[s.min(len - 1)].clone();
        // oracle: the defining sums, term by term
        let (mut oy, mut oz) = (at(0), Rational::zero());
        for s in 0..len + 2 {
            let (a, b) = (at(s), at(s + 1));
            if b > a {
                oy += &b - &a;
            } else {
                oz += &a - &b;
            }
            ensure(y.at(s) == oy && z.at(s) == oz, || {
                format!("case {case}: split differs from its definition at {s}")
            })?;
            ensure(&oy - &oz == b, || format!("case {case}: y - z != u(s+1) at {s}"))?;
        }
        for part in [&y, &z] {
            let cs = CertifiedSequence::new(part.clone(), ConvergenceCertificate::Increasing).unwrap();
            ensure(audit(&cs, len + 2).pass, || format!("case {case}: increasing audit failed"))?;
        }
    }
    Ok("1000 random sequences, exact".into())
}

fn increasing_sequences() -> Vec<(&'static str, PolygonSequence)> {
    vec![
        ("constant-zero", catalog::constant(Polygon::zero(), SequenceMode::Increasing)),
        ("scaled-identity", catalog::scaled_identity(r(1, 1))),
        ("tent-growth", catalog::tent_growth(r(1, 1))),
    ]
}

// 2. Machine outputs increase, stay below gen(40)(x), and end within 2^-6.
fn lsc_round_trip() -> Outcome {
    const S: usize = 40;
    let mut worst = Rational::zero();
    for (label, ps) in increasing_sequences() {
        let m = lsc_to_machine(&ps).map_err(|e| e.to_string())?;
        for name in names() {
            let x = name.value.clone().unwrap();
            let z = m.run(&name.seq, S + 1);
            let top = ps.at(S).eval(&x).unwrap();
            ensure(z.windows(2).all(|w| w[0] <= w[1]), || format!("{label} at {x}: outputs decrease"))?;
            ensure(z.iter().all(|v| v <= &top), || format!("{label} at {x}: an output exceeds gen({S})(x)"))?;
            let gap = (&z[S] - &top).abs();
            ensure(gap <= pow2(-6), || format!("{label} at {x}: |z(40) - gen(40)(x)| = {gap}"))?;
            worst = worst.max(gap);
        }
    }
    Ok(format!("3 sequences x 5 names, worst |z(40) - gen(40)(x)| = {worst}"))
}

// 3. Recovered stages lie below the limit and within 2^-s + 2^-5 of it.
fn compactness_construction() -> Outcome {
    let grid = dyadic_grid(8);
    let cases: Vec<(&str, PolygonSequence, Limit)> = vec![
        (
            "constant-zero",
            catalog::constant(Polygon::zero(), SequenceMode::Increasing),
            Box::new(|_| Rational::zero()),
        ),
        ("scaled-identity", catalog::scaled_identity(r(1, 1)), Box::new(|x| x.clone())),
    ];
    for (label, ps, limit) in cases {
        let m = lsc_to_machine(&ps).map_err(|e| e.to_string())?;
        let stages = machine_to_lsc_stages(&m, 5, 16, Exec::default()).map_err(|e| e.to_string())?;
        for (s, pg) in stages.iter().enumerate() {
            let tol = pow2(-(s as i64)) + pow2(-5);
            for x in &grid {
                let (v, f) = (pg.eval(x).unwrap(), limit(x));
                ensure(v <= f, || format!("{label} stage {s}: {v} above the limit at {x}"))?;
                ensure(&f - &v <= tol, || format!("{label} stage {s}: gap {} at {x}", &f - &v))?;
            }
        }
    }
    Ok("2 machines, stages 0-5, 257 grid points".into())
}

// 4. Output variation of the difference machine against the closed form.
fn wc_variation_bound() -> Outcome {
    const S: usize = 64;
    let g = catalog::scaled_identity(r(1, 1));
    let h = catalog::scaled_identity(r(1, 2));
    let m = wc_from_difference(&g, &h).map_err(|e| e.to_string())?;
    let (mg, mh) = (lsc_to_machine(&g).unwrap(), lsc_to_machine(&h).unwrap());
    for name in names() {
        let x = name.value.clone().unwrap();
        let u = IndexedSequence::literal(m.run(&name.seq, S + 1));
        let total = variation_prefix(&u, S + 1);
        let y0 = mg.run(&name.seq, 1).remove(0);
        let z0 = mh.run(&name.seq, 1).remove(0);
        let bound = g.at(S).eval(&x).unwrap() + h.at(S).eval(&x).unwrap() - y0 - z0;
        ensure(total <= bound, || format!("at {x}: variation {total} > bound {bound}"))?;
    }
    Ok("5 names, exact".into())
}

// 5. Machines from half-budget sequences have output variation <= 1.
fn uniform_budget_one() -> Outcome {
    const S: usize = 64;
    let tent = Polygon::tent(r(0, 1), r(1, 2), r(1, 1), r(1, 1));
    let seqs = vec![
        ("constant-tent", catalog::constant(tent, SequenceMode::Pointwise)),
        ("scaled-identity(1/2)", catalog::scaled_identity(r(1, 2))),
        ("tent-growth(1/2)", catalog::tent_growth(r(1, 2))),
    ];
    let mut worst = Rational::zero();
    for (label, ps) in seqs {
        let budget = ps.sup_variation(S + 1);
        ensure(budget <= r(1, 2), || format!("{label}: audited budget {budget} > 1/2"))?;
        let m = uwc_polyseq_to_machine(&ps, S + 1).map_err(|e| e.to_string())?;
        for name in names() {
            let y = IndexedSequence::literal(m.run(&name.seq, S + 1));
            let total = variation_prefix(&y, S + 1);
            ensure(total <= Rational::one(), || format!("{label}: variation {total} > 1"))?;
            worst = worst.max(total);
        }
    }
    Ok(format!("3 sequences x 5 names, worst variation {}", worst.approx_f64()))
}

// 6. Recovered polygons track y_s and have sup-distance variation <= 4 over s < 32.
fn uniform_budget_four() -> Outcome {
    const STAGES: usize = 32;
    const GRID_LIMIT: u32 = 17;
    let tent = Polygon::tent(r(0, 1), r(1, 2), r(1, 1), r(1, 1));
    let ps = catalog::constant(tent, SequenceMode::Pointwise);
    let m = uwc_polyseq_to_machine(&ps, 64).map_err(|e| e.to_string())?;
    let grid = dyadic_grid(8);
    let mut polygons: Vec<Polygon> = Vec::new();
    for s in 0..=STAGES {
        let (pg, level) = match machine_to_uwc_stage(&m, s, GRID_LIMIT, Exec::default()) {
            Ok(v) => v,
            Err(e) => {
                let partial: Rational = polygons.windows(2).map(|w| w[1].sup_distance(&w[0])).sum();
                return Err(format!(
                    "stage {s}: {e} (each stage needs about 2^(s+6) probes); \
                     stages 0-{} were recovered with variation {partial} and matched y_s",
                    s - 1
                ));
            }
        };
        for x in &grid {
            let y = m.run(&constant_name(x.clone()).seq, s + 1).swap_remove(s);
            let gap = (y - pg.eval(x).unwrap()).abs();
            ensure(gap <= pow2(-(s as i64)), || {
                format!("stage {s} (level {level}): |y_s - pg_s| = {gap} at {x}")
            })?;
        }
        polygons.push(pg);
    }
    let total: Rational = polygons.windows(2).map(|w| w[1].sup_distance(&w[0])).sum();
    ensure(total <= 4, || format!("variation {total} > 4"))?;
    Ok(format!("33 stages, variation {total}"))
}

// 7. Maxima of the tent-growth sequence.
fn max_left_computable() -> Outcome {
    let m = max_of_lsc(&catalog::tent_growth(r(1, 1))).map_err(|e| e.to_string())?;
    for n in 0..64 {
        let v = m.seq.at(n);
        ensure(v == Rational::one() - pow2(-(n as i64)), || format!("m_{n} = {v}"))?;
        ensure((Rational::one() - &v).abs() <= pow2(-(n as i64)), || format!("m_{n} too far from 1"))?;
    }
    ensure(audit(&m, 64).pass, || "increasing audit failed".into())?;
    Ok("m_n = 1 - 2^-n for n < 64".into())
}

/// Exhaustive oracle: `best[i]` is the largest number of disjoint pairs
/// inside the first `i` terms, extended one term at a time by trying every
/// partner of the new last term.
fn extend_best(best: &mut Vec<usize>, terms: &[i64], t: i64) {
    let j = terms.len() - 1;
    let mut b = best[j];
    for i in 0..j {
        if (terms[i] - terms[j]).abs() >= t {
            b = b.max(best[i] + 1);
        }
    }
    best.push(b);
}

fn sweep(terms: &mut Vec<i64>, bests: &mut [Vec<usize>; 3], visited: &mut u64) -> Result<(), String> {
    // alphabet {0, 1/4, 1/2, 1} times 4; thresholds 2^{-n} times 4
    const ALPHABET: [i64; 4] = [0, 1, 2, 4];
    const THRESHOLDS: [i64; 3] = [4, 2, 1];
    if terms.len() == 12 {
        return Ok(());
    }
    for a in ALPHABET {
        terms.push(a);
        *visited += 1;
        for (n, t) in THRESHOLDS.iter().enumerate() {
            extend_best(&mut bests[n], terms, *t);
            let greedy = divergence_closes(terms, t).len();
            let brute = *bests[n].last().unwrap();
            ensure(greedy == brute, || format!("{terms:?} n={n}: greedy {greedy}, brute force {brute}"))?;
        }
        let res = sweep(terms, bests, visited);
        for b in bests.iter_mut() {
            b.pop();
        }
        terms.pop();
        res?;
    }
    Ok(())
}

// 8. Greedy divergence counting is optimal.
fn divergence_counting() -> Outcome {
    let mut visited = 0u64;
    let mut bests = [vec![0], vec![0], vec![0]];
    sweep(&mut Vec::new(), &mut bests, &mut visited)?;
    // the rational entry point agrees with the scaled integer scan
    let alphabet = [r(0, 1), r(1, 4), r(1, 2), r(1, 1)];
    let mut rng = StdRng::seed_from_u64(8);
    for _ in 0..2000 {
        let len = rng.gen_range(1..=12);
        let idx: Vec<usize> = (0..len).map(|_| rng.gen_range(0..4)).collect();
        let terms: Vec<Rational> = idx.iter().map(|&i| alphabet[i].clone()).collect();
        let ints: Vec<i64> = idx.iter().map(|&i| [0, 1, 2, 4][i]).collect();
        let seq = IndexedSequence::literal(terms);
        for n in 0..3 {
            let t = 4 >> n;
            ensure(divergence_count(&seq, n, len) == divergence_closes(&ints, &t).len(), || {
                format!("{ints:?} n={n}: rational and integer scans differ")
            })?;
        }
    }
    Ok(format!("{visited} sequences x 3 thresholds, exhaustive"))
}

// 9. The diagonalizer against the four-adversary catalog.
fn diagonalization() -> Outcome {
    const S: usize = 200;
    let cat = diagonalizer::default_catalog();
    let (_, report) = diagonalizer::run(&cat, S, Exec::default()).map_err(|e| e.to_string())?;
    // f = g - h, checked at every breakpoint of the three polygons
    for st in &report.trace {
        let mut xs: Vec<Rational> = [&st.f, &st.g, &st.h].iter().flat_map(|p| p.xs()).collect();
        xs.sort();
        xs.dedup();
        for x in &xs {
            let (f, g, h) = (st.f.eval(x).unwrap(), st.g.eval(x).unwrap(), st.h.eval(x).unwrap());
            ensure(f == &g - &h, || format!("stage {}: f != g - h at {x}", st.stage))?;
        }
    }
    for (label, pick) in [("g", 0usize), ("h", 1)] {
        let polys: Vec<Polygon> =
            report.trace.iter().map(|t| if pick == 0 { t.g.clone() } else { t.h.clone() }).collect();
        let ps = PolygonSequence::literal(polys, SequenceMode::Increasing);
        ensure(ps.audit(S + 1).is_none(), || format!("({label}_s) fails its increasing audit"))?;
    }
    // bump counts read off the trace: each bump moves g + h at x_e by 2^{-e}
    for a in &cat {
        let x = a.witness();
        let total: Rational = report
            .trace
            .windows(2)
            .map(|w| {
                (w[1].g.eval(&x).unwrap() - w[0].g.eval(&x).unwrap())
                    + (w[1].h.eval(&x).unwrap() - w[0].h.eval(&x).unwrap())
            })
            .sum();
        let bumps = total / &x;
        ensure(bumps <= bump_cap(a.e) as i64, || format!("e = {}: {bumps} bumps", a.e))?;
    }
    let verdicts = verify_report(&report);
    let mut summary = Vec::new();
    for (rep, v) in report.adversaries.iter().zip(&verdicts) {
        if rep.spent_sup <= Rational::one() && rep.emitted > 0 {
            let sep = rep.separation.clone().unwrap();
            ensure(v.verdict == Verdict::Defeated && sep > pow2(-(rep.e as i64) - 1), || {
                format!("e = {} ({}) within budget but {:?}, separation {sep}", rep.e, rep.label, v.verdict)
            })?;
        }
        summary.push(format!("e={} {:?}", rep.e, v.verdict));
    }
    Ok(summary.join(", "))
}

fn random_polygon(rng: &mut StdRng) -> Polygon {
    let inner = rng.gen_range(0..6);
    let mut xs: Vec<Rational> = (0..inner).map(|_| r(rng.gen_range(1..64), 64)).collect();
    xs.push(Rational::zero());
    xs.push(Rational::one());
    xs.sort();
    xs.dedup();
    Polygon::new(xs.into_iter().map(|x| (x, random_rational(rng, 32, 16))).collect()).unwrap()
}

// 10. Metric axioms and grid maximum against sampling.
fn sup_distance_correctness() -> Outcome {
    let mut rng = StdRng::seed_from_u64(10);
    for case in 0..500 {
        let (a, b, c) = (random_polygon(&mut rng), random_polygon(&mut rng), random_polygon(&mut rng));
        let (ab, ba, bc, ac) =
            (a.sup_distance(&b), b.sup_distance(&a), b.sup_distance(&c), a.sup_distance(&c));
        ensure(ab == ba, || format!("case {case}: not symmetric"))?;
        ensure(ac <= &ab + &bc, || format!("case {case}: triangle inequality fails"))?;
        ensure(a.sup_distance(&a).is_zero(), || format!("case {case}: d(a, a) != 0"))?;
        ensure(ab.is_zero() == (a == b), || format!("case {case}: d = 0 disagrees with equality"))?;
        // the same function with a redundant breakpoint
        let mid = r(rng.gen_range(1..128), 128);
        let mut pts: Vec<(Rational, Rational)> = a.breakpoints().to_vec();
        if !pts.iter().any(|(x, _)| x == &mid) {
            pts.push((mid.clone(), a.eval(&mid).unwrap()));
            pts.sort();
        }
        let a2 = Polygon::new(pts).unwrap();
        ensure(a2 == a && a.sup_distance(&a2).is_zero(), || format!("case {case}: normalization"))?;

        let samples: Vec<Rational> = (0..10_000)
            .map(|_| {
                let d = rng.gen_range(1..=1000i64);
                r(rng.gen_range(0..=d), d)
            })
            .collect();
        let sampled = sampled_max_abs_diff(&a, &b, &samples, Exec::default());
        ensure(sampled <= ab, || format!("case {case}: sample {sampled} exceeds grid max {ab}"))?;
    }
    Ok("500 triples, 10^4 samples per pair".into())
}

fn main() -> ExitCode {
    let criteria: Vec<Criterion> = vec![
        ("variation-split identity", Duration::from_secs(5), variation_split_identity),
        ("LSC round trip", Duration::from_secs(30), lsc_round_trip),
        ("compactness construction", Duration::from_secs(120), compactness_construction),
        ("WC variation bound", Duration::from_secs(30), wc_variation_bound),
        ("uniform budget 1", Duration::from_secs(30), uniform_budget_one),
        ("uniform budget 4", Duration::from_secs(120), uniform_budget_four),
        ("max is left computable", Duration::from_secs(1), max_left_computable),
        ("divergence counting", Duration::from_secs(60), divergence_counting),
        ("diagonalization", Duration::from_secs(120), diagonalization),
        ("sup_distance correctness", Duration::from_secs(60), sup_distance_correctness),
    ];
    let mut failed = 0;
    for (i, (label, limit, check)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let took = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if took > limit => Err(format!("{detail}; took {took:.1?}, limit {limit:?}")),
            other => other,
        };
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {label}: {detail} ({took:.2?})", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {label}: {why} ({took:.2?})", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criterion(s) failed");
        ExitCode::FAILURE
    }
}
