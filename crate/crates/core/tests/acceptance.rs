//! Acceptance gate: nine criteria, one PASS/FAIL line each, with timings.
//! Runs without the libtest harness so that the report is always printed.

mod common;

use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::Rng;
use relfix::bits::BitSet;
use relfix::finstruct::{count_hylo, enumerate_hylo, FinCoalgebra, DEFAULT_BUDGET};
use relfix::fractal::{
    approximant, carpet_member, d_path, d_taxicab, render, BoundaryPoint, Coord, Edge,
};
use relfix::gen::{
    acyclic_coalgebras, all_algebras, all_coalgebras, random_algebra, random_coalgebra,
    random_signature, random_term, random_transition_system, rng_from_seed, small_signatures,
};
use relfix::lattice::{
    f_apply, galois_check, mu_post, nu_pre, safety_check, SafetyVerdict, TransitionSystem,
};
use relfix::mu::{mu_equal, mu_hom_count, mu_presentation};
use relfix::nu::{classify_cartesian, count_coalg_homs_to_nu, ROUNDTRIP_DEPTH};
use relfix::sigterm::{Signature, Term};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// The 500-system lattice corpus shared by criteria 1 to 3.
fn lattice_corpus() -> Vec<TransitionSystem> {
    (0..500u64)
        .map(|seed| {
            let mut rng = rng_from_seed(seed);
            let n = rng.gen_range(0..=6);
            random_transition_system(&mut rng, n)
        })
        .collect()
}

fn post_and_pre(ts: &TransitionSystem) -> (Vec<BitSet>, Vec<BitSet>) {
    let op = ts.op();
    let mut post = Vec::new();
    let mut pre = Vec::new();
    for x in BitSet::all_subsets(ts.len()) {
        let fx = common::union_image(ts, &x);
        if x.is_subset(&fx) {
            post.push(x.clone());
        }
        if fx.is_subset(&x) {
            pre.push(x.clone());
        }
        debug_assert_eq!(fx, f_apply(&op, &x));
    }
    (post, pre)
}

fn criterion_1_galois() -> Check {
    let mut pairs = 0usize;
    for (seed, ts) in lattice_corpus().iter().enumerate() {
        let op = ts.op();
        let (post, pre) = post_and_pre(ts);
        for i in &post {
            for p in &pre {
                let ok = galois_check(&op, i, p).map_err(|e| format!("seed {seed}: {e}"))?;
                ensure(ok, || format!("seed {seed}: I={i:?} P={p:?}"))?;
                pairs += 1;
            }
        }
    }
    Ok(format!("500 systems, {pairs} (I, P) pairs"))
}

fn criterion_2_fixed_points() -> Check {
    let mut checked = 0usize;
    for (seed, ts) in lattice_corpus().iter().enumerate() {
        let op = ts.op();
        let (post, pre) = post_and_pre(ts);
        for i in &post {
            let m = mu_post(&op, i).map_err(|e| e.to_string())?;
            ensure(common::union_image(ts, &m) == m, || {
                format!("seed {seed}: μ({i:?}) = {m:?} is not fixed")
            })?;
            checked += 1;
        }
        for p in &pre {
            let v = nu_pre(&op, p).map_err(|e| e.to_string())?;
            ensure(common::union_image(ts, &v) == v, || {
                format!("seed {seed}: ν({p:?}) = {v:?} is not fixed")
            })?;
            checked += 1;
        }
    }
    Ok(format!("{checked} least/greatest fixed points"))
}

fn criterion_3_safety() -> Check {
    let (mut safe, mut unsafe_) = (0usize, 0usize);
    for (seed, ts) in lattice_corpus().iter().enumerate() {
        let (post, pre) = post_and_pre(ts);
        for i in &post {
            let reach = common::reachable(ts, i);
            for p in &pre {
                let verdict = safety_check(&ts.with_sets(i.clone(), p.clone()))
                    .map_err(|e| format!("seed {seed}: {e}"))?;
                let expected = reach.is_subset(p);
                ensure(verdict.is_safe() == expected, || {
                    format!("seed {seed}: I={i:?} P={p:?} gave {verdict:?}")
                })?;
                if let SafetyVerdict::Unsafe { witness, .. } = verdict {
                    ensure(reach.contains(witness) || i.contains(witness), || {
                        format!("seed {seed}: witness {witness} is not reachable")
                    })?;
                }
                if expected {
                    safe += 1;
                } else {
                    unsafe_ += 1;
                }
            }
        }
    }
    Ok(format!(
        "{safe} safe and {unsafe_} unsafe instances agree with BFS"
    ))
}

/// Rewrites a random occurrence of a state by its step, or a step by its
/// state, a few times. The result is ≈_b-equal to the input by construction.
fn perturb(rng: &mut impl Rng, b: &FinCoalgebra, t: &Term, rounds: usize) -> Term {
    fn go(rng: &mut impl Rng, b: &FinCoalgebra, t: &Term) -> Term {
        for x in 0..b.len() {
            if *t == Term::var(b.state_name(x)) && rng.gen_bool(0.5) {
                return b.step_term(x);
            }
            if *t == b.step_term(x) && rng.gen_bool(0.5) {
                return Term::var(b.state_name(x));
            }
        }
        match t {
            Term::App(op, args) => {
                Term::App(op.clone(), args.iter().map(|a| go(rng, b, a)).collect())
            }
            v => v.clone(),
        }
    }
    let mut t = t.clone();
    for _ in 0..rounds {
        t = go(rng, b, &t);
    }
    t
}

fn criterion_4_word_problem() -> Check {
    // The worked example.
    let automaton = FinCoalgebra::from_named(
        Arc::new(Signature::new([("cross", 2), ("chk", 2)]).unwrap()),
        &[
            ("q0", "cross", &["q1", "q2"]),
            ("q1", "cross", &["q0", "q1"]),
            ("q2", "chk", &["q2", "q2"]),
        ],
    )
    .unwrap();
    let lhs = Term::parse("q0").unwrap();
    let rhs = Term::parse("cross(cross(q0,q1),chk(q2,q2))").unwrap();
    ensure(mu_equal(&automaton, &lhs, &rhs).unwrap(), || {
        "worked example fails".into()
    })?;
    ensure(common::naive_equal(&automaton, &lhs, &rhs), || {
        "oracle rejects worked example".into()
    })?;

    let (mut equal, mut distinct, mut derived) = (0usize, 0usize, 0usize);
    for seed in 0..200u64 {
        let mut rng = rng_from_seed(10_000 + seed);
        let sig = random_signature(&mut rng, 3, 2);
        let n = rng.gen_range(1..=5);
        let b = random_coalgebra(&mut rng, &sig, n);
        let vars = b.states().to_vec();
        let mut pairs = Vec::new();
        for _ in 0..8 {
            pairs.push((
                random_term(&mut rng, &sig, &vars, 4),
                random_term(&mut rng, &sig, &vars, 4),
            ));
        }
        while pairs.len() < 16 {
            let s = random_term(&mut rng, &sig, &vars, 3);
            let rounds = rng.gen_range(1..=3);
            let t = perturb(&mut rng, &b, &s, rounds);
            if t.depth() <= 4 {
                pairs.push((s, t));
            }
        }
        let pres = mu_presentation(&b);
        let mut cc = pres.closure();
        for (s, t) in &pairs {
            let got = cc.equal(s, t).map_err(|e| format!("seed {seed}: {e}"))?;
            let want = common::naive_equal(&b, s, t);
            ensure(got == want, || {
                format!("seed {seed}: {s} vs {t}: closure {got}, oracle {want}")
            })?;
            let bound = s.depth().max(t.depth()) + 1;
            if common::rewrite_reaches(&b, s, t, bound, 300) {
                derived += 1;
                ensure(got, || {
                    format!("seed {seed}: derivation found for {s} = {t}")
                })?;
            }
            if got {
                equal += 1;
            } else {
                distinct += 1;
            }
        }
    }
    Ok(format!(
        "200 systems, {equal} equal / {distinct} distinct pairs, {derived} with explicit derivations"
    ))
}

fn criterion_5_adjunction() -> Check {
    let mut total = 0usize;
    for seed in 0..200u64 {
        let mut rng = rng_from_seed(20_000 + seed);
        let sig = random_signature(&mut rng, 3, 2);
        let n = rng.gen_range(0..=5);
        let k = rng.gen_range(1..=3);
        let b = random_coalgebra(&mut rng, &sig, n);
        let a = random_algebra(&mut rng, &sig, k);
        let hylo = enumerate_hylo(&b, &a, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
        let brute: Vec<Vec<usize>> = common::brute_force_hylo(&b, &a);
        let listed: Vec<Vec<usize>> = hylo.iter().map(|f| f.as_slice().to_vec()).collect();
        ensure(listed == brute, || {
            format!("seed {seed}: solver differs from brute force")
        })?;
        let nu = count_coalg_homs_to_nu(&b, &a, DEFAULT_BUDGET, ROUNDTRIP_DEPTH)
            .map_err(|e| format!("seed {seed}: {e}"))?;
        let mu = mu_hom_count(&b, &a, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
        ensure(nu == hylo.len() && mu == hylo.len(), || {
            format!("seed {seed}: Hylo {} / ν {nu} / μ {mu}", hylo.len())
        })?;
        total += hylo.len();
    }
    Ok(format!(
        "200 pairs, {total} morphisms in total, all three counts agree"
    ))
}

fn criterion_6_recursivity() -> Check {
    let mut sigs = small_signatures();
    sigs.push(Arc::new(
        Signature::new([("c", 0), ("s", 1), ("p", 2)]).unwrap(),
    ));
    let mut acyclic = 0usize;
    let mut checks = 0usize;
    for sig in &sigs {
        let algebras: Vec<_> = (0..=2).flat_map(|k| all_algebras(sig, k)).collect();
        for n in 0..=4 {
            for b in acyclic_coalgebras(sig, n) {
                ensure(b.is_wellfounded(), || "generator produced a cycle".into())?;
                acyclic += 1;
                for a in &algebras {
                    let c = count_hylo(&b, a, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
                    ensure(c == 1, || {
                        format!("{sig:?}: acyclic coalgebra has {c} morphisms")
                    })?;
                    checks += 1;
                }
            }
        }
    }
    let ex1 = Arc::new(Signature::new([("chk", 1), ("cross", 1)]).unwrap());
    let witnesses: Vec<_> = (1..=2).flat_map(|k| all_algebras(&ex1, k)).collect();
    let mut cyclic = 0usize;
    for n in 1..=4 {
        for b in all_coalgebras(&ex1, n) {
            ensure(!b.is_wellfounded(), || {
                "unary coalgebra without a cycle".into()
            })?;
            let refuted = witnesses
                .iter()
                .any(|a| count_hylo(&b, a, DEFAULT_BUDGET).is_ok_and(|c| c != 1));
            ensure(refuted, || {
                format!("cyclic coalgebra {:?} looks recursive", b.steps())
            })?;
            cyclic += 1;
        }
    }
    Ok(format!(
        "{acyclic} acyclic coalgebras × all algebras with |A| ≤ 2 ({checks} checks); {cyclic} cyclic ones refuted"
    ))
}

fn criterion_7_parity() -> Check {
    let sig = Arc::new(Signature::new([("chk", 1), ("cross", 1)]).unwrap());
    let parity = relfix::finstruct::FinAlgebra::from_fn(
        sig.clone(),
        vec!["0".into(), "1".into()],
        |s, x| if sig_is_chk(s) { 1 - x[0] } else { x[0] },
    )
    .unwrap();
    let (mut solvable, mut unsolvable) = (0usize, 0usize);
    for seed in 0..1000u64 {
        let mut rng = rng_from_seed(30_000 + seed);
        let n = rng.gen_range(1..=6);
        let b = random_coalgebra(&mut rng, &sig, n);
        let nonempty = count_hylo(&b, &parity, DEFAULT_BUDGET).map_err(|e| e.to_string())? > 0;
        let even = common::cycles_even(&b, "chk");
        ensure(nonempty == even, || {
            format!("seed {seed}: Hylo nonempty = {nonempty}, even cycles = {even}")
        })?;
        if nonempty {
            solvable += 1;
        } else {
            unsolvable += 1;
        }
    }
    Ok(format!(
        "1000 coalgebras, {solvable} with even cycles, {unsolvable} without"
    ))
}

fn sig_is_chk(s: relfix::sigterm::SymId) -> bool {
    s.index() == 0
}

fn check_cartesian(b: &FinCoalgebra) -> Result<usize, String> {
    let pairs = classify_cartesian(b).map_err(|e| e.to_string())?;
    let by_definition = common::cartesian_by_definition(b);
    let meet = common::meet_solutions(b);
    let as_bools = |p: &BitSet| (0..b.len()).map(|x| p.contains(x)).collect::<Vec<_>>();
    let got: Vec<Vec<bool>> = pairs.iter().map(|(p, _)| as_bools(p)).collect();
    ensure(got == by_definition, || {
        format!("{:?}: Cartesian sets differ", b.steps())
    })?;
    ensure(meet.len() == got.len(), || {
        format!("{:?}: |Hylo(ξ, ⋀)| differs", b.steps())
    })?;
    for (p, chi) in &pairs {
        let chi_b: Vec<bool> = chi.as_slice().iter().map(|&v| v == 1).collect();
        ensure(chi_b == as_bools(p) && meet.contains(&chi_b), || {
            format!("{:?}: χ_P is not a solution", b.steps())
        })?;
    }
    Ok(pairs.len())
}

fn criterion_8_cartesian() -> Check {
    let sigs = small_signatures();
    // Split the exhaustive sweep over threads, one job per (signature, size).
    let jobs: Vec<(Arc<Signature>, usize)> = sigs
        .iter()
        .flat_map(|s| (0..=4).map(move |n| (s.clone(), n)))
        .collect();
    let results: Vec<Result<usize, String>> = std::thread::scope(|scope| {
        let handles: Vec<_> = jobs
            .iter()
            .map(|(sig, n)| {
                scope.spawn(move || {
                    let mut count = 0usize;
                    for b in all_coalgebras(sig, *n) {
                        check_cartesian(&b)?;
                        count += 1;
                    }
                    Ok(count)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    let mut exhaustive = 0usize;
    for r in results {
        exhaustive += r?;
    }
    for seed in 0..500u64 {
        let mut rng = rng_from_seed(40_000 + seed);
        let sig = random_signature(&mut rng, 2, 2);
        let b = random_coalgebra(&mut rng, &sig, 5);
        check_cartesian(&b).map_err(|e| format!("seed {seed}: {e}"))?;
    }
    Ok(format!(
        "{exhaustive} coalgebras exhaustively plus 500 random with |X| = 5"
    ))
}

fn criterion_9_sierpinski() -> Check {
    let mut cells = approximant(0).map_err(|e| e.to_string())?;
    for d in 0..=6u32 {
        if d > 0 {
            cells = relfix::fractal::subdivide(&cells).map_err(|e| e.to_string())?;
        }
        ensure(cells.len() == 8usize.pow(d), || {
            format!("depth {d}: {} cells", cells.len())
        })?;
        if d > 4 {
            continue;
        }
        let side = 3usize.pow(d);
        for scale in [1, 2] {
            let r = side * scale;
            for i in 0..r {
                for j in 0..r {
                    let x = Coord::new((2 * i + 1) as u64, (2 * r) as u64).unwrap();
                    let y = Coord::new((2 * j + 1) as u64, (2 * r) as u64).unwrap();
                    let cell = ((i / scale) as u64, (j / scale) as u64);
                    ensure(carpet_member(&x, &y, d) == cells.contains(cell), || {
                        format!("depth {d}, pixel ({i}, {j}) of {r}")
                    })?;
                }
            }
        }
    }
    let r1 = render(1, 3).map_err(|e| e.to_string())?;
    ensure(r1.count_inside() == 8 && !r1.inside(1, 1), || {
        "3×3 render is wrong".into()
    })?;

    let mut rng = rng_from_seed(50_000);
    let edges = [Edge::Bottom, Edge::Right, Edge::Top, Edge::Left];
    let point = |rng: &mut rand_chacha::ChaCha8Rng| {
        BoundaryPoint::new(edges[rng.gen_range(0..4)], rng.gen_range(0.0..=1.0)).unwrap()
    };
    let mut max_dp = 0.0f64;
    for _ in 0..10_000 {
        let (p, q) = (point(&mut rng), point(&mut rng));
        let (dt, dp) = (d_taxicab(&p, &q), d_path(&p, &q));
        ensure(dt <= dp + 1e-12, || {
            format!("d_t {dt} > d_p {dp} at {p:?}, {q:?}")
        })?;
        max_dp = max_dp.max(dp);
    }
    Ok(format!(
        "8^d cells for d ≤ 6, pixel agreement for d ≤ 4, 10^4 metric pairs (max d_p {max_dp:.4})"
    ))
}

type Criterion = (&'static str, fn() -> Check, u64);

fn main() {
    let criteria: [Criterion; 9] = [
        ("1 Galois connection", criterion_1_galois, 30),
        ("2 Fixed-point law", criterion_2_fixed_points, 10),
        ("3 Safety algorithm", criterion_3_safety, 10),
        ("4 Word problem", criterion_4_word_problem, 60),
        ("5 Adjunction cardinalities", criterion_5_adjunction, 60),
        ("6 Recursivity", criterion_6_recursivity, 120),
        ("7 Parity law", criterion_7_parity, 30),
        ("8 Cartesian classification", criterion_8_cartesian, 120),
        ("9 Sierpinski approximants", criterion_9_sierpinski, 30),
    ];
    let mut failed = 0;
    for (name, run, limit) in criteria {
        let start = Instant::now();
        let result = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let over = elapsed > Duration::from_secs(limit);
        match (&result, over) {
            (Ok(detail), false) => {
                println!(
                    "PASS  criterion {name}: {detail} [{:.2}s < {limit}s]",
                    elapsed.as_secs_f64()
                )
            }
            (Ok(detail), true) => {
                failed += 1;
                println!(
                    "FAIL  criterion {name}: {detail} but took {:.2}s (limit {limit}s)",
                    elapsed.as_secs_f64()
                )
            }
            (Err(why), _) => {
                failed += 1;
                println!(
                    "FAIL  criterion {name}: {why} [{:.2}s]",
                    elapsed.as_secs_f64()
                )
            }
        }
    }
    println!("acceptance: {} of 9 criteria passed", 9 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
