//! One pass/fail line per acceptance criterion. Exits 1 if any fails.

use std::collections::HashSet;
use std::time::{Duration, Instant};

use lcllab::automaton::{build_automaton, classify_no_input, Certificate, NoInputClass};
use lcllab::catalog;
use lcllab::crosscheck::{
    check_atlas, check_mixing, check_solver, exhaustive_small_family, random_pairs, random_problems,
};
use lcllab::gen::{sample_chain, superblock_instance};
use lcllab::mixing::{classify, ClassifyConfig, ComplexityClass};
use lcllab::normalize::normalize;
use lcllab::oracle::{find_window_algorithm, SearchBudget, WindowSearch};
use lcllab::sim::{log_star, mark_gaps, ruling_set, solve_ergodic};
use lcllab::solver::count_solutions;
use lcllab::{Exec, LabeledInstance, NormalLcl};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        ok,
        detail: detail.into(),
    }
}

fn within(limit: Duration, start: Instant, o: Outcome) -> Outcome {
    let took = start.elapsed();
    if took > limit {
        outcome(false, format!("{}; took {took:.1?} > {limit:?}", o.detail))
    } else {
        outcome(o.ok, format!("{} ({took:.1?})", o.detail))
    }
}

fn class_of(p: &NormalLcl) -> lcllab::mixing::ClassReport {
    classify(p, &ClassifyConfig::default()).expect("classify")
}

fn c1_classification() -> Outcome {
    let start = Instant::now();
    let mut bad = Vec::new();
    let expect = |p: NormalLcl, class: ComplexityClass, mixing: bool, bad: &mut Vec<String>| {
        let r = class_of(&p);
        if r.class != class || r.mixing != mixing {
            bad.push(format!("{}: got {} mixing={}", p.name, r.class, r.mixing));
        }
        r
    };
    let red = expect(catalog::all_red(), ComplexityClass::O1, false, &mut bad);
    if red.no_input_class.map(|v| v.class) != Some(NoInputClass::ConstantO1) {
        bad.push("all-red: no-input class is not CONSTANT_O1".into());
    }
    let three = expect(catalog::three_coloring(), ComplexityClass::LogStar, false, &mut bad);
    if three.no_input_class.map(|v| v.class) != Some(NoInputClass::LogStar) {
        bad.push("3-coloring: no-input class is not LOGSTAR".into());
    }
    expect(catalog::mark_kth(3), ComplexityClass::Global, true, &mut bad);
    expect(catalog::two_coloring(), ComplexityClass::Global, true, &mut bad);
    let blocks = catalog::three_coloring_of_blocks();
    expect(blocks.clone(), ComplexityClass::Borel, false, &mut bad);
    for t in 0..=1 {
        match find_window_algorithm(&blocks, t, &SearchBudget::default()) {
            Ok(WindowSearch::None) => {}
            other => bad.push(format!("3-coloring-of-blocks: t={t} certification gave {other:?}")),
        }
    }
    expect(catalog::identity_swap(), ComplexityClass::Global, true, &mut bad);
    let o = if bad.is_empty() {
        outcome(true, "6 problems match")
    } else {
        outcome(false, bad.join("; "))
    };
    within(Duration::from_secs(5), start, o)
}

fn c2_mixing() -> Outcome {
    let start = Instant::now();
    let b = SearchBudget::default();
    let family = exhaustive_small_family();
    let random = random_problems(2024, 200, &[1, 2], 3);
    let r1 = check_mixing(&family, &b, Exec::Sequential);
    let r2 = check_mixing(&random, &b, Exec::Sequential);
    let o = outcome(
        r1.passed() && r2.passed(),
        format!(
            "{} exhaustive + {} random, {} disagreements {:?}",
            r1.cases,
            r2.cases,
            r1.failures + r2.failures,
            r1.examples.iter().chain(&r2.examples).take(3).collect::<Vec<_>>()
        ),
    );
    within(Duration::from_secs(600), start, o)
}

fn c3_atlas() -> Outcome {
    let mut probs = random_problems(31, 100, &[1, 2, 3], 2);
    probs.extend(random_problems(32, 100, &[1, 2, 3], 3));
    let r = check_atlas(&probs, 6, Exec::Parallel);
    outcome(r.passed(), format!("{} problems, {} counterexamples {:?}", r.cases, r.failures, r.examples))
}

fn c4_solver() -> Outcome {
    let r = check_solver(&random_pairs(77, 500, 10), &SearchBudget::default(), Exec::Parallel);
    outcome(r.passed(), format!("{} pairs, {} mismatches {:?}", r.cases, r.failures, r.examples))
}

fn distinct_ids(rng: &mut ChaCha8Rng, n: usize) -> Vec<u64> {
    let bound = (n as u64).pow(3);
    let mut seen = HashSet::with_capacity(n);
    let mut ids = Vec::with_capacity(n);
    while ids.len() < n {
        let x = rng.random_range(0..bound);
        if seen.insert(x) {
            ids.push(x);
        }
    }
    ids
}

fn c5_ruling() -> Outcome {
    let start = Instant::now();
    let n = 1usize << 16;
    let budget = 4 * log_star(n as u64) as u64 + 32;
    let mut gap_failures = 0;
    let mut worst = Vec::new();
    for k in [2usize, 3, 5] {
        let mut max_rounds = 0;
        for trial in 0..100u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(1000 * k as u64 + trial);
            let inst = LabeledInstance::cycle(vec![0; n]).with_ids(distinct_ids(&mut rng, n));
            let rs = ruling_set(&inst, k).expect("ruling set");
            if !mark_gaps(&rs.marks).iter().all(|&g| g == k || g == k + 1) {
                gap_failures += 1;
            }
            max_rounds = max_rounds.max(rs.rounds_used);
        }
        worst.push((k, max_rounds));
    }
    let rounds_ok = worst.iter().all(|&(_, r)| r <= budget);
    let o = outcome(
        gap_failures == 0 && rounds_ok,
        format!(
            "gap failures {gap_failures}; max rounds per k {:?} vs budget {budget}",
            worst
        ),
    );
    within(Duration::from_secs(60), start, o)
}

fn c6_ergodic() -> Outcome {
    let start = Instant::now();
    let n = 100_000;
    let mut bad = Vec::new();
    for p in [catalog::three_coloring(), catalog::mis()] {
        let cert = match classify_no_input(&build_automaton(&p).unwrap()).certificate {
            Certificate::Ergodic(c) => c,
            other => return outcome(false, format!("{}: no ergodic certificate ({other:?})", p.name)),
        };
        for seed in 0..20u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let inst = LabeledInstance::cycle(vec![0; n]).with_ids(distinct_ids(&mut rng, n));
            match solve_ergodic(&p, &inst, Some(&cert)) {
                Ok(tr) if tr.violations.is_empty() => {}
                Ok(tr) => bad.push(format!("{} seed {seed}: {} violations", p.name, tr.violations.len())),
                Err(e) => bad.push(format!("{} seed {seed}: {e}", p.name)),
            }
        }
    }
    let o = outcome(bad.is_empty(), if bad.is_empty() { "40 runs, 0 violations".into() } else { bad.join("; ") });
    within(Duration::from_secs(30), start, o)
}

fn c7_superblock() -> Outcome {
    let p = catalog::identity_swap();
    let mut bad = Vec::new();
    let mut checked = 0;
    for len in 1..=4 {
        for m in 2..=8 {
            let inst = superblock_instance(0, 1, len, m).unwrap();
            let sat = count_solutions(&p, &inst, 1 << 16).unwrap() > 0u32.into();
            checked += 1;
            if sat != (m % 2 == 0) {
                bad.push(format!("len={len} m={m} sat={sat}"));
            }
        }
    }
    outcome(bad.is_empty(), format!("{checked} instances, exceptions {bad:?}"))
}

fn c8_markov() -> Outcome {
    let f = catalog::chain_family();
    let l = f.blocks.len();
    let mut worst: f64 = 0.0;
    for seed in 0..10 {
        let s = sample_chain(&f, 10_000, seed).unwrap();
        if !s.factors_into(&f) {
            return outcome(false, format!("seed {seed}: sample does not factor into blocks"));
        }
        for fr in s.block_frequencies(l) {
            worst = worst.max((fr - 1.0 / l as f64).abs());
        }
    }
    outcome(
        worst <= 0.05,
        format!("max |freq - 1/{l}| = {worst:.4} (relative {:.1}%)", 100.0 * worst * l as f64),
    )
}

fn c9_normalization() -> Outcome {
    let pairs = [
        (catalog::three_coloring_general(), catalog::three_coloring()),
        (catalog::two_coloring_general(), catalog::two_coloring()),
        (catalog::all_red_general(), catalog::all_red()),
    ];
    let mut bad = Vec::new();
    for (g, n) in pairs {
        let a = class_of(&normalize(&g));
        let b = class_of(&n);
        if a.class != b.class {
            bad.push(format!("{}: {} vs {}", g.name, a.class, b.class));
        }
    }
    outcome(bad.is_empty(), if bad.is_empty() { "3 pairs agree".into() } else { bad.join("; ") })
}

/// Round budget for the ergodic solver; not one of the nine criteria.
fn ergodic_rounds() -> Outcome {
    let n = 1usize << 16;
    let budget = 4 * log_star(n as u64) as u64 + 32;
    let mut worst = Vec::new();
    for p in [catalog::three_coloring(), catalog::mis()] {
        let Certificate::Ergodic(cert) = classify_no_input(&build_automaton(&p).unwrap()).certificate else {
            return outcome(false, format!("{}: no ergodic certificate", p.name));
        };
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let inst = LabeledInstance::cycle(vec![0; n]).with_ids(distinct_ids(&mut rng, n));
        match solve_ergodic(&p, &inst, Some(&cert)) {
            Ok(tr) => worst.push((p.name.clone(), tr.rounds_used)),
            Err(e) => return outcome(false, format!("{}: {e}", p.name)),
        }
    }
    outcome(
        worst.iter().all(|w| w.1 <= budget),
        format!("rounds {worst:?} vs budget {budget} at n = 2^16"),
    )
}

fn main() {
    // libtest flags such as --nocapture are accepted and ignored
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("1 reference classification suite", c1_classification),
        ("2 mixing oracle equivalence", c2_mixing),
        ("3 block-type BFS vs enumeration", c3_atlas),
        ("4 solver/oracle agreement", c4_solver),
        ("5 ruling-set spacing and rounds", c5_ruling),
        ("6 ergodic solver end-to-end", c6_ergodic),
        ("7 superblock parity law", c7_superblock),
        ("8 Markov sampler statistics", c8_markov),
        ("9 normalization commutes with classification", c9_normalization),
        ("invariant: ergodic solver round budget", ergodic_rounds),
    ];
    let total = criteria.len();
    let mut failed = 0;
    for (name, f) in criteria {
        let o = f();
        let tag = if o.ok { "PASS" } else { "FAIL" };
        if !o.ok {
            failed += 1;
        }
        println!("[{tag}] {name}: {}", o.detail);
    }
    println!("acceptance: {} passed, {failed} failed", total - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
