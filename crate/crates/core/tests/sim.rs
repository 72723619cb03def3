use std::collections::HashSet;

use lcllab::automaton::{build_automaton, classify_no_input, Certificate, ErgodicCertificate};
use lcllab::catalog;
use lcllab::gen::superblock_instance;
use lcllab::oracle::SearchBudget;
use lcllab::sim::{mark_gaps, probe_locality, ruling_set, run_view_algorithm, solve_ergodic, SimError, ViewAlgorithm};
use lcllab::{Exec, LabeledInstance, NormalLcl};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn distinct_ids(rng: &mut ChaCha8Rng, n: usize) -> Vec<u64> {
    let bound = (n as u64).pow(3).max(8);
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

fn certificate(p: &NormalLcl) -> ErgodicCertificate {
    match classify_no_input(&build_automaton(p).unwrap()).certificate {
        Certificate::Ergodic(c) => c,
        other => panic!("{}: {other:?}", p.name),
    }
}

/// Output depends on inputs and ids in the view.
fn hash_rule(t: usize, nout: usize) -> ViewAlgorithm {
    ViewAlgorithm::new("hash", t, move |v| {
        let ids = v.ids.unwrap_or(&[]);
        let h = v.inputs.iter().map(|&x| x as u64).chain(ids.iter().copied()).fold(17u64, |h, x| {
            h.wrapping_mul(1_000_003).wrapping_add(x)
        });
        (h % nout as u64) as usize
    })
}

proptest! {
    #[test]
    fn views_are_local(n in 8usize..60, t in 0usize..3, node in 0usize..60, seed in any::<u64>()) {
        let node = node % n;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = catalog::identity_swap();
        let inputs: Vec<usize> = (0..n).map(|_| rng.random_range(0..2)).collect();
        let ids = distinct_ids(&mut rng, n);
        let alg = hash_rule(t, 2);
        let base = run_view_algorithm(&alg, &p, &LabeledInstance::cycle(inputs.clone()).with_ids(ids.clone()), Exec::Sequential).unwrap();
        // flip input and id at `node`; only nodes within distance t may change
        let mut inputs2 = inputs;
        inputs2[node] ^= 1;
        let mut ids2 = ids;
        ids2[node] = u64::MAX - ids2[node];
        let flipped = run_view_algorithm(&alg, &p, &LabeledInstance::cycle(inputs2).with_ids(ids2), Exec::Parallel).unwrap();
        for i in 0..n {
            let d = (i + n - node) % n;
            if d.min(n - d) > t {
                prop_assert_eq!(base.outputs[i], flipped.outputs[i], "node {} changed", i);
            }
        }
    }

    #[test]
    fn views_are_deterministic(n in 5usize..80, seed in any::<u64>()) {
        let p = catalog::three_coloring();
        let inst = LabeledInstance::cycle(vec![0; n]).with_seed(seed);
        let alg = ViewAlgorithm::new("bits", 1, |v| (v.bits.unwrap()[1] % 3) as usize);
        let a = run_view_algorithm(&alg, &p, &inst, Exec::Parallel).unwrap();
        let b = run_view_algorithm(&alg, &p, &inst, Exec::Sequential).unwrap();
        prop_assert_eq!(a, b);
    }
}

#[test]
fn ruling_spacing_many_assignments() {
    let mut rng = ChaCha8Rng::seed_from_u64(2718);
    for trial in 0..1000 {
        let k = [2usize, 3, 5][trial % 3];
        let n = if trial % 10 == 0 { 1 << 16 } else { rng.random_range(k * k + k..=1 << 12) };
        let ids = distinct_ids(&mut rng, n);
        let rs = ruling_set(&LabeledInstance::cycle(vec![0; n]).with_ids(ids), k).unwrap();
        let gaps = mark_gaps(&rs.marks);
        assert!(!gaps.is_empty());
        assert!(gaps.iter().all(|&g| g == k || g == k + 1), "trial {trial}: n={n} k={k}");
        assert_eq!(gaps.iter().sum::<usize>(), n);
        assert_eq!(rs.phases.iter().map(|p| p.rounds).sum::<u64>(), rs.rounds_used);
    }
}

#[test]
fn ruling_is_deterministic() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut ids: Vec<u64> = (0..500).collect();
    ids.shuffle(&mut rng);
    let inst = LabeledInstance::cycle(vec![0; 500]).with_ids(ids);
    assert_eq!(ruling_set(&inst, 4).unwrap(), ruling_set(&inst, 4).unwrap());
}

#[test]
fn majority_rule_fails_two_coloring() {
    let p = catalog::two_coloring();
    let alg = ViewAlgorithm::new("majority", 1, |v| {
        let ones = v.ids.unwrap().iter().filter(|&&x| x & 1 == 1).count();
        usize::from(2 * ones > 3)
    });
    for seed in 0..50 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = LabeledInstance::cycle(vec![0; 64]).with_ids(distinct_ids(&mut rng, 64));
        let tr = run_view_algorithm(&alg, &p, &inst, Exec::Parallel).unwrap();
        assert!(!tr.violations.is_empty(), "seed {seed}");
        assert_eq!(tr.rounds_used, 1);
    }
}

#[test]
fn ergodic_small_cycles() {
    for p in [catalog::three_coloring(), catalog::mis()] {
        let cert = certificate(&p);
        for seed in 0..10 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut ids: Vec<u64> = (0..1024).collect();
            ids.shuffle(&mut rng);
            let inst = LabeledInstance::cycle(vec![0; 1024]).with_ids(ids);
            let tr = solve_ergodic(&p, &inst, Some(&cert)).unwrap();
            assert!(tr.violations.is_empty(), "{} seed {seed}", p.name);
            let marks = tr.marks.as_ref().unwrap();
            for (i, &m) in marks.iter().enumerate() {
                if m {
                    assert_eq!(tr.outputs[i], cert.state);
                }
            }
        }
    }
    let inst = LabeledInstance::cycle(vec![0; 1024]).with_ids((0..1024).collect());
    assert!(matches!(
        solve_ergodic(&catalog::two_coloring(), &inst, None),
        Err(SimError::MissingCertificate)
    ));
}

#[test]
fn probe_examples() {
    let b = SearchBudget::default();
    let two = catalog::two_coloring();
    let cycles: Vec<_> = [16, 17].iter().map(|&n| LabeledInstance::cycle(vec![0; n])).collect();
    let rows = probe_locality(&two, &cycles, 1, &b).unwrap();
    assert!(rows.iter().any(|r| r.t == 1 && r.min_violations >= 1));

    let triv = catalog::trivially_true(2);
    let rows = probe_locality(&triv, &cycles, 0, &b).unwrap();
    assert!(rows.iter().all(|r| r.min_violations == 0));

    // superblocks: letter L opens each block, o continues it
    let blocks = catalog::three_coloring_of_blocks();
    let insts: Vec<_> = [(1, 5), (2, 5), (3, 7)]
        .iter()
        .map(|&(len, m)| superblock_instance(1, 0, len, m).unwrap())
        .collect();
    let rows = probe_locality(&blocks, &insts, 2, &b).unwrap();
    for t in 0..=2 {
        assert!(rows.iter().any(|r| r.t == t && r.min_violations > 0), "t={t}: {rows:?}");
    }
}
