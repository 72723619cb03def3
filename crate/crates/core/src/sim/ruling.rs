//! Ruling sets whose consecutive marks are `k` or `k + 1` hops apart.
//!
//! Construction: repeated maximal independent sets on the cycle of surviving
//! nodes (Cole-Vishkin from the ids, 6 to 3 colors, greedy by class), until
//! every gap is at least `k^2 - k`, then each gap is cut into parts of
//! length `k` and `k + 1`. Round counts are in real hops: a virtual round at
//! level `l` spans up to `3^l` edges.

use serde::Serialize;

use super::{mark_gaps, Phase, SimError};
use crate::model::{LabeledInstance, Topology};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RulingSet {
    pub marks: Vec<bool>,
    pub rounds_used: u64,
    pub phases: Vec<Phase>,
}

/// Iterated logarithm base 2: applications of `log2` until the value is at most 1.
pub fn log_star(x: u64) -> u32 {
    let mut v = x as f64;
    let mut c = 0;
    while v > 1.0 {
        v = v.log2();
        c += 1;
    }
    c
}

/// Cole-Vishkin iterations taking colors below `bound` to colors below 6.
pub fn cv_iterations(bound: u64) -> u32 {
    let mut bound = bound.max(2);
    let mut it = 0;
    while bound > 6 {
        let bits = 64 - (bound - 1).leading_zeros() as u64;
        bound = 2 * bits;
        it += 1;
    }
    it
}

fn cv_step(a: u64, b: u64) -> u64 {
    let i = (a ^ b).trailing_zeros() as u64;
    2 * i + ((a >> i) & 1)
}

/// MIS of the cycle `0 -> 1 -> .. -> m-1 -> 0` with distinct labels.
fn cycle_mis(ids: &[u64], iters: u32) -> Vec<bool> {
    let m = ids.len();
    if m == 1 {
        return vec![true];
    }
    let succ = |i: usize| (i + 1) % m;
    let pred = |i: usize| (i + m - 1) % m;
    let mut col = ids.to_vec();
    for _ in 0..iters {
        col = (0..m).map(|i| cv_step(col[i], col[succ(i)])).collect();
    }
    debug_assert!(col.iter().all(|&c| c < 6));
    for c in [5, 4, 3] {
        let next: Vec<u64> = (0..m)
            .map(|i| {
                if col[i] != c {
                    return col[i];
                }
                (0..3).find(|&x| x != col[pred(i)] && x != col[succ(i)]).unwrap()
            })
            .collect();
        col = next;
    }
    let mut mis = vec![false; m];
    for c in 0..3 {
        let join: Vec<bool> = (0..m)
            .map(|i| col[i] == c && !mis[pred(i)] && !mis[succ(i)])
            .collect();
        for i in 0..m {
            mis[i] |= join[i];
        }
    }
    mis
}

/// Some split of `d` into parts `k` and `k + 1`: `(parts of k+1, parts of k)`.
fn split(d: usize, k: usize) -> Option<(usize, usize)> {
    let b = d % k;
    (d >= b * (k + 1)).then(|| (b, (d - b * (k + 1)) / k))
}

pub fn ruling_set(inst: &LabeledInstance, k: usize) -> Result<RulingSet, SimError> {
    if k == 0 {
        return Err(SimError::ZeroK);
    }
    if inst.topology != Topology::Cycle {
        return Err(SimError::NotACycle);
    }
    let ids = inst.ids.as_ref().ok_or(SimError::MissingIds)?;
    inst.check(usize::MAX)?;
    let n = inst.n();
    if split(n, k).is_none() {
        return Err(SimError::TooSmall {
            n,
            reason: format!("{n} is not a sum of parts {k} and {}", k + 1),
        });
    }
    if k == 1 {
        return Ok(RulingSet {
            marks: vec![true; n],
            rounds_used: 0,
            phases: Vec::new(),
        });
    }
    let min_gap = k * k - k;
    let mut levels = 0u32;
    while (1usize << levels) < min_gap {
        levels += 1;
    }
    let max_id = *ids.iter().max().unwrap();
    let iters = cv_iterations(max_id.saturating_add(1));
    let per_level = iters as u64 + 5;

    let mut active: Vec<usize> = (0..n).collect();
    for _ in 0..levels {
        let vids: Vec<u64> = active.iter().map(|&i| ids[i]).collect();
        let mis = cycle_mis(&vids, iters);
        active = active.into_iter().zip(mis).filter(|&(_, m)| m).map(|(i, _)| i).collect();
    }

    let mut marks = vec![false; n];
    let m = active.len();
    for (idx, &start) in active.iter().enumerate() {
        let d = if m == 1 { n } else { (active[(idx + 1) % m] + n - start) % n };
        let (big, small) = split(d, k).expect("gaps are at least k^2 - k or equal to n");
        let mut pos = start;
        for part in std::iter::repeat_n(k + 1, big).chain(std::iter::repeat_n(k, small)) {
            marks[pos % n] = true;
            pos += part;
        }
    }

    let mut phases = Vec::new();
    let mut rounds = 0u64;
    let mut span = 1u64;
    for l in 0..levels {
        let r = per_level * span;
        phases.push(Phase {
            name: format!("mis-level-{l}"),
            rounds: r,
        });
        rounds += r;
        span *= 3;
    }
    phases.push(Phase {
        name: "subdivide".into(),
        rounds: span,
    });
    rounds += span;
    debug_assert!(mark_gaps(&marks).iter().all(|&g| g == k || g == k + 1));
    Ok(RulingSet {
        marks,
        rounds_used: rounds,
        phases,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inst(n: usize) -> LabeledInstance {
        LabeledInstance::cycle(vec![0; n]).with_ids((0..n as u64).collect())
    }

    fn gaps_ok(r: &RulingSet, k: usize) -> bool {
        let g = mark_gaps(&r.marks);
        !g.is_empty() && g.iter().all(|&d| d == k || d == k + 1)
    }

    #[test]
    fn small_cases() {
        let r = ruling_set(&inst(12), 3).unwrap();
        assert!(gaps_ok(&r, 3));
        assert_eq!(mark_gaps(&r.marks).iter().sum::<usize>(), 12);
        let r = ruling_set(&inst(7), 3).unwrap();
        let mut g = mark_gaps(&r.marks);
        g.sort();
        assert_eq!(g, vec![3, 4]);
        assert!(matches!(ruling_set(&inst(5), 3), Err(SimError::TooSmall { .. })));
    }

    #[test]
    fn errors() {
        let dup = LabeledInstance::cycle(vec![0; 4]).with_ids(vec![1, 2, 2, 3]);
        assert!(matches!(ruling_set(&dup, 2), Err(SimError::Model(crate::model::ModelError::DuplicateId(2)))));
        assert_eq!(ruling_set(&LabeledInstance::cycle(vec![0; 4]), 2).unwrap_err(), SimError::MissingIds);
        assert_eq!(ruling_set(&inst(4), 0).unwrap_err(), SimError::ZeroK);
    }

    #[test]
    fn k_one_marks_everything() {
        let r = ruling_set(&inst(9), 1).unwrap();
        assert!(r.marks.iter().all(|&m| m));
    }

    #[test]
    fn many_sizes() {
        for k in 2..=5 {
            for n in k..200 {
                if split(n, k).is_none() {
                    continue;
                }
                let ids: Vec<u64> = (0..n as u64).map(|i| (i * 7919 + 13) % 1_000_003).collect();
                let r = ruling_set(&LabeledInstance::cycle(vec![0; n]).with_ids(ids), k).unwrap();
                assert!(gaps_ok(&r, k), "n={n} k={k}");
            }
        }
    }

    #[test]
    fn log_star_values() {
        assert_eq!(log_star(1), 0);
        assert_eq!(log_star(2), 1);
        assert_eq!(log_star(4), 2);
        assert_eq!(log_star(16), 3);
        assert_eq!(log_star(65536), 4);
        assert_eq!(log_star(65537), 5);
    }

    #[test]
    fn cv_iteration_counts() {
        assert_eq!(cv_iterations(6), 0);
        assert_eq!(cv_iterations(1 << 48), 4);
    }

    #[test]
    fn mis_small_cycles() {
        for m in 1..40 {
            let ids: Vec<u64> = (0..m as u64).rev().collect();
            let mis = cycle_mis(&ids, cv_iterations(m as u64));
            for i in 0..m {
                let (p, s) = ((i + m - 1) % m, (i + 1) % m);
                if m > 1 {
                    assert!(!(mis[i] && mis[s]) || m == 1);
                    assert!(mis[i] || mis[p] || mis[s]);
                }
            }
        }
    }
}
