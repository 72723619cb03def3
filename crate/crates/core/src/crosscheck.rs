//! Agreement checks between the main engines and the brute-force oracles.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::blocks::enumerate_block_types;
use crate::mixing::{is_mixing, DeciderConfig};
use crate::model::{Alphabet, LabeledInstance, NormalLcl};
use crate::oracle::{find_window_algorithm, oracle_block_types, oracle_is_mixing, oracle_solve, SearchBudget, WindowSearch};
use crate::par::{self, Exec};
use crate::solver::{count_solutions, solve_instance, verify_solution, Solution, DEFAULT_COUNT_CAP};

/// Failures beyond this many are counted but not described.
const MAX_EXAMPLES: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub cases: usize,
    pub failures: usize,
    pub examples: Vec<String>,
}

impl CheckReport {
    fn collect(name: &str, results: Vec<Option<String>>) -> Self {
        let cases = results.len();
        let bad: Vec<String> = results.into_iter().flatten().collect();
        CheckReport {
            name: name.to_string(),
            cases,
            failures: bad.len(),
            examples: bad.into_iter().take(MAX_EXAMPLES).collect(),
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

fn bit(nin: usize, nout: usize, a: usize, b: usize, x: usize, y: usize) -> usize {
    ((a * nin + b) * nout + x) * nout + y
}

fn from_mask(nin: usize, nout: usize, mask: u64, name: String) -> NormalLcl {
    let mut p = NormalLcl::new(
        &name,
        Alphabet::generated(nin, |i| format!("i{i}")),
        Alphabet::generated(nout, |i| format!("o{i}")),
    );
    for a in 0..nin {
        for b in 0..nin {
            for x in 0..nout {
                for y in 0..nout {
                    if mask >> bit(nin, nout, a, b, x, y) & 1 == 1 {
                        p.allow(a, b, x, y);
                    }
                }
            }
        }
    }
    p
}

fn perms(k: usize) -> Vec<Vec<usize>> {
    if k == 1 {
        vec![vec![0]]
    } else {
        vec![vec![0, 1], vec![1, 0]]
    }
}

fn relabel(nin: usize, nout: usize, mask: u64, pi: &[usize], po: &[usize]) -> u64 {
    let mut out = 0u64;
    for a in 0..nin {
        for b in 0..nin {
            for x in 0..nout {
                for y in 0..nout {
                    if mask >> bit(nin, nout, a, b, x, y) & 1 == 1 {
                        out |= 1 << bit(nin, nout, pi[a], pi[b], po[x], po[y]);
                    }
                }
            }
        }
    }
    out
}

/// Every problem with at most 2 input and 2 output letters, one per orbit
/// under renaming of input and output letters.
pub fn exhaustive_small_family() -> Vec<NormalLcl> {
    let mut out = Vec::new();
    for nin in 1..=2 {
        for nout in 1..=2 {
            let bits = nin * nin * nout * nout;
            for mask in 0..(1u64 << bits) {
                let canonical = perms(nin).iter().all(|pi| {
                    perms(nout).iter().all(|po| relabel(nin, nout, mask, pi, po) >= mask)
                });
                if canonical {
                    out.push(from_mask(nin, nout, mask, format!("x{nin}{nout}-{mask}")));
                }
            }
        }
    }
    out
}

/// Each quadruple allowed independently with probability `density`.
pub fn random_problem<R: Rng>(rng: &mut R, nin: usize, nout: usize, density: f64, name: String) -> NormalLcl {
    let mut p = NormalLcl::new(
        &name,
        Alphabet::generated(nin, |i| format!("i{i}")),
        Alphabet::generated(nout, |i| format!("o{i}")),
    );
    for a in 0..nin {
        for b in 0..nin {
            for x in 0..nout {
                for y in 0..nout {
                    if rng.random_bool(density) {
                        p.allow(a, b, x, y);
                    }
                }
            }
        }
    }
    p
}

/// `count` problems with `nout` outputs and 1 or 2 inputs.
pub fn random_problems(seed: u64, count: usize, nins: &[usize], nout: usize) -> Vec<NormalLcl> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let nin = nins[i % nins.len()];
            let density = rng.random_range(0.15..0.75);
            random_problem(&mut rng, nin, nout, density, format!("r{seed}-{i}"))
        })
        .collect()
}

pub fn random_instance<R: Rng>(rng: &mut R, nin: usize, max_n: usize) -> LabeledInstance {
    let n = rng.random_range(1..=max_n);
    let inputs = (0..n).map(|_| rng.random_range(0..nin)).collect();
    if rng.random_bool(0.5) {
        LabeledInstance::cycle(inputs)
    } else {
        LabeledInstance::path(inputs)
    }
}

/// Seeded `(problem, instance)` pairs with up to 3 letters each and `n <= max_n`.
pub fn random_pairs(seed: u64, count: usize, max_n: usize) -> Vec<(NormalLcl, LabeledInstance)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let nin = rng.random_range(1..=3);
            let nout = rng.random_range(1..=3);
            let density = rng.random_range(0.2..0.8);
            let p = random_problem(&mut rng, nin, nout, density, format!("s{seed}-{i}"));
            let inst = random_instance(&mut rng, nin, max_n);
            (p, inst)
        })
        .collect()
}

pub fn check_mixing(problems: &[NormalLcl], budget: &SearchBudget, exec: Exec) -> CheckReport {
    let cfg = DeciderConfig {
        exec: Exec::Sequential,
        ..DeciderConfig::default()
    };
    let results = par::map(exec, problems, |p| {
        let fast = match is_mixing(p, &cfg) {
            Ok(v) => v.mixing,
            Err(e) => return Some(format!("{}: decider error {e}", p.name)),
        };
        let slow = match oracle_is_mixing(p, budget) {
            Ok(v) => v.mixing,
            Err(e) => return Some(format!("{}: oracle error {e}", p.name)),
        };
        (fast != slow).then(|| format!("{}: decider {fast}, oracle {slow}", p.name))
    });
    CheckReport::collect("mixing", results)
}

/// Oracle types of blocks up to `max_len` letters are achievable; if every
/// atlas witness fits in `max_len`, the two sets are equal.
pub fn check_atlas(problems: &[NormalLcl], max_len: usize, exec: Exec) -> CheckReport {
    let results = par::map(exec, problems, |p| {
        for sigma in 0..p.nin() {
            let atlas = match enumerate_block_types(p, sigma) {
                Ok(a) => a,
                Err(e) => return Some(format!("{}: {e}", p.name)),
            };
            let naive = match oracle_block_types(p, sigma, max_len) {
                Ok(t) => t,
                Err(e) => return Some(format!("{}: oracle error {e}", p.name)),
            };
            if let Some(t) = naive.iter().find(|t| !atlas.achievable.contains_key(t)) {
                return Some(format!("{} σ={sigma}: type {t:?} missing from atlas", p.name));
            }
            if atlas.depth <= max_len && naive.len() != atlas.achievable.len() {
                return Some(format!(
                    "{} σ={sigma}: atlas has {} types at depth {}, oracle {}",
                    p.name,
                    atlas.achievable.len(),
                    atlas.depth,
                    naive.len()
                ));
            }
        }
        None
    });
    CheckReport::collect("atlas", results)
}

pub fn check_solver(pairs: &[(NormalLcl, LabeledInstance)], budget: &SearchBudget, exec: Exec) -> CheckReport {
    let results = par::map(exec, pairs, |(p, inst)| {
        let tag = format!("{} n={} {:?}", p.name, inst.n(), inst.topology);
        let all = match oracle_solve(p, inst, budget) {
            Ok(a) => a,
            Err(e) => return Some(format!("{tag}: oracle error {e}")),
        };
        let sol = match solve_instance(p, inst) {
            Ok(s) => s,
            Err(e) => return Some(format!("{tag}: solver error {e}")),
        };
        if sol.is_sat() == all.is_empty() {
            return Some(format!("{tag}: solver sat={}, oracle found {}", sol.is_sat(), all.len()));
        }
        if let Solution::Sat(c) = &sol {
            if !verify_solution(p, inst, c).is_ok_and(|v| v.is_empty()) || !all.contains(c) {
                return Some(format!("{tag}: invalid witness {c:?}"));
            }
        }
        match count_solutions(p, inst, DEFAULT_COUNT_CAP) {
            Ok(c) if c == all.len().into() => None,
            Ok(c) => Some(format!("{tag}: count {c}, oracle {}", all.len())),
            Err(e) => Some(format!("{tag}: count error {e}")),
        }
    });
    CheckReport::collect("solver", results)
}

/// Any certified window rule must produce no violation on random cycles.
pub fn check_window_soundness(
    problems: &[NormalLcl],
    t: usize,
    instances_per_problem: usize,
    max_n: usize,
    seed: u64,
    budget: &SearchBudget,
) -> CheckReport {
    let mut results = Vec::new();
    for p in problems {
        let rule = match find_window_algorithm(p, t, budget) {
            Ok(WindowSearch::Found(r)) => r,
            Ok(_) => continue,
            Err(e) => {
                results.push(Some(format!("{}: {e}", p.name)));
                continue;
            }
        };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..instances_per_problem {
            let n = rng.random_range(2 * t + 2..=max_n.max(2 * t + 2));
            let inputs = (0..n).map(|_| rng.random_range(0..p.nin())).collect();
            let inst = LabeledInstance::cycle(inputs);
            let out = rule.run(&inst);
            let bad = verify_solution(p, &inst, &out).map(|v| v.len()).unwrap_or(usize::MAX);
            results.push((bad != 0).then(|| format!("{}: rule violates {bad} edges at n={n}", p.name)));
        }
    }
    CheckReport::collect("window-soundness", results)
}
